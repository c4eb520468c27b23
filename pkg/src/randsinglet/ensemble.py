"""Disorder ensembles and the statistics built on them.

One realization = sample a chain, decimate it, pick a singlet (by default
the last one decimated), compute its exact correlations and entanglement.
Aggregations (histograms, threshold fractions, gamma fits, KS distances,
singlet-length tails) are pure functions of completed record sets.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.stats

from . import entanglement as ent
from . import fermions
from . import sdrg
from .disorder import (PERIODIC, DisorderDistribution, SeedSpec, clean_chain,
                       sample_chain)

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 5
SELECTORS = ("last", "longest")


class EmptyInput(ValueError):
    pass


class EmptyWindow(ValueError):
    pass


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class RealizationRecord:
    realization: int
    alpha: float
    L: int
    boundary: str
    left: int
    right: int
    d: int
    j_eff: float
    cxx: float
    czz: float
    F: float
    N: float
    E: float
    C: float
    eof: float
    master_seed: int = 0
    attempt: int = 0

    @property
    def panel(self) -> ent.PairEntanglement:
        return ent.PairEntanglement(self.F, self.N, self.E, self.C, self.eof)


CSV_COLUMNS = ("realization", "alpha", "L", "boundary", "left", "right", "d",
               "j_eff", "cxx", "czz", "F", "N", "E", "C", "eof")


@dataclass
class EnsembleResult:
    """Records in realization order plus bookkeeping on resampled and failed
    realizations."""

    records: list
    resampled: int = 0
    failed: list = field(default_factory=list)
    traces: list | None = None

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, k):
        return self.records[k]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


@dataclass(frozen=True)
class FidelityHistogram:
    edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    meta: dict

    def to_dict(self) -> dict:
        return {"edges": [float(x) for x in self.edges],
                "density": [float(x) for x in self.density],
                "counts": [int(x) for x in self.counts],
                "meta": self.meta}


@dataclass(frozen=True)
class ThresholdFraction:
    fraction: float
    stderr: float
    n_window: int
    n_total: int


@dataclass(frozen=True)
class GammaFit:
    gamma: float
    intercept: float
    n_points: int
    residual: float
    distances: tuple = ()
    medians: tuple = ()

    def to_dict(self) -> dict:
        return {"gamma": self.gamma, "intercept": self.intercept,
                "n_points": self.n_points, "residual": self.residual}


def default_window(L: int):
    return (L / 6.0, L / 2.0)


def pick_pair(trace, selector: str = "last"):
    if selector == "last":
        return sdrg.last_pair(trace)
    if selector == "longest":
        return sdrg.longest_pair(trace)
    raise ValueError(f"selector must be one of {SELECTORS}")


def measure_pair(chain, rec, gm=None) -> tuple:
    """Exact correlations and entanglement panel of one singlet record."""
    gm = gm if gm is not None else fermions.ground_correlation_matrix(chain)
    c_xx = fermions.cxx(gm, rec.left, rec.right)
    c_zz = fermions.czz(gm, rec.left, rec.right)
    panel = ent.pair_entanglement(c_xx, c_zz)
    ent.check_consistency(panel)
    return c_xx, c_zz, panel


def realize(dist: DisorderDistribution, L: int, boundary: str, seed: SeedSpec,
            selector: str = "last", keep_trace: bool = False, check: bool = False):
    chain = sample_chain(dist, L, boundary, seed)
    trace = sdrg.decimate(chain)
    if check:
        sdrg.check_trace(trace)
    rec = pick_pair(trace, selector)
    c_xx, c_zz, p = measure_pair(chain, rec)
    record = RealizationRecord(
        seed.realization_index, dist.alpha, L, boundary, rec.left, rec.right,
        sdrg.pair_distance(rec, L, boundary), rec.j_eff, c_xx, c_zz,
        p.fidelity, p.negativity, p.log_negativity, p.concurrence, p.eof,
        seed.master_seed, seed.attempt)
    return record, (trace if keep_trace else None)


def _run_one(args):
    alpha, omega0, L, boundary, master_seed, index, selector, keep, check = args
    dist = DisorderDistribution(alpha, omega0)
    for attempt in range(MAX_ATTEMPTS + 1):
        seed = SeedSpec(master_seed, index, attempt)
        try:
            record, trace = realize(dist, L, boundary, seed, selector, keep, check)
            return index, attempt, record, trace
        except fermions.DegenerateSpectrum as exc:
            log.info("realization %d attempt %d resampled: %s", index, attempt, exc)
    return index, MAX_ATTEMPTS + 1, None, None


def default_workers() -> int:
    return os.cpu_count() or 1


def run_ensemble(alpha: float, omega0: float, L: int, boundary: str = PERIODIC,
                 n_realizations: int = 1000, master_seed: int = 0, *,
                 workers: int = 1, selector: str = "last", keep_traces: bool = False,
                 check_traces: bool = False, start: int = 0) -> EnsembleResult:
    """Run realizations ``start .. start + n - 1``.

    Each index owns its random stream, so the output does not depend on
    ``workers``.  A realization whose fermion spectrum is degenerate is
    redrawn from a derived stream, at most ``MAX_ATTEMPTS`` times.
    ``check_traces`` asserts the decimation invariants on every trace.
    """
    DisorderDistribution(alpha, omega0)
    SeedSpec(master_seed)
    if n_realizations < 1:
        raise ValueError("n_realizations must be >= 1")
    if L < 2 or L % 2:
        raise ValueError(f"length must be even and >= 2, got {L}")
    if selector not in SELECTORS:
        raise ValueError(f"selector must be one of {SELECTORS}")

    jobs = [(alpha, omega0, L, boundary, master_seed, k, selector, keep_traces,
             check_traces)
            for k in range(start, start + n_realizations)]
    if workers > 1 and n_realizations > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, n_realizations // (4 * workers))
            results = list(pool.map(_run_one, jobs, chunksize=chunk))
    else:
        results = [_run_one(job) for job in jobs]

    results.sort(key=lambda r: r[0])
    out = EnsembleResult([], traces=[] if keep_traces else None)
    for index, attempts, record, trace in results:
        out.resampled += min(attempts, MAX_ATTEMPTS)
        if record is None:
            out.failed.append(index)
            continue
        out.records.append(record)
        if keep_traces:
            out.traces.append(trace)
    return out


def sdrg_traces(alpha: float, L: int, n: int, master_seed: int = 0,
                boundary: str = PERIODIC, omega0: float = 1.0):
    """Decimation traces only; no fermion solve."""
    dist = DisorderDistribution(alpha, omega0)
    for k in range(n):
        yield sdrg.decimate(sample_chain(dist, L, boundary, SeedSpec(master_seed, k)))


@dataclass(frozen=True)
class SurveyPair:
    i: int
    j: int
    d: int
    F: float


def qualifying_pairs(L: int, l_c: float, periodic: bool = True):
    """All (i, j), i < j, with odd separation d > l_c (shorter arc on a ring)."""
    out = []
    for i in range(L):
        for j in range(i + 1, L):
            d = j - i
            if periodic:
                d = min(d, L - d)
            if d % 2 and d > l_c:
                out.append((i, j, d))
    return out


def all_pairs_survey(chain, l_c: float, max_pairs: int | None = None,
                     rng: np.random.Generator | None = None) -> list:
    """Exact fidelity of every pair with odd separation above ``l_c``.

    ``max_pairs`` subsamples the pair list (without replacement, using
    ``rng``) to bound the determinant cost on long chains.
    """
    if l_c < 1:
        raise ValueError("l_c must be >= 1")
    pairs = qualifying_pairs(chain.length, l_c, chain.periodic)
    if max_pairs is not None and len(pairs) > max_pairs:
        rng = rng if rng is not None else np.random.default_rng(0)
        keep = np.sort(rng.choice(len(pairs), size=max_pairs, replace=False))
        pairs = [pairs[k] for k in keep]
    gm = fermions.ground_correlation_matrix(chain)
    return [SurveyPair(i, j, d, ent.fidelity(fermions.cxx(gm, i, j), fermions.czz(gm, i, j)))
            for i, j, d in pairs]


def _survey_one(args):
    alpha, omega0, L, boundary, master_seed, index, l_c, max_pairs, clean = args
    if clean:
        chain = clean_chain(L, boundary, omega0)
        return index, all_pairs_survey(chain, l_c, max_pairs,
                                       SeedSpec(master_seed, index).rng())
    dist = DisorderDistribution(alpha, omega0)
    for attempt in range(MAX_ATTEMPTS + 1):
        seed = SeedSpec(master_seed, index, attempt)
        chain = sample_chain(dist, L, boundary, seed)
        try:
            return index, all_pairs_survey(chain, l_c, max_pairs, seed.rng())
        except fermions.DegenerateSpectrum:
            continue
    return index, None


def run_survey(alpha: float, omega0: float, L: int, n_chains: int, l_c: float,
               master_seed: int = 0, *, boundary: str = PERIODIC, clean: bool = False,
               max_pairs: int | None = None, workers: int = 1) -> list:
    """Surveys over many chains; returns ``[(chain_id, [SurveyPair, ...]), ...]``.

    A clean survey uses uniform couplings ``omega0`` and needs one chain.
    """
    if not clean:
        DisorderDistribution(alpha, omega0)
    jobs = [(alpha, omega0, L, boundary, master_seed, k, l_c, max_pairs, clean)
            for k in range(n_chains)]
    if workers > 1 and n_chains > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_survey_one, jobs))
    else:
        results = [_survey_one(job) for job in jobs]
    return sorted((r for r in results if r[1] is not None), key=lambda r: r[0])


def histogram(values, n_bins: int = 50, range: tuple = (0.0, 1.0),
              meta: dict | None = None) -> FidelityHistogram:
    """Density histogram; bins are closed on the left, the last one on both
    sides (numpy's convention)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptyInput("no values to histogram")
    if n_bins < 2:
        raise ValueError("n_bins must be >= 2")
    counts, edges = np.histogram(values, bins=n_bins, range=range)
    if counts.sum() == 0:
        raise EmptyInput("no values inside the histogram range")
    density = counts / (counts.sum() * np.diff(edges))
    meta = dict(meta or {})
    meta.setdefault("n", int(counts.sum()))
    return FidelityHistogram(edges, counts, density, meta)


def in_window(records, window) -> np.ndarray:
    d_min, d_max = window
    if d_min > d_max:
        raise ValueError(f"empty distance window {window}")
    d = np.array([r.d for r in records])
    return (d >= d_min) & (d <= d_max)


def windowed(records, window=None) -> list:
    records = list(records)
    if not records:
        return []
    window = window or default_window(records[0].L)
    mask = in_window(records, window)
    return [r for r, m in zip(records, mask) if m]


def threshold_fraction(records, window=None, threshold: float = 0.5) -> ThresholdFraction:
    """Fraction of windowed records with F > threshold, with its binomial
    standard error."""
    records = list(records)
    sel = windowed(records, window)
    if not sel:
        raise EmptyWindow(f"no records in window {window}")
    f = np.array([r.F for r in sel])
    p = float(np.mean(f > threshold))
    return ThresholdFraction(p, float(np.sqrt(p * (1.0 - p) / f.size)), f.size, len(records))


def window_fraction(records, window=None) -> float:
    records = list(records)
    if not records:
        raise EmptyInput("no records")
    window = window or default_window(records[0].L)
    return float(np.mean(in_window(records, window)))


def fit_gamma(records, d_min: int = 10, min_count: int = 10) -> GammaFit:
    """Fit median ln(j_eff) per distance to a line in sqrt(d).

    Medians, not means: the spread of ln(j_eff) grows like sqrt(d).
    Distances with fewer than ``min_count`` records are skipped.
    """
    d = np.array([r.d for r in records])
    y = np.log(np.array([r.j_eff for r in records], dtype=float))
    keep = d >= d_min
    if keep.sum() < 100:
        raise InsufficientData(f"{keep.sum()} records with d >= {d_min}; need 100")
    ds, meds = [], []
    for x in np.unique(d[keep]):
        sel = y[d == x]
        if sel.size >= min_count:
            ds.append(int(x))
            meds.append(float(np.median(sel)))
    if len(ds) < 5:
        raise InsufficientData(f"only {len(ds)} populated distances with d >= {d_min}")
    x = np.sqrt(ds)
    slope, intercept = np.polyfit(x, meds, 1)
    resid = float(np.sqrt(np.mean((np.asarray(meds) - (slope * x + intercept)) ** 2)))
    if slope >= 0:
        raise InsufficientData(f"median ln(j_eff) does not decay (slope {slope:.3g})")
    return GammaFit(float(-slope), float(intercept), len(ds), resid, tuple(ds), tuple(meds))


def ks_distance(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise EmptyInput("KS distance needs two non-empty samples")
    # only the statistic is used; the asymptotic p-value divides by zero for
    # single-element samples, which is harmless here
    with np.errstate(divide="ignore"):
        return float(scipy.stats.ks_2samp(a, b, method="asymp").statistic)


def singlet_length_counts(traces) -> tuple:
    """Histogram of singlet separations over a trace ensemble.

    Returns (counts indexed by d, number of traces, length, boundary).
    """
    counts = None
    n = 0
    L = boundary = None
    for tr in traces:
        if counts is None:
            L, boundary = tr.chain.length, tr.chain.boundary
            counts = np.zeros(L, dtype=np.int64)
        elif (tr.chain.length, tr.chain.boundary) != (L, boundary):
            raise ValueError("traces must share length and boundary")
        np.add.at(counts, sdrg.distances(tr), 1)
        n += 1
    if not n:
        raise InsufficientData("no traces")
    return counts, n, L, boundary


def tail_probability(traces, d, per: str = "site"):
    """Empirical probability of a singlet at separation ``d``.

    ``per="pair"``: fraction of site pairs at separation d that are singlets.
    ``per="site"``: probability that a given spin's partner sits at distance
    d, twice the pair value on a ring.  The latter is the quantity with the
    2 / (3 d^2) tail.  ``traces`` may also be the tuple returned by
    :func:`singlet_length_counts`.
    """
    if per not in ("site", "pair"):
        raise ValueError("per must be 'site' or 'pair'")
    if isinstance(traces, tuple) and len(traces) == 4 and isinstance(traces[0], np.ndarray):
        counts, n, L, boundary = traces
    else:
        counts, n, L, boundary = singlet_length_counts(traces)
    d = np.asarray(d)
    if np.any(d < 1) or np.any(d % 2 == 0):
        raise ValueError("separation must be odd and >= 1")
    dmax = L // 2 if boundary == PERIODIC else L - 1
    if np.any(d > dmax):
        raise InsufficientData(f"separation beyond {dmax} not available for L={L}")
    if boundary == PERIODIC:
        pairs = np.where(2 * d == L, L // 2, L)
    else:
        pairs = L - d
    p = counts[d] / (n * pairs)
    if per == "site":
        p = p * 2.0 * pairs / L
    return float(p) if p.ndim == 0 else p


def tail_fit(traces_or_counts, d_range=(11, 31), per: str = "site") -> tuple:
    """Log-log slope and amplitude A of p(d) ~ A d^slope over odd d in range."""
    d = np.arange(d_range[0] | 1, d_range[1] + 1, 2)
    p = tail_probability(traces_or_counts, d, per)
    if np.any(p <= 0):
        raise InsufficientData("empty separation bins in fit range")
    slope, ln_amp = np.polyfit(np.log(d), np.log(p), 1)
    return float(slope), float(np.exp(ln_amp))


def count_rare_channels(records, d_min: int = 40, f_min: float = 0.75,
                        j_min: float = 1e-6) -> int:
    """Records with d > d_min, F > f_min and j_eff > j_min (in units of omega0)."""
    return sum(1 for r in records if r.d > d_min and r.F > f_min and r.j_eff > j_min)


def summary(records, window=None) -> dict:
    records = list(records)
    if not records:
        raise EmptyInput("no records")
    window = window or default_window(records[0].L)
    f = np.array([r.F for r in records])
    sel = windowed(records, window)
    fw = np.array([r.F for r in sel])
    return {
        "n": len(records),
        "window": [float(window[0]), float(window[1])],
        "window_fraction": window_fraction(records, window),
        "fraction_F_gt_half": float(np.mean(fw > 0.5)) if fw.size else float("nan"),
        "median_F": float(np.median(fw)) if fw.size else float("nan"),
        "median_F_all": float(np.median(f)),
    }

