"""Fermion solver versus brute-force diagonalization on small chains."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import entanglement as ent
from . import fermions
from . import oracle
from .disorder import BOUNDARIES, DisorderDistribution, SeedSpec, sample_chain


@dataclass
class Worst:
    error: float = 0.0
    where: tuple = ()

    def update(self, err, where):
        if err > self.error or not np.isfinite(err):
            self.error, self.where = float(err), where


@dataclass
class SweepReport:
    tol: float
    checked: int = 0
    skipped: int = 0
    worst: dict = field(default_factory=lambda: {
        "cxx": Worst(), "czz": Worst(), "energy": Worst(), "rho": Worst()})

    @property
    def max_error(self) -> float:
        return max(w.error for w in self.worst.values())

    @property
    def ok(self) -> bool:
        return self.checked > 0 and self.max_error < self.tol

    def offender(self):
        name = max(self.worst, key=lambda k: self.worst[k].error)
        return name, self.worst[name]

    def lines(self):
        out = [f"chains checked: {self.checked}  skipped (degenerate): {self.skipped}"]
        for name, w in self.worst.items():
            out.append(f"max |{name} error| = {w.error:.3e}  at {w.where}")
        return out


def compare_chain(chain, report: SweepReport, tag=(), fault: bool = False) -> None:
    """Check every pair of one chain; ``fault`` flips the determinant sign
    (negative control for the checker itself)."""
    state = oracle.dense_ground_state(chain)
    if state.degenerate:
        report.skipped += 1
        return
    try:
        gm = fermions.ground_correlation_matrix(chain)
    except fermions.DegenerateSpectrum:
        report.skipped += 1
        return
    report.checked += 1
    report.worst["energy"].update(abs(gm.ground_energy - state.energy), tag)
    for i, j in itertools.combinations(range(chain.length), 2):
        ref = oracle.exact_correlations(state, i, j)
        c_xx = fermions.cxx(gm, i, j) * (-1.0 if fault else 1.0)
        c_zz = fermions.czz(gm, i, j)
        report.worst["cxx"].update(abs(c_xx - ref.cxx), tag + (i, j))
        report.worst["czz"].update(abs(c_zz - ref.czz), tag + (i, j))
        try:
            rho = ent.reconstruct_state(c_xx, c_zz).density_matrix()
        except ent.NotPositive:
            report.worst["rho"].update(np.inf, tag + (i, j))
            continue
        rho_ref = oracle.exact_pair_state(state, i, j)
        report.worst["rho"].update(float(np.abs(rho - rho_ref).max()), tag + (i, j))


def sweep(lengths=(4, 6, 8, 10, 12), boundaries=BOUNDARIES, alphas=(0.0, 0.6),
          n_realizations: int = 100, master_seed: int = 0, tol: float = 1e-8,
          fault: bool = False) -> SweepReport:
    for L in lengths:
        if L > oracle.MAX_LENGTH:
            raise oracle.TooLarge(f"oracle limited to L <= {oracle.MAX_LENGTH}, got {L}")
    report = SweepReport(tol)
    for L in lengths:
        for bc in boundaries:
            for a_idx, alpha in enumerate(alphas):
                dist = DisorderDistribution(alpha)
                for k in range(n_realizations):
                    # distinct stream per (L, boundary, alpha) cell
                    seed = SeedSpec(master_seed, ((L * 2 + BOUNDARIES.index(bc)) * 16
                                                  + a_idx) * 1_000_000 + k)
                    chain = sample_chain(dist, L, bc, seed)
                    compare_chain(chain, report, (L, bc, alpha, seed.realization_index), fault)
    return report
