"""Two-spin entanglement from transverse and longitudinal correlations.

For the chains here the reduced state of a spin pair is diagonal in the Bell
basis and fixed by (Cxx, Czz): weight F = 1/4 - 2 Cxx - Czz on the singlet,
F + 4 Cxx on the triplet |Psi+>, and 1/4 + Czz on each of |Phi+-> .  The
negativity-type measures then reduce to functions of F alone; the
concurrence is still computed from the full 4x4 matrix so that it checks
those closed forms instead of restating them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BOUND = 0.25
CLAMP_TOL = 1e-9
PSD_TOL = 1e-10

# computational basis order |++>, |+->, |-+>, |-->  (first factor = site i)
_S = 1.0 / np.sqrt(2.0)
BELL_VECTORS = np.array([
    [0.0, _S, -_S, 0.0],   # Psi-
    [0.0, _S, _S, 0.0],    # Psi+
    [_S, 0.0, 0.0, _S],    # Phi+
    [_S, 0.0, 0.0, -_S],   # Phi-
])
BELL_LABELS = ("psi_minus", "psi_plus", "phi_plus", "phi_minus")

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y).real


class InvalidCorrelation(ValueError):
    pass


class NotPositive(ValueError):
    pass


@dataclass(frozen=True)
class TwoQubitState:
    """Bell-diagonal two-qubit state; weights ordered as ``BELL_LABELS``."""

    bell_weights: tuple

    def __post_init__(self):
        w = np.asarray(self.bell_weights, dtype=float)
        if w.shape != (4,):
            raise ValueError("need four Bell weights")
        if np.any(w < -PSD_TOL):
            raise NotPositive(f"negative Bell weight in {w}")
        if abs(w.sum() - 1.0) > PSD_TOL:
            raise NotPositive(f"Bell weights sum to {w.sum()}")

    def density_matrix(self) -> np.ndarray:
        w = np.asarray(self.bell_weights)
        return (BELL_VECTORS.T * w) @ BELL_VECTORS


@dataclass(frozen=True)
class PairEntanglement:
    fidelity: float
    negativity: float
    log_negativity: float
    concurrence: float
    eof: float

    def as_tuple(self):
        return (self.fidelity, self.negativity, self.log_negativity,
                self.concurrence, self.eof)


def _check_bounds(cxx, czz):
    if abs(cxx) > BOUND + CLAMP_TOL or abs(czz) > BOUND + CLAMP_TOL:
        raise InvalidCorrelation(f"|C| > 1/4: cxx={cxx}, czz={czz}")


def fidelity(cxx: float, czz: float) -> float:
    """Overlap of the pair's reduced state with the singlet."""
    _check_bounds(cxx, czz)
    f = 0.25 - 2.0 * cxx - czz
    if f < -CLAMP_TOL or f > 1.0 + CLAMP_TOL:
        raise InvalidCorrelation(f"fidelity {f} outside [0, 1]")
    return min(max(f, 0.0), 1.0)


def reconstruct_state(cxx: float, czz: float) -> TwoQubitState:
    _check_bounds(cxx, czz)
    f = 0.25 - 2.0 * cxx - czz
    phi = 0.25 + czz
    return TwoQubitState((f, 4.0 * cxx + f, phi, phi))


def negativity(f: float) -> float:
    return 2.0 * f - 1.0 if f > 0.5 else 0.0


def log_negativity(f: float) -> float:
    return float(np.log2(2.0 * f)) if f > 0.5 else 0.0


def concurrence_wootters(state) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4).

    ``state`` is a :class:`TwoQubitState` or a 4x4 density matrix.  The l's
    are the square roots of the eigenvalues of rho (Y rho* Y), Y = sy x sy;
    they are taken here as the singular values of sqrt(rho) Y sqrt(rho)*,
    which has the same spectrum squared and keeps full precision when some
    l vanish.
    """
    rho = state.density_matrix() if isinstance(state, TwoQubitState) else np.asarray(state)
    w, v = np.linalg.eigh(rho)
    if w.min() < -PSD_TOL:
        raise NotPositive(f"density matrix eigenvalue {w.min()}")
    w = np.where(w < 1e-14, 0.0, w)
    sqrt_rho = (v * np.sqrt(w)) @ v.conj().T
    lam = np.linalg.svd(sqrt_rho @ SPIN_FLIP @ sqrt_rho.conj(), compute_uv=False)
    lam = np.sort(lam)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def entanglement_of_formation(c: float) -> float:
    if c < -CLAMP_TOL or c > 1.0 + CLAMP_TOL:
        raise ValueError(f"concurrence {c} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    x = 0.5 + 0.5 * np.sqrt(1.0 - c * c)
    if x >= 1.0:
        return 0.0
    if x <= 0.5:
        return 1.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def pair_entanglement(cxx: float, czz: float) -> PairEntanglement:
    f = fidelity(cxx, czz)
    c = concurrence_wootters(reconstruct_state(cxx, czz))
    return PairEntanglement(f, negativity(f), log_negativity(f), c,
                            entanglement_of_formation(c))


def check_consistency(p: PairEntanglement, tol: float = 1e-10) -> None:
    """Raise AssertionError unless the panel obeys E = log2(N + 1) and C = N."""
    n_ref = max(0.0, 2.0 * p.fidelity - 1.0)
    if abs(p.negativity - n_ref) > tol:
        raise AssertionError(f"negativity {p.negativity} != {n_ref}")
    if abs(p.log_negativity - np.log2(p.negativity + 1.0)) > tol:
        raise AssertionError("log-negativity != log2(N + 1)")
    if abs(p.concurrence - p.negativity) > tol:
        raise AssertionError(f"concurrence {p.concurrence} != negativity {p.negativity}")
