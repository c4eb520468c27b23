"""Brute-force exact diagonalization of small XXZ chains.

Only the total-Sz = 0 block is built (dimension binomial(L, L/2)), in the
computational basis with site ``i`` stored at bit ``L - 1 - i`` and bit
value 1 meaning spin down.  The ground state is returned embedded in the full
2**L space so partial traces are plain reshapes.  The block is further split
by the global spin flip.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .disorder import ChainSpec
from .fermions import CorrelationPair

MAX_LENGTH = 14
DEGENERACY_TOL = 1e-9
_INV_SQRT2 = 1.0 / np.sqrt(2.0)


class TooLarge(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DenseGroundState:
    amplitudes: np.ndarray
    energy: float
    length: int
    gap: float

    @property
    def degenerate(self) -> bool:
        return self.gap < DEGENERACY_TOL


def _basis(L: int, sz_zero: bool) -> np.ndarray:
    states = np.arange(2 ** L, dtype=np.int64)
    if sz_zero:
        pop = np.zeros_like(states)
        for p in range(L):
            pop += (states >> p) & 1
        states = states[pop == L // 2]
    return states


def hamiltonian(chain: ChainSpec, sz_zero: bool = True):
    """Dense H on the chosen basis; returns (H, basis states)."""
    L = chain.length
    if L > MAX_LENGTH:
        raise TooLarge(f"oracle limited to L <= {MAX_LENGTH}, got {L}")
    states = _basis(L, sz_zero)
    dim = states.size
    h = np.zeros((dim, dim))
    cols = np.arange(dim)
    for k in range(chain.n_bonds):
        a, b = k, (k + 1) % L
        pa, pb = L - 1 - a, L - 1 - b
        ba = (states >> pa) & 1
        bb = (states >> pb) & 1
        J, D = chain.couplings[k], chain.deltas[k]
        h[cols, cols] += J * D * (0.5 - ba) * (0.5 - bb)
        flip = ba != bb
        target = np.searchsorted(states, states[flip] ^ ((1 << pa) | (1 << pb)))
        h[target, cols[flip]] += 0.5 * J
    return h, states


def _flip_parity_blocks(h: np.ndarray, states: np.ndarray, L: int):
    """Split H by the global spin flip, an exact symmetry at zero field.

    Yields (isometry, block) for flip parity +1 and -1.  Diagonalizing the
    blocks separately keeps the ground state a parity eigenstate, so
    <Sz_i> = 0 holds to rounding even when the gap is tiny.
    """
    partner = np.searchsorted(states, states ^ ((1 << L) - 1))
    rep = np.flatnonzero(np.arange(states.size) < partner)
    for sign in (1.0, -1.0):
        iso = np.zeros((states.size, rep.size))
        iso[rep, np.arange(rep.size)] = _INV_SQRT2
        iso[partner[rep], np.arange(rep.size)] = sign * _INV_SQRT2
        yield iso, iso.T @ h @ iso


def dense_ground_state(chain: ChainSpec, full_space: bool = False) -> DenseGroundState:
    L = chain.length
    h, states = hamiltonian(chain, sz_zero=not full_space)
    levels, vectors = [], []
    for iso, block in _flip_parity_blocks(h, states, L):
        n = min(2, block.shape[0])
        w, v = scipy.linalg.eigh(block, subset_by_index=[0, n - 1])
        levels.append(w)
        vectors.append(iso @ v[:, 0])
    best = int(np.argmin([w[0] for w in levels]))
    spectrum = np.sort(np.concatenate(levels))
    vec = vectors[best]
    lead = np.flatnonzero(np.abs(vec) > 1e-12)[0]
    if vec[lead] < 0:
        vec = -vec
    psi = np.zeros(2 ** L)
    psi[states] = vec
    gap = float(spectrum[1] - spectrum[0]) if spectrum.size > 1 else np.inf
    return DenseGroundState(psi, float(spectrum[0]), L, gap)


def exact_pair_state(state: DenseGroundState, i: int, j: int) -> np.ndarray:
    """Reduced density matrix of sites (i, j), basis |++>, |+->, |-+>, |-->."""
    L = state.length
    if i == j or not (0 <= i < L and 0 <= j < L):
        raise ValueError(f"bad site pair ({i}, {j}) for L={L}")
    psi = np.moveaxis(state.amplitudes.reshape((2,) * L), (i, j), (0, 1))
    m = psi.reshape(4, -1)
    return m @ m.T


def exact_correlations(state: DenseGroundState, i: int, j: int) -> CorrelationPair:
    L = state.length
    psi = state.amplitudes
    idx = np.arange(psi.size)
    bi = (idx >> (L - 1 - i)) & 1
    bj = (idx >> (L - 1 - j)) & 1
    czz = float(np.sum(psi ** 2 * (0.5 - bi) * (0.5 - bj)))
    flipped = idx ^ ((1 << (L - 1 - i)) | (1 << (L - 1 - j)))
    cxx = 0.25 * float(psi @ psi[flipped])
    return CorrelationPair(i, j, cxx, czz)
