"""Exact ground-state correlations of the XX chain via Jordan-Wigner fermions.

At zero anisotropy the chain maps onto spinless fermions hopping with
amplitude J_i / 2.  Everything observable is built from the one-body matrix
G_ij = <c_i^dag c_j>:

* <Sz_i Sz_j> follows from Wick's theorem,
* <Sx_i Sx_j> is a determinant of Majorana contractions 2G - 1 along the
  Jordan-Wigner string between the two sites.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .disorder import ChainSpec

ZERO_MODE_TOL = 1e-12

#: parity sector labels: fermion-number parity the boundary sign is built for
EVEN, ODD = "even", "odd"


class DegenerateSpectrum(RuntimeError):
    """Two single-particle levels sit at zero on the scale of the bandwidth;
    the filled Fermi sea is not determined in double precision."""


class NotFreeFermion(ValueError):
    """The chain has non-zero anisotropy and is not quadratic in fermions."""


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    g: np.ndarray
    sector: str | None
    ground_energy: float
    n_particles: int
    periodic: bool

    @property
    def length(self) -> int:
        return self.g.shape[0]

    @property
    def parity(self) -> int:
        return -1 if self.n_particles % 2 else 1


@dataclass(frozen=True)
class CorrelationPair:
    i: int
    j: int
    cxx: float
    czz: float


def single_particle_matrix(chain: ChainSpec, parity_sector: str = EVEN) -> np.ndarray:
    """Hopping matrix of the Jordan-Wigner fermions.

    For a ring the string turns the closing bond into -J/2 when the fermion
    number is even and +J/2 when it is odd; ``parity_sector`` picks which.
    """
    if not chain.is_xx:
        raise NotFreeFermion("exact fermion solver requires all deltas = 0")
    L = chain.length
    J = chain.couplings
    h = np.zeros((L, L))
    idx = np.arange(L - 1)
    h[idx, idx + 1] = h[idx + 1, idx] = 0.5 * J[:L - 1]
    if chain.periodic:
        if parity_sector not in (EVEN, ODD):
            raise ValueError(f"unknown parity sector {parity_sector!r}")
        sign = -1.0 if parity_sector == EVEN else 1.0
        if L == 2:
            # both bonds join the same two sites
            h[0, 1] = h[1, 0] = 0.5 * (J[0] + sign * J[1])
        else:
            h[0, L - 1] = h[L - 1, 0] = sign * 0.5 * J[L - 1]
    return h


def sublattice_block(h: np.ndarray) -> np.ndarray:
    """Even-site rows, odd-site columns of a bipartite hopping matrix."""
    return h[0::2, 1::2]


def _conditioning(sigma: np.ndarray) -> float:
    # the orthogonal polar factor of a real matrix is sensitive to
    # 1 / (s_n + s_{n-1}); a single tiny singular value is harmless
    return float(sigma[-1] + (sigma[-2] if sigma.size > 1 else 0.0))


def determinant_sign(t: np.ndarray) -> float:
    """Sign of det T for the sublattice block of a chain or ring.

    T is lower bidiagonal plus the corner entry of the closing bond, so its
    determinant is the sum of two signed products and is known to full
    relative precision.  An SVD of T only resolves the smallest singular
    value to about eps * |T|, which leaves the sign of the weakest mode to
    rounding noise; this fixes it.
    """
    n = t.shape[0]
    if n == 1:
        return float(np.sign(t[0, 0]))
    diag, sub, corner = np.diag(t), np.diag(t, -1), t[0, n - 1]
    if corner == 0.0:
        return float(np.prod(np.sign(diag)))
    sign1 = np.prod(np.sign(diag))
    sign2 = (-1.0) ** (n - 1) * np.sign(corner) * np.prod(np.sign(sub))
    log1 = np.log(np.abs(diag)).sum()
    log2 = np.log(np.abs(sub)).sum() + np.log(abs(corner))
    if sign1 == sign2:
        return float(sign1)
    if abs(log1 - log2) < 1e-11 * max(1.0, abs(log1)):
        raise DegenerateSpectrum("determinant of the sublattice block cancels to rounding")
    return float(sign1 if log1 > log2 else sign2)


def ground_correlation_matrix(chain: ChainSpec) -> CorrelationMatrix:
    """Fill the Fermi sea and return G with its ground energy.

    The chain is bipartite, so h = [[0, T], [T^T, 0]] on (even, odd) sites
    and its levels are +-s_k with T = U S V^T.  Filling every negative level
    gives G = 1/2 [[1, -U V^T], [-V U^T, 1]], built here straight from the
    SVD.  This never has to decide the sign of a level, which matters because
    the last singlets bind at energies far below double-precision
    resolution of h.  The orientation of the weakest mode is pinned by the
    exact sign of det T (see :func:`determinant_sign`).

    Rings are solved in both parity sectors.  A sector only admits states
    whose particle number has its parity; if half filling has the wrong
    parity the best admissible state costs an extra s_min.  The lower
    admissible energy wins, with near-ties going to the half-filled sector.
    """
    L = chain.length
    if not chain.periodic:
        sectors = [None]
    else:
        native = EVEN if (L // 2) % 2 == 0 else ODD
        sectors = [native, ODD if native == EVEN else EVEN]

    solved = []
    for k, sector in enumerate(sectors):
        t = sublattice_block(single_particle_matrix(chain, sector or EVEN))
        if k == 0:
            t_native = t
            u, sigma, vt = np.linalg.svd(t)
            energy = -float(sigma.sum())
        else:
            sigma = np.linalg.svd(t, compute_uv=False)
            energy = -float(sigma.sum()) + float(sigma[-1])
        solved.append((sector, energy, sigma))

    choice = 0
    if len(solved) == 2:
        tol = 1e-12 * float(np.abs(chain.couplings).sum())
        if solved[1][1] < solved[0][1] - tol:
            choice = 1
    sector, energy, sigma = solved[choice]
    if choice == 1:
        # half filling has the wrong parity here; the +-1 particle states are
        # degenerate by particle-hole symmetry
        raise DegenerateSpectrum(
            f"ground state of sector {sector!r} is a degenerate Sz=+-1 doublet")
    if _conditioning(sigma) < ZERO_MODE_TOL * sigma[0]:
        raise DegenerateSpectrum(
            f"lowest single-particle levels {sigma[-2:]} too close to zero")

    q = u @ vt
    if np.linalg.det(u) * np.linalg.det(vt) * determinant_sign(t_native) < 0:
        # the weakest mode came out with the wrong orientation
        q -= 2.0 * np.outer(u[:, -1], vt[-1])
    g = np.empty((L, L))
    g[0::2, 0::2] = 0.0
    g[1::2, 1::2] = 0.0
    np.fill_diagonal(g, 0.5)
    g[0::2, 1::2] = -0.5 * q
    g[1::2, 0::2] = -0.5 * q.T
    return CorrelationMatrix(g, sector, energy, L // 2, chain.periodic)


def sector_energies(chain: ChainSpec) -> dict:
    """Lowest admissible many-body energy in each parity sector of a ring."""
    L = chain.length
    out = {}
    for sector in (EVEN, ODD):
        sigma = np.linalg.svd(
            sublattice_block(single_particle_matrix(chain, sector)), compute_uv=False)
        energy = -float(sigma.sum())
        if (L // 2) % 2 != (0 if sector == EVEN else 1):
            energy += float(sigma[-1])
        out[sector] = energy
    return out


def czz(gm: CorrelationMatrix, i: int, j: int) -> float:
    """<Sz_i Sz_j> from the Wick contraction of (n_i - 1/2)(n_j - 1/2)."""
    if i == j:
        raise ValueError("czz needs two distinct sites")
    g = gm.g
    return float((g[i, i] - 0.5) * (g[j, j] - 0.5) - g[i, j] ** 2)


def string_sites(length: int, i: int, j: int, periodic: bool):
    """Sites visited by the Jordan-Wigner string from one spin of the pair to
    the other, in string order.  On a ring the shorter arc is taken; the
    returned flag says whether it crosses the 0 / L-1 seam."""
    i, j = sorted((i, j))
    d = j - i
    if periodic and d > length - d:
        return [(j + k) % length for k in range(length - d + 1)], True
    return list(range(i, j + 1)), False


def _arc_matrix(gm: CorrelationMatrix, sites, wraps: bool) -> np.ndarray:
    g = gm.g[np.ix_(sites, sites)]
    if wraps:
        # relabeling the ring so the string starts at sites[0] multiplies the
        # fermion operators past the seam by the total parity string; the
        # cross terms pick up -(-1)^N
        after = np.asarray(sites) < sites[0]
        cross = after[:, None] != after[None, :]
        g = np.where(cross, -gm.parity * g, g)
    return g


def majorana_matrix(gm: CorrelationMatrix, i: int, j: int) -> np.ndarray:
    """Contractions <B_l A_m> = 2G_lm - delta_lm, l over the string minus its
    last site, m over the string minus its first."""
    sites, wraps = string_sites(gm.length, i, j, gm.periodic)
    g = _arc_matrix(gm, sites, wraps)
    m = 2.0 * g[:-1, 1:]
    n = m.shape[0]
    m[np.arange(1, n), np.arange(n - 1)] -= 1.0
    return m


def cxx(gm: CorrelationMatrix, i: int, j: int) -> float:
    """<Sx_i Sx_j> = det(M) / 4, with M from :func:`majorana_matrix`."""
    if i == j:
        raise ValueError("cxx needs two distinct sites")
    m = majorana_matrix(gm, i, j)
    # LU with partial pivoting; fine for the near-singular large-d case
    lu, piv = scipy.linalg.lu_factor(m, check_finite=False)
    sign = -1.0 if np.count_nonzero(piv != np.arange(piv.size)) % 2 else 1.0
    return float(0.25 * sign * np.prod(np.diag(lu)))


def correlations(gm: CorrelationMatrix, i: int, j: int) -> CorrelationPair:
    return CorrelationPair(i, j, cxx(gm, i, j), czz(gm, i, j))


def dump_csv(gm: CorrelationMatrix, path) -> None:
    """Debug dump of G."""
    np.savetxt(path, gm.g, delimiter=",", fmt="%.15g")
