"""Disorder realizations for random antiferromagnetic XX(Z) chains.

Couplings follow the power-law density

    P(J) = (1 - alpha) / omega0**(1 - alpha) * J**(-alpha),   0 < J <= omega0,

sampled by inverting its CDF, (J / omega0)**(1 - alpha).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

OPEN = "open"
PERIODIC = "periodic"
BOUNDARIES = (OPEN, PERIODIC)


class ChainError(ValueError):
    """Invalid chain or distribution parameters."""


@dataclass(frozen=True)
class DisorderDistribution:
    alpha: float = 0.0
    omega0: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.alpha) or self.alpha >= 1.0:
            raise ChainError(f"alpha must be < 1, got {self.alpha}")
        if not np.isfinite(self.omega0) or self.omega0 <= 0.0:
            raise ChainError(f"omega0 must be > 0, got {self.omega0}")

    @property
    def exponent(self) -> float:
        """Power applied to a uniform variate, 1 / (1 - alpha)."""
        return 1.0 / (1.0 - self.alpha)

    def cdf(self, j):
        j = np.clip(np.asarray(j, dtype=float) / self.omega0, 0.0, 1.0)
        return j ** (1.0 - self.alpha)

    def mean(self) -> float:
        return self.omega0 * (1.0 - self.alpha) / (2.0 - self.alpha)


@dataclass(frozen=True)
class SeedSpec:
    """Identity of one realization's random stream.

    The stream depends only on ``(master_seed, realization_index)`` (and a
    resampling ``attempt``), never on scheduling order.
    """

    master_seed: int
    realization_index: int = 0
    attempt: int = 0

    def __post_init__(self):
        if self.master_seed < 0 or self.master_seed >= 2**64:
            raise ChainError("master_seed must be a 64-bit unsigned integer")
        if self.realization_index < 0 or self.attempt < 0:
            raise ChainError("realization_index and attempt must be >= 0")

    def rng(self) -> np.random.Generator:
        entropy = [int(self.master_seed), int(self.realization_index)]
        if self.attempt:
            entropy.append(int(self.attempt))
        return np.random.default_rng(np.random.SeedSequence(entropy))

    def to_dict(self) -> dict:
        return {"master_seed": self.master_seed,
                "realization_index": self.realization_index,
                "attempt": self.attempt}


@dataclass(frozen=True, eq=False)
class ChainSpec:
    """One disorder realization of the chain.

    ``couplings[k]`` joins sites ``k`` and ``k + 1``; for periodic chains the
    last coupling closes the ring between ``length - 1`` and ``0``.
    """

    length: int
    couplings: np.ndarray
    deltas: np.ndarray = None
    boundary: str = PERIODIC
    seed: SeedSpec | None = field(default=None)

    def __post_init__(self):
        couplings = np.asarray(self.couplings, dtype=float).copy()
        deltas = (np.zeros_like(couplings) if self.deltas is None
                  else np.asarray(self.deltas, dtype=float).copy())
        couplings.setflags(write=False)
        deltas.setflags(write=False)
        object.__setattr__(self, "couplings", couplings)
        object.__setattr__(self, "deltas", deltas)

        if self.boundary not in BOUNDARIES:
            raise ChainError(f"boundary must be one of {BOUNDARIES}")
        if self.length < 2 or self.length % 2:
            raise ChainError(f"length must be even and >= 2, got {self.length}")
        if couplings.shape != (self.n_bonds,):
            raise ChainError(
                f"{self.boundary} chain of length {self.length} needs "
                f"{self.n_bonds} couplings, got {couplings.size}")
        if deltas.shape != couplings.shape:
            raise ChainError("deltas must match couplings in shape")
        if not np.all(np.isfinite(couplings)) or np.any(couplings <= 0.0):
            raise ChainError("all couplings must be strictly positive")

    @property
    def periodic(self) -> bool:
        return self.boundary == PERIODIC

    @property
    def n_bonds(self) -> int:
        return self.length if self.periodic else self.length - 1

    @property
    def is_xx(self) -> bool:
        return not np.any(self.deltas)

    def reversed(self) -> "ChainSpec":
        """Relabel sites i -> L-1-i."""
        if self.periodic:
            # bond k joins (k, k+1); after reflection it joins (L-2-k, L-1-k)
            perm = (self.length - 2 - np.arange(self.length)) % self.length
            couplings = np.empty_like(self.couplings)
            deltas = np.empty_like(self.deltas)
            couplings[perm] = self.couplings
            deltas[perm] = self.deltas
        else:
            couplings, deltas = self.couplings[::-1], self.deltas[::-1]
        return ChainSpec(self.length, couplings, deltas, self.boundary, self.seed)

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "boundary": self.boundary,
            "couplings": [float(x) for x in self.couplings],
            "deltas": [float(x) for x in self.deltas],
            "seed": None if self.seed is None else self.seed.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ChainSpec":
        seed = d.get("seed")
        return cls(int(d["length"]), d["couplings"], d.get("deltas"),
                   d.get("boundary", PERIODIC),
                   None if seed is None else SeedSpec(**seed))

    @classmethod
    def from_json(cls, text: str) -> "ChainSpec":
        return cls.from_dict(json.loads(text))


def sample_coupling(dist: DisorderDistribution, u):
    """Map uniform variate(s) ``u`` in (0, 1] to couplings by inverse CDF.

    Works on scalars or arrays. ``u = 0`` is rejected since it would give a
    vanishing coupling.
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr <= 0.0) or np.any(u_arr > 1.0):
        raise ChainError("uniform variate must lie in (0, 1]")
    j = dist.omega0 * u_arr ** dist.exponent
    return float(j) if j.ndim == 0 else j


def sample_chain(dist: DisorderDistribution, length: int, boundary: str = PERIODIC,
                 seed: SeedSpec | int = 0) -> ChainSpec:
    if isinstance(seed, (int, np.integer)):
        seed = SeedSpec(int(seed))
    n_bonds = length if boundary == PERIODIC else length - 1
    rng = seed.rng()
    # Generator.random draws from [0, 1); 1 - u lands in (0, 1]
    u = 1.0 - rng.random(max(n_bonds, 0))
    return ChainSpec(length, sample_coupling(dist, u), None, boundary, seed)


def clean_chain(length: int, boundary: str = PERIODIC, omega0: float = 1.0) -> ChainSpec:
    """Uniform chain with every coupling equal to ``omega0``."""
    n_bonds = length if boundary == PERIODIC else length - 1
    return ChainSpec(length, np.full(n_bonds, float(omega0)), None, boundary)
