"""Strong-disorder renormalization group decimation of XXZ chains.

The strongest bond (J2 between spins 2 and 3) is frozen into a singlet and
the outer neighbours are rejoined by

    J~ = J1 J3 / ((1 + D2) J2),      D~ = D1 D3 (1 + D2) / 2.

Live spins sit in a doubly linked list (a ring for periodic chains); live
bonds sit in a max-heap keyed by coupling with lazy invalidation, so a full
decimation costs O(L log L).
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass

import numpy as np

from .disorder import ChainSpec


@dataclass(frozen=True)
class SingletRecord:
    left: int
    right: int
    j_eff: float
    delta_eff: float
    step: int

    def to_dict(self) -> dict:
        return {"left": self.left, "right": self.right, "j_eff": self.j_eff,
                "delta_eff": self.delta_eff, "step": self.step}


@dataclass(frozen=True, eq=False)
class SdrgTrace:
    records: tuple
    chain: ChainSpec

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def to_dict(self) -> dict:
        return {"chain": self.chain.to_dict(),
                "records": [r.to_dict() for r in self.records]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "SdrgTrace":
        return cls(tuple(SingletRecord(**r) for r in d["records"]),
                   ChainSpec.from_dict(d["chain"]))


def decimate(chain: ChainSpec) -> SdrgTrace:
    """Decimate the whole chain, strongest bond first.

    A bond is identified by the site on its left; ``coupling[a]`` is the bond
    between ``a`` and ``right[a]``.  Ties go to the lowest left-site index.
    At the open ends a decimated pair leaves no new bond.  On a ring reduced
    to two spins the pair is held by two parallel bonds and is decimated at
    the stronger of the two.
    """
    L = chain.length
    periodic = chain.periodic
    coupling = [float(x) for x in chain.couplings]
    delta = [float(x) for x in chain.deltas]
    if not periodic:
        coupling.append(0.0)
        delta.append(0.0)
    right = [(a + 1) % L for a in range(L)]
    left = [(a - 1) % L for a in range(L)]
    if not periodic:
        right[L - 1] = -1
        left[0] = -1
    alive = [True] * L
    version = [0] * L

    heap = [(-coupling[a], a, 0) for a in range(L) if coupling[a] > 0.0]
    heapq.heapify(heap)

    records = []
    n_alive = L
    while n_alive:
        if n_alive == 2:
            a = next(s for s in range(L) if alive[s])
            b = right[a] if right[a] >= 0 else left[a]
            if periodic and right[b] == a:
                k = a if coupling[a] >= coupling[b] else b
            else:
                k = a if right[a] == b else b
            lo, hi = sorted((a, b))
            records.append(SingletRecord(lo, hi, coupling[k], delta[k], len(records) + 1))
            break

        neg_j, a, ver = heapq.heappop(heap)
        if not alive[a] or ver != version[a]:
            continue
        b = right[a]
        j2, d2 = coupling[a], delta[a]
        lo, hi = sorted((a, b))
        records.append(SingletRecord(lo, hi, j2, d2, len(records) + 1))

        outer_l, outer_r = left[a], right[b]
        alive[a] = alive[b] = False
        n_alive -= 2
        version[a] += 1
        version[b] += 1

        if outer_l >= 0 and outer_r >= 0:
            j1, d1 = coupling[outer_l], delta[outer_l]
            j3, d3 = coupling[b], delta[b]
            coupling[outer_l] = j1 * j3 / ((1.0 + d2) * j2)
            delta[outer_l] = d1 * d3 * (1.0 + d2) / 2.0
            right[outer_l] = outer_r
            left[outer_r] = outer_l
            version[outer_l] += 1
            heapq.heappush(heap, (-coupling[outer_l], outer_l, version[outer_l]))
        else:
            # open boundary: the surviving neighbour becomes a chain end
            if outer_l >= 0:
                right[outer_l] = -1
                coupling[outer_l] = 0.0
                version[outer_l] += 1
            if outer_r >= 0:
                left[outer_r] = -1

    return SdrgTrace(tuple(records), chain)


def last_pair(trace: SdrgTrace) -> SingletRecord:
    if not trace.records:
        raise ValueError("empty trace")
    return max(trace.records, key=lambda r: r.step)


def pair_distance(rec: SingletRecord, length: int, boundary: str) -> int:
    d = abs(rec.right - rec.left)
    if boundary == "periodic":
        d = min(d, length - d)
    return d


def longest_pair(trace: SdrgTrace) -> SingletRecord:
    """Alternative selector: the pair with the largest separation (latest
    step wins ties)."""
    L, bc = trace.chain.length, trace.chain.boundary
    return max(trace.records, key=lambda r: (pair_distance(r, L, bc), r.step))


def distances(trace: SdrgTrace) -> np.ndarray:
    L, bc = trace.chain.length, trace.chain.boundary
    return np.array([pair_distance(r, L, bc) for r in trace.records], dtype=int)


def is_perfect_matching(trace: SdrgTrace) -> bool:
    sites = [s for r in trace.records for s in (r.left, r.right)]
    return sorted(sites) == list(range(trace.chain.length))


def is_non_crossing(trace: SdrgTrace) -> bool:
    """No two bonds interleave.  Holds on the circle iff it holds on the line
    with the ring cut anywhere, so one stack sweep covers both boundaries."""
    partner = np.empty(trace.chain.length, dtype=int)
    for r in trace.records:
        partner[r.left], partner[r.right] = r.right, r.left
    stack = []
    for s in range(trace.chain.length):
        if partner[s] > s:
            stack.append(s)
        elif not stack or stack.pop() != partner[s]:
            return False
    return True


def is_energy_monotone(trace: SdrgTrace) -> bool:
    j = np.array([r.j_eff for r in trace.records])
    return bool(np.all(np.diff(j) <= 0.0))


def check_trace(trace: SdrgTrace) -> None:
    """Assert the structural invariants of a completed Δ=0 decimation."""
    L, bc = trace.chain.length, trace.chain.boundary
    if len(trace.records) != L // 2 or not is_perfect_matching(trace):
        raise AssertionError("records are not a perfect matching")
    if not is_non_crossing(trace):
        raise AssertionError("crossing singlet bonds")
    if any(pair_distance(r, L, bc) % 2 == 0 for r in trace.records):
        raise AssertionError("even singlet separation")
    if any(r.j_eff <= 0.0 for r in trace.records):
        raise AssertionError("non-positive effective coupling")
    if not is_energy_monotone(trace):
        raise AssertionError("decimation energy scale increased")
