import itertools

import numpy as np
import pytest

from randsinglet import entanglement as ent
from randsinglet import fermions, oracle
from randsinglet.disorder import ChainSpec, DisorderDistribution, SeedSpec, clean_chain, sample_chain


def chain(L, boundary="periodic", alpha=0.3, k=0, deltas=None):
    c = sample_chain(DisorderDistribution(alpha), L, boundary, SeedSpec(21, k))
    if deltas is None:
        return c
    return ChainSpec(L, c.couplings, np.full(c.n_bonds, deltas), boundary)


@pytest.mark.parametrize("delta, energy", [(0.0, -0.5), (1.0, -0.75)])
def test_two_site_energy(delta, energy):
    state = oracle.dense_ground_state(ChainSpec(2, [1.0], [delta], "open"))
    assert state.energy == pytest.approx(energy, abs=1e-14)
    singlet = ent.BELL_VECTORS[0]
    np.testing.assert_allclose(oracle.exact_pair_state(state, 0, 1), np.outer(singlet, singlet),
                               atol=1e-14)
    pair = oracle.exact_correlations(state, 0, 1)
    assert (pair.cxx, pair.czz) == pytest.approx((-0.25, -0.25), abs=1e-14)


def test_sign_convention_and_norm():
    state = oracle.dense_ground_state(chain(8))
    assert np.sum(state.amplitudes ** 2) == pytest.approx(1.0, abs=1e-12)
    assert state.amplitudes[np.flatnonzero(np.abs(state.amplitudes) > 1e-12)[0]] > 0
    # support only on Sz = 0 configurations
    idx = np.flatnonzero(state.amplitudes)
    assert all(bin(s).count("1") == 4 for s in idx)


@pytest.mark.parametrize("boundary", ["open", "periodic"])
def test_pair_states_are_states(boundary):
    state = oracle.dense_ground_state(chain(10, boundary, deltas=0.5))
    for i, j in itertools.combinations(range(10), 2):
        rho = oracle.exact_pair_state(state, i, j)
        assert np.trace(rho) == pytest.approx(1.0, abs=1e-12)
        assert np.abs(rho - rho.T).max() < 1e-14
        assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_bad_pair():
    state = oracle.dense_ground_state(chain(4))
    with pytest.raises(ValueError):
        oracle.exact_pair_state(state, 1, 1)
    with pytest.raises(ValueError):
        oracle.exact_pair_state(state, 0, 4)


@pytest.mark.parametrize("boundary", ["open", "periodic"])
def test_reflection_symmetry(boundary):
    for k in range(5):
        c = chain(10, boundary, 0.6, k, deltas=0.7)
        assert oracle.dense_ground_state(c.reversed()).energy == pytest.approx(
            oracle.dense_ground_state(c).energy, abs=1e-11)


@pytest.mark.parametrize("L", [2, 4, 6, 8])
@pytest.mark.parametrize("boundary", ["open", "periodic"])
def test_sz_block_loses_nothing(L, boundary):
    c = chain(L, boundary, 0.3, L, deltas=1.0)
    block = oracle.dense_ground_state(c)
    full = oracle.dense_ground_state(c, full_space=True)
    assert full.energy == pytest.approx(block.energy, abs=1e-12)


def test_heisenberg_isotropy():
    c = clean_chain(12)
    state = oracle.dense_ground_state(ChainSpec(12, c.couplings, np.ones(12), "periodic"))
    assert not state.degenerate
    for i in range(12):
        pair = oracle.exact_correlations(state, i, (i + 1) % 12)
        assert pair.cxx == pytest.approx(pair.czz, abs=1e-12)


def test_matches_fermions_at_twelve_sites():
    c = chain(12, "periodic", 0.0, 3)
    state = oracle.dense_ground_state(c)
    gm = fermions.ground_correlation_matrix(c)
    assert gm.ground_energy == pytest.approx(state.energy, abs=1e-10)
    for i, j in [(0, 1), (0, 5), (2, 9), (3, 11)]:
        pair = oracle.exact_correlations(state, i, j)
        assert fermions.cxx(gm, i, j) == pytest.approx(pair.cxx, abs=1e-8)
        assert fermions.czz(gm, i, j) == pytest.approx(pair.czz, abs=1e-8)


def test_degeneracy_flag():
    state = oracle.dense_ground_state(clean_chain(4))
    assert state.gap == pytest.approx(np.sqrt(2.0)) and not state.degenerate
    assert oracle.DenseGroundState(state.amplitudes, state.energy, 4, 1e-12).degenerate


def test_too_large():
    with pytest.raises(oracle.TooLarge):
        oracle.dense_ground_state(clean_chain(16))


def test_magnetization_vanishes_at_small_gap():
    # many-body gap ~ 3e-9: a plain eigensolver mixes the two flip-parity
    # states and leaves <Sz_i> ~ 1e-8
    c = sample_chain(DisorderDistribution(0.6), 12, "open", SeedSpec(0, 385000064))
    state = oracle.dense_ground_state(c)
    assert 1e-9 < state.gap < 1e-8
    idx = np.arange(state.amplitudes.size)
    for i in range(12):
        bit = (idx >> (11 - i)) & 1
        assert abs(np.sum(state.amplitudes ** 2 * (0.5 - bit))) < 1e-13
