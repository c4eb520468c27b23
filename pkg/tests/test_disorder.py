import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings, strategies as st

from randsinglet.disorder import (ChainError, ChainSpec, DisorderDistribution,
                                  SeedSpec, clean_chain, sample_chain, sample_coupling)


@pytest.mark.parametrize("alpha, omega0, u, expected", [
    (0.0, 1.0, 0.5, 0.5),
    (0.3, 1.0, 1.0, 1.0),
    (0.6, 2.5, 1.0, 2.5),
    # 0.5 ** 2.5 evaluated with mpmath at 30 digits
    (0.6, 1.0, 0.5, 0.176776695296636881),
])
def test_sample_coupling_values(alpha, omega0, u, expected):
    assert sample_coupling(DisorderDistribution(alpha, omega0), u) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("u", [0.0, -0.1, 1.5])
def test_sample_coupling_rejects_out_of_range(u):
    with pytest.raises(ChainError):
        sample_coupling(DisorderDistribution(0.3), u)


@pytest.mark.parametrize("alpha, omega0", [(1.0, 1.0), (1.5, 1.0), (0.3, 0.0), (0.3, -1.0)])
def test_distribution_validation(alpha, omega0):
    with pytest.raises(ChainError):
        DisorderDistribution(alpha, omega0)


def test_histogram_matches_density():
    # bin-integrated P(J) = 0.4 J^-0.6 is the CDF difference J^0.4
    dist = DisorderDistribution(0.6)
    rng = np.random.default_rng(11)
    j = sample_coupling(dist, 1.0 - rng.random(10**6))
    edges = np.linspace(0.0, 1.0, 21)
    counts, _ = np.histogram(j, edges)
    expected = 10**6 * np.diff(edges ** 0.4)
    assert np.all(np.abs(counts - expected) < 5 * np.sqrt(expected))


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.3, 0.6, 0.9])
def test_ks_against_cdf(alpha):
    dist = DisorderDistribution(alpha, 2.0)
    chain = sample_chain(dist, 100_000, "periodic", SeedSpec(3, 0))
    stat = scipy.stats.kstest(chain.couplings, dist.cdf).statistic
    assert stat < 0.01


def test_chain_support_and_shape():
    chain = sample_chain(DisorderDistribution(0.0), 100, "periodic", SeedSpec(5, 1))
    assert chain.couplings.shape == (100,)
    assert np.all((chain.couplings > 0) & (chain.couplings <= 1))
    assert not np.any(chain.deltas)
    assert sample_chain(DisorderDistribution(0.0), 100, "open", 5).couplings.shape == (99,)


def test_mean_coupling():
    dist = DisorderDistribution(0.6)
    j = np.concatenate([sample_chain(dist, 800, "periodic", SeedSpec(9, k)).couplings
                        for k in range(10_000)])
    # first moment of P(J): (1 - a) / (2 - a); sigma from the second moment (1 - a) / (3 - a)
    mean = 0.4 / 1.4
    sigma = np.sqrt(0.4 / 2.4 - mean**2) / np.sqrt(j.size)
    assert abs(j.mean() - mean) < 3 * sigma
    assert dist.mean() == pytest.approx(mean)


def test_determinism_and_independence():
    dist = DisorderDistribution(0.3)
    a = sample_chain(dist, 50, "periodic", SeedSpec(42, 7))
    b = sample_chain(dist, 50, "periodic", SeedSpec(42, 7))
    c = sample_chain(dist, 50, "periodic", SeedSpec(42, 8))
    assert np.array_equal(a.couplings, b.couplings)
    assert not np.array_equal(a.couplings, c.couplings)
    assert not np.array_equal(a.couplings, sample_chain(dist, 50, "periodic",
                                                         SeedSpec(42, 7, 1)).couplings)


@settings(max_examples=30, deadline=None)
@given(alpha=st.floats(-2.0, 0.95), scale=st.floats(0.01, 100.0), index=st.integers(0, 10**6))
def test_omega0_scales_couplings(alpha, scale, index):
    seed = SeedSpec(1, index)
    base = sample_chain(DisorderDistribution(alpha, 1.0), 20, "periodic", seed)
    scaled = sample_chain(DisorderDistribution(alpha, scale), 20, "periodic", seed)
    np.testing.assert_allclose(scaled.couplings, scale * base.couplings, rtol=1e-14)


@pytest.mark.parametrize("kwargs", [
    dict(length=3, couplings=[1, 1, 1], boundary="periodic"),
    dict(length=4, couplings=[1, 1, 1], boundary="periodic"),
    dict(length=4, couplings=[1, 1, 1, 1], boundary="open"),
    dict(length=4, couplings=[1, 0, 1], boundary="open"),
    dict(length=4, couplings=[1, -1, 1], boundary="open"),
    dict(length=4, couplings=[1, 1, 1], boundary="twisted"),
])
def test_chainspec_rejects(kwargs):
    with pytest.raises(ChainError):
        ChainSpec(**kwargs)


def test_json_round_trip():
    chain = sample_chain(DisorderDistribution(0.3), 10, "open", SeedSpec(2, 4))
    back = ChainSpec.from_json(chain.to_json())
    assert back.length == 10 and back.boundary == "open"
    assert np.array_equal(back.couplings, chain.couplings)
    assert back.seed == chain.seed


def test_reversed_and_clean():
    chain = ChainSpec(4, [1.0, 2.0, 3.0, 4.0], boundary="periodic")
    # bond (3,0) maps to (0,3) -> still the closing bond; (0,1) -> (3,2)
    assert list(chain.reversed().couplings) == [3.0, 2.0, 1.0, 4.0]
    assert list(clean_chain(6, "open", 2.0).couplings) == [2.0] * 5
