import math

import numpy as np
import pytest

from bayes_security import experiments as E
from bayes_security.errors import InvalidDistribution, InvalidParameters, SingularDebias
from bayes_security.metrics import capacity, mult_leakage
from bayes_security.channel import uniform_prior, two_point_prior
from bayes_security.metrics import beta
from bayes_security.minimizer import beta_star_exhaustive


def test_sparse_prior_support():
    rng = np.random.default_rng(0)
    for sigma in range(9):
        w = E.sparse_prior(10, sigma, rng)
        assert np.count_nonzero(w) == 10 - sigma
        assert w.sum() == pytest.approx(1.0)
    with pytest.raises(InvalidParameters):
        E.sparse_prior(10, 9, rng)


def test_uniform_prior_attains_capacity():
    c = E.random_channel(10, 50, np.random.default_rng(1))
    assert mult_leakage(uniform_prior(10), c) == pytest.approx(capacity(c), abs=1e-12)


def test_two_point_prior_on_minimizing_pair_has_zero_gap():
    c = E.random_channel(10, 50, np.random.default_rng(2))
    rep = beta_star_exhaustive(c)
    assert beta(two_point_prior(10, *rep.pair), c) - rep.beta_star == pytest.approx(0.0, abs=1e-12)


def test_sparsity_rows_are_well_formed():
    rows = E.sparsity_experiment("random", n=5, m=20, trials=10, seed=4)
    assert len(rows) == 4 * 10
    assert all(r.gap_beta >= 0 and r.gap_leakage >= 0 for r in rows)
    assert {r.sparsity for r in rows} == {0, 1, 2, 3}


def test_sparsity_csv_is_reproducible():
    a = E.rows_to_csv(E.sparsity_experiment("geometric", n=4, m=30, trials=10, seed=1))
    b = E.rows_to_csv(E.sparsity_experiment("geometric", n=4, m=30, trials=10, seed=1))
    assert a == b
    assert a.splitlines()[0] == "sparsity,gap_beta,gap_leakage,channel_kind,trial,seed"


def test_sparsity_validation():
    with pytest.raises(InvalidParameters):
        E.sparsity_experiment("random", trials=5)
    with pytest.raises(InvalidParameters):
        E.sparsity_experiment("triangular")


def test_rr_utility_limits():
    hi = E.rr_utility_experiment(epsilon=20.0, sample_count=50_000, seed=0)
    assert hi.utility > 0.95 and hi.beta_star < 1e-5
    with pytest.raises(SingularDebias):
        E.rr_utility_experiment(epsilon=0.0)


def test_rr_utility_grows_with_epsilon():
    utils = [E.rr_utility_experiment(epsilon=e, sample_count=100_000, seed=0).utility for e in (1.0, 3.0, 6.0)]
    assert utils[0] < utils[1] < utils[2]


def test_rr_utility_validation():
    with pytest.raises(InvalidDistribution):
        E.rr_utility_experiment([0.5, 0.6])
    with pytest.raises(InvalidParameters):
        E.rr_utility_experiment([0.5, 0.5], sample_count=10)


def test_rr_utility_with_estimate():
    res = E.rr_utility_experiment([0.25] * 4, epsilon=1.0, sample_count=10_000, seed=0, estimate_budget=50_000)
    assert res.beta_star == pytest.approx(4 / (math.e + 3))
    assert res.beta_star_estimate == pytest.approx(res.beta_star, abs=0.03)
    assert res.to_dict()["schema_version"] == 1


def test_debias_recovers_distribution():
    p = np.array([0.5, 0.3, 0.2])
    counts = 1e6 * (p @ E.rr_channel(3, 1.0).rows)
    np.testing.assert_allclose(E.rr_debias(counts, 1.0), p, atol=1e-12)


def test_centroid_study_sandwich():
    for row in E.centroid_study():
        assert row["lower"] - 1e-12 <= row["beta_star"] <= row["upper"] + 1e-12
