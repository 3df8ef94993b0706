import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mnmland.distribution import (
    DistributionTable,
    Source,
    UnivariateMarginals,
    bivariate_marginal,
    boltzmann,
    max_abs_difference,
    product_distribution,
    univariate_approximation,
    univariate_marginals,
)
from mnmland.errors import ParameterError
from mnmland.landscape import generate_landscape
from mnmland.mop import full_table, make_bi_objective
from oracles import brute_bivariate, brute_boltzmann, brute_univariate


def random_distribution(rng, n):
    p = rng.random(1 << n) ** 3
    return DistributionTable(p / p.sum())


def problem_table(n=10, m=2, sigma=1.0, seed=0, m1=None):
    prob = make_bi_objective(generate_landscape(n, m, sigma, seed), m1 or m, m)
    return full_table(prob)


class TestBoltzmann:
    def test_constant_is_uniform(self):
        d = boltzmann(np.full(16, 3.7))
        assert np.all(d.probs == 1 / 16)
        assert d.source is Source.BOLTZMANN and d.temperature == 1.0

    def test_ln3(self):
        d = boltzmann([0.0, math.log(3.0)])
        np.testing.assert_allclose(d.probs, [0.25, 0.75], rtol=1e-15)

    def test_matches_oracle(self):
        values = problem_table(seed=3).column(1)
        np.testing.assert_allclose(boltzmann(values).probs, brute_boltzmann(values.tolist()), rtol=1e-13)

    def test_temperature(self):
        values = np.array([0.0, 1.0, 2.0, 0.5])
        np.testing.assert_allclose(
            boltzmann(values, 0.5).probs, brute_boltzmann(values.tolist(), 0.5), rtol=1e-14
        )

    def test_large_raw_values_stable(self):
        d = boltzmann([1000.0, 1001.0, 999.0, 1000.0])
        assert np.isfinite(d.probs).all() and d.probs.argmax() == 1

    @pytest.mark.parametrize("seed", range(3))
    def test_argmax_and_rank(self, seed):
        values = problem_table(sigma=5.0, seed=seed).column(1)
        p = boltzmann(values).probs
        assert p.argmax() == values.argmax()
        np.testing.assert_array_equal(np.argsort(values, kind="stable"), np.argsort(p, kind="stable"))

    @pytest.mark.parametrize("bad", [[0.0, np.nan], [np.inf, 0.0]])
    def test_non_finite(self, bad):
        with pytest.raises(ParameterError):
            boltzmann(bad)

    def test_bad_temperature(self):
        with pytest.raises(ParameterError):
            boltzmann([0.0, 1.0], 0.0)

    @settings(max_examples=50, deadline=None)
    @given(arrays(np.float64, st.sampled_from([2, 8, 64]), elements=st.floats(-50, 50)))
    def test_normalized_and_monotone(self, values):
        p = boltzmann(values).probs
        assert abs(math.fsum(p) - 1.0) <= 1e-12
        i, j = np.argmax(values), np.argmin(values)
        assert p[i] >= p[j]


class TestTableValidation:
    def test_rejects(self):
        with pytest.raises(ParameterError):
            DistributionTable([0.5, 0.25])
        with pytest.raises(ParameterError):
            DistributionTable([0.5, 0.25, 0.25])
        with pytest.raises(ParameterError):
            DistributionTable([1.5, -0.5])

    def test_read_only(self):
        d = DistributionTable([0.5, 0.5])
        with pytest.raises(ValueError):
            d.probs[0] = 1.0


class TestUnivariate:
    def test_uniform(self):
        m = univariate_marginals(DistributionTable(np.full(32, 1 / 32)))
        assert m.p_one.tolist() == [0.5] * 5

    def test_point_mass_all_ones(self):
        p = np.zeros(16)
        p[-1] = 1.0
        assert univariate_marginals(DistributionTable(p)).p_one.tolist() == [1.0] * 4

    def test_bit_order(self):
        p = np.zeros(8)
        p[0b001] = 1.0  # x_1 = 1 only
        assert univariate_marginals(DistributionTable(p)).p_one.tolist() == [1.0, 0.0, 0.0]

    @pytest.mark.parametrize("seed", range(3))
    def test_matches_bitcount_oracle(self, seed):
        d = boltzmann(problem_table(seed=seed).column(1))
        np.testing.assert_allclose(
            univariate_marginals(d).p_one, brute_univariate(d.probs.tolist(), 10), atol=1e-14
        )


class TestBivariate:
    def test_uniform(self):
        b = bivariate_marginal(DistributionTable(np.full(16, 1 / 16)), 1, 3)
        assert b.table.tolist() == [[0.25, 0.25], [0.25, 0.25]]

    def test_product(self):
        a, c = 0.3, 0.8
        d = product_distribution(UnivariateMarginals([a, 0.5, c]))
        t = bivariate_marginal(d, 1, 3).table
        np.testing.assert_allclose(t, [[(1 - a) * (1 - c), (1 - a) * c], [a * (1 - c), a * c]], atol=1e-15)

    def test_orientation(self):
        p = np.zeros(8)
        p[0b010] = 1.0  # x_2 = 1, x_3 = 0
        assert bivariate_marginal(DistributionTable(p), 2, 3).table.tolist() == [[0, 0], [1, 0]]

    @pytest.mark.parametrize("seed", range(2))
    def test_matches_oracle_and_marginalizes(self, seed):
        d = boltzmann(problem_table(sigma=9.0, seed=seed).column(1))
        u = univariate_marginals(d).p_one
        for i, j in [(1, 2), (3, 9), (5, 10)]:
            t = bivariate_marginal(d, i, j).table
            np.testing.assert_allclose(t, brute_bivariate(d.probs.tolist(), i, j), atol=1e-14)
            assert abs(t.sum() - 1.0) <= 1e-12
            assert abs(t[1].sum() - u[i - 1]) <= 1e-12
            assert abs(t[:, 1].sum() - u[j - 1]) <= 1e-12

    @pytest.mark.parametrize("i,j", [(0, 1), (2, 2), (3, 2), (1, 5)])
    def test_bad_pair(self, i, j):
        with pytest.raises(ParameterError):
            bivariate_marginal(DistributionTable(np.full(16, 1 / 16)), i, j)


class TestProduct:
    def test_half_is_uniform(self):
        d = product_distribution(UnivariateMarginals([0.5] * 6))
        assert np.all(d.probs == 1 / 64)
        assert d.source is Source.UNIVARIATE_PRODUCT

    def test_explicit_cells(self):
        d = product_distribution(UnivariateMarginals([0.2, 0.7]))
        np.testing.assert_allclose(d.probs, [0.8 * 0.3, 0.2 * 0.3, 0.8 * 0.7, 0.2 * 0.7], rtol=1e-15)

    def test_round_trip_of_marginals(self):
        rng = np.random.default_rng(1)
        p = rng.random(7)
        q = univariate_marginals(product_distribution(UnivariateMarginals(p))).p_one
        np.testing.assert_allclose(q, p, atol=1e-14)

    @pytest.mark.parametrize("sigma", [1.0, 7.0, 19.0])
    @pytest.mark.parametrize("seed", range(3))
    def test_exact_for_order_one(self, sigma, seed):
        t = problem_table(m=1, sigma=sigma, seed=seed)
        for k in range(2):
            d = boltzmann(t.column(k))
            assert max_abs_difference(d, univariate_approximation(d)) <= 1e-10

    @pytest.mark.parametrize("seed", range(3))
    def test_not_exact_for_order_two(self, seed):
        d = boltzmann(problem_table(m=2, sigma=1.0, seed=seed).column(1))
        assert max_abs_difference(d, univariate_approximation(d)) > 1e-8

    def test_bad_marginals(self):
        with pytest.raises(ParameterError):
            UnivariateMarginals([0.5, 1.2])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_marginal_consistency_property(n, seed):
    d = random_distribution(np.random.default_rng(seed), n)
    u = univariate_marginals(d).p_one
    assert abs(d.probs.sum() - 1.0) <= 1e-12
    for i in range(1, n):
        t = bivariate_marginal(d, i, i + 1).table
        assert abs(t[1].sum() - u[i - 1]) <= 1e-12
        assert abs(t[:, 1].sum() - u[i]) <= 1e-12
