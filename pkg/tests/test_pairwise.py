import numpy as np
import pytest

from epinet import (Closure, EpidemicParams, PairwiseState, WeightClasses,
                    closure_eval, initial_conditions, integrate,
                    r_pairwise_classic, r_pairwise_modified, sir_rhs, sis_rhs,
                    unweighted_reference_rhs)
from epinet.pairwise import aggregate_classes, make_rhs, reference_rhs_vector

from helpers import measured_growth_rate


class TestClosureEval:
    def test_empty_centre_gives_zero(self):
        assert closure_eval(Closure.classic(5), 10, 20, 0.0, 0, 0) == 0.0

    def test_classic_hand_value(self):
        # ((k-1)/k) * AB * BC / B = (4/5)*10*20/50
        assert closure_eval(Closure.classic(5), 10, 20, 50, 0, 1) == \
            pytest.approx(3.2, abs=1e-14)

    def test_modified_hand_values(self):
        clo = Closure.modified([2, 3])
        assert closure_eval(clo, 10, 20, 50, 0, 0) == pytest.approx(2.0)
        assert closure_eval(clo, 10, 20, 50, 0, 1) == pytest.approx(4.0)

    def test_negative_inputs_rejected(self):
        with pytest.raises(ValueError):
            closure_eval(Closure.classic(5), -1, 20, 50, 0, 0)

    def test_single_class_modified_equals_classic(self):
        k = 7
        a = closure_eval(Closure.classic(k), 3.0, 4.0, 5.0, 0, 0)
        b = closure_eval(Closure.modified([k]), 3.0, 4.0, 5.0, 0, 0)
        assert a == pytest.approx(b, abs=1e-15)

    def test_modified_needs_positive_class_degrees(self):
        with pytest.raises(ValueError):
            Closure.modified([2, 0])

    def test_factor_matrix_many_classes(self):
        F = Closure.modified([2, 4, 5]).factors(3)
        assert np.allclose(np.diag(F), [1 / 2, 3 / 4, 4 / 5])
        off = F[~np.eye(3, dtype=bool)]
        assert np.all(off == 1.0)


class TestInitialConditions:
    def test_hand_value(self):
        wc = WeightClasses.random([5.0, 1.25], [0.2, 0.8], 5)
        state = initial_conditions(1000, 0.05, wc)
        assert state.SI[0] == pytest.approx(47.5, abs=1e-12)
        assert state.S == 950.0 and state.I == 50.0

    def test_pair_sums_exact(self):
        wc = WeightClasses.fixed([1.4, 0.8], [2, 4])
        state = initial_conditions(1000, 0.05, wc, "sir")
        assert np.allclose(state.pair_sums(),
                           wc.class_fractions * 6 * 1000, atol=1e-9)

    def test_small_fraction_limit(self):
        wc = WeightClasses.random([1.0, 2.0], [0.5, 0.5], 4)
        state = initial_conditions(1000, 1e-9, wc)
        assert np.all(state.SI < 1e-5)
        assert np.allclose(state.SS, wc.class_fractions * 4 * 1000, rtol=1e-8)

    def test_invalid_fraction(self):
        wc = WeightClasses.random([1.0], [1.0], 4)
        for f in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                initial_conditions(100, f, wc)


def random_state(rng, M, dynamics, N=1000.0):
    if dynamics == "sis":
        s = rng.uniform(0.1, 1.0, size=2)
        s *= N / s.sum()
        pairs = rng.uniform(0.0, N, size=(3, M))
        return PairwiseState.sis(s[0], s[1], *pairs)
    s = rng.uniform(0.1, 1.0, size=3)
    s *= N / s.sum()
    pairs = rng.uniform(0.0, N, size=(6, M))
    return PairwiseState.sir(s[0], s[1], s[2], *pairs)


class TestRhs:
    def test_disease_free_is_equilibrium(self, fig2_top_wc, unit_params):
        M = fig2_top_wc.M
        state = PairwiseState.sis(1000.0, 0.0,
                                  fig2_top_wc.class_fractions * 5000,
                                  np.zeros(M), np.zeros(M))
        dy = sis_rhs(state, fig2_top_wc, unit_params,
                     Closure.classic(5)).vector
        assert np.all(dy == 0.0)

    def test_sir_rest_state(self, unit_params):
        wc = WeightClasses.random([1.0, 2.0], [0.5, 0.5], 4)
        state = PairwiseState.sir(900.0, 0.0, 100.0, [500, 500], [0, 0],
                                  [0, 0], [100, 100], [0, 0], [200, 200])
        dy = sir_rhs(state, wc, unit_params, Closure.classic(4)).vector
        assert np.all(dy == 0.0)

    def test_dR_dt_equals_gamma_I(self):
        wc = WeightClasses.random([1.0, 2.0], [0.5, 0.5], 4)
        params = EpidemicParams(tau=0.7, gamma=1.3)
        rng = np.random.default_rng(5)
        for _ in range(20):
            state = random_state(rng, 2, "sir")
            dy = sir_rhs(state, wc, params, Closure.classic(4))
            assert dy.vector[2] == pytest.approx(1.3 * state.I, rel=1e-12)

    def test_conservation_at_random_states(self):
        # singles sum and per-class pair-sum derivatives vanish identically
        # (identity checked symbolically before freezing this test)
        wc = WeightClasses.random([5.0, 1.25, 0.3], [0.2, 0.5, 0.3], 6)
        params = EpidemicParams(tau=0.9, gamma=0.7)
        rng = np.random.default_rng(17)
        for closure in (Closure.classic(6), Closure.modified([1, 3, 2])):
            for _ in range(100):
                s = random_state(rng, 3, "sis")
                dy = sis_rhs(s, wc, params, closure)
                assert abs(dy.vector[0] + dy.vector[1]) < 1e-9
                assert np.abs(dy.pair_sums()).max() < 1e-9
                s = random_state(rng, 3, "sir")
                dy = sir_rhs(s, wc, params, closure)
                assert abs(dy.vector[:3].sum()) < 1e-9
                assert np.abs(dy.pair_sums()).max() < 1e-9

    def test_single_class_unit_weight_matches_reference(self, unit_params):
        # with one class of weight 1 the weighted systems reduce exactly to
        # the classic unweighted pairwise models
        wc = WeightClasses.random([1.0], [1.0], 5)
        closure = Closure.classic(5)
        rng = np.random.default_rng(3)
        for dynamics, rhs in (("sis", sis_rhs), ("sir", sir_rhs)):
            for _ in range(50):
                state = random_state(rng, 1, dynamics)
                dy = rhs(state, wc, unit_params, closure).vector
                ref = unweighted_reference_rhs(state, 5, unit_params).vector
                assert np.allclose(dy, ref, rtol=1e-13, atol=1e-10)

    def test_dimension_mismatch_rejected(self, fig2_top_wc, unit_params):
        state = PairwiseState.sis(900.0, 100.0, [100.0], [10.0], [1.0])
        with pytest.raises(ValueError):
            sis_rhs(state, fig2_top_wc, unit_params, Closure.classic(5))

    def test_reference_needs_single_class(self, unit_params):
        rng = np.random.default_rng(1)
        state = random_state(rng, 2, "sis")
        with pytest.raises(ValueError):
            unweighted_reference_rhs(state, 5, unit_params)


class TestIntegration:
    def test_tau_zero_exponential_decay(self):
        wc = WeightClasses.random([1.0, 2.0], [0.5, 0.5], 4)
        params = EpidemicParams(tau=0.0, gamma=1.0)
        y0 = initial_conditions(1000, 0.05, wc)
        sol = integrate(make_rhs(wc, params, Closure.classic(4), "sis"),
                        y0.vector, (0, 5), 1e-10, 1e-10)
        grid = np.linspace(0, 5, 11)
        I = sol.sample(grid)[:, 1]
        assert np.allclose(I, 50.0 * np.exp(-grid), rtol=1e-6)

    def test_equal_weight_reduction_three_classes(self, unit_params):
        # all weights equal: class-aggregated solution coincides with the
        # independently coded unweighted reference model
        N, k = 1000.0, 6
        wc = WeightClasses.random([1.0, 1.0, 1.0], [0.2, 0.3, 0.5], k)
        y0 = initial_conditions(N, 0.05, wc, "sir")
        sol = integrate(make_rhs(wc, unit_params, Closure.classic(k), "sir"),
                        y0.vector, (0, 15), 1e-11, 1e-11)
        ref0 = aggregate_classes(y0)
        ref = integrate(lambda t, y: reference_rhs_vector(y, k, 1.0, 1.0,
                                                          "sir"),
                        ref0.vector, (0, 15), 1e-11, 1e-11)
        grid = np.linspace(0, 15, 201)
        w = sol.sample(grid)
        r = ref.sample(grid)
        M = 3
        blocks = [w[:, 3 + i * M: 3 + (i + 1) * M].sum(axis=1)
                  for i in range(6)]
        agg = np.column_stack([w[:, 0], w[:, 1], w[:, 2]] + blocks)
        assert np.abs(agg - r).max() <= 1e-8 * N

    def test_negative_transients_stay_within_slack(self, fig2_top_wc,
                                                   unit_params):
        # integrator overshoot near extinction may dip below zero, but never
        # beyond the 1e-9 slack (closure inputs are clamped at zero)
        y0 = initial_conditions(1000, 0.05, fig2_top_wc, "sir")
        sol = integrate(make_rhs(fig2_top_wc, unit_params, Closure.classic(5),
                                 "sir"), y0.vector, (0, 60), 1e-8, 1e-8)
        assert sol.y.min() >= -1e-9

    def test_sir_monotonicity(self, fig2_top_wc, unit_params):
        y0 = initial_conditions(1000, 0.05, fig2_top_wc, "sir")
        sol = integrate(make_rhs(fig2_top_wc, unit_params, Closure.classic(5),
                                 "sir"), y0.vector, (0, 15), 1e-9, 1e-9)
        grid = np.linspace(0, 15, 301)
        out = sol.sample(grid)
        eps = 1e-6
        assert np.all(np.diff(out[:, 0]) <= eps)   # S non-increasing
        assert np.all(np.diff(out[:, 2]) >= -eps)  # R non-decreasing

    def test_early_growth_matches_threshold_classic(self):
        # growth rate of I in the linear regime = gamma*(R-1)
        wc = WeightClasses.random([1.4, 0.8], [1 / 3, 2 / 3], 6)
        params = EpidemicParams(tau=1.0, gamma=1.0)
        R = r_pairwise_classic(6, 1 / 3, 1.4, 0.8, 1.0, 1.0).value
        y0 = initial_conditions(1e6, 1e-6, wc, "sir")
        sol = integrate(make_rhs(wc, params, Closure.classic(6), "sir"),
                        y0.vector, (0, 3.0), 1e-11, 1e-11)
        g = measured_growth_rate(sol, 1.5, 2.5)
        assert g == pytest.approx(R - 1.0, rel=0.05)

    def test_early_growth_matches_threshold_modified(self):
        wc = WeightClasses.fixed([10.0, 1.25], [2, 8])
        params = EpidemicParams(tau=0.5, gamma=1.0)
        R = r_pairwise_modified(2, 8, 10.0, 1.25, 0.5, 1.0).value
        y0 = initial_conditions(1e6, 1e-7, wc, "sir")
        sol = integrate(make_rhs(wc, params, Closure.modified([2, 8]), "sir"),
                        y0.vector, (0, 1.5), 1e-11, 1e-11)
        g = measured_growth_rate(sol, 0.8, 1.4)
        assert g == pytest.approx(R - 1.0, rel=0.05)
