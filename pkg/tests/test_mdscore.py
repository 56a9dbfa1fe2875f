import math

import numpy as np
import pytest
from scipy import integrate

from mdsrel.errors import SingularityError, SurvivalUnderflowError
from mdsrel.hazards import CompositeBathtub, ConstantHazard, WeibullHazard
from mdsrel.mdscore import (ArrayConfig, CodedBlockHazard, MdsCode,
                            adaptive_limit_constant, array_component_hazard,
                            array_hazard, asymptotic_component_hazard,
                            block_survival, component_hazard,
                            component_hazard_lower_bound,
                            parity_component_hazard,
                            reliability_crossing_time,
                            replication_component_hazard,
                            system_failure_density, system_survival,
                            weighted_failure_cdf)
from mdsrel.specialmath import regularized_upper_gamma

CONST = ConstantHazard(0.01)


def log_system_survival(x, config, model):
    return -CodedBlockHazard(config, model).cumulative_hazard(x)


class TestCodeTypes:
    def test_mds_code_accessors(self):
        c = MdsCode(14, 10)
        assert (c.t, c.r) == (4, 10 / 14)

    def test_mds_code_validation(self):
        with pytest.raises(ValueError):
            MdsCode(4, 0)
        with pytest.raises(ValueError):
            MdsCode(4, 5)
        with pytest.raises(ValueError):
            MdsCode(4.0, 2)

    def test_array_config_products(self):
        cfg = ArrayConfig((MdsCode(5, 3), MdsCode(4, 3)))
        assert cfg.ndim == 2
        assert cfg.n_total == 20
        assert cfg.k_total == 9
        assert cfg.r_total == pytest.approx(9 / 20)

    def test_array_config_validation(self):
        with pytest.raises(ValueError):
            ArrayConfig(())
        with pytest.raises(ValueError):
            ArrayConfig(((5, 3),))


class TestBlockSurvival:
    def test_full_budget_is_one(self):
        for r in (0.0, 0.3, 1.0):
            assert block_survival(7, 7, r) == 1.0

    def test_zero_budget_is_power(self):
        assert block_survival(0, 5, 0.9) == pytest.approx(0.9 ** 5, rel=1e-14)

    def test_two_term_sum(self):
        expected = 0.9 ** 4 + 4 * 0.1 * 0.9 ** 3
        assert block_survival(1, 4, 0.9) == pytest.approx(expected, rel=1e-13)

    def test_domain(self):
        with pytest.raises(ValueError):
            block_survival(-1, 4, 0.9)
        with pytest.raises(ValueError):
            block_survival(5, 4, 0.9)
        with pytest.raises(ValueError):
            block_survival(1, 4, 1.2)


class TestWeightedFailureCdf:
    def test_weight_zero_reduces_to_plain_sum(self):
        for t, n, r in [(2, 6, 0.8), (0, 3, 0.5), (5, 5, 0.1)]:
            assert weighted_failure_cdf(0, t, n, r) == pytest.approx(
                block_survival(t, n, r), rel=1e-13)

    def test_order_above_budget_is_zero(self):
        assert weighted_failure_cdf(3, 2, 6, 0.8) == 0.0

    def test_first_moment_identity(self):
        lhs = weighted_failure_cdf(1, 2, 4, 0.9)
        rhs = 4 * 0.1 * block_survival(1, 3, 0.9)
        assert lhs == pytest.approx(rhs, rel=1e-13)
        assert lhs == pytest.approx(0.3888, rel=1e-12)

    def test_factorization_identity_random(self):
        # dividing out the (t-z, n-z) sum leaves C(n,z) (1-R)^z exactly
        rng = np.random.default_rng(31)
        for _ in range(1000):
            n = int(rng.integers(1, 40))
            t = int(rng.integers(0, n + 1))
            z = int(rng.integers(0, t + 1))
            rel = float(rng.uniform(0.05, 0.95))
            denom = block_survival(t - z, n - z, rel)
            expected = math.comb(n, z) * (1.0 - rel) ** z
            assert weighted_failure_cdf(z, t, n, rel) / denom == pytest.approx(
                expected, rel=1e-10)


class TestComponentHazard:
    def test_no_parity_is_component_hazard_exactly(self):
        assert component_hazard(5.0, MdsCode(7, 7), CONST) == 0.01
        xs = np.array([1.0, 10.0, 100.0])
        np.testing.assert_array_equal(
            component_hazard(xs, MdsCode(3, 3), CONST), np.full(3, 0.01))

    def test_zero_at_time_zero_with_parity(self):
        assert component_hazard(0.0, MdsCode(10, 8), CONST) == 0.0
        assert component_hazard(0.0, MdsCode(10, 8), CompositeBathtub()) == 0.0

    def test_replication_closed_form_equivalence(self):
        xs = np.linspace(1.0, 800.0, 100)
        for n in (2, 4, 10):
            closed = replication_component_hazard(xs, n, CONST)
            generic = component_hazard(xs, MdsCode(n, 1), CONST)
            np.testing.assert_allclose(generic, closed, rtol=1e-12)

    def test_parity_closed_form_equivalence(self):
        xs = np.linspace(1.0, 800.0, 100)
        for n in (2, 4, 10):
            closed = parity_component_hazard(xs, n, CONST)
            generic = component_hazard(xs, MdsCode(n, n - 1), CONST)
            np.testing.assert_allclose(generic, closed, rtol=1e-12)

    def test_parity_hand_value(self):
        # n=4, R=0.9: 0.01 * 0.4 / (0.4 + 0.9)
        x = -math.log(0.9) / 0.01
        assert parity_component_hazard(x, 4, CONST) == pytest.approx(
            0.01 * 0.4 / 1.3, rel=1e-12)

    def test_parity_limits(self):
        assert parity_component_hazard(0.0, 4, CONST) == 0.0
        assert parity_component_hazard(5e4, 4, CONST) == pytest.approx(
            0.01, rel=1e-9)

    def test_replication_limits(self):
        assert replication_component_hazard(123.0, 1, CONST) == 0.01
        # small x: n lam^n x^(n-1); large x: the component hazard
        lam, n = 0.01, 3
        x = 0.5
        approx = n * lam ** n * x ** (n - 1)
        assert replication_component_hazard(x, n, CONST) == pytest.approx(
            approx, rel=0.05)
        assert replication_component_hazard(5e4, n, CONST) == pytest.approx(
            lam, rel=1e-6)

    def test_matches_log_survival_slope(self):
        # k * per-component hazard == -d ln(block survival)/dx
        rng = np.random.default_rng(32)
        for _ in range(10):
            n = int(rng.integers(2, 51))
            t = int(rng.integers(0, n))
            code = MdsCode(n, n - t)
            for x in np.geomspace(30.0, 3000.0, 12):
                h = max(1e-4 * x, 1e-3)
                fd = -(log_system_survival(x + h, code, ConstantHazard(1e-3))
                       - log_system_survival(x - h, code, ConstantHazard(1e-3))) / (2 * h)
                kmu = code.k * component_hazard(x, code, ConstantHazard(1e-3))
                assert kmu == pytest.approx(fd, rel=1e-5)

    def test_underflow_reported(self):
        # cumulative hazard overflows to inf -> survival is exactly zero
        steep = WeibullHazard(shape=80.0, scale=1.0)
        with pytest.raises(SurvivalUnderflowError) as err:
            component_hazard(1e6, MdsCode(4, 3), steep)
        assert err.value.n == 4 and err.value.t == 1

    def test_approaches_component_hazard_from_below(self):
        xs = np.geomspace(10.0, 60000.0, 60)
        mu = component_hazard(xs, MdsCode(12, 9), CONST)
        assert np.all(mu <= 0.01 * (1 + 1e-12))
        assert mu[-1] == pytest.approx(0.01, rel=1e-9)


class TestLowerBound:
    def test_zero_when_reliability_at_least_rate(self):
        code = MdsCode(10, 8)  # r = 0.8
        x = -math.log(0.85) / 0.01  # R = 0.85 > r
        assert component_hazard_lower_bound(x, code, CONST) == 0.0
        assert component_hazard_lower_bound(0.0, code, CONST) == 0.0

    def test_hand_value(self):
        # R=0.5, r=0.8: 0.01 * (1 - 0.625)/0.5 = 0.0075
        x = -math.log(0.5) / 0.01
        assert component_hazard_lower_bound(x, 0.8, CONST) == pytest.approx(
            0.0075, rel=1e-12)

    def test_tends_to_component_hazard(self):
        x = -math.log(1e-9) / 0.01
        assert component_hazard_lower_bound(x, 0.8, CONST) == pytest.approx(
            0.01, rel=1e-6)

    def test_bounds_component_hazard_sampled(self):
        rng = np.random.default_rng(33)
        for _ in range(2000):
            n = int(rng.integers(2, 60))
            t = int(rng.integers(0, n))  # 0 <= t <= n-1
            code = MdsCode(n, n - t)
            model = ConstantHazard(10 ** rng.uniform(-4, -1))
            x = 10 ** rng.uniform(-1, 3.5)
            mu = component_hazard(x, code, model)
            lb = component_hazard_lower_bound(x, code, model)
            assert mu >= lb - 1e-12


class TestAsymptotics:
    def test_piecewise_values(self):
        assert asymptotic_component_hazard(1.5, 0.8, 0.01) == pytest.approx(
            0.005, rel=1e-12)
        assert asymptotic_component_hazard(1.5, 2 / 3, 0.01) == pytest.approx(
            0.0, abs=1e-15)
        assert asymptotic_component_hazard(1.5, 0.5, 0.01) == 0.0
        assert asymptotic_component_hazard(3.0, 1.0, 0.01) == pytest.approx(
            0.01, rel=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            asymptotic_component_hazard(1.0, 0.5, 0.01)
        with pytest.raises(ValueError):
            asymptotic_component_hazard(2.0, 0.0, 0.01)

    def test_crossing_time(self):
        assert reliability_crossing_time(ConstantHazard(0.01), math.e) == \
            pytest.approx(100.0, rel=1e-12)
        assert reliability_crossing_time(ConstantHazard(0.01), 2.0) == \
            pytest.approx(100.0 * math.log(2.0), rel=1e-12)
        assert reliability_crossing_time(CONST, 1.0 + 1e-12) < 1e-8

    def test_finite_size_gap_shrinks(self):
        # the finite-n hazard approaches the large-array value, and the
        # sub-threshold rate drives the hazard to zero, over n
        for q in (1.5, 2.0, 3.0):
            model = ConstantHazard(0.01)
            a = reliability_crossing_time(model, q)
            lam_a = model.hazard(a)
            target = asymptotic_component_hazard(q, 0.8, lam_a)
            gaps = []
            for n in (50, 300, 1000, 3000):
                mu = component_hazard(a, MdsCode(n, int(0.8 * n)), model)
                gaps.append(abs(mu - target))
            assert all(g0 > g1 for g0, g1 in zip(gaps, gaps[1:])), q
            r_lo = 0.3
            assert r_lo < 1.0 / q
            vals = [component_hazard(a, MdsCode(n, int(r_lo * n)), model)
                    for n in (50, 300, 1000, 3000)]
            assert all(v0 > v1 for v0, v1 in zip(vals, vals[1:])), q

    def test_adaptive_constant_values(self):
        assert adaptive_limit_constant("late", 0.5) == pytest.approx(2.0)
        assert adaptive_limit_constant("early", 0.5, reliability=1.0) == 0.0
        assert adaptive_limit_constant("early", 0.5, reliability=0.99) == \
            pytest.approx(0.01 / (0.49 * 0.48), rel=1e-12)

    def test_adaptive_constant_singularities(self):
        with pytest.raises(SingularityError, match="R - r"):
            adaptive_limit_constant("early", 0.5, reliability=0.5)
        with pytest.raises(SingularityError, match="2R - r - 1"):
            adaptive_limit_constant("early", 0.5, reliability=0.75)
        with pytest.raises(ValueError):
            adaptive_limit_constant("middle", 0.5)

    def test_poisson_limit_gap_shrinks(self):
        # fixed data count k=10 and n*R = 5: the failure-count sum tends
        # to the regularized-gamma form as n grows
        k = 10
        limit = 1.0 - regularized_upper_gamma(k, 5.0)
        gaps = []
        for n in (200, 1000):
            val = block_survival(n - k, n, 5.0 / n)
            gaps.append(abs(val - limit))
        assert gaps[1] < gaps[0]


class TestMultidim:
    CFG2 = ArrayConfig((MdsCode(5, 3), MdsCode(4, 3)))

    def test_one_dim_reduces_exactly(self):
        xs = np.geomspace(1.0, 2000.0, 50)
        code = MdsCode(25, 15)
        one = component_hazard(xs, code, CONST)
        multi = array_component_hazard(xs, ArrayConfig((code,)), CONST)
        np.testing.assert_allclose(multi, one, rtol=1e-12)

    def test_matches_nested_survival_slope(self):
        for x in (10.0, 50.0, 100.0):
            h = max(1e-4 * x, 1e-3)
            fd = -(log_system_survival(x + h, self.CFG2, CONST)
                   - log_system_survival(x - h, self.CFG2, CONST)) / (2 * h)
            kmu = 9 * array_component_hazard(x, self.CFG2, CONST)
            assert kmu == pytest.approx(fd, rel=1e-5)

    def test_three_levels_slope(self):
        cfg = ArrayConfig((MdsCode(5, 3), MdsCode(4, 3), MdsCode(3, 2)))
        for x in (20.0, 80.0, 200.0):
            h = max(1e-4 * x, 1e-3)
            fd = -(log_system_survival(x + h, cfg, CONST)
                   - log_system_survival(x - h, cfg, CONST)) / (2 * h)
            kmu = cfg.k_total * array_component_hazard(x, cfg, CONST)
            assert kmu == pytest.approx(fd, rel=1e-5)

    def test_trivial_outer_code_changes_nothing(self):
        xs = np.geomspace(1.0, 500.0, 20)
        inner = MdsCode(5, 3)
        stacked = ArrayConfig((inner, MdsCode(3, 3)))
        np.testing.assert_allclose(
            array_component_hazard(xs, stacked, CONST),
            component_hazard(xs, inner, CONST), rtol=1e-12)


class TestSystemSurvival:
    def test_alive_at_zero(self):
        cfg = ArrayConfig((MdsCode(5, 3), MdsCode(4, 3)))
        assert system_survival(0.0, cfg, CONST) == 1.0

    def test_single_component(self):
        assert system_survival(100.0, MdsCode(1, 1), CONST) == pytest.approx(
            math.exp(-1.0), rel=1e-14)

    def test_single_parity_block(self):
        x = -math.log(0.9) / 0.01
        assert system_survival(x, MdsCode(4, 3), CONST) == pytest.approx(
            0.9477, rel=1e-12)

    def test_dimension_order_matters(self):
        a = ArrayConfig((MdsCode(5, 3), MdsCode(4, 3)))
        b = ArrayConfig((MdsCode(4, 3), MdsCode(5, 3)))
        x = 60.0
        sa = system_survival(x, a, CONST)
        sb = system_survival(x, b, CONST)
        assert abs(sa - sb) > 1e-4

    def test_non_increasing(self):
        cfg = ArrayConfig((MdsCode(5, 3), MdsCode(4, 3)))
        xs = np.linspace(0.0, 800.0, 200)
        s = system_survival(xs, cfg, CONST)
        assert np.all(np.diff(s) <= 0)
        assert np.all((s >= 0) & (s <= 1))


class TestFailureDensity:
    def test_no_parity_closed_form(self):
        code = MdsCode(6, 6)
        for x in (0.0, 10.0, 200.0):
            expected = 6 * 0.01 * math.exp(-0.01 * x) ** 6
            assert system_failure_density(x, code, CONST) == pytest.approx(
                expected, rel=1e-12)

    def test_matches_survival_derivative(self):
        code = MdsCode(4, 3)
        for x in (10.0, 80.0, 400.0):
            h = max(1e-4 * x, 1e-3)
            fd = -(system_survival(x + h, code, CONST)
                   - system_survival(x - h, code, CONST)) / (2 * h)
            assert system_failure_density(x, code, CONST) == pytest.approx(
                fd, rel=1e-6)

    def test_integrates_to_failure_probability(self):
        code = MdsCode(4, 3)
        for x_hi in (50.0, 300.0):
            val, _ = integrate.quad(
                lambda y: system_failure_density(y, code, CONST), 0.0, x_hi,
                limit=200)
            assert val == pytest.approx(
                1.0 - system_survival(x_hi, code, CONST), rel=1e-5)

    def test_vanishes_in_tail(self):
        assert system_failure_density(1e5, MdsCode(4, 3), CONST) < 1e-100


class TestArrayHazard:
    def test_series_system_sums_rates(self):
        cfg = ArrayConfig((MdsCode(8, 8),))
        assert array_hazard(123.0, cfg, CONST) == pytest.approx(
            8 * 0.01, rel=1e-14)

    def test_zero_at_start_with_parity_everywhere(self):
        cfg = ArrayConfig((MdsCode(5, 3), MdsCode(4, 3)))
        assert array_hazard(0.0, cfg, CONST) == 0.0

    def test_is_data_count_times_component(self):
        cfg = ArrayConfig((MdsCode(4, 3),))
        xs = np.geomspace(1.0, 500.0, 30)
        np.testing.assert_array_equal(
            array_hazard(xs, cfg, CONST),
            3 * array_component_hazard(xs, cfg, CONST))


class TestCodedBlockHazard:
    def test_behaves_like_hazard_model(self):
        block = CodedBlockHazard(MdsCode(4, 3), CONST)
        xs = np.linspace(5.0, 400.0, 40)
        np.testing.assert_allclose(
            block.reliability(xs),
            system_survival(xs, MdsCode(4, 3), CONST), rtol=1e-12)
        v = block.cumulative_hazard(123.0)
        assert block.inverse_cumulative_hazard(v) == pytest.approx(123.0, rel=1e-9)

    def test_nesting_reproduces_two_level_recursion(self):
        block = CodedBlockHazard(MdsCode(5, 3), CONST)
        outer = MdsCode(4, 3)
        cfg = ArrayConfig((MdsCode(5, 3), outer))
        for x in (15.0, 90.0, 250.0):
            via_block = component_hazard(x, outer, block) / 3.0
            direct = array_component_hazard(x, cfg, CONST)
            assert via_block == pytest.approx(direct, rel=1e-12)
