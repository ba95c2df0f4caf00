import math
from fractions import Fraction

import pytest

from fraceq.errors import InvalidParameterError, PoleError
from fraceq.numerics import (QuadratureConfig, beta, gamma, integrate_interval,
                             integrate_semi_infinite, integrate_singular_power,
                             reciprocal_gamma)

SQRT_PI = math.sqrt(math.pi)


class TestGamma:
    def test_known_values(self):
        assert gamma(1.0) == 1.0
        assert gamma(5.0) == 24.0
        # Gamma(3/2) = sqrt(pi)/2
        assert abs(gamma(1.5) - SQRT_PI / 2.0) <= 1e-13 * gamma(1.5)

    def test_half_integer_ladder(self):
        # Gamma(1/2 + k) = (2k)! / (4^k k!) sqrt(pi); the rational factor is
        # carried exactly so the reference is correct to a couple of ulp
        for k in (0, 1, 2, 3, 5, 10, 40, 80, 160):
            ratio = float(Fraction(math.factorial(2 * k),
                                   4 ** k * math.factorial(k)))
            exact = ratio * SQRT_PI
            assert abs(gamma(0.5 + k) - exact) <= 1e-13 * exact, k

    @pytest.mark.parametrize("x", [0.1, 0.5, 1.7, 10.3])
    def test_recurrence(self, x):
        assert abs(gamma(x + 1.0) - x * gamma(x)) <= 1e-12 * abs(gamma(x + 1.0))

    def test_extreme_arguments(self):
        assert gamma(1e-3) > 999.0  # ~ 1/x near zero
        assert math.isfinite(gamma(170.0))

    @pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
    def test_pole_error(self, x):
        with pytest.raises(PoleError):
            gamma(x)

    def test_overflow_signal(self):
        with pytest.raises(OverflowError):
            gamma(200.0)


class TestReciprocalGamma:
    def test_poles_map_to_zero(self):
        assert reciprocal_gamma(0.0) == 0.0
        assert reciprocal_gamma(-1.0) == 0.0
        assert reciprocal_gamma(-12.0) == 0.0

    def test_positive_values(self):
        assert reciprocal_gamma(2.0) == 1.0
        assert abs(reciprocal_gamma(0.5) - 1.0 / SQRT_PI) < 1e-14

    def test_negative_noninteger_sign(self):
        # Gamma(-1/2) = -2 sqrt(pi)
        assert abs(reciprocal_gamma(-0.5) - (-1.0 / (2.0 * SQRT_PI))) < 1e-14
        # Gamma is positive on (-2, -1)
        assert reciprocal_gamma(-1.5) > 0.0

    def test_huge_argument_underflows_to_zero(self):
        assert reciprocal_gamma(400.0) == 0.0


class TestBeta:
    def test_trivial(self):
        assert beta(1.0, 1.0) == 1.0

    def test_half_two(self):
        # Gamma(1/2) Gamma(2) / Gamma(5/2) = 4/3
        assert abs(beta(0.5, 2.0) - 4.0 / 3.0) < 1e-12

    def test_against_bruteforce_integral(self):
        # oracle: B(2,3) = int_0^1 x (1-x)^2 dx
        oracle = integrate_interval(lambda x: x * (1.0 - x) ** 2, 0.0, 1.0)
        assert oracle.converged
        assert abs(oracle.value - 1.0 / 12.0) < 1e-12
        assert abs(beta(2.0, 3.0) - oracle.value) < 1e-12

    def test_symmetry_is_exact(self):
        for a, b in [(0.3, 2.7), (1.0, 9.5), (0.25, 0.125)]:
            assert beta(a, b) == beta(b, a)

    @pytest.mark.parametrize("a,b", [(0.0, 1.0), (-1.0, 2.0), (1.0, -0.5)])
    def test_domain_error(self, a, b):
        with pytest.raises(InvalidParameterError):
            beta(a, b)


class TestSemiInfinite:
    def test_exponential(self):
        res = integrate_semi_infinite(lambda x: math.exp(-x), 0.0)
        assert res.converged
        assert abs(res.value - 1.0) < 1e-10

    def test_shifted_exponential(self):
        res = integrate_semi_infinite(lambda x: math.exp(-x), 1.0)
        assert abs(res.value - math.exp(-1.0)) < 1e-10

    def test_gamma_two_integrand(self):
        res = integrate_semi_infinite(lambda x: x * math.exp(-x), 0.0)
        assert abs(res.value - 1.0) < 1e-10

    def test_truncation_point_reported(self):
        res = integrate_semi_infinite(lambda x: math.exp(-x), 0.0)
        assert res.truncation_point is not None
        assert math.exp(-res.truncation_point) < 1e-12

    def test_explicit_upper_bound(self):
        res = integrate_semi_infinite(lambda x: 1.0 if x < 1.0 else 0.0, 0.0, upper=1.0)
        assert res.converged
        assert abs(res.value - 1.0) < 1e-12
        assert res.truncation_point == 1.0

    def test_narrow_feature_behind_upper_hint(self):
        # without the hint a bump occupying 0.1% of the first panel is invisible
        res = integrate_semi_infinite(lambda x: 1.0 if x < 1.0 else 0.0, 0.999,
                                      upper=1.0)
        assert abs(res.value - 0.001) < 1e-12

    def test_nonconvergence_flagged(self):
        # integrable only marginally; the doubling never stabilizes
        res = integrate_semi_infinite(lambda x: 1.0 / (1.0 + x), 0.0)
        assert not res.converged


class TestSingularPower:
    def test_gamma_half_by_substitution(self):
        res = integrate_singular_power(lambda x: math.exp(-x), 0.0, 0.5)
        assert res.converged
        assert abs(res.value - SQRT_PI) < 1e-9

    def test_weight_one_delegates_exactly(self):
        f = lambda x: math.exp(-x)
        direct = integrate_semi_infinite(f, 1.0)
        weighted = integrate_singular_power(f, 1.0, 1.0)
        assert weighted.value == direct.value
        assert abs(weighted.value - math.exp(-1.0)) < 1e-10

    def test_linear_weight_on_indicator(self):
        res = integrate_singular_power(lambda x: 1.0 if x < 1.0 else 0.0, 0.0, 2.0,
                                       upper=1.0)
        assert abs(res.value - 0.5) < 1e-12

    def test_invalid_exponent(self):
        with pytest.raises(InvalidParameterError):
            integrate_singular_power(lambda x: 0.0, 0.0, 0.0)


HONESTY_CASES = [
    (lambda x: math.exp(-x), 0.0, None, 1.0),
    (lambda x: math.exp(-x), 1.0, None, math.exp(-1.0)),
    (lambda x: x * math.exp(-x), 0.0, None, 1.0),
    (lambda x: math.exp(-x), 0.0, 0.5, SQRT_PI),
    (lambda x: math.exp(-x), 1.0, 1.0, math.exp(-1.0)),
]


@pytest.mark.parametrize("f,a,p,reference", HONESTY_CASES)
def test_error_estimates_are_honest(f, a, p, reference):
    if p is None:
        res = integrate_semi_infinite(f, a)
    else:
        res = integrate_singular_power(f, a, p)
    assert res.converged
    assert abs(res.value - reference) <= 10.0 * res.error_estimate


def test_catalog_density_mass(catalog):
    for model in catalog.values():
        if model.density_ac is None:
            continue
        expected = 1.0 - sum(m for _, m in model.atoms)
        res = integrate_semi_infinite(model.density_ac, 0.0)
        assert res.converged, model.label
        assert abs(res.value - expected) <= res.error_estimate + 1e-12, model.label


def test_converged_respects_tolerances():
    cfg = QuadratureConfig(abs_tol=1e-12, rel_tol=1e-10)
    res = integrate_semi_infinite(lambda x: math.exp(-x), 0.0, cfg)
    assert res.converged
    assert res.error_estimate <= max(cfg.abs_tol, cfg.rel_tol * abs(res.value))


def test_config_validation():
    with pytest.raises(InvalidParameterError):
        QuadratureConfig(abs_tol=0.0)
    with pytest.raises(InvalidParameterError):
        QuadratureConfig(max_depth=0)
