import math
from dataclasses import replace

import pytest

from conftest import CATALOG_SPECS, rel_diff
from fraceq import distributions as dist
from fraceq.distributions import (DistributionModel, DistributionSpec, build,
                                  fractional_moment, quantile,
                                  support_interval, survival_at,
                                  upper_partial_moment)
from fraceq.errors import DivergenceError, InvalidParameterError


def strip_closed(model):
    """Force the quadrature fallbacks."""
    return replace(model, closed_form_moment=None, closed_form_partial=None)


class TestBuild:
    def test_exponential(self):
        X = build(dist.exponential(1.0))
        assert X.atoms == ()
        assert abs(X.survival(1.0) - math.exp(-1.0)) < 1e-15
        assert X.support_upper == math.inf

    def test_deductible_over_exponential(self):
        X = build(dist.deductible(1.0, dist.exponential(1.0)))
        assert len(X.atoms) == 1
        loc, mass = X.atoms[0]
        assert loc == 0.0
        assert abs(mass - (1.0 - math.exp(-1.0))) < 1e-12  # 0.6321206...
        for t in (0.0, 0.5, 2.0):
            assert abs(X.survival(t) - math.exp(-(1.0 + t))) < 1e-15

    def test_zero_inflated(self):
        X = build(dist.zero_inflated(0.3, dist.exponential(1.0)))
        assert X.atoms == ((0.0, 0.3),)
        assert abs(X.survival(1.0) - 0.7 * math.exp(-1.0)) < 1e-15

    def test_numeric_interpolation(self):
        X = build(CATALOG_SPECS["numeric"])
        # knot values are exact, interior points interpolate monotonically
        assert X.survival(0.5) == math.exp(-0.5)
        assert math.exp(-0.8) < X.survival(0.75) < math.exp(-0.7)
        # exponential extrapolation beyond the last knot keeps decaying
        assert 0.0 < X.survival(6.0) < X.survival(4.0)

    @pytest.mark.parametrize("spec", [
        dist.exponential(0.0),
        dist.exponential(-2.0),
        dist.uniform(1.0, 1.0),
        dist.weibull(2.0, 0.0),
        dist.hyperexp2(1.5, 1.0, 2.0),
        dist.zero_inflated(0.0, dist.exponential(1.0)),
        dist.deductible(0.0, dist.exponential(1.0)),
        dist.deductible(2.0, dist.uniform(0.0, 1.0)),
        dist.numeric([(0.0, 1.0)]),
        dist.numeric([(0.0, 0.4), (1.0, 0.6)]),
        DistributionSpec("frobnicate"),
    ])
    def test_invalid_parameters(self, spec):
        with pytest.raises(InvalidParameterError):
            build(spec)

    def test_spec_json_roundtrip(self):
        spec = dist.deductible(1.0, dist.hyperexp2(0.4, 1.0, 3.0))
        assert DistributionSpec.from_json(spec.to_json()) == spec


class TestFractionalMoment:
    def test_exponential_half_moment(self):
        # E[X^s] = Gamma(s+1) / lambda^s for the exponential
        X = build(dist.exponential(1.0))
        assert abs(fractional_moment(X, 0.5) - math.gamma(1.5)) < 1e-14
        assert abs(fractional_moment(X, 1.0) - 1.0) < 1e-14

    def test_uniform_second_moment(self):
        X = build(dist.uniform(0.0, 1.0))
        assert abs(fractional_moment(X, 2.0) - 1.0 / 3.0) < 1e-14

    def test_zeroth_moment_is_one(self, catalog):
        for model in catalog.values():
            assert fractional_moment(model, 0.0) == 1.0

    def test_negative_exponent_against_closed_form(self):
        X = build(dist.exponential(1.0))
        bare = strip_closed(X)
        for s in (-0.5, -0.25):
            assert rel_diff(fractional_moment(bare, s), math.gamma(s + 1.0)) < 1e-8

    def test_negative_exponent_with_atom_at_zero_diverges(self):
        X = build(dist.zero_inflated(0.3, dist.exponential(1.0)))
        with pytest.raises(DivergenceError):
            fractional_moment(X, -0.5)

    def test_exponent_at_or_below_minus_one_diverges(self, catalog):
        with pytest.raises(DivergenceError):
            fractional_moment(catalog["exp1"], -1.0)

    @pytest.mark.parametrize("s", [0.5, 1.0, 1.5, 2.0, 3.0])
    def test_closed_form_matches_quadrature(self, catalog, s):
        for model in catalog.values():
            if model.closed_form_moment is None:
                continue
            closed = fractional_moment(model, s)
            quad = fractional_moment(strip_closed(model), s)
            assert rel_diff(closed, quad) < 1e-6, (model.label, s)


class TestUpperPartialMoment:
    def test_exponential_tail_formula(self):
        # E[(X-t)_+^s] = Gamma(s+1) e^(-t) for the unit exponential
        X = build(dist.exponential(1.0))
        got = upper_partial_moment(X, 2.0, 0.5)
        assert abs(got - math.exp(-2.0) * math.gamma(1.5)) < 1e-12  # 0.1199377...

    def test_zero_threshold_gives_mean(self, catalog):
        for model in catalog.values():
            lhs = upper_partial_moment(model, 0.0, 1.0)
            rhs = fractional_moment(model, 1.0)
            assert rel_diff(lhs, rhs) < 1e-8, model.label

    def test_uniform_excess(self):
        X = build(dist.uniform(0.0, 1.0))
        # int_{1/2}^1 (x - 1/2) dx = 1/8
        assert abs(upper_partial_moment(X, 0.5, 1.0) - 0.125) < 1e-14

    def test_matches_moment_at_zero(self, catalog):
        for model in catalog.values():
            for s in (0.5, 1.0, 2.0):
                assert rel_diff(upper_partial_moment(model, 0.0, s),
                                fractional_moment(model, s)) < 1e-8

    def test_exponent_zero_is_survival(self, catalog):
        for model in catalog.values():
            assert upper_partial_moment(model, 0.7, 0.0) == survival_at(model, 0.7)

    @pytest.mark.parametrize("s", [1.0, 1.5, 2.0])
    def test_nonincreasing_in_threshold(self, catalog, s):
        for model in catalog.values():
            hi = model.support_upper if math.isfinite(model.support_upper) else 5.0
            prev = math.inf
            for k in range(50):
                t = hi * k / 49.0
                value = upper_partial_moment(model, t, s)
                assert value <= prev + 1e-12, (model.label, s, t)
                prev = value

    def test_negative_exponent_quadrature_vs_closed(self):
        X = build(dist.exponential(1.0))
        bare = strip_closed(X)
        for t in (0.0, 0.5, 2.0):
            closed = upper_partial_moment(X, t, -0.5)
            quad = upper_partial_moment(bare, t, -0.5)
            assert rel_diff(closed, quad) < 1e-10, t

    def test_deeply_negative_exponents_stay_accurate(self):
        # the survival increment cancels catastrophically near u = 0; the
        # secant model keeps the weighted head integral well-conditioned
        bare = strip_closed(build(dist.exponential(1.0)))
        for s in (-0.7, -0.9, -0.99):
            got = upper_partial_moment(bare, 0.5, s)
            exact = math.gamma(s + 1.0) * math.exp(-0.5)
            assert rel_diff(got, exact) < 1e-9, s

    def test_negative_exponent_uniform_closed_form(self):
        X = build(dist.uniform(0.0, 1.0))
        # int_t^1 (x-t)^(-1/2) dx = 2 sqrt(1-t)
        for t in (0.0, 0.25, 0.75):
            assert abs(upper_partial_moment(X, t, -0.5)
                       - 2.0 * math.sqrt(1.0 - t)) < 1e-13

    def test_atom_at_threshold_is_allowed(self):
        # the (x)_+ convention nullifies mass sitting exactly at t
        X = build(dist.deductible(1.0, dist.exponential(1.0)))
        got = upper_partial_moment(X, 0.0, -0.5)
        assert abs(got - math.exp(-1.0) * math.gamma(0.5)) < 1e-12

    def test_atom_above_threshold_rejected_for_negative_exponent(self):
        lumpy = DistributionModel(
            label="lump at 2",
            survival=lambda t: 1.0 if t < 2.0 else 0.0,
            atoms=((2.0, 1.0),),
            support_upper=2.0)
        with pytest.raises(DivergenceError):
            upper_partial_moment(lumpy, 1.0, -0.5)

    def test_negative_threshold_rejected(self, catalog):
        with pytest.raises(InvalidParameterError):
            upper_partial_moment(catalog["exp1"], -1.0, 1.0)


class TestSurvival:
    def test_examples(self):
        X = build(dist.exponential(1.0))
        assert survival_at(X, 0.0) == 1.0
        assert abs(survival_at(X, 1.0) - math.exp(-1.0)) < 1e-15
        X_d = build(dist.deductible(1.0, dist.exponential(1.0)))
        assert abs(survival_at(X_d, 0.0) - math.exp(-1.0)) < 1e-15

    def test_negative_arguments(self, catalog):
        for model in catalog.values():
            assert survival_at(model, -0.5) == 1.0

    def test_monotone_and_bounded(self, catalog):
        for model in catalog.values():
            hi = model.support_upper if math.isfinite(model.support_upper) else 8.0
            prev = 1.0
            for k in range(200):
                t = hi * k / 199.0
                value = survival_at(model, t)
                assert 0.0 <= value <= 1.0, model.label
                assert value <= prev + 1e-12, model.label
                prev = value


def test_support_interval(catalog):
    assert support_interval(catalog["uniform01"]) == (0.0, 1.0)
    assert support_interval(catalog["exp1"]) == (0.0, math.inf)
    assert support_interval(catalog["deductible"]) == (0.0, math.inf)
    assert support_interval(build(dist.deductible(0.5, dist.uniform(0.0, 1.0)))) \
        == (0.0, 0.5)


def test_zero_inflated_partial_identity(catalog):
    # the atom at zero contributes nothing above t = 0
    zi = catalog["zero_inflated"]
    inner = catalog["exp1"]
    for t in (0.1, 1.0, 2.5):
        for s in (0.5, 1.0, 2.0):
            assert rel_diff(upper_partial_moment(zi, t, s),
                            0.7 * upper_partial_moment(inner, t, s)) < 1e-12


def test_quantile():
    X = build(dist.exponential(1.0))
    assert abs(quantile(X, 1.0 - math.exp(-1.0)) - 1.0) < 1e-9
    U = build(dist.uniform(0.0, 1.0))
    assert abs(quantile(U, 0.25) - 0.25) < 1e-9


def test_numeric_moments_near_exponential(catalog):
    # the knot table samples Exp(1); chords of a convex survival overshoot
    # slightly, so the piecewise-linear moments land close but above
    X = catalog["numeric"]
    assert 1.0 < fractional_moment(X, 1.0) < 1.05
    assert rel_diff(upper_partial_moment(X, 0.5, 1.0), math.exp(-0.5)) < 0.05
