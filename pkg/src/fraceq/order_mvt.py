"""Survival bounded order, the mean-value variable Z_alpha, and the MVT.

Z_alpha carries the normalized difference of the two upper-partial-moment
transforms of an ordered pair (X, Y).  Its density is defined even when
the order fails (it may then go negative), so the order criterion itself
stays testable; models built with verification keep a ``verified`` flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distributions import (DistributionModel, fractional_moment, quantile,
                            upper_partial_moment)
from .equilibrium import eq_density, equilibrium_view
from .errors import (DivergenceError, InvalidParameterError,
                     OrderViolationError)
from .fracops import (PowerSum, power_expectation, power_mean,
                      power_rl_derivative)
from .numerics import (DEFAULT_CONFIG, QuadratureConfig, beta, gamma,
                       integrate_interval, weighted_increment_integral)

__all__ = [
    "OrderCheckResult",
    "ZAlphaModel",
    "alpha_survival_transform",
    "alpha_cdf_transform",
    "default_order_grid",
    "check_survival_bounded_order",
    "z_alpha_model",
    "z_density",
    "z_mixture_identity",
    "z_moment",
    "normalized_moment",
    "fractional_variance",
    "MeanLocationReport",
    "classify_mean_location",
    "MvtReport",
    "mvt_verify",
    "expected_derivative_at_z",
]

_ORDER_SLACK = 1e-10
_C0_TOL = 1e-12


def alpha_survival_transform(X: DistributionModel, alpha: float, t: float,
                             cfg: QuadratureConfig | None = None) -> float:
    """E[(X - t)_+^(alpha - 1)] / Gamma(alpha) for t below the support top, else 0."""
    if alpha <= 0.0:
        raise InvalidParameterError(f"alpha must be > 0, got {alpha}")
    if t >= X.support_upper:
        return 0.0
    return upper_partial_moment(X, t, alpha - 1.0, cfg) / gamma(alpha)


def alpha_cdf_transform(X: DistributionModel, alpha: float, t: float,
                        cfg: QuadratureConfig | None = None) -> float:
    """E[(t - X)_+^(alpha - 1)] / Gamma(alpha) for t > 0, else 0.

    The lower companion of alpha_survival_transform: the alpha-bounded
    dominance order ranks by pointwise comparison of these transforms.
    Only the transform is provided here; the ordering machinery runs on
    the survival side.  Atoms are handled exactly through the layer-cake
    identity (mass at t itself contributes nothing).
    """
    cfg = cfg or DEFAULT_CONFIG
    if alpha <= 0.0:
        raise InvalidParameterError(f"alpha must be > 0, got {alpha}")
    if t <= 0.0:
        return 0.0
    s = alpha - 1.0
    cdf_left = 1.0 - X.survival(t) - X.atom_mass_at(t)  # P(X < t)
    if s == 0.0:
        return cdf_left
    if s > 0.0:
        # E[(t-X)_+^s] = s int_0^t v^(s-1) P(X < t-v) dv, u = v^s
        inv_s = 1.0 / s

        def head(u: float) -> float:
            v = u ** inv_s
            return 1.0 - X.survival(t - v)

        res = integrate_interval(head, 0.0, t ** s, cfg)
        return res.require(f"E[(t-X)_+^{s:g}]") / gamma(alpha)
    # s in (-1, 0): peel off the tail of the layer-cake integral, leaving
    # -s int_0^t v^(s-1) [P(X < t) - P(X <= t-v)] dv + P(X < t) t^s
    head = weighted_increment_integral(
        lambda v: cdf_left - (1.0 - X.survival(t - v)), s + 1.0, t, cfg)
    return (-s * head + cdf_left * t ** s) / gamma(alpha)


@dataclass(frozen=True)
class OrderCheckResult:
    """Worst violation of the survival bounded order over a grid."""

    holds: bool
    worst_t: float
    worst_gap: float  # max of Fbar_X^(a) - Fbar_Y^(a); positive means violation


def default_order_grid(X: DistributionModel, Y: DistributionModel,
                       size: int = 64) -> list[float]:
    """0 plus log-spaced points up to the top of supp{X, Y}."""
    if size < 8:
        raise InvalidParameterError(f"order grid needs at least 8 points, got {size}")
    upper = max(X.support_upper, Y.support_upper)
    if not math.isfinite(upper):
        upper = 2.0 * max(quantile(X, 0.999), quantile(Y, 0.999))
    pts = np.geomspace(upper * 1e-7, upper, size - 1)
    return [0.0] + [float(t) for t in pts]


def check_survival_bounded_order(X: DistributionModel, Y: DistributionModel,
                                 alpha: float,
                                 grid: Sequence[float] | None = None,
                                 cfg: QuadratureConfig | None = None) -> OrderCheckResult:
    """Does X dominate Y in the survival bounded order of level alpha?

    Holds iff the alpha-transform of X stays below that of Y on the grid,
    up to numerical slack.
    """
    if grid is None:
        grid = default_order_grid(X, Y)
    worst_t = float(grid[0])
    worst_gap = -math.inf
    for t in grid:
        gap = (alpha_survival_transform(X, alpha, float(t), cfg)
               - alpha_survival_transform(Y, alpha, float(t), cfg))
        if gap > worst_gap:
            worst_gap = gap
            worst_t = float(t)
    return OrderCheckResult(worst_gap <= _ORDER_SLACK, worst_t, worst_gap)


@dataclass(frozen=True)
class ZAlphaModel:
    """The mean-value variable built from the ordered pair (X, Y)."""

    x: DistributionModel
    y: DistributionModel
    alpha: float
    denom: float  # E[Y^alpha] - E[X^alpha]
    mix_c: float  # E[Y^alpha] / denom
    verified: bool


def z_alpha_model(X: DistributionModel, Y: DistributionModel, alpha: float,
                  cfg: QuadratureConfig | None = None,
                  require_order: bool = True,
                  grid: Sequence[float] | None = None) -> ZAlphaModel:
    """Build Z_alpha; with require_order the survival bounded order is checked.

    Pass require_order=False to waive the check (the density may then go
    negative; the result carries verified=False).
    """
    if alpha <= 0.0:
        raise InvalidParameterError(f"alpha must be > 0, got {alpha}")
    ex = fractional_moment(X, alpha, cfg)
    ey = fractional_moment(Y, alpha, cfg)
    denom = ey - ex
    if denom <= 0.0:
        raise InvalidParameterError(
            f"E[Y^a] - E[X^a] must be positive, got {denom:.6g}")
    verified = False
    if require_order:
        check = check_survival_bounded_order(X, Y, alpha, grid, cfg)
        if not check.holds:
            raise OrderViolationError(
                f"survival bounded order fails at t={check.worst_t:.6g} "
                f"(gap {check.worst_gap:.3g})", check.worst_t, check.worst_gap)
        verified = True
    return ZAlphaModel(X, Y, alpha, denom, ey / denom, verified)


def z_density(z: ZAlphaModel, t: float,
              cfg: QuadratureConfig | None = None) -> float:
    """alpha (E[(Y-t)_+^(a-1)] - E[(X-t)_+^(a-1)]) / (E[Y^a] - E[X^a])."""
    if t < 0.0:
        return 0.0
    a = z.alpha
    py = upper_partial_moment(z.y, t, a - 1.0, cfg) if t < z.y.support_upper else 0.0
    px = upper_partial_moment(z.x, t, a - 1.0, cfg) if t < z.x.support_upper else 0.0
    return a * (py - px) / z.denom


def z_mixture_identity(z: ZAlphaModel, t: float,
                       cfg: QuadratureConfig | None = None) -> tuple[float, float]:
    """(direct density, generalized mixture c f_Y1 + (1-c) f_X1) at t."""
    lhs = z_density(z, t, cfg)
    fy = eq_density(equilibrium_view(z.y, z.alpha, 1, cfg), t, cfg)
    fx = eq_density(equilibrium_view(z.x, z.alpha, 1, cfg), t, cfg)
    rhs = z.mix_c * fy + (1.0 - z.mix_c) * fx
    return lhs, rhs


def z_moment(z: ZAlphaModel, r: float,
             cfg: QuadratureConfig | None = None) -> float:
    """E[Z_a^r] = a B(a, r+1) (E[Y^(a+r)] - E[X^(a+r)]) / (E[Y^a] - E[X^a])."""
    if r <= 0.0:
        raise InvalidParameterError(f"moment order must be > 0, got {r}")
    a = z.alpha
    diff = fractional_moment(z.y, a + r, cfg) - fractional_moment(z.x, a + r, cfg)
    return a * beta(a, r + 1.0) * diff / z.denom


def normalized_moment(X: DistributionModel, alpha: float,
                      cfg: QuadratureConfig | None = None) -> float:
    """E[X^alpha] / Gamma(alpha + 1)."""
    if alpha <= 0.0:
        raise InvalidParameterError(f"alpha must be > 0, got {alpha}")
    return fractional_moment(X, alpha, cfg) / gamma(alpha + 1.0)


def fractional_variance(X: DistributionModel, alpha: float,
                        cfg: QuadratureConfig | None = None) -> float:
    """E[X^(alpha+1)] - alpha * E[X^alpha]^2; the variance at alpha = 1."""
    if alpha <= 0.0:
        raise InvalidParameterError(f"alpha must be > 0, got {alpha}")
    m1 = fractional_moment(X, alpha, cfg)
    m2 = fractional_moment(X, alpha + 1.0, cfg)
    return m2 - alpha * m1 * m1


@dataclass(frozen=True)
class MeanLocationReport:
    """Where E[Z_alpha] sits relative to E[X^alpha] and E[Y^alpha]."""

    case: str  # below_X | between | above_Y
    e_z: float
    e_x_alpha: float
    e_y_alpha: float
    threshold_low: float  # V gap at the E[Z] = E[X^a] boundary
    threshold_high: float  # V gap at the E[Z] = E[Y^a] boundary
    variance_gap: float  # V_a(Y) - V_a(X)
    identity_residual: float
    balanced_mean_residual: float  # |E[Z] - 2a/(a+1) * (E[X^a]+E[Y^a])/2|
    balanced_variance_residual: float  # |V_a(Y) - V_a(X)|


def classify_mean_location(z: ZAlphaModel,
                           cfg: QuadratureConfig | None = None) -> MeanLocationReport:
    """Classify E[Z_alpha] through the fractional-variance inequalities.

    Also evaluates the identity behind the classification,
    (E[Z]-E[X^a])/(E[Y^a]-E[X^a]) =
        {(a E[Y^a]-E[X^a])/(E[Y^a]-E[X^a]) + (V_a(Y)-V_a(X))/(E[Y^a]-E[X^a])^2}/(a+1),
    and both residuals of the balanced case E[Z] = 2a/(a+1) * mean iff
    the fractional variances agree.
    """
    a = z.alpha
    ex = fractional_moment(z.x, a, cfg)
    ey = fractional_moment(z.y, a, cfg)
    ez = z_moment(z, 1.0, cfg)
    delta = ey - ex
    v_gap = fractional_variance(z.y, a, cfg) - fractional_variance(z.x, a, cfg)
    lhs = (ez - ex) / delta
    rhs = ((a * ey - ex) / delta + v_gap / (delta * delta)) / (a + 1.0)
    thr_low = -delta * (a * ey - ex)
    thr_high = delta * (ey - a * ex)
    if ez <= ex:
        case = "below_X"
    elif ez >= ey:
        case = "above_Y"
    else:
        case = "between"
    balanced = 2.0 * a / (a + 1.0) * 0.5 * (ex + ey)
    return MeanLocationReport(
        case=case, e_z=ez, e_x_alpha=ex, e_y_alpha=ey,
        threshold_low=thr_low, threshold_high=thr_high,
        variance_gap=v_gap, identity_residual=lhs - rhs,
        balanced_mean_residual=abs(ez - balanced),
        balanced_variance_residual=abs(v_gap))


def extract_c0(g: PowerSum, alpha: float) -> float:
    """Gamma(alpha) times the coefficient of x^(alpha-1) in g.

    Any exponent strictly below alpha - 1 makes the defining limit
    diverge and is rejected.
    """
    target = alpha - 1.0
    for _, exp in g.terms:
        if exp < target - _C0_TOL:
            raise DivergenceError(
                f"limit x^(1-a) g(x) at 0+ diverges: exponent {exp:g} < {target:g}")
    return gamma(alpha) * g.coefficient_at(target, _C0_TOL)


def expected_derivative_at_z(g: PowerSum, z: ZAlphaModel, alpha: float,
                             cfg: QuadratureConfig | None = None) -> float:
    """E[D^alpha g(Z_alpha)] by quadrature of the exact derivative."""
    dg = power_rl_derivative(g, 1, alpha)
    if dg.is_zero:
        return 0.0
    value, _ = power_expectation(dg, lambda t: z_density(z, t, cfg), cfg,
                                 upper=max(z.x.support_upper, z.y.support_upper))
    return value


@dataclass(frozen=True)
class MvtReport:
    """Both sides of the fractional mean value identity."""

    lhs: float  # E[g(Y)] - E[g(X)]
    term_c0: float
    term_main: float
    residual: float
    c0: float
    z: ZAlphaModel

    @property
    def rhs(self) -> float:
        return self.term_c0 + self.term_main


def mvt_verify(g: PowerSum, X: DistributionModel, Y: DistributionModel,
               alpha: float, cfg: QuadratureConfig | None = None,
               require_order: bool = True,
               grid: Sequence[float] | None = None) -> MvtReport:
    """Check E[g(Y)] - E[g(X)] against the fractional mean value identity.

    The right side is c0/Gamma(a) {E[Y^(a-1)] - E[X^(a-1)]} plus
    {lambda_a(Y) - lambda_a(X)} E[D^a g(Z_a)], the derivative expectation
    integrated against the Z density by quadrature.
    """
    cfg = cfg or DEFAULT_CONFIG
    if g.terms and g.min_exponent() <= -1.0:
        raise DivergenceError(f"g has an exponent <= -1: {g.describe()}")
    c0 = extract_c0(g, alpha)
    z = z_alpha_model(X, Y, alpha, cfg, require_order=require_order, grid=grid)
    lhs = power_mean(g, Y, cfg) - power_mean(g, X, cfg)
    if c0 != 0.0:
        term_c0 = (c0 / gamma(alpha)
                   * (fractional_moment(Y, alpha - 1.0, cfg)
                      - fractional_moment(X, alpha - 1.0, cfg)))
    else:
        term_c0 = 0.0
    lam_gap = normalized_moment(Y, alpha, cfg) - normalized_moment(X, alpha, cfg)
    term_main = lam_gap * expected_derivative_at_z(g, z, alpha, cfg)
    return MvtReport(lhs, term_c0, term_main, lhs - term_c0 - term_main, c0, z)
