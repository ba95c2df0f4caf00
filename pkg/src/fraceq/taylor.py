"""Fractional probabilistic Taylor expansions about 0.

Series coefficients come from the exact PowerSum derivative rules; the
remainder is the expectation of the (n+1)-fold sequential derivative
under the order-(n+1) fractional equilibrium variable, computed by
quadrature against its density (never by sampling).  Both the
Riemann-Liouville and the Caputo flavors are provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import DistributionModel, fractional_moment
from .equilibrium import eq_density_fn, eq_moment, equilibrium_view
from .errors import DivergenceError, InvalidParameterError
from .fracops import (PowerSum, power_caputo_derivative, power_expectation,
                      power_mean, power_rl_derivative)
from .numerics import DEFAULT_CONFIG, QuadratureConfig, gamma
from .order_mvt import extract_c0

__all__ = [
    "TaylorReport",
    "rl_taylor_coefficient",
    "rl_taylor_expectation",
    "fractional_moment_identity",
    "caputo_taylor_expectation",
]


@dataclass(frozen=True)
class TaylorReport:
    """E[g(X)] against its series terms and equilibrium remainder."""

    lhs: float
    terms: tuple[float, ...]
    remainder: float
    residual: float
    meta: dict

    @property
    def rhs(self) -> float:
        return math.fsum(self.terms) + self.remainder

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "terms": list(self.terms),
                "remainder": self.remainder, "residual": self.residual,
                "meta": dict(self.meta)}


def rl_taylor_coefficient(g: PowerSum, j: int, alpha: float) -> float:
    """c_j = Gamma(alpha) [x^(1-alpha) D^(j alpha) g(x)] at 0+.

    Exact coefficient lookup of the x^(alpha-1) term of the j-fold
    sequential derivative; an exponent below alpha - 1 means the limit
    diverges.
    """
    return extract_c0(power_rl_derivative(g, j, alpha), alpha)


def _validate_input(g: PowerSum, alpha: float, n: int) -> None:
    if not (0.0 < alpha <= 1.0):
        raise InvalidParameterError(f"alpha must lie in (0, 1], got {alpha}")
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}")
    if g.terms and g.min_exponent() <= -1.0:
        raise DivergenceError(f"g has an exponent <= -1: {g.describe()}")


def _remainder(h: PowerSum, X: DistributionModel, alpha: float, n: int,
               cfg: QuadratureConfig | None) -> float:
    """E[X^((n+1)a)] / Gamma((n+1)a + 1) * E[h(X_a^(n+1))] by quadrature.

    The integrals also certify E[|h(X_a^(n+1))|] < inf (term-by-term
    triangle bound); a violated hypothesis surfaces as DivergenceError
    rather than a silently wrong residual.
    """
    if h.is_zero:
        return 0.0
    top = (n + 1) * alpha
    if h.min_exponent() <= -1.0:
        raise DivergenceError(
            f"remainder hypothesis fails: D^({n + 1}a) g has exponent "
            f"{h.min_exponent():g} <= -1")
    view = equilibrium_view(X, alpha, n + 1, cfg)
    value, bound = power_expectation(h, eq_density_fn(view, cfg), cfg,
                                     upper=X.support_upper)
    if not math.isfinite(bound):
        raise DivergenceError("remainder hypothesis fails: E|h| is not finite")
    return fractional_moment(X, top, cfg) / gamma(top + 1.0) * value


def rl_taylor_expectation(g: PowerSum, X: DistributionModel, alpha: float,
                          n: int, cfg: QuadratureConfig | None = None) -> TaylorReport:
    """Expand E[g(X)] to order n with Riemann-Liouville coefficients.

    Terms are c_j / Gamma((j+1)a) * E[X^((j+1)a - 1)] for j = 0..n; the
    remainder expectation runs over the order-(n+1) equilibrium variable.
    """
    cfg = cfg or DEFAULT_CONFIG
    _validate_input(g, alpha, n)
    lhs = power_mean(g, X, cfg)
    terms = []
    for j in range(n + 1):
        cj = rl_taylor_coefficient(g, j, alpha)
        if cj == 0.0:
            terms.append(0.0)
            continue
        terms.append(cj / gamma((j + 1) * alpha)
                     * fractional_moment(X, (j + 1) * alpha - 1.0, cfg))
    remainder = _remainder(power_rl_derivative(g, n + 1, alpha), X, alpha, n, cfg)
    total = math.fsum(terms) + remainder
    return TaylorReport(lhs, tuple(terms), remainder, lhs - total,
                        {"flavor": "riemann-liouville", "alpha": alpha, "n": n,
                         "g": g.describe(), "distribution": X.label})


def fractional_moment_identity(beta_exp: float, X: DistributionModel,
                               alpha: float, n: int,
                               cfg: QuadratureConfig | None = None) -> tuple[float, float]:
    """(E[X^beta], its series-free expansion through the equilibrium moment).

    Valid for beta >= alpha and n <= (beta - alpha)/alpha, where every
    series coefficient vanishes and only the remainder survives.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not (0.0 < alpha <= 1.0):
        raise InvalidParameterError(f"alpha must lie in (0, 1], got {alpha}")
    if beta_exp < alpha:
        raise InvalidParameterError(f"need beta >= alpha, got {beta_exp} < {alpha}")
    if n > (beta_exp - alpha) / alpha + 1e-12:
        raise InvalidParameterError(
            f"need n <= (beta - alpha)/alpha = {(beta_exp - alpha) / alpha:g}, got {n}")
    top = (n + 1) * alpha
    lhs = fractional_moment(X, beta_exp, cfg)
    view = equilibrium_view(X, alpha, n + 1, cfg)
    residual_exp = beta_exp - top
    if residual_exp > 1e-12:
        eq_part = eq_moment(view, residual_exp)
    elif residual_exp >= -1e-12:
        eq_part = 1.0
    else:
        value, _ = power_expectation(PowerSum.power(residual_exp),
                                     eq_density_fn(view, cfg), cfg,
                                     upper=X.support_upper)
        eq_part = value
    rhs = (fractional_moment(X, top, cfg) / gamma(top + 1.0)
           * gamma(1.0 + beta_exp) / gamma(1.0 - top + beta_exp)
           * eq_part)
    return lhs, rhs


def caputo_taylor_expectation(g: PowerSum, X: DistributionModel, alpha: float,
                              n: int, cfg: QuadratureConfig | None = None) -> TaylorReport:
    """Expand E[g(X)] with sequential Caputo derivatives.

    Series term i is the value at 0 of the i-fold derivative (the
    constant coefficient of its power sum) times E[X^(i a)] / Gamma(i a + 1);
    constants are annihilated, so polynomials terminate exactly.
    """
    cfg = cfg or DEFAULT_CONFIG
    _validate_input(g, alpha, n)
    if g.terms and g.min_exponent() < -1e-12:
        raise InvalidParameterError(
            f"Caputo expansion needs nonnegative exponents, got {g.describe()}")
    lhs = power_mean(g, X, cfg)
    terms = []
    for i in range(n + 1):
        di = power_caputo_derivative(g, i, alpha)
        at_zero = di.coefficient_at(0.0)
        if di.terms and di.min_exponent() < -1e-12:
            raise DivergenceError(
                f"Caputo derivative of order {i}a is singular at 0: {di.describe()}")
        if at_zero == 0.0:
            terms.append(0.0)
            continue
        terms.append(at_zero / gamma(i * alpha + 1.0)
                     * fractional_moment(X, i * alpha, cfg))
    remainder = _remainder(power_caputo_derivative(g, n + 1, alpha), X, alpha, n, cfg)
    total = math.fsum(terms) + remainder
    return TaylorReport(lhs, tuple(terms), remainder, lhs - total,
                        {"flavor": "caputo", "alpha": alpha, "n": n,
                         "g": g.describe(), "distribution": X.label})
