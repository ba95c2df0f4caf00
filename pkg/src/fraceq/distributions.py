"""Catalog of nonnegative random variables.

A model exposes exactly what the rest of the package consumes: the
survival function, fractional moments E[X^s], upper partial moments
E[(X-t)_+^s] and an explicit atom list.  Closed forms are attached where
they exist; everything else falls back to quadrature against the
survival function, so mixed distributions (atoms) need no special cases
downstream.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable

from .errors import DivergenceError, InvalidParameterError
from .numerics import (DEFAULT_CONFIG, QuadratureConfig,
                       integrate_semi_infinite, integrate_singular_power,
                       weighted_increment_integral)

__all__ = [
    "DistributionModel",
    "DistributionSpec",
    "exponential",
    "uniform",
    "weibull",
    "hyperexp2",
    "zero_inflated",
    "deductible",
    "numeric",
    "build",
    "fractional_moment",
    "upper_partial_moment",
    "survival_at",
    "support_interval",
    "quantile",
]


@dataclass(frozen=True)
class DistributionModel:
    """A nonnegative random variable, seen through its survival function.

    ``survival`` must be nonincreasing, right-continuous, and equal to 1
    for negative arguments.  ``atoms`` lists (location, mass) pairs of the
    discrete part.  ``support_upper`` is sup{x : F(x) < 1} (may be inf).
    """

    label: str
    survival: Callable[[float], float]
    atoms: tuple[tuple[float, float], ...] = ()
    support_upper: float = math.inf
    closed_form_moment: Callable[[float], float] | None = None
    closed_form_partial: Callable[[float, float], float] | None = None
    density_ac: Callable[[float], float] | None = None

    def atom_mass_at(self, loc: float, tol: float = 1e-12) -> float:
        return sum(m for x, m in self.atoms if abs(x - loc) <= tol)

    def __repr__(self) -> str:  # keep reports readable
        return f"DistributionModel({self.label})"


@dataclass(frozen=True)
class DistributionSpec:
    """Serializable description of a catalog member.

    JSON form: {"kind": ..., "params": {...}, "inner": {...}?}.
    """

    kind: str
    params: dict = field(default_factory=dict)
    inner: "DistributionSpec | None" = None

    def to_json(self) -> dict:
        obj: dict = {"kind": self.kind, "params": dict(self.params)}
        if self.inner is not None:
            obj["inner"] = self.inner.to_json()
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "DistributionSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InvalidParameterError("distribution spec needs a 'kind' field")
        inner = None
        if obj.get("inner") is not None:
            inner = cls.from_json(obj["inner"])
        return cls(kind=str(obj["kind"]), params=dict(obj.get("params", {})),
                   inner=inner)


def exponential(lam: float) -> DistributionSpec:
    return DistributionSpec("exponential", {"lambda": lam})


def uniform(a: float, b: float) -> DistributionSpec:
    return DistributionSpec("uniform", {"a": a, "b": b})


def weibull(k: float, lam: float) -> DistributionSpec:
    return DistributionSpec("weibull", {"k": k, "lambda": lam})


def hyperexp2(p: float, lam1: float, lam2: float) -> DistributionSpec:
    return DistributionSpec("hyperexp2", {"p": p, "lambda1": lam1, "lambda2": lam2})


def zero_inflated(p: float, inner: DistributionSpec) -> DistributionSpec:
    return DistributionSpec("zero_inflated", {"p": p}, inner=inner)


def deductible(d: float, inner: DistributionSpec) -> DistributionSpec:
    return DistributionSpec("deductible", {"d": d}, inner=inner)


def numeric(knots: list[tuple[float, float]]) -> DistributionSpec:
    return DistributionSpec("numeric", {"knots": [[float(t), float(s)] for t, s in knots]})


# ---------------------------------------------------------------------------
# builders

def _require(cond: bool, message: str) -> None:
    if not cond:
        raise InvalidParameterError(message)


def _build_exponential(lam: float) -> DistributionModel:
    _require(lam > 0, f"exponential: lambda must be > 0, got {lam}")
    log_lam = math.log(lam)

    def moment(s: float) -> float:
        if s <= -1.0:
            raise DivergenceError(f"E[X^{s}] diverges for exponential")
        return math.exp(math.lgamma(s + 1.0) - s * log_lam)

    def partial(t: float, s: float) -> float:
        return math.exp(math.lgamma(s + 1.0) - lam * t - s * log_lam)

    return DistributionModel(
        label=f"Exp(rate={lam:g})",
        survival=lambda t: 1.0 if t < 0.0 else math.exp(-lam * t),
        closed_form_moment=moment,
        closed_form_partial=partial,
        density_ac=lambda t: lam * math.exp(-lam * t) if t >= 0.0 else 0.0,
    )


def _build_uniform(a: float, b: float) -> DistributionModel:
    _require(0.0 <= a < b, f"uniform: need 0 <= a < b, got ({a}, {b})")
    width = b - a

    def survival(t: float) -> float:
        if t < a:
            return 1.0
        if t >= b:
            return 0.0
        return (b - t) / width

    def moment(s: float) -> float:
        if a == 0.0 and s <= -1.0:
            raise DivergenceError(f"E[X^{s}] diverges for uniform on [0, b]")
        return (b ** (s + 1.0) - a ** (s + 1.0)) / ((s + 1.0) * width)

    def partial(t: float, s: float) -> float:
        if t >= b:
            return 0.0
        lo = max(a, t)
        return ((b - t) ** (s + 1.0) - (lo - t) ** (s + 1.0)) / ((s + 1.0) * width)

    return DistributionModel(
        label=f"Uniform({a:g},{b:g})",
        survival=survival,
        support_upper=b,
        closed_form_moment=moment,
        closed_form_partial=partial,
        density_ac=lambda t: 1.0 / width if a <= t <= b else 0.0,
    )


def _build_weibull(k: float, lam: float) -> DistributionModel:
    _require(k > 0 and lam > 0, f"weibull: shape and scale must be > 0, got ({k}, {lam})")

    def survival(t: float) -> float:
        if t < 0.0:
            return 1.0
        return math.exp(-((t / lam) ** k))

    def moment(s: float) -> float:
        if s <= -k:
            raise DivergenceError(f"E[X^{s}] diverges for weibull with shape {k}")
        return lam ** s * math.gamma(1.0 + s / k)

    def density(t: float) -> float:
        if t < 0.0:
            return 0.0
        if t == 0.0:
            return 0.0 if k > 1.0 else (1.0 / lam if k == 1.0 else math.inf)
        z = t / lam
        return (k / lam) * z ** (k - 1.0) * math.exp(-(z ** k))

    return DistributionModel(
        label=f"Weibull(k={k:g},scale={lam:g})",
        survival=survival,
        closed_form_moment=moment,
        density_ac=density,
    )


def _build_hyperexp2(p: float, lam1: float, lam2: float) -> DistributionModel:
    _require(0.0 < p < 1.0, f"hyperexp2: p must lie in (0,1), got {p}")
    _require(lam1 > 0 and lam2 > 0, "hyperexp2: rates must be > 0")
    q = 1.0 - p

    def survival(t: float) -> float:
        if t < 0.0:
            return 1.0
        return p * math.exp(-lam1 * t) + q * math.exp(-lam2 * t)

    def moment(s: float) -> float:
        if s <= -1.0:
            raise DivergenceError(f"E[X^{s}] diverges for hyperexp2")
        g = math.gamma(s + 1.0)
        return g * (p * lam1 ** -s + q * lam2 ** -s)

    def partial(t: float, s: float) -> float:
        g = math.gamma(s + 1.0)
        return g * (p * math.exp(-lam1 * t) * lam1 ** -s
                    + q * math.exp(-lam2 * t) * lam2 ** -s)

    return DistributionModel(
        label=f"HyperExp2(p={p:g},{lam1:g},{lam2:g})",
        survival=survival,
        closed_form_moment=moment,
        closed_form_partial=partial,
        density_ac=lambda t: (p * lam1 * math.exp(-lam1 * t)
                              + q * lam2 * math.exp(-lam2 * t)) if t >= 0.0 else 0.0,
    )


def _build_zero_inflated(p: float, inner: DistributionModel) -> DistributionModel:
    _require(0.0 < p < 1.0, f"zero_inflated: p must lie in (0,1), got {p}")
    q = 1.0 - p
    atoms = [(0.0, p + q * inner.atom_mass_at(0.0))]
    atoms += [(loc, q * m) for loc, m in inner.atoms if loc > 0.0]

    inner_moment = inner.closed_form_moment
    inner_partial = inner.closed_form_partial
    inner_density = inner.density_ac

    def survival(t: float) -> float:
        if t < 0.0:
            return 1.0
        return q * inner.survival(t)

    moment = (lambda s: q * inner_moment(s)) if inner_moment else None
    partial = (lambda t, s: q * inner_partial(t, s)) if inner_partial else None
    density = (lambda t: q * inner_density(t)) if inner_density else None

    return DistributionModel(
        label=f"ZeroInflated(p={p:g})[{inner.label}]",
        survival=survival,
        atoms=tuple(atoms),
        support_upper=inner.support_upper,
        closed_form_moment=moment,
        closed_form_partial=partial,
        density_ac=density,
    )


def _build_deductible(d: float, inner: DistributionModel) -> DistributionModel:
    _require(d > 0, f"deductible: d must be > 0, got {d}")
    _require(d < inner.support_upper,
             f"deductible: d={d} not below the support upper bound {inner.support_upper}")
    atom0 = 1.0 - inner.survival(d)
    atoms = [(0.0, atom0)] if atom0 > 0.0 else []
    atoms += [(loc - d, m) for loc, m in inner.atoms if loc > d]

    inner_partial = inner.closed_form_partial
    inner_density = inner.density_ac

    def survival(t: float) -> float:
        if t < 0.0:
            return 1.0
        return inner.survival(d + t)

    # (X_d - t)_+ = (X - (d + t))_+ : moments delegate to the inner partials.
    moment = (lambda s: inner_partial(d, s)) if inner_partial else None
    partial = (lambda t, s: inner_partial(d + t, s)) if inner_partial else None
    density = (lambda t: inner_density(d + t) if t >= 0.0 else 0.0) if inner_density else None

    upper = inner.support_upper - d if math.isfinite(inner.support_upper) else math.inf
    return DistributionModel(
        label=f"Deductible(d={d:g})[{inner.label}]",
        survival=survival,
        atoms=tuple(atoms),
        support_upper=upper,
        closed_form_moment=moment,
        closed_form_partial=partial,
        density_ac=density,
    )


def _build_numeric(knots: list) -> DistributionModel:
    _require(len(knots) >= 2, "numeric: need at least two knots")
    ts = [float(t) for t, _ in knots]
    ss = [float(s) for _, s in knots]
    _require(all(ts[i] < ts[i + 1] for i in range(len(ts) - 1)),
             "numeric: knot abscissae must be strictly increasing")
    _require(all(0.0 <= s <= 1.0 for s in ss), "numeric: survival values must lie in [0,1]")
    _require(all(ss[i] >= ss[i + 1] for i in range(len(ss) - 1)),
             "numeric: survival values must be nonincreasing")
    _require(ts[0] >= 0.0, "numeric: knots must be nonnegative")
    if ts[0] > 0.0:
        ts = [0.0] + ts
        ss = [1.0] + ss

    t_last, s_last = ts[-1], ss[-1]
    atoms = [(0.0, 1.0 - ss[0])] if ss[0] < 1.0 else []

    if s_last == 0.0:
        upper = ts[next(i for i, s in enumerate(ss) if s == 0.0)]
        decay = 1.0
    else:
        upper = math.inf
        # exponential tail fitted to the last two knots
        if len(ss) >= 2 and ss[-2] > s_last > 0.0:
            decay = math.log(ss[-2] / s_last) / (ts[-1] - ts[-2])
        else:
            decay = 1.0

    def survival(t: float) -> float:
        if t < 0.0:
            return 1.0
        if t <= t_last:
            i = bisect_right(ts, t)
            if i >= len(ts):
                return s_last
            lo_t, hi_t = ts[i - 1], ts[i]
            lo_s, hi_s = ss[i - 1], ss[i]
            return lo_s + (hi_s - lo_s) * (t - lo_t) / (hi_t - lo_t)
        if s_last == 0.0:
            return 0.0
        return s_last * math.exp(-decay * (t - t_last))

    return DistributionModel(
        label=f"Numeric({len(ts)} knots)",
        survival=survival,
        atoms=tuple(atoms),
        support_upper=upper,
    )


_BUILDERS = {
    "exponential": lambda spec: _build_exponential(spec.params["lambda"]),
    "uniform": lambda spec: _build_uniform(spec.params["a"], spec.params["b"]),
    "weibull": lambda spec: _build_weibull(spec.params["k"], spec.params["lambda"]),
    "hyperexp2": lambda spec: _build_hyperexp2(
        spec.params["p"], spec.params["lambda1"], spec.params["lambda2"]),
}


def build(spec: DistributionSpec) -> DistributionModel:
    """Instantiate the model described by ``spec``."""
    try:
        if spec.kind in _BUILDERS:
            return _BUILDERS[spec.kind](spec)
        if spec.kind == "zero_inflated":
            _require(spec.inner is not None, "zero_inflated: missing inner spec")
            return _build_zero_inflated(spec.params["p"], build(spec.inner))
        if spec.kind == "deductible":
            _require(spec.inner is not None, "deductible: missing inner spec")
            return _build_deductible(spec.params["d"], build(spec.inner))
        if spec.kind == "numeric":
            return _build_numeric(spec.params["knots"])
    except KeyError as exc:
        raise InvalidParameterError(f"{spec.kind}: missing parameter {exc}") from exc
    raise InvalidParameterError(f"unknown distribution kind '{spec.kind}'")


# ---------------------------------------------------------------------------
# moments

def survival_at(X: DistributionModel, t: float) -> float:
    """P(X > t); equals 1 for negative t."""
    if t < 0.0:
        return 1.0
    return X.survival(t)


def support_interval(X: DistributionModel) -> tuple[float, float]:
    """Smallest interval containing 0 and the support of X."""
    return (0.0, X.support_upper)


def _partial_by_quadrature(X: DistributionModel, t: float, s: float,
                           cfg: QuadratureConfig) -> float:
    """E[(X-t)_+^s] from the survival function alone.

    s > 0 uses the layer-cake identity s * int_t^inf (x-t)^(s-1) Fbar(x) dx,
    valid for mixed distributions.  s in (-1, 0) uses
    |s| * int_0^inf u^(s-1) [Fbar(t) - Fbar(t+u)] du, split at u = 1 so
    the tail integrand decays with the survival function rather than like
    a power; the cancellation-prone head goes through
    weighted_increment_integral.
    """
    b = X.support_upper
    if s > 0.0:
        res = integrate_singular_power(X.survival, t, s, cfg, upper=b)
        return s * res.require(f"E[(X-t)_+^{s:g}] for {X.label}")
    sb_t = X.survival(t)

    head = weighted_increment_integral(lambda u: sb_t - X.survival(t + u),
                                       s + 1.0, 1.0, cfg)
    tail_upper = b - t if math.isfinite(b) else None
    tail_res = integrate_semi_infinite(lambda u: u ** (s - 1.0) * X.survival(t + u),
                                       1.0, cfg, upper=tail_upper)
    if not tail_res.converged:
        raise DivergenceError(f"E[(X-t)_+^{s:g}] quadrature failed for {X.label}")
    return -s * head + sb_t + s * tail_res.value


def upper_partial_moment(X: DistributionModel, t: float, s: float,
                         cfg: QuadratureConfig | None = None) -> float:
    """E[(X - t)_+^s] with the convention (x)_+^s = x^s * 1{x > 0}.

    Atoms located at or below t therefore contribute nothing; for
    s in (-1, 0) an atom strictly above t makes the expectation diverge
    along the t-path and is rejected.
    """
    cfg = cfg or DEFAULT_CONFIG
    if t < 0.0:
        raise InvalidParameterError(f"upper partial moment requires t >= 0, got {t}")
    if s <= -1.0:
        raise DivergenceError(f"E[(X-t)_+^{s:g}] diverges (exponent <= -1)")
    if s == 0.0:
        return survival_at(X, t)
    if s < 0.0:
        blocking = [loc for loc, m in X.atoms if loc > t + 1e-12 and m > 0.0]
        if blocking:
            raise DivergenceError(
                f"E[(X-t)_+^{s:g}] rejected: atom above t={t:g} at {blocking[0]:g}")
    if X.closed_form_partial is not None:
        return X.closed_form_partial(t, s)
    return _partial_by_quadrature(X, t, s, cfg)


def fractional_moment(X: DistributionModel, s: float,
                      cfg: QuadratureConfig | None = None) -> float:
    """E[X^s].  E[X^0] is 1 exactly (0^0 = 1 convention)."""
    cfg = cfg or DEFAULT_CONFIG
    if s == 0.0:
        return 1.0
    if s <= -1.0:
        raise DivergenceError(f"E[X^{s:g}] diverges (exponent <= -1)")
    if s < 0.0 and X.atom_mass_at(0.0) > 0.0:
        raise DivergenceError(f"E[X^{s:g}] diverges: {X.label} has an atom at 0")
    if X.closed_form_moment is not None:
        return X.closed_form_moment(s)
    return _partial_by_quadrature(X, 0.0, s, cfg)


def quantile(X: DistributionModel, q: float) -> float:
    """Smallest t with F(t) >= q, by bisection on the survival function."""
    _require(0.0 < q < 1.0, f"quantile level must lie in (0,1), got {q}")
    target = 1.0 - q
    if survival_at(X, 0.0) <= target:
        return 0.0
    if math.isfinite(X.support_upper):
        hi = X.support_upper
    else:
        hi = 1.0
        while X.survival(hi) > target:
            hi *= 2.0
            if hi > 1e12:
                raise DivergenceError(f"quantile({q}) not reached below 1e12 for {X.label}")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if X.survival(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
