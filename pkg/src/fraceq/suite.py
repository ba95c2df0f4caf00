"""Verification campaigns: every identity checked two independent ways.

Each criterion function returns CheckOutcome rows; ``run_all`` drives the
whole battery.  The CLI 'suite' command and the acceptance test module
both consume these, so the gate is defined exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import actuarial, distributions, equilibrium, fracops, order_mvt, taylor
from .distributions import build, exponential, hyperexp2, uniform, weibull, zero_inflated
from .errors import DivergenceError
from .fracops import PowerSum
from .numerics import DEFAULT_CONFIG, gamma, integrate_semi_infinite

__all__ = ["CheckOutcome", "run_all", "CRITERIA"]


@dataclass(frozen=True)
class CheckOutcome:
    check: str
    params: dict
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    passed: bool

    def to_json(self) -> dict:
        return {"check": self.check, "params": _jsonable(self.params),
                "lhs": self.lhs, "rhs": self.rhs, "residual": self.residual,
                "tolerance": self.tolerance, "pass": self.passed}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return str(obj)


def _outcome(check: str, params: dict, residual: float, tol: float,
             lhs: float = 0.0, rhs: float = 0.0) -> CheckOutcome:
    return CheckOutcome(check, params, lhs, rhs, residual, tol,
                        abs(residual) <= tol)


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b), 1e-30)
    return abs(a - b) / scale


def _exp_mean(mu: float):
    """Exponential with the given mean."""
    return build(exponential(1.0 / mu))


_NUMERIC_KNOTS = [(0.0, 1.0), (0.25, math.exp(-0.25)), (0.5, math.exp(-0.5)),
                  (1.0, math.exp(-1.0)), (1.5, math.exp(-1.5)),
                  (2.0, math.exp(-2.0)), (3.0, math.exp(-3.0)),
                  (4.0, math.exp(-4.0))]


def _catalog() -> list[distributions.DistributionModel]:
    return [
        build(exponential(1.0)),
        build(uniform(0.0, 1.0)),
        build(weibull(2.0, 1.0)),
        build(hyperexp2(0.4, 1.0, 3.0)),
        build(zero_inflated(0.3, exponential(1.0))),
        build(distributions.deductible(1.0, exponential(1.0))),
        build(distributions.numeric(_NUMERIC_KNOTS)),
    ]


# ---------------------------------------------------------------------------
# criteria

def criterion_1_exponential_fixed_point() -> list[CheckOutcome]:
    """f_n^alpha of an exponential is the exponential density itself."""
    rows = []
    tol = 1e-7
    for lam in (0.5, 1.0, 3.0):
        X = build(exponential(lam))
        worst = 0.0
        for alpha in (0.3, 0.5, 0.9, 1.0):
            for n in (1, 2, 3):
                view = equilibrium.equilibrium_view(X, alpha, n)
                for t in np.linspace(0.0, 8.0 / lam, 30):
                    gap = abs(equilibrium.eq_density(view, float(t))
                              - lam * math.exp(-lam * float(t)))
                    worst = max(worst, gap)
        rows.append(_outcome("exponential_fixed_point", {"lambda": lam},
                             worst, tol))
    return rows


def criterion_2_characterization_negative() -> list[CheckOutcome]:
    """Non-exponential inputs must be detected as non-fixed-points."""
    rows = []
    for spec, label in ((weibull(2.0, 1.0), "weibull(2,1)"),
                        (uniform(0.0, 1.0), "uniform(0,1)")):
        report = equilibrium.characterization_check(build(spec), [1.0], [1], tol=1e-6)
        rows.append(CheckOutcome(
            "characterization_negative",
            {"distribution": label, "is_fixed_point": report.is_fixed_point,
             "witness": report.witness},
            lhs=report.max_deviation, rhs=0.05, residual=report.max_deviation,
            tolerance=0.05,
            passed=(not report.is_fixed_point) and report.max_deviation >= 0.05))
    return rows


def criterion_3_semigroup() -> list[CheckOutcome]:
    """Nested Weyl integrals agree with the single integral of summed order."""
    rows = []
    tol = 1e-5
    cases = {"Exp(1)": (build(exponential(1.0)), np.linspace(0.0, 3.0, 10)),
             "Uniform(0,1)": (build(uniform(0.0, 1.0)), np.linspace(0.0, 0.9, 10))}
    for label, (X, grid) in cases.items():
        for a, b in ((0.5, 0.5), (0.3, 0.7), (1.0, 1.0)):
            inner = lambda x, _b=b: fracops.weyl_integral(X, _b, x)
            worst = 0.0
            for t in grid:
                nested = fracops.weyl_of_function(inner, a, float(t),
                                                   upper=X.support_upper)
                direct = fracops.weyl_integral(X, a + b, float(t))
                worst = max(worst, _rel(nested, direct))
            rows.append(_outcome("weyl_semigroup", {"distribution": label,
                                                    "orders": [a, b]}, worst, tol))
    return rows


def criterion_4_recursive_equilibrium() -> list[CheckOutcome]:
    """Direct partial-moment survival equals the literal recursion."""
    rows = []
    tol = 1e-5
    cases = {"Exp(1)": (build(exponential(1.0)), (0.0, 0.5, 1.0, 2.0, 3.0)),
             "Uniform(0,1)": (build(uniform(0.0, 1.0)), (0.0, 0.2, 0.5, 0.7, 0.9))}
    for label, (X, grid) in cases.items():
        for n in (1, 2):
            for alpha in (0.5, 1.0):
                view = equilibrium.equilibrium_view(X, alpha, n)
                order = fracops.FracOrder(alpha, n)
                worst = 0.0
                for t in grid:
                    direct = equilibrium.eq_survival(view, t)
                    oracle = equilibrium.eq_survival_recursive(X, order, t)
                    worst = max(worst, _rel(direct, oracle))
                rows.append(_outcome("equilibrium_direct_vs_recursive",
                                     {"distribution": label, "alpha": alpha, "n": n},
                                     worst, tol))
    return rows


def criterion_5_equilibrium_moments() -> list[CheckOutcome]:
    """Closed equilibrium moments against brute-force density integrals."""
    rows = []
    # the oracle only needs to beat the 1e-5 agreement target
    oracle_cfg = DEFAULT_CONFIG.scaled(10.0)
    for X in _catalog():
        for alpha, n in ((0.5, 1), (1.0, 1)):
            view = equilibrium.equilibrium_view(X, alpha, n)
            density = equilibrium.eq_density_fn(view, oracle_cfg)
            worst = 0.0
            for r in (0.5, 1.0, 2.0):
                closed = equilibrium.eq_moment(view, r)
                brute, _ = fracops.power_expectation(PowerSum.power(r), density,
                                                     oracle_cfg,
                                                     upper=X.support_upper)
                worst = max(worst, _rel(closed, brute))
            rows.append(_outcome("equilibrium_moment_vs_quadrature",
                                 {"distribution": X.label, "alpha": alpha, "n": n},
                                 worst, 1e-5))
    X = build(exponential(1.0))
    for r in (0.5, 1.0, 2.0):
        worst = 0.0
        for alpha, n in ((0.5, 1), (0.5, 3), (1.0, 2)):
            view = equilibrium.equilibrium_view(X, alpha, n)
            worst = max(worst, abs(equilibrium.eq_moment(view, r) - gamma(r + 1.0)))
        rows.append(_outcome("equilibrium_moment_exponential_gamma",
                             {"r": r}, worst, 1e-6))
    return rows


def _taylor_g_family(alpha: float) -> list[tuple[str, PowerSum]]:
    return [("x", PowerSum.power(1.0)),
            ("x^2", PowerSum.power(2.0)),
            ("x^0.5", PowerSum.power(0.5)),
            ("x^(a-1)+x^(2a)",
             PowerSum.from_terms([(1.0, alpha - 1.0), (1.0, 2.0 * alpha)]))]


def criterion_6_taylor() -> list[CheckOutcome]:
    """Taylor residuals over the admissible grid plus the moment corollary."""
    rows = []
    tol = 1e-5
    dists = {"Exp(1)": build(exponential(1.0)),
             "Uniform(0,1)": build(uniform(0.0, 1.0))}
    ran = 0
    for label, X in dists.items():
        for alpha in (0.5, 0.75, 1.0):
            for g_label, g in _taylor_g_family(alpha):
                for n in (0, 1, 2):
                    try:
                        report = taylor.rl_taylor_expectation(g, X, alpha, n)
                    except DivergenceError:
                        continue  # inadmissible combination
                    ran += 1
                    rows.append(_outcome(
                        "taylor_residual",
                        {"distribution": label, "g": g_label, "alpha": alpha, "n": n},
                        report.residual, tol))
    rows.append(CheckOutcome("taylor_grid_coverage", {"combinations": ran},
                             lhs=ran, rhs=40.0, residual=float(ran), tolerance=0.0,
                             passed=ran >= 40))
    corollary = [(1.0, build(exponential(1.0)), 0.5, 0, "Exp(1)"),
                 (2.0, build(exponential(1.0)), 1.0, 1, "Exp(1)"),
                 (1.5, build(uniform(0.0, 1.0)), 0.5, 1, "Uniform(0,1)"),
                 (1.5, build(uniform(0.0, 1.0)), 0.5, 2, "Uniform(0,1)")]
    for beta_exp, X, alpha, n, label in corollary:
        lhs, rhs = taylor.fractional_moment_identity(beta_exp, X, alpha, n)
        rows.append(CheckOutcome("fractional_moment_identity",
                                 {"beta": beta_exp, "alpha": alpha, "n": n,
                                  "distribution": label},
                                 lhs=lhs, rhs=rhs, residual=_rel(lhs, rhs),
                                 tolerance=1e-5, passed=_rel(lhs, rhs) <= 1e-5))
    lhs, rhs = taylor.fractional_moment_identity(1.0, build(exponential(1.0)), 0.5, 0)
    rows.append(CheckOutcome("gamma_cancellation_exact_one",
                             {"beta": 1.0, "alpha": 0.5, "n": 0},
                             lhs=lhs, rhs=rhs, residual=abs(rhs - 1.0),
                             tolerance=1e-8, passed=abs(rhs - 1.0) <= 1e-8))
    return rows


def _mvt_pairs():
    x_zero = build(zero_inflated(0.3, exponential(1.0)))
    y_exp = build(exponential(1.0))
    return [("Exp(mean 1)/Exp(mean 2)", _exp_mean(1.0), _exp_mean(2.0), (1.0, 1.5)),
            ("ZeroInflated(0.3)/Exp(1)", x_zero, y_exp, (0.5, 1.0))]


def criterion_7_mvt() -> list[CheckOutcome]:
    """Mean value identity over the stated pair/function grid."""
    rows = []
    tol = 1e-5
    for label, X, Y, alphas in _mvt_pairs():
        for alpha in alphas:
            for g_label, g in (("x^(a-1)", PowerSum.power(alpha - 1.0)),
                               ("x", PowerSum.power(1.0)),
                               ("x^2", PowerSum.power(2.0)),
                               ("x^0.5+3x", PowerSum.from_terms([(1.0, 0.5), (3.0, 1.0)]))):
                try:
                    report = order_mvt.mvt_verify(g, X, Y, alpha)
                except DivergenceError:
                    continue  # g inadmissible for this pair (negative moment at an atom)
                rows.append(_outcome("mvt_residual",
                                     {"pair": label, "alpha": alpha, "g": g_label},
                                     report.residual, tol,
                                     lhs=report.lhs, rhs=report.rhs))
    z = order_mvt.z_alpha_model(_exp_mean(1.0), _exp_mean(2.0), 1.0)
    closed = order_mvt.z_moment(z, 1.0)
    rows.append(_outcome("z_mean_closed_form", {"pair": "Exp(1)/Exp(2)", "alpha": 1.0},
                         closed - 3.0, 1e-8, lhs=closed, rhs=3.0))
    brute, _ = fracops.power_expectation(PowerSum.power(1.0),
                                         lambda t: order_mvt.z_density(z, t))
    rows.append(_outcome("z_mean_quadrature", {"pair": "Exp(1)/Exp(2)", "alpha": 1.0},
                         brute - 3.0, 1e-5, lhs=brute, rhs=3.0))
    return rows


def criterion_8_mixture() -> list[CheckOutcome]:
    """Generalized mixture identity, pointwise, plus the exact coefficient."""
    rows = []
    x_zero = build(zero_inflated(0.3, exponential(1.0)))
    y_exp = build(exponential(1.0))
    cases = [("Exp(mean 1)/Exp(mean 2)", _exp_mean(1.0), _exp_mean(2.0), 1.0, 5.0),
             ("Exp(mean 1)/Exp(mean 2)", _exp_mean(1.0), _exp_mean(2.0), 1.5, 5.0),
             ("ZeroInflated(0.3)/Exp(1)", x_zero, y_exp, 0.5, 5.0),
             ("ZeroInflated(0.3)/Exp(1)", x_zero, y_exp, 1.0, 5.0)]
    for label, X, Y, alpha, hi in cases:
        z = order_mvt.z_alpha_model(X, Y, alpha)
        worst = 0.0
        for t in np.linspace(0.0, hi, 30):
            lhs, rhs = order_mvt.z_mixture_identity(z, float(t))
            worst = max(worst, abs(lhs - rhs))
        rows.append(_outcome("z_mixture_identity", {"pair": label, "alpha": alpha},
                             worst, 1e-10))
    z = order_mvt.z_alpha_model(_exp_mean(1.0), _exp_mean(2.0), 1.0)
    rows.append(CheckOutcome("z_mixture_coefficient",
                             {"pair": "Exp(1)/Exp(2)", "alpha": 1.0},
                             lhs=z.mix_c, rhs=2.0, residual=z.mix_c - 2.0,
                             tolerance=0.0, passed=z.mix_c == 2.0))
    return rows


def criterion_9_mean_location() -> list[CheckOutcome]:
    """Classification identity on five pairs; the exponential pair is case iii."""
    rows = []
    pairs = [("Exp(1)/Exp(2)", _exp_mean(1.0), _exp_mean(2.0), 1.0, True),
             ("Exp(1)/Exp(2)", _exp_mean(1.0), _exp_mean(2.0), 0.5, False),
             ("Uniform(0,1)/Exp(1)", build(uniform(0.0, 1.0)), build(exponential(1.0)),
              1.0, False),
             ("HyperExp2/Exp(1)", build(hyperexp2(0.4, 1.0, 3.0)),
              build(exponential(1.0)), 1.0, False),
             ("ZeroInflated(0.3)/Exp(1)", build(zero_inflated(0.3, exponential(1.0))),
              build(exponential(1.0)), 1.0, True)]
    for label, X, Y, alpha, ordered in pairs:
        z = order_mvt.z_alpha_model(X, Y, alpha, require_order=ordered)
        report = order_mvt.classify_mean_location(z)
        rows.append(_outcome("mean_location_identity",
                             {"pair": label, "alpha": alpha, "case": report.case},
                             report.identity_residual, 1e-9))
    z = order_mvt.z_alpha_model(_exp_mean(1.0), _exp_mean(2.0), 1.0)
    report = order_mvt.classify_mean_location(z)
    rows.append(CheckOutcome("mean_location_case_iii",
                             {"pair": "Exp(1)/Exp(2)", "alpha": 1.0,
                              "case": report.case, "e_z": report.e_z},
                             lhs=report.e_z, rhs=report.e_y_alpha,
                             residual=0.0, tolerance=0.0,
                             passed=report.case == "above_Y"))
    return rows


def criterion_10_order_checker() -> list[CheckOutcome]:
    """Exponential pair ordering holds for alpha >= 1, fails at alpha = 0.5."""
    rows = []
    X, Y = _exp_mean(1.0), _exp_mean(2.0)
    for alpha in (1.0, 1.5, 2.0):
        res = order_mvt.check_survival_bounded_order(X, Y, alpha)
        rows.append(CheckOutcome("order_holds", {"alpha": alpha, "holds": res.holds},
                                 lhs=res.worst_gap, rhs=0.0, residual=res.worst_gap,
                                 tolerance=1e-10, passed=res.holds))
    res = order_mvt.check_survival_bounded_order(X, Y, 0.5)
    rows.append(CheckOutcome("order_fails_at_origin",
                             {"alpha": 0.5, "holds": res.holds, "worst_t": res.worst_t},
                             lhs=res.worst_gap, rhs=0.0, residual=0.0,
                             tolerance=0.0,
                             passed=(not res.holds) and res.worst_t == 0.0))
    return rows


def criterion_11_actuarial() -> list[CheckOutcome]:
    """Deductible identities: MVT, ratio independence, exponential Z."""
    rows = []
    cases = [("x", PowerSum.power(1.0), exponential(1.0), 0.5, 1.0, 1.0),
             ("x^0.5", PowerSum.power(0.5), exponential(1.0), 0.5, 1.0, 0.5),
             ("x^2", PowerSum.power(2.0), hyperexp2(0.4, 1.0, 3.0), 0.2, 0.8, 1.0)]
    for g_label, g, sev, r, s, alpha in cases:
        report = actuarial.deductible_mvt(g, sev, r, s, alpha)
        rows.append(_outcome("deductible_mvt",
                             {"severity": sev.kind, "g": g_label, "r": r, "s": s,
                              "alpha": alpha},
                             report.residual, 1e-5, lhs=report.lhs, rhs=report.rhs))

    lam = 1.0
    check = actuarial.exponential_ratio_check(
        lam, 0.5, 1.0, 1.0, 2.0,
        [PowerSum.power(1.0), PowerSum.power(2.0)], 1.0)
    reference = ((math.exp(-lam * 0.5) - math.exp(-lam * 1.0))
                 / (math.exp(-lam * 1.0) - math.exp(-lam * 2.0)))
    rows.append(_outcome("ratio_independence_spread", {"lambda": lam},
                         check.max_spread, 1e-5))
    rows.append(_outcome("ratio_reference_value", {"lambda": lam},
                         check.reference_ratio - reference, 1e-10,
                         lhs=check.reference_ratio, rhs=reference))
    half = actuarial.exponential_ratio_check(lam, 0.5, 1.0, 1.0, 2.0,
                                             [PowerSum.power(0.5)], 0.5)
    rows.append(_outcome("ratio_independence_fractional", {"lambda": lam, "alpha": 0.5},
                         half.max_spread, 1e-5))

    for r, s, alpha in ((0.5, 1.0, 1.0), (0.3, 0.9, 0.5), (0.25, 2.0, 0.8)):
        report = actuarial.deductible_mvt(PowerSum.power(1.0), exponential(lam),
                                          r, s, alpha)
        worst = 0.0
        for t in np.linspace(0.0, 6.0, 20):
            worst = max(worst, abs(order_mvt.z_density(report.z, float(t))
                                   - lam * math.exp(-lam * float(t))))
        rows.append(_outcome("deductible_z_is_exponential",
                             {"r": r, "s": s, "alpha": alpha}, worst, 1e-8))
    return rows


def _classical_taylor_rhs(coeffs: dict[int, float], X, n: int) -> float:
    """Order-n probabilistic Taylor of a polynomial by elementary calculus.

    coeffs maps integer powers to coefficients.  The remainder integrates
    the (n+1)-st derivative against the classical equilibrium density of
    order n+1, by direct quadrature.
    """
    def derive(c: dict[int, float], times: int) -> dict[int, float]:
        for _ in range(times):
            c = {k - 1: v * k for k, v in c.items() if k >= 1}
        return c

    total = 0.0
    for j in range(n + 1):
        dj = derive(coeffs, j)
        total += dj.get(0, 0.0) * distributions.fractional_moment(X, float(j)) / math.factorial(j)
    dn1 = derive(coeffs, n + 1)
    if not dn1:
        return total
    m_top = distributions.fractional_moment(X, float(n + 1))

    def integrand(t: float) -> float:
        poly = sum(v * t ** k for k, v in dn1.items())
        partial = distributions.upper_partial_moment(X, t, float(n))
        return poly * (n + 1) * partial / m_top

    res = integrate_semi_infinite(integrand, 0.0, upper=X.support_upper)
    return total + m_top / math.factorial(n + 1) * res.require("classical remainder")


def criterion_12_caputo() -> list[CheckOutcome]:
    """Caputo expansion residuals and the alpha = 1 three-way agreement."""
    rows = []
    X = build(exponential(1.0))
    family = [("x^(2a), a=0.4, n=1", PowerSum.power(0.8), 0.4, 1),
              ("const 5, n=0", PowerSum.constant(5.0), 0.7, 0),
              ("x^2+x, a=1, n=1", PowerSum.from_terms([(1.0, 2.0), (1.0, 1.0)]), 1.0, 1),
              ("x^2+x, a=0.5, n=2", PowerSum.from_terms([(1.0, 2.0), (1.0, 1.0)]), 0.5, 2)]
    for label, g, alpha, n in family:
        report = taylor.caputo_taylor_expectation(g, X, alpha, n)
        rows.append(_outcome("caputo_residual", {"case": label},
                             report.residual, 1e-5,
                             lhs=report.lhs, rhs=report.rhs))

    poly = PowerSum.from_terms([(1.0, 2.0), (1.0, 1.0)])
    coeffs = {2: 1.0, 1: 1.0}
    for label, model in (("Exp(1)", X), ("Uniform(0,1)", build(uniform(0.0, 1.0)))):
        for n in (0, 1):
            rl = taylor.rl_taylor_expectation(poly, model, 1.0, n)
            cap = taylor.caputo_taylor_expectation(poly, model, 1.0, n)
            classical = _classical_taylor_rhs(coeffs, model, n)
            worst = max(abs(rl.rhs - cap.rhs), abs(rl.rhs - classical),
                        abs(cap.rhs - classical))
            rows.append(_outcome("alpha_one_agreement",
                                 {"distribution": label, "n": n}, worst, 1e-7))
    return rows


def criterion_13_numerics_quality() -> list[CheckOutcome]:
    """Convergence flags and the tail-lemma truncation bound over the catalog.

    Operations raise on non-convergence throughout the battery; this
    check additionally probes the raw integral results.
    """
    rows = []
    for X in _catalog():
        if X.density_ac is not None:
            expected = 1.0 - sum(m for _, m in X.atoms)
            res = integrate_semi_infinite(X.density_ac, 0.0)
            err = res.error_estimate + 1e-12
            rows.append(CheckOutcome("density_mass",
                                     {"distribution": X.label,
                                      "converged": res.converged},
                                     lhs=res.value, rhs=expected,
                                     residual=res.value - expected, tolerance=err,
                                     passed=res.converged
                                     and abs(res.value - expected) <= err))
        worst = 0.0
        converged = True
        for t in (0.0, 1.0):
            for order in (0.5, 1.0, 2.0):
                res = fracops.weyl_integral_result(X, order, t)
                converged = converged and res.converged
                T = res.truncation_point
                if T is not None and T > t:
                    worst = max(worst, (T - t) ** order * distributions.survival_at(X, T))
        rows.append(CheckOutcome("tail_lemma_truncation",
                                 {"distribution": X.label, "converged": converged},
                                 lhs=worst, rhs=0.0, residual=worst, tolerance=1e-8,
                                 passed=converged and worst < 1e-8))
    return rows


CRITERIA = {
    1: criterion_1_exponential_fixed_point,
    2: criterion_2_characterization_negative,
    3: criterion_3_semigroup,
    4: criterion_4_recursive_equilibrium,
    5: criterion_5_equilibrium_moments,
    6: criterion_6_taylor,
    7: criterion_7_mvt,
    8: criterion_8_mixture,
    9: criterion_9_mean_location,
    10: criterion_10_order_checker,
    11: criterion_11_actuarial,
    12: criterion_12_caputo,
    13: criterion_13_numerics_quality,
}


def run_all() -> list[CheckOutcome]:
    """Run the full battery; rows carry their criterion number in params."""
    rows: list[CheckOutcome] = []
    for number, fn in CRITERIA.items():
        for row in fn():
            params = dict(row.params)
            params["criterion"] = number
            rows.append(CheckOutcome(row.check, params, row.lhs, row.rhs,
                                     row.residual, row.tolerance, row.passed))
    return rows
