import math

import pytest

from fraceq import distributions as dist


def exp_knots():
    """Survival knots sampled from a unit-rate exponential."""
    ts = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0]
    return [(t, math.exp(-t)) for t in ts]


CATALOG_SPECS = {
    "exp1": dist.exponential(1.0),
    "uniform01": dist.uniform(0.0, 1.0),
    "weibull21": dist.weibull(2.0, 1.0),
    "hyperexp": dist.hyperexp2(0.4, 1.0, 3.0),
    "zero_inflated": dist.zero_inflated(0.3, dist.exponential(1.0)),
    "deductible": dist.deductible(1.0, dist.exponential(1.0)),
    "numeric": dist.numeric(exp_knots()),
}


@pytest.fixture(scope="session")
def catalog():
    return {name: dist.build(spec) for name, spec in CATALOG_SPECS.items()}


def rel_diff(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-30)
