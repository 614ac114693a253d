import random
from fractions import Fraction

import pytest

from sturmian import SlopeSpec, build_table
from sturmian.words import WordSystem


def table_for(preperiod, period=None, horizon=12):
    period = preperiod if period is None else period
    return build_table(SlopeSpec(tuple(preperiod), tuple(period), horizon))


def golden_table(horizon=25):
    return table_for((1,), (1,), horizon)


def random_slope_table(rng, horizon, amax=9):
    pre = tuple(rng.randint(1, amax) for _ in range(horizon))
    return build_table(SlopeSpec(pre, pre, horizon))


def random_digits(rng, table, n, allow_max=True):
    """A uniformly-made valid digit vector b_1..b_n."""
    digs = []
    prev = 1
    for k in range(1, n + 1):
        hi = table.a(k) - 1 if (k == 1 or prev >= 1 or not allow_max) else table.a(k)
        d = rng.randint(0, hi)
        digs.append(d)
        prev = d
    return tuple(digs)


def theta_value(table):
    """High-precision rational stand-in for theta, strictly inside the
    deepest convergent bracket (error below half its width)."""
    k = table.horizon
    a = Fraction(table.p(k - 1), table.q(k - 1))
    b = Fraction(table.p(k), table.q(k))
    return (a + b) / 2


@pytest.fixture
def rng():
    return random.Random(20260809)


@pytest.fixture
def golden():
    return golden_table()


@pytest.fixture
def slope532():
    """Slope a = (5, 3, 2) repeated; a small slope with mixed quotients."""
    return table_for((5, 3, 2), horizon=12)


def word_system(table, digits, terminating=True, **kw):
    return WordSystem.from_digits(table, digits, terminating=terminating, **kw)
