"""Slope data: partial quotients, convergents, certified enclosures.

The slope is an irrational number theta in (0, 1) given by its continued
fraction expansion [0; a_1, a_2, ...].  A spec either carries a periodic
tail (covering quadratic irrationals exactly) or is a plain finite list
with an explicit horizon.  theta itself is never stored as a float: every
routine that needs its value works with a pair of consecutive convergents
bracketing it, refining the bracket until the answer is certified, and
fails loudly when the horizon is exhausted.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError, HorizonError, InternalError, PrecisionError


@dataclass(frozen=True)
class SlopeSpec:
    """Partial quotients a_1..a_K, optionally periodic after a preperiod.

    For k > len(preperiod) the quotient repeats period cyclically; with an
    empty period the horizon may not exceed the preperiod length.
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...] = ()
    horizon: int = 0

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(int(a) for a in self.preperiod))
        object.__setattr__(self, "period", tuple(int(a) for a in self.period))
        if not isinstance(self.horizon, int) or self.horizon < 1:
            raise ConfigError("horizon must be a positive integer")
        if not self.preperiod and not self.period:
            raise ConfigError("at least one partial quotient is required")
        if any(a < 1 for a in self.preperiod + self.period):
            raise ConfigError("every partial quotient must be >= 1")
        if not self.period and self.horizon > len(self.preperiod):
            raise HorizonError(
                f"horizon {self.horizon} exceeds the {len(self.preperiod)} "
                "available partial quotients and no period was given"
            )

    def partial_quotient(self, k: int) -> int:
        """a_k for 1 <= k <= horizon."""
        if k < 1:
            raise ConfigError(f"partial quotient index {k} out of range")
        if k > self.horizon:
            raise HorizonError(f"a_{k} requested but horizon is {self.horizon}")
        s = len(self.preperiod)
        if k <= s:
            return self.preperiod[k - 1]
        return self.period[(k - s - 1) % len(self.period)]

    def with_horizon(self, horizon: int) -> "SlopeSpec":
        return SlopeSpec(self.preperiod, self.period, horizon)

    def to_json(self) -> str:
        return json.dumps(
            {
                "preperiod": [str(a) for a in self.preperiod],
                "period": [str(a) for a in self.period],
                "horizon": str(self.horizon),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "SlopeSpec":
        try:
            obj = json.loads(text)
            return cls(
                tuple(int(a) for a in obj.get("preperiod", [])),
                tuple(int(a) for a in obj.get("period", [])),
                int(obj["horizon"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad slope JSON: {exc}") from exc


@dataclass(frozen=True)
class ConvergentTable:
    """Convergents p_k/q_k for k = -1..K with the usual seeds.

    q_{-1} = 0, q_0 = 1, p_{-1} = 1, p_0 = 0 and
    q_k = a_k q_{k-1} + q_{k-2}, likewise for p.
    """

    spec: SlopeSpec
    ps: tuple[int, ...]
    qs: tuple[int, ...]

    @property
    def horizon(self) -> int:
        return self.spec.horizon

    def a(self, k: int) -> int:
        return self.spec.partial_quotient(k)

    def p(self, k: int) -> int:
        if k < -1 or k > self.horizon:
            raise HorizonError(f"p_{k} outside table range -1..{self.horizon}")
        return self.ps[k + 1]

    def q(self, k: int) -> int:
        if k < -1 or k > self.horizon:
            raise HorizonError(f"q_{k} outside table range -1..{self.horizon}")
        return self.qs[k + 1]

    def level_covering(self, n: int) -> int:
        """Smallest k >= 1 with q_k > n."""
        i = bisect_right(self.qs, n)  # first index with qs[i] > n
        k = max(i - 1, 1)
        if k > self.horizon or self.qs[k + 1] <= n:
            raise HorizonError(f"no level with q_k > {n} within horizon {self.horizon}")
        return k


def build_table(spec: SlopeSpec) -> ConvergentTable:
    """Evaluate the convergent recurrence through the spec horizon."""
    ps = [1, 0]
    qs = [0, 1]
    for k in range(1, spec.horizon + 1):
        a = spec.partial_quotient(k)
        ps.append(a * ps[-1] + ps[-2])
        qs.append(a * qs[-1] + qs[-2])
    table = ConvergentTable(spec, tuple(ps), tuple(qs))
    for k in range(1, spec.horizon + 1):
        det = table.p(k) * table.q(k - 1) - table.p(k - 1) * table.q(k)
        if det != (-1) ** (k - 1):
            raise InternalError(f"determinant identity failed at k={k}")
    return table


@dataclass(frozen=True)
class ThetaEnclosure:
    """Exact rational interval (lower, upper) bracketing a value.

    For the slope itself the endpoints are the consecutive convergents
    p_level/q_level and p_{level+1}/q_{level+1} in parity order, so the
    width is exactly 1/(q_level * q_{level+1}).
    """

    lower: Fraction
    upper: Fraction
    level: int

    def __post_init__(self):
        if not self.lower < self.upper:
            raise InternalError("empty enclosure")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __contains__(self, x) -> bool:
        return self.lower < x < self.upper


def theta_enclosure(table: ConvergentTable, level: int) -> ThetaEnclosure:
    """Bracket theta between the convergents at `level` and `level + 1`."""
    if level < 0 or level + 1 > table.horizon:
        raise HorizonError(f"enclosure level {level} needs q_{level + 1} beyond horizon")
    x = Fraction(table.p(level), table.q(level))
    y = Fraction(table.p(level + 1), table.q(level + 1))
    lower, upper = (x, y) if x < y else (y, x)
    return ThetaEnclosure(lower, upper, level)


def theta_k_pair(table: ConvergentTable, k: int) -> tuple[int, int]:
    """theta_k = q_k * theta - p_k as the coefficient pair (B, A) of B*theta + A."""
    return table.q(k), -table.p(k)


def theta_k_enclosure(table: ConvergentTable, k: int, level: int) -> ThetaEnclosure:
    """Certified interval around theta_k = q_k theta - p_k; sign is (-1)^k.

    Requires level > k so that both endpoints already carry the sign.
    """
    if level <= k:
        raise ConfigError(f"level {level} must exceed k={k}")
    enc = theta_enclosure(table, level)
    e1 = table.q(k) * enc.lower - table.p(k)
    e2 = table.q(k) * enc.upper - table.p(k)
    lower, upper = (e1, e2) if e1 < e2 else (e2, e1)
    sign = -1 if k % 2 else 1
    if sign > 0 and not lower > 0:
        raise InternalError(f"theta_{k} enclosure lost its positive sign")
    if sign < 0 and not upper < 0:
        raise InternalError(f"theta_{k} enclosure lost its negative sign")
    return ThetaEnclosure(lower, upper, level)


def compare_with_theta(table: ConvergentTable, x: Fraction) -> int:
    """Certified sign of x - theta (never 0: theta is irrational).

    Refines the convergent bracket until x falls outside it.
    """
    for level in range(table.horizon):
        pl, ql = table.p(level), table.q(level)
        ph, qh = table.p(level + 1), table.q(level + 1)
        if level % 2:  # odd level: p_l/q_l above theta
            pl, ql, ph, qh = ph, qh, pl, ql
        # now pl/ql < theta < ph/qh
        if x.numerator * ql <= pl * x.denominator:
            return -1
        if x.numerator * qh >= ph * x.denominator:
            return 1
    raise PrecisionError(
        f"cannot separate {x} from theta within horizon {table.horizon}; "
        "raise the slope horizon"
    )


def sign_linear(table: ConvergentTable, const, coeff: int) -> int:
    """Certified sign of const + coeff * theta.

    Returns 0 exactly when const == coeff == 0 (the form is identically
    zero); for coeff != 0 the value is irrational and the sign is found
    by comparing -const/coeff against theta.
    """
    if coeff == 0:
        if const > 0:
            return 1
        if const < 0:
            return -1
        return 0
    x = Fraction(-const, coeff) if isinstance(const, int) else -Fraction(const) / coeff
    c = compare_with_theta(table, x)
    return -c if coeff > 0 else c


def floor_linear(table: ConvergentTable, const, coeff: int) -> int:
    """Certified floor of const + coeff * theta (exact when coeff == 0)."""
    if coeff == 0:
        f = Fraction(const)
        return f.numerator // f.denominator
    for level in range(table.horizon):
        enc = theta_enclosure(table, level)
        v1 = Fraction(const) + coeff * enc.lower
        v2 = Fraction(const) + coeff * enc.upper
        f1 = v1.numerator // v1.denominator
        f2 = v2.numerator // v2.denominator
        if f1 == f2:
            return f1
    raise PrecisionError(
        f"floor of {const} + {coeff}*theta not certified within horizon "
        f"{table.horizon}; raise the slope horizon"
    )


def floor_theta_multiple(table: ConvergentTable, x: int) -> int:
    """Certified floor of x * theta for an integer x (fast integer path)."""
    if x == 0:
        return 0
    start = max(table.level_covering(abs(x)) - 1, 0) if abs(x) < table.q(table.horizon) else 0
    for level in range(start, table.horizon):
        pl, ql = table.p(level), table.q(level)
        ph, qh = table.p(level + 1), table.q(level + 1)
        f1 = (x * pl) // ql
        f2 = (x * ph) // qh
        if f1 == f2:
            return f1
    raise PrecisionError(
        f"floor of {x}*theta not certified within horizon {table.horizon}; "
        "raise the slope horizon"
    )


def ceil_theta_multiple(table: ConvergentTable, x: int) -> int:
    """Certified ceiling of x * theta for an integer x."""
    if x == 0:
        return 0
    return -floor_theta_multiple(table, -x)
