"""Integer and real numeration in base theta.

Integers are written as N = d_1 q_0 + d_2 q_1 + ... with digits bounded
by the partial quotients and the adjacency rule d_j = 0 whenever
d_{j+1} = a_{j+1}.  Reals sigma in [-theta, 1-theta] are written as
sigma = sum b_k theta_{k-1} under the analogous rules.  Everything here
is exact: digit extraction works on the symbolic form A + B*theta and
certifies each digit with sign tests against the convergent bracket, so
a digit is never guessed.  Values lying in Z theta + Z have two
admissible expansions; those are either produced explicitly by
`degenerate_expansions` or reported as `AmbiguousExpansionError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AmbiguousExpansionError,
    ConfigError,
    DigitRuleError,
    HorizonError,
    InternalError,
    InvalidInterceptError,
)
from .slope import ConvergentTable, sign_linear, theta_enclosure


@dataclass(frozen=True)
class IntegerDigits:
    """Digits d_1..d_{r+1} of a positive integer, most significant last."""

    digits: tuple[int, ...]

    def __post_init__(self):
        if not self.digits or self.digits[-1] <= 0:
            raise DigitRuleError(len(self.digits), "top digit must be positive")


@dataclass(frozen=True)
class InterceptDigits:
    """Digit prefix b_1..b_K of a real expansion.

    `terminating` marks the prefix as the complete expansion (all later
    digits vanish), which happens exactly for values of the form
    U*theta - P with U >= 0.  A non-terminating prefix only pins the
    value down to an interval.
    """

    digits: tuple[int, ...]
    terminating: bool = False

    def __len__(self):
        return len(self.digits)

    def digit(self, k: int) -> int:
        """b_k, reading 0 beyond the prefix when terminating."""
        if 1 <= k <= len(self.digits):
            return self.digits[k - 1]
        if self.terminating:
            return 0
        raise HorizonError(f"digit b_{k} beyond stored prefix of length {len(self.digits)}")


@dataclass(frozen=True)
class DegenerateIntercept:
    """The two digit streams of an intercept with rho - theta = -m*theta + p.

    `level` is the l with q_l < m <= q_{l+1} (l = 0 when m = 1).  Which
    stream serves the lower word depends on the parity of l: odd l pairs
    the plain stream with the lower word, even l swaps them.
    """

    m: int
    p: int
    level: int
    stream: InterceptDigits
    stream_alt: InterceptDigits

    @property
    def lower(self) -> InterceptDigits:
        return self.stream if self.level % 2 == 1 else self.stream_alt

    @property
    def upper(self) -> InterceptDigits:
        return self.stream_alt if self.level % 2 == 1 else self.stream


@dataclass(frozen=True)
class DigitReport:
    """Outcome of validating a real digit prefix."""

    valid: bool
    violation_index: int | None
    message: str
    forbidden_tail_shape: bool


def encode_integer(n: int, table: ConvergentTable) -> IntegerDigits:
    """Greedy expansion of a positive integer over the weights q_0, q_1, ...

    The greedy choice from the top automatically satisfies the digit
    bounds and the adjacency rule, and the result is the unique valid
    vector summing to n.
    """
    if n < 1:
        raise ConfigError(f"only positive integers have an expansion, got {n}")
    if n >= table.q(table.horizon):
        raise HorizonError(f"{n} >= q_{table.horizon} = {table.q(table.horizon)}")
    top = table.level_covering(n)  # q_top > n, so digits go up to index top
    digits = [0] * top
    rem = n
    for j in range(top, 0, -1):
        digits[j - 1] = rem // table.q(j - 1)
        rem %= table.q(j - 1)
    if rem != 0:
        raise InternalError("greedy expansion left a remainder")
    while digits and digits[-1] == 0:
        digits.pop()
    return IntegerDigits(tuple(digits))


def validate_integer_digits(digits, table: ConvergentTable) -> None:
    """Raise DigitRuleError at the first index violating the integer rules."""
    seq = tuple(digits)
    if len(seq) > table.horizon:
        raise HorizonError(f"{len(seq)} digits exceed horizon {table.horizon}")
    for j, d in enumerate(seq, start=1):
        if d < 0:
            raise DigitRuleError(j, f"negative digit {d}")
        if d > table.a(j):
            raise DigitRuleError(j, f"digit {d} exceeds a_{j} = {table.a(j)}")
    if seq and seq[0] >= table.a(1):
        raise DigitRuleError(1, f"leading digit {seq[0]} must be < a_1 = {table.a(1)}")
    for j in range(1, len(seq)):
        if seq[j] == table.a(j + 1) and seq[j - 1] != 0:
            raise DigitRuleError(j, f"digit before a maximal digit must vanish")


def decode_integer(digits, table: ConvergentTable) -> int:
    """Sum d_j q_{j-1} after validating the digit rules."""
    seq = digits.digits if isinstance(digits, IntegerDigits) else tuple(digits)
    validate_integer_digits(seq, table)
    return sum(d * table.q(j - 1) for j, d in enumerate(seq, start=1))


def validate_real_digits(digits, table: ConvergentTable) -> DigitReport:
    """Check b_1 <= a_1 - 1, b_k <= a_k and the adjacency rule.

    Canonical form additionally requires infinitely many odd and even
    indices with b_k < a_k, which a finite prefix cannot certify; instead
    the report flags whether the prefix ends in the forbidden tail shape
    a_j, 0, a_{j+2}, 0, ...
    """
    seq = digits.digits if isinstance(digits, InterceptDigits) else tuple(digits)
    if len(seq) > table.horizon:
        raise HorizonError(f"{len(seq)} digits exceed horizon {table.horizon}")

    def report(idx, msg):
        return DigitReport(False, idx, msg, False)

    for k, b in enumerate(seq, start=1):
        if b < 0:
            return report(k, f"negative digit {b}")
        if b > table.a(k):
            return report(k, f"digit {b} exceeds a_{k} = {table.a(k)}")
    if seq and seq[0] > table.a(1) - 1:
        return report(1, f"leading digit {seq[0]} must be <= a_1 - 1")
    for k in range(1, len(seq)):
        if seq[k] == table.a(k + 1) and seq[k - 1] != 0:
            return report(k, "digit before a maximal digit must vanish")

    # Forbidden tail: the suffix alternates a_j, 0, a_{j+2}, 0, ... to the end.
    tail = False
    n = len(seq)
    if n >= 2:
        for start in range(n - 1):
            j = start + 1
            ok = all(
                seq[i] == (table.a(i + 1) if (i - start) % 2 == 0 else 0)
                for i in range(start, n)
            )
            if ok and seq[start] == table.a(j):
                tail = True
                break
    return DigitReport(True, None, "ok", tail)


def digit_prefix_value(digits, table: ConvergentTable) -> tuple[int, int]:
    """(U, P) with sum of b_h theta_{h-1} over the prefix equal to U*theta - P."""
    seq = digits.digits if isinstance(digits, InterceptDigits) else tuple(digits)
    u = sum(b * table.q(h - 1) for h, b in enumerate(seq, start=1))
    p = sum(b * table.p(h - 1) for h, b in enumerate(seq, start=1))
    return u, p


def decode_real(digits, table: ConvergentTable, level: int | None = None):
    """Exact rational interval enclosing sum b_k theta_{k-1}.

    The prefix value U*theta - P is evaluated against the best available
    convergent bracket; for a non-terminating prefix the unknown tail is
    bounded by |theta_{m-1}| < 1/q_m at the truncation index m.
    """
    if not isinstance(digits, InterceptDigits):
        digits = InterceptDigits(tuple(digits))
    rep = validate_real_digits(digits, table)
    if not rep.valid:
        raise DigitRuleError(rep.violation_index, rep.message)
    m = len(digits.digits) if level is None else min(level, len(digits.digits))
    if m < len(digits.digits) and digits.terminating:
        m = len(digits.digits)  # never widen a terminating expansion
    u, p = digit_prefix_value(digits.digits[:m], table)
    enc = theta_enclosure(table, table.horizon - 1)
    v1 = u * enc.lower - p
    v2 = u * enc.upper - p
    lo, hi = (v1, v2) if v1 <= v2 else (v2, v1)
    if not digits.terminating:
        if m > table.horizon:
            raise HorizonError(f"tail bound needs q_{m} beyond horizon")
        tail = Fraction(1, table.q(m))
        lo, hi = lo - tail, hi + tail
    return lo, hi


def _window_boundary(table: ConvergentTable, k: int, b: int) -> tuple[int, int]:
    """Boundary between digits b-1 and b at step k: (b-1)theta_{k-1} - theta_k.

    Returned as the coefficient pair (const, coeff) of const + coeff*theta.
    """
    coeff = (b - 1) * table.q(k - 1) - table.q(k)
    const = table.p(k) - (b - 1) * table.p(k - 1)
    return const, coeff


def encode_real(sigma, table: ConvergentTable, horizon: int | None = None) -> InterceptDigits:
    """Greedy digit extraction for sigma in [-theta, 1-theta].

    `sigma` is an exact Fraction or a coefficient pair (u, v) standing for
    u*theta + v; floats are rejected because no floor can be certified
    from them.  Each digit is certified by exact sign tests; landing on a
    window boundary means sigma in Z theta + Z with two admissible
    branches, reported as AmbiguousExpansionError rather than guessed.
    """
    if isinstance(sigma, float):
        raise ConfigError("float intercepts are rejected; pass a Fraction or (u, v) pair")
    if isinstance(sigma, tuple):
        coeff, const = int(sigma[0]), Fraction(sigma[1])
    else:
        coeff, const = 0, Fraction(sigma)
    orig_coeff, orig_const = coeff, const
    # certifying digit k compares rationals of convergent scale k + 2, so
    # by default leave two levels of bracket headroom
    limit = max(table.horizon - 2, 1) if horizon is None else horizon
    if limit > table.horizon:
        raise HorizonError(f"requested {limit} digits but horizon is {table.horizon}")

    digits: list[int] = []
    prev = 1  # treat step 1 as if preceded by a nonzero digit: caps b_1 at a_1 - 1
    for k in range(1, limit + 1):
        if coeff == 0 and const == 0:
            return InterceptDigits(tuple(digits + [0] * (limit - len(digits))), True)
        cap = table.a(k) - 1 if prev >= 1 else table.a(k)
        direction = 1 if k % 2 == 1 else -1  # sign of theta_{k-1}

        def above(b):
            """+1 if the residual sits beyond boundary b in digit direction."""
            bc, bk = _window_boundary(table, k, b)
            s = sign_linear(table, const - bc, coeff - bk)
            return s * direction

        # Bottom of window 0 is -theta_{k-1}; top of window cap is boundary cap+1.
        s_bot = direction * sign_linear(table, const - table.p(k - 1), coeff + table.q(k - 1))
        if s_bot == 0:
            _raise_ambiguous(digits, (0, 0), orig_coeff, orig_const)
        if s_bot < 0:
            raise InvalidInterceptError(
                f"value below -theta at digit {k}; not in [-theta, 1-theta]"
            )
        s_top = above(cap + 1)
        if s_top == 0:
            _raise_ambiguous(digits, (cap, cap), orig_coeff, orig_const)
        if s_top > 0:
            raise InvalidInterceptError(
                f"value beyond the top of the digit range at digit {k}"
            )
        if cap == 0:
            b_k = 0
        else:
            s1 = above(1)
            if s1 == 0:
                _raise_ambiguous(digits, (0, 1), orig_coeff, orig_const)
            if s1 < 0:
                b_k = 0
            else:
                lo, hi = 1, cap  # predicate holds at lo
                while lo < hi:
                    mid = (lo + hi + 1) // 2
                    s = above(mid)
                    if s == 0:
                        _raise_ambiguous(digits, (mid - 1, mid), orig_coeff, orig_const)
                    if s > 0:
                        lo = mid
                    else:
                        hi = mid - 1
                b_k = lo
        digits.append(b_k)
        const += b_k * table.p(k - 1)
        coeff -= b_k * table.q(k - 1)
        prev = b_k
    if coeff == 0 and const == 0:
        return InterceptDigits(tuple(digits), True)
    return InterceptDigits(tuple(digits), False)


def _raise_ambiguous(digits, branches, coeff, const):
    m = p = None
    if const.denominator == 1:
        m, p = -coeff, int(const)
        if m < 1:
            m = p = None
    raise AmbiguousExpansionError(digits, branches, m=m, p=p)


def _alternating_tail(table: ConvergentTable, first: int, length: int, start_max: bool):
    """Digits a_first, 0, a_{first+2}, 0, ... (or starting with the 0)."""
    out = []
    for i in range(length):
        k = first + i
        maxed = (i % 2 == 0) if start_max else (i % 2 == 1)
        out.append(table.a(k) if maxed else 0)
    return out


def degenerate_expansions(m: int, p: int, table: ConvergentTable) -> DegenerateIntercept:
    """Both digit streams for rho - theta = -m*theta + p with m >= 1.

    The plain stream pads the integer expansion of q_{l+1} - m with the
    tail 0, a_{l+3}, 0, a_{l+5}, ...; the alternate stream bumps digit
    l+1 and continues a_{l+2}-1, 0, a_{l+4}, ... (with the special
    closed forms when m = 1, where the two streams expand 1-theta and
    -theta respectively).
    """
    if m < 1:
        raise InvalidInterceptError(f"m must be >= 1, got {m}")
    K = table.horizon
    if m == 1:
        if p != 0:
            raise InvalidInterceptError(f"m = 1 requires p = 0 for rho in [0,1), got p={p}")
        level = 0
        b = [table.a(1) - 1] + _alternating_tail(table, 2, K - 1, start_max=False)
        b_alt = [0] + _alternating_tail(table, 2, K - 1, start_max=True)
    else:
        # rho = -(m-1) theta + p must land in (0, 1)
        if sign_linear(table, p, -(m - 1)) <= 0:
            raise InvalidInterceptError(f"rho = -({m}-1)theta + {p} is not positive")
        if sign_linear(table, p - 1, -(m - 1)) >= 0:
            raise InvalidInterceptError(f"rho = -({m}-1)theta + {p} is not below 1")
        if m > table.q(K):
            raise HorizonError(f"m = {m} exceeds q_{K} = {table.q(K)}")
        level = next(l for l in range(K) if table.q(l) < m <= table.q(l + 1))
        x = table.q(level + 1) - m
        head = list(encode_integer(x, table).digits) if x else []
        head += [0] * (level + 1 - len(head))
        if head[level] > table.a(level + 1) - 1:
            raise InternalError("head digit b_{l+1} out of range")
        b = head + _alternating_tail(table, level + 2, K - level - 1, start_max=False)
        b_alt = list(head)
        b_alt[level] += 1
        if level + 2 <= K:
            b_alt += [table.a(level + 2) - 1]
            b_alt += _alternating_tail(table, level + 3, K - level - 2, start_max=False)
    for seq in (b, b_alt):
        rep = validate_real_digits(seq, table)
        if not rep.valid:
            raise InternalError(f"degenerate stream breaks digit rules: {rep.message}")
    return DegenerateIntercept(
        m, p, level, InterceptDigits(tuple(b)), InterceptDigits(tuple(b_alt))
    )
