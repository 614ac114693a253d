"""Word construction and letter access for a slope/intercept pair.

A `WordSystem` serves one binary word: the limit of the aligned words
built from an intercept digit stream.  Small words are materialized as
plain '0'/'1' strings (subject to a cap, since lengths grow like q_k);
individual letters of arbitrarily deep levels are served by an O(K)
recursive descent through the concatenation recursion, with no
exponential storage.  The floor-formula path evaluates the same letters
from the intercept directly, with every floor certified exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ConfigError,
    HorizonError,
    InternalError,
    MaterializeCapError,
    PrecisionError,
)
from .ostrowski import (
    DegenerateIntercept,
    InterceptDigits,
    decode_real,
    digit_prefix_value,
    validate_real_digits,
)
from .slope import (
    ConvergentTable,
    ceil_theta_multiple,
    floor_theta_multiple,
    theta_enclosure,
)

MATERIALIZE_CAP = 1 << 20


@dataclass(frozen=True)
class Repetition:
    """Initial repetition data: the word is head + block^(count+1) + ...

    `head` is a suffix of the level-k standard blocks, `count` is the
    certified number of whole copies of the level-k block following it
    (one more copy plus a partial block is verified letterwise).
    """

    head: str
    count: int


@dataclass(frozen=True)
class FactorCountReport:
    """Distinct factor count of a prefix, with the validity margin."""

    length: int
    factor_length: int
    count: int
    window_ok: bool


def run_length(word: str) -> str:
    """Run-length form: '1 0^4 1 0^5' style, single letters unexponentiated."""
    out = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        n = j - i
        out.append(word[i] if n == 1 else f"{word[i]}^{n}")
        i = j
    return " ".join(out)


class WordSystem:
    """One Sturmian word: slope table + intercept digit stream.

    `mode` records how the intercept is known exactly:
      * "combo":      rho = (U+1)*theta - P exactly (terminating digits,
                      including the characteristic word U = P = 0);
      * "shifted":    rho = -(m-1)*theta + p exactly (degenerate case),
                      with `upper` selecting ceiling vs floor letters;
      * "prefix":     only a digit prefix is known; floor evaluation
                      falls back to interval refinement and may fail.
    """

    def __init__(self, table: ConvergentTable, digits: InterceptDigits, *,
                 mode: str = None, shift=None, upper: bool = False,
                 cap: int = MATERIALIZE_CAP):
        rep = validate_real_digits(digits, table)
        if not rep.valid:
            raise ConfigError(
                f"invalid intercept digits at index {rep.violation_index}: "
                f"{rep.message}"
            )
        self.table = table
        self.digits = digits
        self.upper = upper
        self.cap = cap
        if mode is None:
            mode = "combo" if digits.terminating else "prefix"
        self.mode = mode
        if mode == "combo":
            self.shift = digit_prefix_value(digits, table)  # (U, P)
        elif mode == "shifted":
            if shift is None:
                raise ConfigError("shifted mode needs the (m, p) pair")
            self.shift = shift
        elif mode == "prefix":
            self.shift = None
        else:
            raise ConfigError(f"unknown mode {mode!r}")
        self._aligned = {-1: "1", 0: "0"}
        self._standard = {-1: "1", 0: "0"}
        self._offsets = [0]  # t_k prefix sums, index k

    # -- factories ---------------------------------------------------------

    @classmethod
    def characteristic(cls, table: ConvergentTable, **kw) -> "WordSystem":
        """The word of intercept rho = theta: all intercept digits vanish."""
        return cls(table, InterceptDigits((0,) * table.horizon, True), **kw)

    @classmethod
    def from_digits(cls, table: ConvergentTable, digits, *, terminating=None,
                    **kw) -> "WordSystem":
        if not isinstance(digits, InterceptDigits):
            digits = InterceptDigits(tuple(int(b) for b in digits),
                                     bool(terminating))
        elif terminating is not None:
            digits = InterceptDigits(digits.digits, bool(terminating))
        return cls(table, digits, **kw)

    @classmethod
    def from_degenerate(cls, table: ConvergentTable, deg: DegenerateIntercept,
                        *, upper: bool = False, **kw) -> "WordSystem":
        stream = deg.upper if upper else deg.lower
        return cls(table, stream, mode="shifted", shift=(deg.m, deg.p),
                   upper=upper, **kw)

    # -- basic quantities ----------------------------------------------------

    def a(self, k: int) -> int:
        return self.table.a(k)

    def q(self, k: int) -> int:
        return self.table.q(k)

    def digit(self, k: int) -> int:
        return self.digits.digit(k)

    @property
    def levels(self) -> int:
        """Number of levels with a known intercept digit."""
        return self.table.horizon if self.digits.terminating else len(self.digits)

    def offset(self, k: int) -> int:
        """t_k = b_1 + b_2 q_1 + ... + b_k q_{k-1}: length of the prefix part."""
        if k < 0:
            raise ConfigError(f"offset index {k} out of range")
        while len(self._offsets) <= k:
            j = len(self._offsets)
            self._offsets.append(self._offsets[-1] + self.digit(j) * self.q(j - 1))
        return self._offsets[k]

    def suffix_len(self, k: int) -> int:
        """r_k = q_k - t_k: length of the suffix part (always >= 1)."""
        r = self.q(k) - self.offset(k)
        if r < 1:
            raise InternalError(f"suffix length r_{k} = {r} < 1")
        return r

    # -- materialized words --------------------------------------------------

    def _check_cap(self, k: int):
        if self.q(k) > self.cap:
            raise MaterializeCapError(
                f"|word at level {k}| = {self.q(k)} exceeds cap {self.cap}; "
                "use letter access"
            )

    def standard(self, k: int) -> str:
        """The standard word at level k (length q_k for k >= 0)."""
        if k < -1:
            raise ConfigError(f"no standard word at level {k}")
        self._check_cap(max(k, 0))
        top = max(self._standard)
        while top < k:
            top += 1
            if top == 1:
                w = "0" * (self.a(1) - 1) + "1"
            else:
                w = self._standard[top - 1] * self.a(top) + self._standard[top - 2]
            self._standard[top] = w
        return self._standard[k]

    def aligned(self, k: int) -> str:
        """The conjugate of the standard word aligned with this word's prefix."""
        if k < -1:
            raise ConfigError(f"no aligned word at level {k}")
        self._check_cap(max(k, 0))
        top = max(self._aligned)
        while top < k:
            top += 1
            if top == 1:
                b = self.digit(1)
                w = "0" * (self.a(1) - b - 1) + "1" + "0" * b
            else:
                b = self.digit(top)
                w = (self._aligned[top - 1] * (self.a(top) - b)
                     + self._aligned[top - 2]
                     + self._aligned[top - 1] * b)
            self._aligned[top] = w
        return self._aligned[k]

    def split(self, k: int) -> tuple[str, str]:
        """(prefix, suffix) of the standard word: lengths t_k and r_k."""
        w = self.standard(k)
        t = self.offset(k) if k >= 1 else 0
        return w[:t], w[t:]

    # -- implicit letter access ----------------------------------------------

    def _descend(self, n: int, zero_digits: bool) -> int:
        k = self.table.level_covering(n)
        if not zero_digits and k > self.levels:
            raise HorizonError(
                f"letter {n} needs digits through level {k}, have {self.levels}"
            )
        m = n
        while k >= 2:
            qk1, qk2 = self.q(k - 1), self.q(k - 2)
            b = 0 if zero_digits else self.digit(k)
            lead = (self.a(k) - b) * qk1
            if m <= lead:
                m = (m - 1) % qk1 + 1
                k -= 1
            elif m <= lead + qk2:
                m -= lead
                k -= 2
            else:
                m = (m - lead - qk2 - 1) % qk1 + 1
                k -= 1
        if k == 1:
            b = 0 if zero_digits else self.digit(1)
            return 1 if m == self.a(1) - b else 0
        if k == 0:
            return 0
        return 1  # level -1 word is "1"

    def letter(self, n: int) -> int:
        """Letter n (1-based) of the word, via recursive descent: O(K) time."""
        if n < 1:
            raise ConfigError(f"letters are 1-based, got {n}")
        return self._descend(n, zero_digits=False)

    def standard_letter(self, n: int) -> int:
        """Letter n of the characteristic word (all digits zero)."""
        if n < 1:
            raise ConfigError(f"letters are 1-based, got {n}")
        return self._descend(n, zero_digits=True)

    def prefix(self, length: int) -> str:
        """First `length` letters; built from cap-sized blocks in O(length)."""
        if length == 0:
            return ""
        k = self.table.level_covering(length)
        if self.q(k) <= self.cap:
            return self.aligned(k)[:length]
        parts: list[str] = []
        self._emit_prefix(k, length, parts)
        return "".join(parts)

    def _emit_prefix(self, k: int, need: int, parts: list[str]) -> None:
        # level 1 and below are always materialized (q_1 = a_1 <= cap)
        if self.q(k) <= self.cap:
            parts.append(self.aligned(k)[:need])
            return
        b = self.digit(k)
        for block_k, copies in ((k - 1, self.a(k) - b), (k - 2, 1), (k - 1, b)):
            block_len = self.q(block_k)
            for _ in range(copies):
                take = min(need, block_len)
                self._emit_prefix(block_k, take, parts)
                need -= take
                if need == 0:
                    return

    # -- exact floor-formula letters -----------------------------------------

    def floor_letter(self, n: int, upper: bool | None = None) -> int:
        """s_n = floor(n theta + rho) - floor((n-1) theta + rho), certified.

        With `upper` the ceiling variant is evaluated instead; in the
        exact modes both variants agree except at the two indices where
        the argument is an integer (degenerate intercepts only).
        """
        if n < 1:
            raise ConfigError(f"letters are 1-based, got {n}")
        if upper is None:
            upper = self.upper
        if self.mode == "combo":
            u, p = self.shift
            # floor((n+1+U) theta - P) - floor((n+U) theta - P); P cancels.
            return (floor_theta_multiple(self.table, n + 1 + u)
                    - floor_theta_multiple(self.table, n + u))
        if self.mode == "shifted":
            m, p = self.shift
            x = n - m
            if upper:
                return (ceil_theta_multiple(self.table, x + 1)
                        - ceil_theta_multiple(self.table, x))
            return (floor_theta_multiple(self.table, x + 1)
                    - floor_theta_multiple(self.table, x))
        return self._floor_letter_interval(n, upper)

    def _floor_letter_interval(self, n: int, upper: bool) -> int:
        """Interval fallback when only a digit prefix is known."""
        lo, hi = decode_real(self.digits, self.table)
        enc = theta_enclosure(self.table, self.table.horizon - 1)

        def bracket(x):
            # x*theta + rho = (x+1)*theta + sigma
            v_lo = (x + 1) * (enc.lower if x + 1 >= 0 else enc.upper) + lo
            v_hi = (x + 1) * (enc.upper if x + 1 >= 0 else enc.lower) + hi
            return v_lo, v_hi

        def int_part(x):
            v_lo, v_hi = bracket(x)
            if upper:
                c1 = -((-v_lo.numerator) // v_lo.denominator)
                c2 = -((-v_hi.numerator) // v_hi.denominator)
            else:
                c1 = v_lo.numerator // v_lo.denominator
                c2 = v_hi.numerator // v_hi.denominator
            if c1 != c2:
                raise PrecisionError(
                    f"floor at n={n} not certified from the digit prefix; "
                    "declare the intercept exactly (terminating or degenerate)"
                )
            return c1

        return int_part(n) - int_part(n - 1)

    # -- structural operations -----------------------------------------------

    def is_aligned_prefix(self, k: int) -> bool:
        """Whether the level-k aligned word prefixes the level-(k+1) one.

        Cross-checks the direct comparison against the digit-pattern
        criterion (the prefix fails exactly for one extremal pattern).
        """
        direct = self.aligned(k + 1)[: self.q(k)] == self.aligned(k)
        pattern = True
        for j in range(1, k + 2):
            want = self._extremal_pattern_digit(j, k)
            if self.digit(j) != want:
                pattern = False
                break
        criterion = not pattern
        if direct != criterion:
            raise InternalError(
                f"prefix criterion mismatch at k={k}: direct={direct}"
            )
        return direct

    def _extremal_pattern_digit(self, j: int, k: int) -> int:
        # k odd: 0, a_2, 0, a_4, ..., a_{k+1}; k even: a_1 - 1, 0, a_3, ..., a_{k+1}
        if k % 2 == 1:
            return self.a(j) if j % 2 == 0 else 0
        if j == 1:
            return self.a(1) - 1
        return self.a(j) if j % 2 == 1 else 0

    def common_prefix(self, k: int) -> tuple[str, int]:
        """Longest common prefix of the two concatenation orders at level k."""
        v, w = self.aligned(k + 1), self.aligned(k)
        x, y = v + w, w + v
        i = 0
        while i < len(x) and x[i] == y[i]:
            i += 1
        return x[:i], i

    def repetition(self, k: int) -> Repetition:
        """Head and repeat count of the initial level-k repetition.

        Dispatches on the digit window (reads up to digit k+4), then
        verifies the claimed decomposition letter-by-letter against the
        word itself.
        """
        if k < 0:
            raise ConfigError("repetition level must be >= 0")
        a2, b2 = self.a(k + 2), self.digit(k + 2)
        if a2 - b2 >= 2:
            head = self.split(k + 1)[1]
            count = self.a(k + 1)
        elif a2 - b2 == 1:
            head = self.split(k + 1)[1]
            count = self.a(k + 1)
            if self.digit(k + 3) < self.a(k + 3):
                count += 1
        else:  # a2 == b2
            head = self.split(k)[1] + self.standard(k + 1)
            count = self.a(k + 1)
            if a2 == 1:
                if self.a(k + 3) - self.digit(k + 3) >= 2:
                    count += 1
                elif (self.a(k + 3) == 1 and self.digit(k + 3) == 0
                      and self.a(k + 4) == self.digit(k + 4)):
                    count += 1
        mk = self.standard(k)
        mk_prev = self.standard(k - 1)
        expected = head + mk * count + mk_prev + mk[: max(self.q(k) - 1, 0)]
        if self.prefix(len(expected)) != expected:
            raise InternalError(f"repetition decomposition failed at k={k}")
        return Repetition(head, count)

    def factor_count(self, length: int, n: int) -> FactorCountReport:
        """Distinct length-n factors among the first `length` letters.

        The window is marked valid when length >= q_j + q_{j-1} + n for
        the least q_j > n (the recurrence-function margin), which is
        enough for every length-n factor to have appeared.
        """
        if n < 1 or length < n:
            raise ConfigError("need length >= n >= 1")
        w = self.prefix(length)
        count = len({w[i:i + n] for i in range(length - n + 1)})
        try:
            j = self.table.level_covering(n)
            ok = length >= self.q(j) + self.q(j - 1) + n
        except HorizonError:
            ok = False
        return FactorCountReport(length, n, count, ok)


def formal_intercept(source, table: ConvergentTable, levels: int) -> InterceptDigits:
    """Recover the intercept digits of a word from its letters alone.

    At each level the aligned word is the unique conjugate of the
    standard word matching the source's first q_k - 1 letters; candidate
    offsets differ by multiples of q_{k-1}, so each level tries at most
    a_k + 1 digit candidates and keeps the one whose candidate word
    matches the source (verified letterwise with early exit).
    """
    letter = source.letter if isinstance(source, WordSystem) else source
    if levels > table.horizon:
        raise HorizonError(f"{levels} levels exceed horizon {table.horizon}")
    digits: list[int] = []
    for k in range(1, levels + 1):
        if k == 1:
            cands = range(table.a(1))
        elif digits[-1] >= 1:
            cands = range(table.a(k))
        else:
            cands = range(table.a(k) + 1)
        survivors = []
        for b in cands:
            probe = WordSystem.from_digits(
                table, tuple(digits) + (b,) + (0,) * (table.horizon - k),
                terminating=False,
            )
            if all(probe.letter(n) == letter(n) for n in range(1, table.q(k))):
                survivors.append(b)
        if not survivors:
            raise ConfigError(
                f"no conjugate matches at level {k}: not a Sturmian word of this slope"
            )
        if len(survivors) > 1:
            raise InternalError(f"conjugate match not unique at level {k}")
        digits.append(survivors[0])
    return InterceptDigits(tuple(digits), False)
