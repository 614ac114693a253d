"""Continued fraction of a number whose base-b digits form a Sturmian word.

The expansion is assembled per level from four integer term families
(c, d, e, f below, plus a constant 1), giving an improper expansion that
may contain zeros and one negative-term shape.  Two local rewrite rules
repair it into the regular expansion:

  (i)  a negative term c_{k+1} = -e_k - 1 collapses the nine terms
       c_k, d_k, 1, e_k, f_k, c_{k+1}, d_{k+1}, 1, e_{k+1} into the
       single positive term c_k + 1 + e_{k+1};
  (ii) any window x, 0, y collapses to x + y (adjacent zero pairs act
       as the identity and are simply deleted).

Both rules are elementary 2x2 matrix identities, so the value of the
expansion is preserved exactly at every step; tests check the matrix
products.  Every term carries provenance: which raw parts were merged
into it and hence which convergent family the corresponding convergent
belongs to.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError, DigitRuleError, HorizonError, InternalError
from .words import WordSystem

# Family tag of a surviving raw part: position in the 5-term level block.
_PART_FAMILY = {"c": "1", "d": "2-1", "one": "2", "e": "3", "f": "4"}


@dataclass(frozen=True)
class NumberSpec:
    """A Sturmian number: base b >= 2 digits over {0, b-1} from a word."""

    base: int
    system: WordSystem

    def __post_init__(self):
        if self.base < 2:
            raise ConfigError(f"base must be >= 2, got {self.base}")


@dataclass(frozen=True)
class TermBlock:
    """The four per-level integers feeding the improper expansion.

    c = b^(r_k + q_{k-1}) (b^((a_{k+1}-b_{k+1}-1) q_k) - 1)/(b^(q_k) - 1),
    d = b^(t_k) - 1,   e = b^(r_k) - 1,
    f = b^(t_k) (b^(b_{k+1} q_k) - 1)/(b^(q_k) - 1).
    c is negative exactly when a_{k+1} = b_{k+1}; d and f may vanish.
    """

    k: int
    c: int
    d: int
    e: int
    f: int


@dataclass(frozen=True)
class Term:
    """One stream term plus the raw parts merged into it."""

    value: int
    parts: tuple[tuple[str, int], ...]

    @property
    def level(self) -> int:
        return max(k for _, k in self.parts)

    @property
    def family(self) -> tuple[str, int]:
        """Convergent family of this term: that of its last merged part."""
        kind, k = self.parts[-1]
        return _PART_FAMILY[kind], k


@dataclass(frozen=True)
class TermStream:
    stage: str  # "raw" | "nonneg" | "final"
    terms: tuple[Term, ...]

    def values(self) -> tuple[int, ...]:
        return tuple(t.value for t in self.terms)


@dataclass(frozen=True)
class ConvergentPair:
    """Numerator/denominator pair P_j, Q_j of the expansion, unreduced.

    Both are divisible by b-1; the reduced fraction is the actual
    convergent.  |P_{j+1} Q_j - P_j Q_{j+1}| = (b-1)^2 throughout.
    """

    p: int
    q: int
    index: int
    family: tuple[str, int]
    term: int

    def reduced(self) -> Fraction:
        return Fraction(self.p, self.q)


@dataclass(frozen=True)
class FamilyFraction:
    """One of the candidate approximant families, as an exact fraction."""

    numerator: int
    denominator: int
    family: str
    k: int
    height: int

    def reduced(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


def _bits_as_base(word: str, base: int) -> int:
    """Positional value of a 0/1 word in base `base` (digits 0 and 1)."""
    n = len(word)
    if n <= 512:
        v = 0
        for ch in word:
            v = v * base + (ch == "1")
        return v
    mid = n // 2
    return _bits_as_base(word[:mid], base) * pow(base, n - mid) + _bits_as_base(
        word[mid:], base
    )


def word_value(word: str, base: int) -> int:
    """A 0/1 word read as an integer in base `base` over {0, base-1}."""
    if base == 2:
        return int(word, 2) if word else 0
    return (base - 1) * _bits_as_base(word, base)


def _geom(base: int, step: int, count: int) -> int:
    """1 + b^step + ... + b^((count-1) step), zero when count <= 0."""
    if count <= 0:
        return 0
    return (pow(base, count * step) - 1) // (pow(base, step) - 1)


def term_block(spec: NumberSpec, k: int) -> TermBlock:
    """Exact term values at level k (reads intercept digit k+1)."""
    sys_, b = spec.system, spec.base
    t, r = sys_.offset(k), sys_.suffix_len(k)
    qk, qk1 = sys_.q(k), sys_.table.q(k - 1)
    gap = sys_.a(k + 1) - sys_.digit(k + 1)
    if gap < 0:
        raise DigitRuleError(k + 1, "digit exceeds partial quotient")
    if gap == 0:
        # b_k = 0 here, so r_{k-1} = r_k + q_{k-1} - q_k
        c = -pow(b, r + qk1 - qk)
    else:
        c = pow(b, r + qk1) * _geom(b, qk, gap - 1)
    d = pow(b, t) - 1
    e = pow(b, r) - 1
    f = pow(b, t) * _geom(b, qk, sys_.digit(k + 1))
    return TermBlock(k, c, d, e, f)


def boehmer_term(table, base: int, k: int) -> int:
    """Closed-form partial quotient (b^(q_k) - b^(q_{k-2}))/(b^(q_{k-1}) - 1).

    Only valid for the characteristic word (all intercept digits zero).
    """
    if k < 1:
        raise ConfigError("closed-form terms start at k = 1")
    return pow(base, table.q(k - 2)) * _geom(base, table.q(k - 1), table.a(k))


def raw_stream(spec: NumberSpec, levels: int) -> TermStream:
    """The interleaved improper stream c_0, d_0, 1, e_0, f_0, c_1, ..."""
    if levels < 1:
        raise ConfigError("need at least one level")
    if levels > spec.system.levels:
        raise HorizonError(
            f"{levels} levels need intercept digits through {levels}, "
            f"have {spec.system.levels}"
        )
    terms = []
    for k in range(levels):
        blk = term_block(spec, k)
        for kind, value in (("c", blk.c), ("d", blk.d), ("one", 1),
                            ("e", blk.e), ("f", blk.f)):
            terms.append(Term(value, ((kind, k),)))
    return TermStream("raw", tuple(terms))


def collapse_negatives(stream: TermStream) -> TermStream:
    """Rule (i): fold each negative c term with its two neighbour levels."""
    if stream.stage != "raw":
        raise ConfigError("rule (i) applies to the raw stream")
    terms = stream.terms
    levels = len(terms) // 5
    blocks = [terms[5 * k: 5 * k + 5] for k in range(levels)]
    if blocks and blocks[0][0].value < 0:
        raise InternalError("leading term cannot be negative")
    out: list[Term] = []
    k = 0
    while k < levels:
        if k + 1 < levels and blocks[k + 1][0].value < 0:
            if k + 2 < levels and blocks[k + 2][0].value < 0:
                raise DigitRuleError(k + 2, "two consecutive negative terms")
            ck, dk, one_k, ek, fk = blocks[k]
            ck1, dk1, one_k1, ek1 = blocks[k + 1][:4]
            if fk.value != 0 or dk1.value != dk.value or ck1.value != -ek.value - 1:
                raise InternalError(f"negative-term window malformed at k={k}")
            merged_parts = (ck.parts + dk.parts + one_k.parts + ek.parts
                            + fk.parts + ck1.parts + dk1.parts + one_k1.parts
                            + blocks[k + 1][3].parts)
            out.append(Term(ck.value + 1 + ek1.value, merged_parts))
            out.append(blocks[k + 1][4])  # f_{k+1} survives
            k += 2
        else:
            out.extend(blocks[k])
            k += 1
    return TermStream("nonneg", tuple(out))


def eliminate_zeros(stream: TermStream) -> TermStream:
    """Rule (ii): delete adjacent zero pairs, then fold x, 0, y into x + y.

    Merged terms take the family of their rightmost part; pair deletions
    leave their neighbours' identities untouched.  Only trailing zeros
    may survive (the truncation step removes them).
    """
    if stream.stage != "nonneg":
        raise ConfigError("rule (ii) applies after rule (i)")
    items = list(stream.terms)
    changed = True
    while changed:
        changed = False
        # adjacent zero pairs act as the identity matrix
        for i in range(len(items) - 1):
            if items[i].value == 0 and items[i + 1].value == 0:
                del items[i: i + 2]
                changed = True
                break
        if changed:
            continue
        for i in range(1, len(items) - 1):
            if items[i].value == 0:
                x, z, y = items[i - 1], items[i], items[i + 1]
                items[i - 1: i + 2] = [
                    Term(x.value + y.value, x.parts + z.parts + y.parts)
                ]
                changed = True
                break
    for i, t in enumerate(items):
        if t.value == 0 and i + 1 < len(items):
            raise InternalError("a non-trailing zero survived exhaustive rewriting")
        if t.value < 0:
            raise InternalError("a negative term survived rewriting")
    return TermStream("final", tuple(items))


def continued_fraction(spec: NumberSpec, levels: int | None = None) -> TermStream:
    """Full pipeline with the stability truncation.

    Terms involving the last two built levels are withheld: a longer
    stream could still rewrite them.  Everything kept is final.
    """
    if levels is None:
        levels = spec.system.levels
    final = eliminate_zeros(collapse_negatives(raw_stream(spec, levels)))
    kept = []
    for t in final.terms:
        if t.level > levels - 3:
            break
        kept.append(t)
    while kept and kept[-1].value == 0:
        kept.pop()
    return TermStream("final", tuple(kept))


def stream_matrix(stream: TermStream, base: int):
    """Seeded 2x2 product over the stream; invariant under both rules."""
    m = ((0, base - 1), (base - 1, 0))
    for t in stream.terms:
        a, b_, c, d = m[0][0], m[0][1], m[1][0], m[1][1]
        m = ((a * t.value + b_, a), (c * t.value + d, c))
    return m


def convergents(stream: TermStream, base: int) -> list[ConvergentPair]:
    """Numerator/denominator pairs along the final stream."""
    if stream.stage != "final":
        raise ConfigError("convergents are read off the final stream")
    pairs = []
    p_prev, q_prev = base - 1, 0  # index -1
    p_cur, q_cur = 0, base - 1  # index 0
    for j, t in enumerate(stream.terms, start=1):
        p_prev, p_cur = p_cur, t.value * p_cur + p_prev
        q_prev, q_cur = q_cur, t.value * q_cur + q_prev
        pairs.append(ConvergentPair(p_cur, q_cur, j, t.family, t.value))
    return pairs


_HEIGHT = {
    "1": lambda s, k: s.suffix_len(k + 1),
    "2-1": lambda s, k: s.suffix_len(k + 1) + s.offset(k),
    "2": lambda s, k: s.suffix_len(k + 1) + s.offset(k),
    "3": lambda s, k: s.suffix_len(k + 1) + s.q(k),
    "4": lambda s, k: s.q(k + 1),
}


def formal_family_fraction(spec: NumberSpec, family: str, k: int) -> FamilyFraction:
    """Family fraction without sign restrictions (numerator and denominator
    may be negative or zero in the formal edge cases)."""
    sys_, b = spec.system, spec.base
    if family not in _HEIGHT:
        raise ConfigError(f"unknown family {family!r}")
    if k == -1:
        if family == "4":
            return FamilyFraction(word_value("0", b), b - 1, "4", -1, 1)
        if family == "3":
            # suffix at level 0 followed by the level -1 word
            num = word_value("01", b) - word_value("0", b)
            return FamilyFraction(num, 0, "3", -1, 0)
        raise ConfigError(f"family ({family}) undefined at k = -1")
    t_k, r_k = sys_.offset(k), sys_.suffix_len(k)
    r_k1 = sys_.suffix_len(k + 1)
    if family == "1":
        num = word_value(sys_.split(k + 1)[1], b) - word_value(sys_.split(k)[1], b)
        den = pow(b, r_k1) - pow(b, r_k)
        return FamilyFraction(num, den, "1", k, _HEIGHT["1"](sys_, k))
    if family == "2":
        num = word_value(sys_.split(k + 1)[1] + sys_.split(k)[0], b)
        den = pow(b, r_k1 + t_k) - 1
        return FamilyFraction(num, den, "2", k, _HEIGHT["2"](sys_, k))
    if family == "2-1":
        f2 = formal_family_fraction(spec, "2", k)
        f1 = formal_family_fraction(spec, "1", k)
        return FamilyFraction(f2.numerator - f1.numerator,
                              f2.denominator - f1.denominator,
                              "2-1", k, _HEIGHT["2-1"](sys_, k))
    if family == "3":
        rw = sys_.split(k + 1)[1]
        num = word_value(rw + sys_.standard(k), b) - word_value(rw, b)
        den = pow(b, r_k1) * (pow(b, sys_.q(k)) - 1)
        return FamilyFraction(num, den, "3", k, _HEIGHT["3"](sys_, k))
    num = word_value(sys_.aligned(k + 1), b)
    den = pow(b, sys_.q(k + 1)) - 1
    return FamilyFraction(num, den, "4", k, _HEIGHT["4"](sys_, k))


def family_fraction(spec: NumberSpec, family: str, k: int) -> FamilyFraction:
    """Family fraction as a genuine positive-denominator approximant."""
    if family == "1" and k >= 0:
        sys_ = spec.system
        if sys_.suffix_len(k + 1) <= sys_.suffix_len(k):
            raise ConfigError(
                f"family (1) at k={k} needs a_{k + 1} - b_{k + 1} >= 1"
            )
    frac = formal_family_fraction(spec, family, k)
    if frac.denominator <= 0:
        raise ConfigError(f"family ({family}) at k={k} is only formal here")
    return frac


def check_family_recurrences(spec: NumberSpec, k: int) -> dict[str, bool]:
    """Verify the five per-level recurrences between family fractions.

    Each states numerator and denominator separately, e.g. family (1) at
    level k equals c_k times family (4) at k-1 plus family (3) at k-1.
    Failure is an implementation bug, not bad input.
    """
    blk = term_block(spec, k)
    f1 = formal_family_fraction(spec, "1", k)
    f21 = formal_family_fraction(spec, "2-1", k)
    f2 = formal_family_fraction(spec, "2", k)
    f3 = formal_family_fraction(spec, "3", k)
    f4 = formal_family_fraction(spec, "4", k)
    f4p = formal_family_fraction(spec, "4", k - 1)
    results = {}

    def comp(name, left, coeff, mid, right):
        ok = (left.numerator == coeff * mid.numerator + right.numerator
              and left.denominator == coeff * mid.denominator + right.denominator)
        results[name] = ok

    if k >= 1:
        f3p = formal_family_fraction(spec, "3", k - 1)
        comp("(1)=c*(4')+(3')", f1, blk.c, f4p, f3p)
    comp("(2-1)=d*(1)+(4')", f21, blk.d, f1, f4p)
    comp("(2)=1*(2-1)+(1)", f2, 1, f21, f1)
    comp("(3)=e*(2)+(2-1)", f3, blk.e, f2, f21)
    comp("(4)=f*(3)+(2)", f4, blk.f, f3, f2)
    if not all(results.values()):
        bad = [name for name, ok in results.items() if not ok]
        raise InternalError(f"family recurrences failed at k={k}: {bad}")
    return results
