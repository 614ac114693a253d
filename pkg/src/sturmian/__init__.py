"""Exact-arithmetic toolkit for Sturmian words and Sturmian numbers.

Builds arbitrary Sturmian words from slope/intercept data, computes the
continued fraction expansion of the base-b numbers whose digits they
form, and evaluates irrationality exponents, cross-verifying everything
against independent brute-force oracles.
"""

from .cfrac import (
    ConvergentPair,
    FamilyFraction,
    NumberSpec,
    TermStream,
    boehmer_term,
    check_family_recurrences,
    continued_fraction,
    convergents,
    family_fraction,
    raw_stream,
    term_block,
    word_value,
)
from .errors import (
    AmbiguousExpansionError,
    ConfigError,
    DigitRuleError,
    HorizonError,
    InternalError,
    InvalidInterceptError,
    MaterializeCapError,
    PrecisionError,
    SturmianError,
)
from .exponent import (
    classify_families,
    extremal_intercept,
    irrationality_estimate,
    liouville_diagnostic,
    nu_row,
    nu_table,
    ordered_strong_sequence,
)
from .oracle import (
    ValueEnclosure,
    cf_convergents,
    cf_of_rational,
    cf_value,
    certified_cf_prefix,
    enclose_value,
    exponent_bracket,
    legendre_check,
)
from .ostrowski import (
    DegenerateIntercept,
    IntegerDigits,
    InterceptDigits,
    decode_integer,
    decode_real,
    degenerate_expansions,
    encode_integer,
    encode_real,
    validate_real_digits,
)
from .slope import (
    ConvergentTable,
    SlopeSpec,
    ThetaEnclosure,
    build_table,
    theta_enclosure,
    theta_k_enclosure,
)
from .words import WordSystem, formal_intercept, run_length

__version__ = "0.1.0"
