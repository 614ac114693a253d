"""Exception hierarchy.

Exit-code mapping used by the CLI: bad configuration or bad digit data
is exit 2, running out of horizon/precision is exit 3, and a violated
internal invariant is exit 4.
"""


class SturmianError(Exception):
    """Base class for all library errors."""

    exit_code = 4


class ConfigError(SturmianError):
    """Invalid user-supplied configuration or parameters."""

    exit_code = 2


class DigitRuleError(ConfigError):
    """A digit vector violates the numeration rules."""

    def __init__(self, index, message):
        super().__init__(f"digit rule violated at index {index}: {message}")
        self.index = index


class InvalidInterceptError(ConfigError):
    """Intercept data does not describe a point of [0, 1)."""


class AmbiguousExpansionError(ConfigError):
    """The value admits two digit expansions and no branch hint was given.

    Carries the two candidate digit branches (common prefix plus the two
    admissible next digits) and, when the input was symbolic, the (m, p)
    pair that identifies the degenerate intercept.
    """

    exit_code = 2

    def __init__(self, prefix, branch_digits, m=None, p=None):
        self.prefix = tuple(prefix)
        self.branch_digits = tuple(branch_digits)
        self.m = m
        self.p = p
        hint = f"; degenerate form m={m}, p={p}" if m is not None else ""
        super().__init__(
            f"two admissible expansions after digits {self.prefix} "
            f"(next digit {branch_digits[0]} or {branch_digits[1]}){hint}"
        )


class HorizonError(SturmianError):
    """More partial quotients or digits are needed than the spec provides."""

    exit_code = 3


class PrecisionError(SturmianError):
    """An enclosure could not be refined enough to certify a result."""

    exit_code = 3


class MaterializeCapError(SturmianError):
    """A word exceeds the explicit-materialization cap; use letter access."""

    exit_code = 3


class InternalError(SturmianError):
    """An internal invariant failed; indicates a bug, not bad input."""

    exit_code = 4
