"""Exact dyadic rationals.

Every coordinate the library touches is a number of the form ``n / 2**s``.
Values are carried around as :class:`fractions.Fraction`; this module only
validates, parses and formats them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class NonDyadicError(ValueError):
    """A literal or value whose denominator is not a power of two."""


def is_dyadic(q) -> bool:
    d = Fraction(q).denominator
    return d & (d - 1) == 0


def as_dyadic(value) -> Fraction:
    """Convert ``value`` to a Fraction, refusing anything that is not dyadic.

    Floats are accepted only when their shortest decimal repr is exactly
    dyadic, so ``0.375`` passes and ``0.3`` does not.
    """
    if isinstance(value, bool):
        raise NonDyadicError(f"not a number: {value!r}")
    if isinstance(value, str):
        return parse_dyadic(value)
    if isinstance(value, float):
        q = Fraction(repr(value))
    else:
        q = Fraction(value)
    if not is_dyadic(q):
        raise NonDyadicError(f"{value!r} is not a dyadic rational")
    return q


_LITERAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?(/[+-]?\d+)?$")


def parse_dyadic(text: str) -> Fraction:
    """Parse ``"27/32"``, ``"0.84375"``, ``"-3"`` etc. into an exact Fraction."""
    s = text.strip()
    if not _LITERAL.match(s):
        raise NonDyadicError(f"malformed numeral {text!r}")
    try:
        if "/" in s:
            num, den = s.split("/")
            if "." in num or "e" in num.lower():
                raise NonDyadicError(f"malformed fraction {text!r}")
            q = Fraction(int(num), int(den))
        else:
            q = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise NonDyadicError(f"malformed numeral {text!r}") from exc
    if not is_dyadic(q):
        raise NonDyadicError(f"{text!r} is not a dyadic rational")
    return q


def format_fraction(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class DyadicScalar:
    """``numerator / 2**scale`` in canonical form (odd numerator unless scale is 0)."""

    numerator: int
    scale: int = 0

    def __post_init__(self):
        if self.scale < 0:
            raise ValueError("scale must be non-negative")
        if self.scale > 0 and self.numerator % 2 == 0:
            raise ValueError("non-canonical dyadic: reduce numerator and scale")

    @classmethod
    def from_value(cls, value) -> DyadicScalar:
        q = as_dyadic(value)
        return cls(q.numerator, q.denominator.bit_length() - 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.scale)

    def __str__(self):
        return format_fraction(self.value)
