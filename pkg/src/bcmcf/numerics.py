"""Exact rational arithmetic.

Every flow value, step length and reduced-cost ratio in the package is a
:class:`fractions.Fraction` backed by unbounded Python integers, so overflow
cannot happen and no comparison ever needs a tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Union

Rational = Fraction
Ordering = Literal["less", "equal", "greater"]

RationalLike = Union[Fraction, int, str]


def rat_make(num: int, den: int = 1) -> Fraction:
    """Return ``num/den`` in canonical form (positive denominator, reduced)."""
    if not isinstance(num, int) or not isinstance(den, int):
        raise TypeError("numerator and denominator must be integers")
    if den == 0:
        raise ValueError("rational with zero denominator")
    return Fraction(num, den)


def rat_cmp(a: Fraction, b: Fraction) -> Ordering:
    # denominators are positive, so cross-multiplication preserves order
    lhs = a.numerator * b.denominator
    rhs = b.numerator * a.denominator
    if lhs < rhs:
        return "less"
    if lhs > rhs:
        return "greater"
    return "equal"


def format_rational(value: RationalLike) -> str:
    """Serialize as ``"num/den"``, or as a plain integer when integral."""
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str | int) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return rat_make(int(num), int(den))
    return Fraction(int(text))


def is_integral(value: Fraction) -> bool:
    return value.denominator == 1


def sign(value: int | Fraction) -> int:
    return (value > 0) - (value < 0)
