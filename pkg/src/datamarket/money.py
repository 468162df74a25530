"""Fixed-point money arithmetic.

Budgets, asks and valuations are integer counts of a minor unit (1/10000
of a currency unit). Integer arithmetic keeps ledger replay and repeated
runs bit-exact across platforms; anything that lands off-grid (rule
factors, means) is rounded half to even.
"""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal, InvalidOperation
from fractions import Fraction
from typing import Sequence, Union

Money = int

# Minor units per currency unit.
SCALE = 10_000

# Parse guard. Nothing in a simulation needs amounts this large, and the
# cap keeps every sum the compiled kernel sees far inside int64.
MAX_UNITS = 10**10


class MoneyValueError(ValueError):
    """An amount that cannot be represented on the money grid."""


def from_units(amount: Union[int, float, str, Decimal]) -> Money:
    """Convert a currency amount to minor units, rounding half to even."""
    if isinstance(amount, bool):
        raise MoneyValueError(f"not a money amount: {amount!r}")
    if isinstance(amount, int):
        dec = Decimal(amount)
    elif isinstance(amount, float):
        dec = Decimal(repr(amount))
    elif isinstance(amount, Decimal):
        dec = amount
    elif isinstance(amount, str):
        try:
            dec = Decimal(amount.strip())
        except InvalidOperation as exc:
            raise MoneyValueError(f"not a money amount: {amount!r}") from exc
    else:
        raise MoneyValueError(f"not a money amount: {amount!r}")
    if not dec.is_finite():
        raise MoneyValueError(f"not a finite amount: {amount!r}")
    if abs(dec) > MAX_UNITS:
        raise MoneyValueError(f"amount out of range: {amount!r}")
    return int((dec * SCALE).to_integral_value(rounding=ROUND_HALF_EVEN))


def to_units(amount: Money) -> float:
    """Minor units back to a float amount (display and stats only)."""
    return amount / SCALE


def fmt(amount: Money) -> str:
    """Canonical decimal text: no exponent, no trailing zeros."""
    sign = "-" if amount < 0 else ""
    units, minor = divmod(abs(amount), SCALE)
    frac = str(minor).rjust(4, "0").rstrip("0")
    return f"{sign}{units}.{frac}" if frac else f"{sign}{units}"


def parse(text: str) -> Money:
    """Inverse of fmt (accepts any decimal literal)."""
    return from_units(text)


def round_minor(amount: float) -> Money:
    """Round a minor-unit float to the grid, half to even."""
    return round(amount)


def round_fraction(amount: Fraction) -> Money:
    """Round an exact minor-unit fraction to the grid, half to even."""
    num, den = amount.numerator, amount.denominator
    q, r = divmod(num, den)
    twice = 2 * r
    if twice > den or (twice == den and q % 2):
        q += 1
    return q


def exact_mean(values: Sequence[Money]) -> Money:
    """Arithmetic mean on the money grid, computed exactly."""
    if not values:
        raise MoneyValueError("mean of an empty sequence")
    return round_fraction(Fraction(sum(values), len(values)))
