"""Coefficient fields for exact linear algebra: the rationals or a prime field.

A FieldSpec is a value object; all arithmetic goes through the Matrix layer,
which picks its storage from the characteristic (Fraction objects for
characteristic zero, machine integers reduced mod p otherwise).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class FieldMismatchError(ValueError):
    """Raised when two operands live over different fields."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    # deterministic Miller-Rabin, exact for 64-bit and far beyond
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The rationals (characteristic 0) or the prime field F_p."""

    characteristic: int = 0

    def __post_init__(self):
        c = self.characteristic
        if c != 0 and not is_prime(c):
            raise ValueError(f"characteristic must be 0 or prime, got {c}")

    @property
    def is_prime_field(self) -> bool:
        return self.characteristic != 0

    def coerce(self, value):
        """Normalize an int/Fraction/str into this field's scalar type."""
        p = self.characteristic
        if p == 0:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, str):
                return Fraction(value)
            return Fraction(value)
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            den = value.denominator % p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {value} vanishes mod {p}")
            return value.numerator % p * pow(den, -1, p) % p
        return int(value) % p

    def invert(self, value):
        p = self.characteristic
        if p == 0:
            if value == 0:
                raise ZeroDivisionError("inverse of zero")
            return Fraction(1, 1) / value
        return pow(int(value), -1, p)

    def is_invertible(self, value) -> bool:
        p = self.characteristic
        if p == 0:
            return value != 0
        return int(value) % p != 0

    def __str__(self):
        return "QQ" if self.characteristic == 0 else f"F{self.characteristic}"


QQ = FieldSpec(0)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


def require_same_field(a: FieldSpec, b: FieldSpec):
    if a != b:
        raise FieldMismatchError(f"field mismatch: {a} vs {b}")
