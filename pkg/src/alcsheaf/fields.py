"""Exact scalar arithmetic: the rationals and prime fields.

Every computation in this package is exact.  Scalars are either
`fractions.Fraction` (characteristic 0) or plain ints reduced mod p
(characteristic p).  A small field object bundles the operations so the
linear algebra layer can stay generic.
"""

from __future__ import annotations

from fractions import Fraction


class Rationals:
    """The field of rational numbers, scalars are `Fraction`."""

    char = 0

    def of(self, n):
        return Fraction(n)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def is_zero(self, a):
        return a == 0

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")


class PrimeField:
    """The prime field F_p, scalars are ints in [0, p)."""

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"not a prime: {p}")
        self.char = p

    def of(self, n):
        return n % self.char

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.char

    def sub(self, a, b):
        return (a - b) % self.char

    def mul(self, a, b):
        return (a * b) % self.char

    def neg(self, a):
        return (-a) % self.char

    def inv(self, a):
        a %= self.char
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.char - 2, self.char)

    def is_zero(self, a):
        return a % self.char == 0

    def __repr__(self):
        return f"GF({self.char})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.char == self.char

    def __hash__(self):
        return hash(("GF", self.char))


def make_field(characteristic: int):
    """Field of the given characteristic (0 means the rationals)."""
    if characteristic == 0:
        return Rationals()
    return PrimeField(characteristic)
