"""Exact coefficient fields: the rationals and prime fields F_p.

Scalars are plain Python values: Fraction for Q, ints in [0, p) for F_p.
Every equality in the library is exact; there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: p == 0 means Q, otherwise the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError("not a prime: %r" % (self.p,))

    @property
    def name(self):
        return "Q" if self.p == 0 else "F%d" % self.p

    @staticmethod
    def parse(text):
        """Parse "Q" or "F<p>" (e.g. "F2")."""
        text = text.strip()
        if text == "Q":
            return FieldSpec(0)
        if text.startswith("F") and text[1:].isdigit():
            return FieldSpec(int(text[1:]))
        raise ValueError("bad field spec %r (expected 'Q' or 'F<p>')" % text)

    @property
    def char(self):
        return self.p

    # scalar ops; values are Fraction (Q) or int in [0, p)

    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def of_int(self, n):
        return Fraction(n) if self.p == 0 else n % self.p

    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p == 0 else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p == 0 else (a * b) % self.p

    def neg(self, a):
        return -a if self.p == 0 else (-a) % self.p

    def inv(self, a):
        if self.p == 0:
            if a == 0:
                raise ZeroDivisionError("inverse of 0")
            return 1 / Fraction(a)
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in F%d" % self.p)
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a == 0

    def parse_scalar(self, text):
        """Parse an exact scalar: "3/2" or "-7" over Q, a residue over F_p."""
        text = text.strip()
        if self.p == 0:
            return Fraction(text)
        return int(text) % self.p

    def format_scalar(self, a):
        return str(a)

    def __str__(self):
        return self.name


QQ = FieldSpec(0)
F2 = FieldSpec(2)
F3 = FieldSpec(3)
