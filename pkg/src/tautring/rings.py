"""Coefficient rings: exact rationals and prime fields GF(p)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class RingMismatch(TypeError):
    """Raised when polynomials over different coefficient rings are combined."""


@lru_cache(maxsize=64)
def _is_prime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


class RationalField:
    """The field Q, with coefficients stored as :class:`fractions.Fraction`."""

    modulus = 0
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    def reduce(self, value):
        return value

    def add(self, a, b):
        return a + b

    def negate(self, a):
        return -a

    def multiply(self, a, b):
        return a * b

    def invert(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return 1 / Fraction(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


@dataclass(frozen=True)
class PrimeField:
    """The prime field Z/pZ; every stored value lies in [0, p)."""

    p: int

    def __post_init__(self):
        if self.p < 3 or self.p >= 2**31 or not _is_prime(self.p):
            raise ValueError(f"modulus must be an odd prime below 2^31, got {self.p}")

    @property
    def modulus(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        return f"GF({self.p})"

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def __call__(self, value) -> int:
        if isinstance(value, Fraction):
            if value.denominator == 1:
                return value.numerator % self.p
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def reduce(self, value) -> int:
        return value % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def negate(self, a):
        return -a % self.p

    def multiply(self, a, b):
        return a * b % self.p

    def invert(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self.name}")
        return pow(a, self.p - 2, self.p)

    def __repr__(self):
        return self.name


def ring_for(modulus: int):
    """``QQ`` for modulus 0, otherwise ``GF(modulus)``."""
    return QQ if modulus == 0 else PrimeField(modulus)
