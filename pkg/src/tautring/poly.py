"""Sparse polynomials in the variables x[i,j] and y.

A monomial is a tuple of ``(code, exponent)`` pairs sorted by code.  Code 0 is
``y``; the codes of ``x[i,j]`` enumerate the pairs with ``i + j`` even,
``0 <= i <= j + 2`` and ``(i, j) != (0, 0)`` in ascending ``(j, i)`` order.  The
codes do not depend on the genus; validity for a given genus is checked by
:func:`make_variable`.

Polynomials store their terms in a dict keyed by monomial, so like terms are
combined by hashing.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .rings import QQ, PrimeField, RingMismatch, ring_for

DEFAULT_PRIMES = (2147483647, 2147483629)

Monomial = tuple  # tuple[tuple[int, int], ...]
ONE: Monomial = ()


class InvalidIndexPair(ValueError):
    """(i, j) names no generator: i + j is odd or i > j + 2."""


@dataclass(frozen=True)
class GenusContext:
    genus: int
    primes: tuple = DEFAULT_PRIMES
    threads: int = field(default_factory=lambda: int(os.environ.get("TAUT_THREADS", "1")))

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 2:
            raise ValueError(f"genus must be an integer >= 2, got {self.genus!r}")
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        if not self.primes:
            raise ValueError("at least one prime is required")
        for p in self.primes:
            PrimeField(p)  # validates
        if self.threads < 1:
            raise ValueError("threads must be positive")

    @property
    def max_level(self) -> int:
        return 2 * self.genus - 2

    def x(self, i: int, j: int, ring=QQ) -> "SparsePolynomial":
        """x[i,j] as a polynomial, with the conventions applied."""
        v = make_variable(self, i, j)
        if v is ZERO:
            return SparsePolynomial.zero(ring)
        if isinstance(v, Scalar):
            return SparsePolynomial.constant(v.value, ring)
        return SparsePolynomial.from_monomial(((v.code, 1),), ring)

    def y(self, ring=QQ) -> "SparsePolynomial":
        return SparsePolynomial.from_monomial(((0, 1),), ring)


# -- variable codes ---------------------------------------------------------

_CODE_OF: dict = {}
_VAR_OF: list = [(0, 2)]  # code 0 is y, bigrade (0, 2)
_LEVELS_BUILT = [-1]


def _build_levels(jmax: int) -> None:
    for j in range(_LEVELS_BUILT[0] + 1, jmax + 1):
        for i in range(j % 2, j + 3, 2):
            if (i, j) == (0, 0):
                continue
            _CODE_OF[(i, j)] = len(_VAR_OF)
            _VAR_OF.append((i, j))
    _LEVELS_BUILT[0] = max(_LEVELS_BUILT[0], jmax)


_build_levels(64)


def x_code(i: int, j: int) -> int:
    if j > _LEVELS_BUILT[0]:
        _build_levels(max(j, 2 * _LEVELS_BUILT[0]))
    return _CODE_OF[(i, j)]


def code_bigrade(code: int) -> tuple:
    return _VAR_OF[code]


def code_weight(code: int) -> int:
    return 0 if code == 0 else _VAR_OF[code][0]


@dataclass(frozen=True)
class VariableId:
    """A generator: ``y`` (``psi=True``) or ``x[i,j]``."""

    i: int
    j: int
    psi: bool = False

    @property
    def bigrade(self) -> tuple:
        return (0, 2) if self.psi else (self.i, self.j)

    @property
    def code(self) -> int:
        return 0 if self.psi else x_code(self.i, self.j)

    @classmethod
    def from_code(cls, code: int) -> "VariableId":
        if code == 0:
            return PSI
        return cls(*_VAR_OF[code])

    def __str__(self):
        return "y" if self.psi else f"x[{self.i},{self.j}]"


PSI = VariableId(0, 2, psi=True)


def X(i: int, j: int) -> VariableId:
    if (i + j) % 2 or i > j + 2 or i < 0 or j < 0 or (i, j) == (0, 0):
        raise InvalidIndexPair(f"x[{i},{j}] is not a generator")
    return VariableId(i, j)


@dataclass(frozen=True)
class Scalar:
    value: int


class _Zero:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO"


ZERO = _Zero()


def make_variable(ctx: GenusContext, i: int, j: int) -> Union[VariableId, Scalar, _Zero]:
    """Resolve the symbol x[i,j]: a generator, the scalar g for (0,0), or zero."""
    if i < 0 or j < 0 or j > 2 * ctx.genus - 2:
        return ZERO
    if (i + j) % 2 or i > j + 2:
        raise InvalidIndexPair(f"x[{i},{j}] names no symbol (need i+j even, i <= j+2)")
    if (i, j) == (0, 0):
        return Scalar(ctx.genus)
    return VariableId(i, j)


# -- monomials --------------------------------------------------------------

def monomial(*factors) -> Monomial:
    """Build a monomial from VariableIds or ``(VariableId, exponent)`` pairs."""
    exps: dict = {}
    for f in factors:
        v, e = (f, 1) if isinstance(f, VariableId) else f
        if e:
            exps[v.code] = exps.get(v.code, 0) + e
    return tuple(sorted((c, e) for c, e in exps.items() if e))


def mono_from_dict(exps: Mapping) -> Monomial:
    return tuple(sorted((c, e) for c, e in exps.items() if e))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for c, e in b:
        d[c] = d.get(c, 0) + e
    return tuple(sorted(d.items()))


def bigrade(m: Monomial) -> tuple:
    wi = wj = 0
    for c, e in m:
        i, j = _VAR_OF[c]
        wi += i * e
        wj += j * e
    return (wi, wj)


def weight(m: Monomial) -> int:
    return sum(_VAR_OF[c][0] * e for c, e in m if c)


def degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def monomial_key(m: Monomial) -> tuple:
    """Canonical order: total degree, then the exponent vector over (y, x by (j, i))."""
    return (degree(m), tuple((-c, e) for c, e in m))


def split_column_zero(m: Monomial) -> tuple:
    """Split ``m`` into (weight-0 part, positive-weight part)."""
    low, high = [], []
    for c, e in m:
        (low if c == 0 or _VAR_OF[c][0] == 0 else high).append((c, e))
    return tuple(low), tuple(high)


def has_variable(m: Monomial, v: VariableId) -> bool:
    code = v.code
    return any(c == code for c, _ in m)


def render_monomial(m: Monomial) -> str:
    parts = []
    for c, e in m:
        name = str(VariableId.from_code(c))
        parts.append(name if e == 1 else f"{name}^{e}")
    return " * ".join(parts)


def _render_coeff(c) -> str:
    if isinstance(c, Fraction) and c.denominator == 1:
        return str(c.numerator)
    return str(c)


# -- polynomials ------------------------------------------------------------

class SparsePolynomial:
    """Immutable sparse polynomial over ``QQ`` or ``GF(p)``."""

    __slots__ = ("terms", "ring")

    def __init__(self, terms=(), ring=QQ):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            acc[m] = acc.get(m, 0) + c
        self.ring = ring
        self.terms = {m: ring(c) for m, c in acc.items() if ring(c) != 0}

    @classmethod
    def _trusted(cls, terms: dict, ring) -> "SparsePolynomial":
        obj = object.__new__(cls)
        obj.terms = terms
        obj.ring = ring
        return obj

    @classmethod
    def _from_accumulator(cls, acc: dict, ring) -> "SparsePolynomial":
        if ring.modulus:
            p = ring.modulus
            terms = {m: c % p for m, c in acc.items() if c % p}
        else:
            terms = {m: Fraction(c) for m, c in acc.items() if c}
        return cls._trusted(terms, ring)

    @classmethod
    def zero(cls, ring=QQ):
        return cls._trusted({}, ring)

    @classmethod
    def constant(cls, c, ring=QQ):
        return cls({ONE: c}, ring)

    @classmethod
    def from_monomial(cls, m: Monomial, ring=QQ, coeff=1):
        return cls({m: coeff}, ring)

    # -- queries --
    def __iter__(self) -> Iterator:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, m: Monomial):
        return self.terms.get(m, self.ring.zero)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: monomial_key(t[0]))

    def bigrades(self) -> set:
        return {bigrade(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.bigrades()) <= 1

    def by_weight(self) -> dict:
        parts: dict = {}
        for m, c in self.terms.items():
            parts.setdefault(weight(m), {})[m] = c
        return {w: SparsePolynomial._trusted(t, self.ring) for w, t in parts.items()}

    def to_ring(self, ring) -> "SparsePolynomial":
        """Reduce exact coefficients into ``ring`` (identity when rings agree)."""
        if ring == self.ring:
            return self
        if self.ring.modulus and ring.modulus != self.ring.modulus:
            raise RingMismatch(f"cannot map {self.ring} to {ring}")
        return SparsePolynomial(self.terms, ring)

    # -- arithmetic --
    def _check(self, other):
        if not isinstance(other, SparsePolynomial):
            return False
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return True

    def __add__(self, other):
        if not self._check(other):
            other = type(self).constant(other, self.ring)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) + c
        return type(self)._from_accumulator(acc, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._from_accumulator({m: -c for m, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        if not self._check(other):
            other = type(self).constant(other, self.ring)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SparsePolynomial":
        c = self.ring(c)
        return type(self)._from_accumulator({m: c * v for m, v in self.terms.items()}, self.ring)

    def __mul__(self, other):
        if not self._check(other):
            return self.scale(other)
        acc: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return type(self)._from_accumulator(acc, self.ring)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        result = type(self).constant(1, self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, SparsePolynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == type(self).constant(other, self.ring)
        return NotImplemented

    __hash__ = None

    # -- text --
    _render_monomial = staticmethod(render_monomial)

    def render(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            body = _render_coeff(c) if not m else f"{_render_coeff(c)} * {self._render_monomial(m)}"
            if out and body.startswith("-"):
                out.append(" - " + body[1:])
            elif out:
                out.append(" + " + body)
            else:
                out.append(body)
        return "".join(out)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"{type(self).__name__}({self.render()!r}, {self.ring!r})"


def polynomial(terms: Iterable, ring=QQ) -> SparsePolynomial:
    """Build from ``(coefficient, factors)`` pairs, e.g. ``[(3, [X(1,1), (PSI, 2)])]``."""
    return SparsePolynomial([(monomial(*f), c) for c, f in terms], ring)


__all__ = [
    "DEFAULT_PRIMES", "GenusContext", "InvalidIndexPair", "Monomial", "ONE", "PSI",
    "RingMismatch", "Scalar", "SparsePolynomial", "VariableId", "X", "ZERO", "bigrade",
    "code_bigrade", "code_weight", "degree", "has_variable", "make_variable", "mono_from_dict",
    "mono_mul", "monomial", "monomial_key", "polynomial", "render_monomial", "ring_for",
    "split_column_zero", "weight", "x_code",
]
