"""The operators E, F, H on the polynomial ring A.

F is the second-order differential operator

    F = 1/2 sum_{(i,j),(k,l)} (y x[i-1,j-1] x[k-1,l-1] - C(i+k-2, i-1) x[i+k-2,j+l]) d/dx[i,j] d/dx[k,l]
        + sum_{(i,j)} x[i-2,j] d/dx[i,j]

summed over ordered pairs including the diagonal.  On a monomial this means:
distinct factor pairs enter with coefficient ``e_a * e_b``, a factor with
exponent ``e >= 2`` pairs with itself with coefficient ``e (e - 1) / 2``, and the
linear part contributes ``e_a x[i-2,j]``.  All coefficients are integers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .poly import (
    GenusContext,
    Scalar,
    SparsePolynomial,
    ZERO,
    code_bigrade,
    make_variable,
    mono_mul,
    weight,
    x_code,
)


class NotEigenvector(ValueError):
    """The input to :func:`ef_power_rhs` is not an H-eigenvector of the stated weight."""


def binomial(n: int, k: int) -> int:
    """Ordinary binomial coefficient, zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def generalized_binomial(a: int, t: int) -> Fraction:
    """``a (a-1) ... (a-t+1) / t!`` for any integer ``a``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    num = 1
    for r in range(t):
        num *= a - r
    return Fraction(num, math.factorial(t))


class FKernel:
    """F on single monomials for a fixed genus, with integer coefficients.

    ``apply(m)`` returns a tuple of ``(monomial, coefficient)`` pairs with like
    terms combined.  Results are cached.
    """

    def __init__(self, genus: int):
        self.ctx = GenusContext(genus, threads=1)
        self.genus = genus
        self._linear: dict = {}
        self._pair: dict = {}
        self.apply = lru_cache(maxsize=1 << 18)(self._apply)

    def _resolve(self, i: int, j: int):
        """(scalar, codes) for x[i,j], or None when it vanishes."""
        v = make_variable(self.ctx, i, j)
        if v is ZERO:
            return None
        if isinstance(v, Scalar):
            return v.value, ()
        return 1, (v.code,)

    def _linear_term(self, a: int):
        if a not in self._linear:
            i, j = code_bigrade(a)
            self._linear[a] = self._resolve(i - 2, j)
        return self._linear[a]

    def _pair_terms(self, a: int, b: int) -> tuple:
        key = (a, b) if a <= b else (b, a)
        cached = self._pair.get(key)
        if cached is not None:
            return cached
        (i, j), (k, l) = code_bigrade(a), code_bigrade(b)
        out = []
        u, w = self._resolve(i - 1, j - 1), self._resolve(k - 1, l - 1)
        if u is not None and w is not None:
            out.append((u[0] * w[0], (0,) + u[1] + w[1]))
        c = binomial(i + k - 2, i - 1)
        if c:
            merged = self._resolve(i + k - 2, j + l)
            if merged is not None:
                out.append((-c * merged[0], merged[1]))
        self._pair[key] = out = tuple(out)
        return out

    def _apply(self, m) -> tuple:
        acc: dict = {}
        base = dict(m)
        xs = [(c, e) for c, e in m if c and code_bigrade(c)[0] > 0]

        def emit(coef, remove, add):
            d = dict(base)
            for c in remove:
                d[c] -= 1
            for c in add:
                d[c] = d.get(c, 0) + 1
            key = tuple(sorted((c, e) for c, e in d.items() if e))
            acc[key] = acc.get(key, 0) + coef

        for idx, (a, ea) in enumerate(xs):
            lin = self._linear_term(a)
            if lin is not None:
                emit(ea * lin[0], (a,), lin[1])
            if ea >= 2:
                for coef, codes in self._pair_terms(a, a):
                    emit(ea * (ea - 1) // 2 * coef, (a, a), codes)
            for b, eb in xs[idx + 1:]:
                for coef, codes in self._pair_terms(a, b):
                    emit(ea * eb * coef, (a, b), codes)
        return tuple((k, v) for k, v in acc.items() if v)


@lru_cache(maxsize=64)
def kernel_for(genus: int) -> FKernel:
    return FKernel(genus)


def apply_E(ctx: GenusContext, poly: SparsePolynomial) -> SparsePolynomial:
    """Multiplication by x[2,0]."""
    x20 = ((x_code(2, 0), 1),)
    return SparsePolynomial._trusted({mono_mul(m, x20): c for m, c in poly.terms.items()}, poly.ring)


def apply_F(ctx: GenusContext, poly: SparsePolynomial) -> SparsePolynomial:
    kernel = kernel_for(ctx.genus)
    acc: dict = {}
    for m, c in poly.terms.items():
        for m2, k in kernel.apply(m):
            acc[m2] = acc.get(m2, 0) + c * k
    return SparsePolynomial._from_accumulator(acc, poly.ring)


def apply_H(ctx: GenusContext, poly: SparsePolynomial) -> SparsePolynomial:
    """Scale each weight-i component by ``i - g``."""
    g = ctx.genus
    return SparsePolynomial._from_accumulator(
        {m: (weight(m) - g) * c for m, c in poly.terms.items()}, poly.ring
    )


def apply_F_power(ctx: GenusContext, poly: SparsePolynomial, nu: int) -> SparsePolynomial:
    for _ in range(nu):
        if poly.is_zero():
            break
        poly = apply_F(ctx, poly)
    return poly


def apply_E_power(ctx: GenusContext, poly: SparsePolynomial, r: int) -> SparsePolynomial:
    if r == 0:
        return poly
    x20 = ((x_code(2, 0), r),)
    return SparsePolynomial._trusted({mono_mul(m, x20): c for m, c in poly.terms.items()}, poly.ring)


def ef_power_rhs(ctx: GenusContext, alpha: SparsePolynomial, mu: int, r: int, s: int) -> SparsePolynomial:
    """``F^s E^r (alpha)`` rewritten as a combination of ``E^{r-t} F^{s-t} (alpha)``.

    ``alpha`` must satisfy ``H(alpha) = mu * alpha``.
    """
    if apply_H(ctx, alpha) != alpha.scale(mu):
        raise NotEigenvector(f"H(alpha) != {mu} * alpha")
    ring = alpha.ring
    total = SparsePolynomial.zero(ring)
    for t in range(min(r, s) + 1):
        coef = (
            (-1) ** t
            * Fraction(math.factorial(s), math.factorial(s - t))
            * Fraction(math.factorial(r), math.factorial(r - t))
            * generalized_binomial(mu + r - s + t - 1, t)
        )
        if coef:
            term = apply_E_power(ctx, apply_F_power(ctx, alpha, s - t), r - t)
            total = total + term.scale(ring(coef))
    return total


__all__ = [
    "FKernel", "NotEigenvector", "apply_E", "apply_E_power", "apply_F", "apply_F_power", "apply_H",
    "binomial", "generalized_binomial", "kernel_for", "ef_power_rhs",
]
