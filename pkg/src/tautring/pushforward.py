"""From column zero to kappa and psi classes, and down to M_g.

On M_{g,1} the column-zero generators are y = psi and x[0,2i], which is

    (1/2^{i+1}) * sum_{j=0}^{i} C(i+1, j+1) psi^{i-j} kappa_j + psi^i

with kappa_0 = 2g - 2.  Forgetting the point sends psi^s kappa^lambda to
kappa_{s-1} kappa^lambda (kappa_{-1} = 0).  The dimension of the codim-c
piece on M_g is p(c) minus the rank of the pushed codim-(c+1) relations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np

from .enumeration import column_zero_basis, partition_count, partitions
from .linalg import EliminationState, matmul_mod
from .poly import (
    ONE,
    GenusContext,
    Monomial,
    SparsePolynomial,
    code_bigrade,
    mono_mul,
)
from .rings import QQ, ring_for


class IndexOutOfRange(ValueError):
    pass


class NotColumnZero(ValueError):
    pass


# -- kappa polynomials ------------------------------------------------------

PSI_CODE = 0


def _render_kappa_monomial(m: Monomial) -> str:
    parts = []
    for c, e in m:
        name = "psi" if c == PSI_CODE else f"kappa[{c}]"
        parts.append(name if e == 1 else f"{name}^{e}")
    return " * ".join(parts)


class KappaPolynomial(SparsePolynomial):
    """Polynomial in psi (code 0) and kappa_j (code j >= 1).

    kappa_0 and kappa_{-1} never appear as variables; :func:`kappa` resolves
    them to 2g - 2 and 0.
    """

    __slots__ = ()
    _render_monomial = staticmethod(_render_kappa_monomial)

    @staticmethod
    def codim_of(m: Monomial) -> int:
        return sum(max(c, 1) * e for c, e in m)

    def codims(self) -> set:
        return {self.codim_of(m) for m in self.terms}

    def as_partition_map(self) -> dict:
        """{(s, lambda): coefficient} with lambda weakly decreasing."""
        out = {}
        for m, c in self.terms.items():
            s = dict(m).get(PSI_CODE, 0)
            lam = tuple(sorted((k for k, e in m if k for _ in range(e)), reverse=True))
            out[(s, lam)] = c
        return out


def psi(ring=QQ, power: int = 1) -> KappaPolynomial:
    return KappaPolynomial({((PSI_CODE, power),) if power else ONE: 1}, ring)


def kappa(ctx: GenusContext, j: int, ring=QQ) -> KappaPolynomial:
    if j < 0:
        return KappaPolynomial.zero(ring)
    if j == 0:
        return KappaPolynomial.constant(2 * ctx.genus - 2, ring)
    return KappaPolynomial({((j, 1),): 1}, ring)


def p_to_kappa(ctx: GenusContext, i: int, ring=QQ) -> KappaPolynomial:
    """The kappa/psi expression of x[0,2i]."""
    if not 0 <= i <= ctx.genus - 1:
        raise IndexOutOfRange(f"x[0,{2 * i}] needs 0 <= i <= g-1 = {ctx.genus - 1}")
    total = psi(ring, i)
    scale = Fraction(1, 2 ** (i + 1))
    for j in range(i + 1):
        term = psi(ring, i - j) * kappa(ctx, j, ring)
        total = total + term.scale(scale * math.comb(i + 1, j + 1))
    return total


@lru_cache(maxsize=256)
def _p_to_kappa_cached(genus: int, i: int, modulus: int) -> KappaPolynomial:
    return p_to_kappa(GenusContext(genus, threads=1), i, ring_for(modulus))


def column0_to_kappa(ctx: GenusContext, poly: SparsePolynomial) -> KappaPolynomial:
    """Substitute y -> psi and x[0,2t] -> p_to_kappa(t)."""
    ring = poly.ring
    total = KappaPolynomial.zero(ring)
    for m, c in poly.terms.items():
        term = KappaPolynomial.constant(c, ring)
        for code, e in m:
            if code == 0:
                term = term * psi(ring, e)
                continue
            i, j = code_bigrade(code)
            if i != 0:
                raise NotColumnZero(f"x[{i},{j}] has positive weight")
            term = term * _p_to_kappa_cached(ctx.genus, j // 2, ring.modulus) ** e
        total = total + term
    return total


def q_pushforward(ctx: GenusContext, kp: KappaPolynomial) -> KappaPolynomial:
    """psi^s kappa^lambda -> kappa_{s-1} kappa^lambda."""
    ring = kp.ring
    total = KappaPolynomial.zero(ring)
    for m, c in kp.terms.items():
        s = dict(m).get(PSI_CODE, 0)
        rest = tuple((k, e) for k, e in m if k != PSI_CODE)
        total = total + kappa(ctx, s - 1, ring) * KappaPolynomial({rest: c}, ring)
    return total


@lru_cache(maxsize=64)
def _kappa_col0(genus: int, j: int, modulus: int) -> SparsePolynomial:
    ring = ring_for(modulus)
    ctx = GenusContext(genus, threads=1)
    if j == 0:
        return SparsePolynomial.constant(2 * genus - 2, ring)
    y = ctx.y(ring)
    out = ctx.x(0, 2 * j, ring).scale(2 ** (j + 1)) - (y ** j).scale(2 ** (j + 1))
    for k in range(j):
        out = out - (y ** (j - k) * _kappa_col0(genus, k, modulus)).scale(math.comb(j + 1, k + 1))
    return out


def kappa_to_column0(ctx: GenusContext, kp: KappaPolynomial) -> SparsePolynomial:
    """Inverse of :func:`column0_to_kappa` (kappa indices up to g - 1)."""
    ring = kp.ring
    total = SparsePolynomial.zero(ring)
    for m, c in kp.terms.items():
        term = SparsePolynomial.constant(c, ring)
        for code, e in m:
            if code == PSI_CODE:
                term = term * ctx.y(ring) ** e
            elif code <= ctx.genus - 1:
                term = term * _kappa_col0(ctx.genus, code, ring.modulus) ** e
            else:
                raise IndexOutOfRange(f"kappa[{code}] has no column-zero expression for g = {ctx.genus}")
        total = total + term
    return total


# -- dimensions on M_g ------------------------------------------------------

@dataclass
class MgBasis:
    codim: int
    partitions: list
    index: dict

    def __len__(self):
        return len(self.partitions)


@lru_cache(maxsize=None)
def mg_basis(c: int) -> MgBasis:
    parts = list(partitions(c))
    return MgBasis(c, parts, {lam: k for k, lam in enumerate(parts)})


def _dtype(modulus):
    return np.int64 if modulus else object


@lru_cache(maxsize=64)
def pushforward_matrix(genus: int, c: int, modulus: int) -> np.ndarray:
    """Row m: coordinates of q_*(column0_to_kappa(m)) over partitions of c, m in Mon_(0,2c+2)."""
    ctx = GenusContext(genus, threads=1)
    ring = ring_for(modulus)
    src = column_zero_basis(ctx, c + 1)
    basis = mg_basis(c)
    mat = np.zeros((len(src), len(basis)), dtype=_dtype(modulus))
    if not modulus:
        mat.fill(Fraction(0))
    for r, m in enumerate(src):
        pushed = q_pushforward(ctx, column0_to_kappa(ctx, SparsePolynomial({m: 1}, ring)))
        for (s, lam), v in pushed.as_partition_map().items():
            if s or sum(lam) != c:
                raise AssertionError(f"pushforward left codim {c}: {(s, lam)}")
            mat[r, basis.index[lam]] = v
    return mat


def _multiply_rows(ctx: GenusContext, rows: np.ndarray, i: int, m: Monomial, modulus: int) -> np.ndarray:
    """Rows over Mon_(0,2i) multiplied by the column-zero monomial m."""
    src = column_zero_basis(ctx, i)
    level = sum(code_bigrade(c)[1] * e for c, e in m)
    dst = column_zero_basis(ctx, i + level // 2)
    idx = np.fromiter((dst.index[mono_mul(m, b)] for b in src), dtype=np.intp, count=len(src))
    out = np.zeros((rows.shape[0], len(dst)), dtype=_dtype(modulus))
    if not modulus:
        out.fill(Fraction(0))
    out[:, idx] = rows
    return out


def pushed_relations(ctx: GenusContext, c: int, spans: Mapping, modulus: int):
    """Generator over blocks of pushed codim-(c+1) relations, as rows over MgBasis(c).

    ``spans[i]`` is a 2-d array whose rows span the codim-i relations on
    M_{g,1}.  Each is multiplied by every monomial of Mon_(0, 2(c+1-i)).
    """
    P = pushforward_matrix(ctx.genus, c, modulus)
    for i in range(c + 2):
        rows = spans.get(i)
        if rows is None or len(rows) == 0:
            continue
        for m in column_zero_basis(ctx, c + 1 - i):
            prod = _multiply_rows(ctx, np.asarray(rows), i, m, modulus)
            if modulus:
                yield matmul_mod(prod % modulus, P, modulus)
            else:
                yield prod.dot(P)


def mg_dimension(ctx: GenusContext, c: int, spans: Mapping, modulus: int) -> tuple:
    """(generators p(c), rank of pushed relations, rows fed); dimension is p(c) - rank."""
    state = EliminationState(partition_count(c), modulus)
    fed = 0
    for block in pushed_relations(ctx, c, spans, modulus):
        fed += block.shape[0]
        state.absorb_block(block)
        if state.full:
            break
    return partition_count(c), state.rank, fed


def kappa1_power_vector(ctx: GenusContext, modulus: int) -> np.ndarray:
    """kappa_1^{g-1} over Mon_(0, 2g-2)."""
    ring = ring_for(modulus)
    k1 = kappa_to_column0(ctx, kappa(ctx, 1, ring))
    poly = k1 ** (ctx.genus - 1)
    basis = column_zero_basis(ctx, ctx.genus - 1)
    vec = np.zeros(len(basis), dtype=_dtype(modulus))
    for m, c in poly.terms.items():
        vec[basis.index[m]] = c
    return vec


def kappa1_vanishes(ctx: GenusContext, state: EliminationState) -> bool:
    """Whether kappa_1^{g-1} lies in the span held by ``state`` (codim g-1 relations)."""
    return state.contains(kappa1_power_vector(ctx, state.modulus))


__all__ = [
    "IndexOutOfRange", "KappaPolynomial", "MgBasis", "NotColumnZero", "column0_to_kappa", "kappa",
    "kappa1_power_vector", "kappa1_vanishes", "kappa_to_column0", "mg_basis", "mg_dimension",
    "p_to_kappa", "psi", "pushed_relations", "pushforward_matrix", "q_pushforward",
]
