"""Partitions and the monomial bases Mon_(i,j).

Counting and enumeration share one table: for the generators relevant to a
target bigrade (in ascending code order), ``suffix[k][a, b]`` is the number of
monomials of bigrade ``(a, b)`` that only use generators ``k, k+1, ...``.
Enumeration walks that table depth-first and never enters a dead branch.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .poly import GenusContext, Monomial, bigrade, code_bigrade, monomial_key, x_code


class InvalidBigrade(ValueError):
    pass


class PartitionOutOfRange(ValueError):
    pass


EXCLUDED = None


# -- partitions -------------------------------------------------------------

@lru_cache(maxsize=None)
def partitions(n: int) -> tuple:
    """All partitions of ``n`` as weakly decreasing tuples, in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []

    def rec(remaining, largest, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for part in range(min(remaining, largest), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(n, n, [])
    return tuple(out)


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    # Euler's pentagonal recurrence
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[n]


def phi(i: int) -> int:
    """p(0) + ... + p(i): the number of column-zero generators in codimension i."""
    return sum(partition_count(k) for k in range(i + 1))


# -- generator tables -------------------------------------------------------

def generators(ctx: GenusContext, max_weight: int, max_level: int, exclude_x20: bool = False) -> list:
    """Codes of the generators with weight <= max_weight and level <= max_level, ascending."""
    codes = []
    if max_level >= 2:
        codes.append(0)
    for j in range(0, min(max_level, ctx.max_level) + 1):
        for i in range(j % 2, min(j + 2, max_weight) + 1, 2):
            if (i, j) == (0, 0) or (exclude_x20 and (i, j) == (2, 0)):
                continue
            codes.append(x_code(i, j))
    return sorted(codes)


@lru_cache(maxsize=256)
def _suffix_tables(genus: int, w: int, j: int, exclude_x20: bool):
    ctx = GenusContext(genus, threads=1)
    codes = generators(ctx, w, j, exclude_x20)
    grades = [code_bigrade(c) for c in codes]
    n = len(codes)
    tables = [None] * (n + 1)
    base = np.zeros((w + 1, j + 1), dtype=np.int64)
    base[0, 0] = 1
    tables[n] = base
    for k in range(n - 1, -1, -1):
        vi, vj = grades[k]
        s = tables[k + 1].copy()
        if vi > 0:
            for a in range(vi, w + 1):
                s[a, vj:] += s[a - vi, : j + 1 - vj]
        else:
            for b in range(vj, j + 1):
                s[:, b] += s[:, b - vj]
        tables[k] = s
    return codes, grades, tables


def _check_bigrade(w: int, j: int) -> None:
    if w < 0 or j < 0 or (w + j) % 2:
        raise InvalidBigrade(f"({w},{j}) is not a bigrade (need nonnegative entries with even sum)")


def count_monomials(ctx: GenusContext, w: int, j: int, exclude_x20: bool = False) -> int:
    """|Mon_(w,j)| (or its x[2,0]-free part) without listing the monomials."""
    _check_bigrade(w, j)
    if (w, j) == (0, 0):
        return 1
    _, _, tables = _suffix_tables(ctx.genus, w, j, exclude_x20)
    return int(tables[0][w, j])


def _enumerate(ctx: GenusContext, w: int, j: int, exclude_x20: bool) -> list:
    codes, grades, tables = _suffix_tables(ctx.genus, w, j, exclude_x20)
    out = []
    if not tables[0][w, j]:
        return out
    stack = [(0, w, j, ())]
    while stack:
        k, a, b, acc = stack.pop()
        if a == 0 and b == 0:
            out.append(acc)
            continue
        vi, vj = grades[k]
        nxt = tables[k + 1]
        e = 0
        while e * vi <= a and e * vj <= b:
            ra, rb = a - e * vi, b - e * vj
            if nxt[ra, rb]:
                stack.append((k + 1, ra, rb, acc + ((codes[k], e),) if e else acc))
            e += 1
    return out


@dataclass
class MonomialBasis:
    bigrade: tuple
    monomials: list
    index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {m: k for k, m in enumerate(self.monomials)}

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __contains__(self, m):
        return m in self.index


@lru_cache(maxsize=512)
def _mon_cached(genus: int, w: int, j: int, exclude_x20: bool) -> MonomialBasis:
    ctx = GenusContext(genus, threads=1)
    if (w, j) == (0, 0):
        return MonomialBasis((0, 0), [()])
    monos = sorted(_enumerate(ctx, w, j, exclude_x20), key=monomial_key)
    return MonomialBasis((w, j), monos)


def enumerate_Mon(ctx: GenusContext, w: int, j: int) -> MonomialBasis:
    """All monomials of bigrade (w, j) in canonical order."""
    _check_bigrade(w, j)
    return _mon_cached(ctx.genus, w, j, False)


def column_zero_basis(ctx: GenusContext, i: int) -> MonomialBasis:
    """Mon_(0,2i): monomials in y and x[0,2t], 1 <= t <= g-1."""
    return enumerate_Mon(ctx, 0, 2 * i)


# -- relation sources -------------------------------------------------------

def source_order_key(m: Monomial) -> tuple:
    """Order used by the ``socle`` strategy: highest level of a factor, then canonical.

    This mirrors ordering socle monomials by the first part of their
    associated partition, which is the level of their leading factor.
    """
    top = max((code_bigrade(c)[1] for c, _ in m if c), default=0)
    return (top, monomial_key(m))


def order_sources(monos: list, order: str = "canonical") -> list:
    if order == "canonical":
        return sorted(monos, key=monomial_key)
    if order in ("socle", "socle-partial-order"):
        return sorted(monos, key=source_order_key)
    if order.startswith("random"):
        _, _, seed = order.partition(":")
        out = sorted(monos, key=monomial_key)
        random.Random(int(seed) if seed else 0).shuffle(out)
        return out
    raise ValueError(f"unknown ordering strategy {order!r}")


def enumerate_mon_sources(ctx: GenusContext, i: int, order: str = "canonical",
                          include_x20: bool = False) -> MonomialBasis:
    """mon_(2g+2, 2i): sources of the codimension-i relations, without x[2,0] factors.

    ``include_x20=True`` gives the unfiltered Mon_(2g+2, 2i).
    """
    if i < 0:
        raise InvalidBigrade(f"codimension must be nonnegative, got {i}")
    w = 2 * ctx.genus + 2
    monos = list(_mon_cached(ctx.genus, w, 2 * i, not include_x20).monomials)
    return MonomialBasis((w, 2 * i), order_sources(monos, order))


def count_mon_sources(ctx: GenusContext, i: int) -> int:
    return count_monomials(ctx, 2 * ctx.genus + 2, 2 * i, exclude_x20=True)


# -- socle monomials --------------------------------------------------------

def socle_monomial(ctx: GenusContext, lam: tuple):
    """The monomial M_{lambda'} attached to a partition of k <= g-1, with its exponent nu.

    Returns ``EXCLUDED`` (None) for lambda = (g-1).  The empty partition is read
    with a leading part 0, so its first factor is x[g+1, g-1].
    """
    g = ctx.genus
    lam = tuple(lam)
    if any(p <= 0 for p in lam) or list(lam) != sorted(lam, reverse=True):
        raise PartitionOutOfRange(f"{lam} is not a partition")
    k = sum(lam)
    if k > g - 1:
        raise PartitionOutOfRange(f"{lam} is a partition of {k} > g-1 = {g - 1}")
    if lam == (g - 1,):
        return EXCLUDED
    first, rest = (lam[0], lam[1:]) if lam else (0, ())
    lead = 2 * first + g - 1 - k
    exps: dict = {}

    def put(i, j, e=1):
        c = x_code(i, j)
        exps[c] = exps.get(c, 0) + e

    put(lead + 2, lead)
    for part in rest:
        put(2 * part + 2, 2 * part)
    if g - 1 - k:
        put(3, 1, g - 1 - k)
    m = tuple(sorted(exps.items()))
    return m, bigrade(m)[0] // 2


def socle_partitions(ctx: GenusContext) -> list:
    """Every partition of every k <= g-1, in the order used for socle relations."""
    return [lam for k in range(ctx.genus) for lam in partitions(k)]
