"""Rank of relation matrices over GF(p), with an exact rational oracle.

:class:`EliminationState` keeps a reduced row echelon basis of everything
absorbed so far.  Rows can be fed one at a time (:meth:`absorb_row`) or in
blocks (:meth:`absorb_block`).  A block is first reduced against the existing
pivots with one modular matrix product, and only its surviving rows go through
a column sweep.  Both paths end in the same echelon form, because the reduced
row echelon basis of a row space is unique.

Modulus 0 runs the same code on Python ``Fraction`` objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .rings import ring_for


class ColumnOverflow(IndexError):
    pass


class Absorbed(int):
    """Returned by :meth:`EliminationState.absorb_row` when the rank grew; the value is the new pivot column."""


class Dependent:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __bool__(self):
        return False

    def __repr__(self):
        return "Dependent"


DEPENDENT = Dependent()

_LIMB = 11
_CHUNK = 2048  # 2^11 * 2^11 * 2^31 = 2^53: float64 sums stay exact


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``a @ b mod p`` for int64 matrices with entries in [0, p), p < 2^31.

    ``a`` is split into 11-bit limbs and each limb product runs through
    float64 BLAS with the inner dimension cut into pieces of 2048, which keeps
    every partial sum below 2^53.
    """
    if a.shape[1] != b.shape[0]:
        raise ValueError("shape mismatch")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if a.size == 0 or b.size == 0:
        return out
    mask = (1 << _LIMB) - 1
    for start in range(0, a.shape[1], _CHUNK):
        bf = b[start:start + _CHUNK].astype(np.float64)
        piece = a[:, start:start + _CHUNK]
        shift = 0
        while shift < 31:
            limb = ((piece >> shift) & mask).astype(np.float64)
            part = (limb @ bf).astype(np.int64) % p
            out = (out + part * pow(2, shift, p)) % p
            shift += _LIMB
    return out


def _matmul_exact(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a.dot(b) if a.size and b.size else np.zeros((a.shape[0], b.shape[1]), dtype=object)


def _zeros(shape, modulus):
    if modulus:
        return np.zeros(shape, dtype=np.int64)
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


class EliminationState:
    """Reduced row echelon basis of the rows seen so far.

    ``rows`` holds one normalized row per pivot, ordered by pivot column, and
    every row is zero in every other pivot column.
    """

    def __init__(self, ncols: int, modulus: int):
        self.ring = ring_for(modulus)
        self.modulus = modulus
        self.ncols = ncols
        self.pivots: list = []
        self.rows = _zeros((0, ncols), modulus)
        self.seen = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def full(self) -> bool:
        return self.rank == self.ncols

    def pivot_map(self) -> dict:
        return {c: self.rows[k] for k, c in enumerate(self.pivots)}

    # -- input normalization

    def _coerce(self, block) -> np.ndarray:
        arr = np.asarray(block)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d block")
        if arr.shape[1] != self.ncols:
            raise ColumnOverflow(f"block has {arr.shape[1]} columns, state has {self.ncols}")
        if self.modulus:
            return np.asarray(arr, dtype=np.int64) % self.modulus
        out = np.empty(arr.shape, dtype=object)
        out[...] = [[Fraction(v) for v in r] for r in arr.tolist()]
        return out

    def _sparse_to_dense(self, entries) -> np.ndarray:
        vec = _zeros((1, self.ncols), self.modulus)
        for col, val in entries:
            if not 0 <= col < self.ncols:
                raise ColumnOverflow(f"column {col} outside 0..{self.ncols - 1}")
            val = self.ring(val)
            vec[0, col] = (vec[0, col] + val) % self.modulus if self.modulus else vec[0, col] + val
        return vec

    # -- elimination

    def _reduce(self, block: np.ndarray) -> np.ndarray:
        """Subtract pivot-row combinations so the block vanishes on pivot columns."""
        if not self.pivots or block.shape[0] == 0:
            return block
        coeffs = block[:, self.pivots]
        if self.modulus:
            return (block - matmul_mod(coeffs, self.rows, self.modulus)) % self.modulus
        return block - _matmul_exact(coeffs, self.rows)

    def _sweep(self, block: np.ndarray):
        """Row echelon sweep of an already-reduced block; returns (pivot columns, RREF rows)."""
        p = self.modulus
        m = block.copy()
        pivots = []
        r = 0
        for col in range(self.ncols):
            if r == m.shape[0]:
                break
            nz = np.flatnonzero(m[r:, col] != 0)
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                m[[r, k]] = m[[k, r]]
            inv = self.ring.invert(int(m[r, col]) if p else m[r, col])
            m[r] = (m[r] * inv) % p if p else m[r] * inv
            others = np.flatnonzero(m[:, col] != 0)
            others = others[others != r]
            if others.size:
                f = m[others, col][:, None]
                if p:
                    m[others] = (m[others] - f * m[r][None, :]) % p
                else:
                    m[others] = m[others] - f * m[r][None, :]
            pivots.append(col)
            r += 1
        return pivots, m[:r]

    def _install(self, new_pivots: list, new_rows: np.ndarray) -> None:
        if not new_pivots:
            return
        if self.pivots:
            # clear the new pivot columns out of the old rows
            coeffs = self.rows[:, new_pivots]
            if self.modulus:
                old = (self.rows - matmul_mod(coeffs, new_rows, self.modulus)) % self.modulus
            else:
                old = self.rows - _matmul_exact(coeffs, new_rows)
        else:
            old = self.rows
        pivots = self.pivots + list(new_pivots)
        rows = np.concatenate([old, new_rows]) if len(old) else new_rows
        order = np.argsort(pivots, kind="stable")
        self.pivots = [pivots[k] for k in order]
        self.rows = rows[order]

    def absorb_block(self, block, target: Optional[int] = None) -> int:
        """Absorb a dense block of rows; returns how many pivots were added.

        Rows are processed in slices of ``ncols`` so a saturated state stops
        early.  With ``target`` set, absorption also stops once the rank
        reaches it.
        """
        block = self._coerce(block)
        added = 0
        step = max(self.ncols, 64)
        for start in range(0, block.shape[0], step):
            if self.full or (target is not None and self.rank >= target):
                break
            part = block[start:start + step]
            self.seen += part.shape[0]
            part = self._reduce(part)
            live = part[np.asarray((part != 0).any(axis=1), dtype=bool)] if part.size else part
            if live.shape[0]:
                piv, rows = self._sweep(live)
                self._install(piv, rows)
                added += len(piv)
        return added

    def absorb_row(self, row):
        """Absorb one row, given as ``RelationRow``, a ``(col, value)`` list, or a dense sequence.

        Returns an :class:`Absorbed` carrying the new pivot column, or ``DEPENDENT``.
        """
        entries = getattr(row, "entries", row)
        if isinstance(entries, np.ndarray) and entries.ndim == 1:
            vec = self._coerce(entries[None, :])
        elif entries and not isinstance(entries[0], tuple):
            vec = self._coerce([list(entries)])
        else:
            vec = self._sparse_to_dense(entries)
        self.seen += 1
        vec = self._reduce(vec)
        if not vec.any():
            return DEPENDENT
        piv, rows = self._sweep(vec)
        self._install(piv, rows)
        return Absorbed(piv[0])

    def contains(self, vec) -> bool:
        """True when ``vec`` lies in the span absorbed so far."""
        v = self._coerce(np.asarray(vec).reshape(1, -1))
        return not self._reduce(v).any()

    def echelon(self) -> tuple:
        return tuple(self.pivots), self.rows.copy()


def rank_of(rows: Iterable, p: int, ncols: Optional[int] = None) -> int:
    """Rank over GF(p) (or Q for p = 0) of a dense matrix or a list of sparse rows."""
    if isinstance(rows, np.ndarray):
        if rows.ndim != 2:
            raise ValueError("expected a 2-d array")
        state = EliminationState(rows.shape[1] if ncols is None else ncols, p)
        if rows.shape[0]:
            state.absorb_block(rows)
        return state.rank
    rows = list(rows)
    if ncols is None:
        ncols = 1 + max((c for r in rows for c, _ in getattr(r, "entries", r)), default=-1)
    state = EliminationState(ncols, p)
    for r in rows:
        if state.full:
            break
        state.absorb_row(r)
    return state.rank


@dataclass(frozen=True)
class Disagreement:
    ranks: dict  # modulus -> rank

    def __str__(self):
        return "rank disagreement: " + ", ".join(f"p={p}: {r}" for p, r in self.ranks.items())


def cross_check(rows, primes: Sequence[int], ncols: Optional[int] = None):
    """The common rank over every prime in ``primes``, or a :class:`Disagreement`."""
    if len(primes) < 2:
        raise ValueError("cross_check needs at least two primes")
    ranks = {p: rank_of(rows, p, ncols) for p in primes}
    values = set(ranks.values())
    if len(values) == 1:
        return values.pop()
    return Disagreement(ranks)


def exact_rank(matrix) -> int:
    """Rank over Q by textbook Gaussian elimination on lists of Fractions."""
    m = [[Fraction(v) for v in row] for row in (matrix.tolist() if isinstance(matrix, np.ndarray) else matrix)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        lead = m[rank][col]
        for r in range(rank + 1, len(m)):
            if m[r][col] != 0:
                f = m[r][col] / lead
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank
