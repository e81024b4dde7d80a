"""Relation rows F^{g+1}(alpha) over the column-zero basis Mon_(0,2i).

Two strategies produce identical rows:

``direct``
    iterate :func:`apply_F` on the source and project at the end.
``table``
    F commutes with multiplication by weight-0 variables (y and x[0,2t]), so
    F^{w/2}(c * m) = c * F^{w/2}(m) whenever c has weight 0.  An
    :class:`ImageTable` memoizes the column-zero image of every monomial
    built from positive-weight variables only.  A source's row is then the
    image of its positive-weight part, scattered through multiplication by
    the weight-0 part.  Intermediate images are shared by many sources, which
    is what makes full runs at g ~ 10 cheap.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from .enumeration import (
    column_zero_basis,
    enumerate_mon_sources,
    socle_monomial,
    socle_partitions,
)
from .poly import (
    GenusContext,
    Monomial,
    SparsePolynomial,
    bigrade,
    mono_mul,
    split_column_zero,
)
from .rings import ring_for
from .sl2 import apply_F_power, kernel_for


class BadSourceBigrade(ValueError):
    pass


STRATEGIES = ("table", "direct")


@dataclass(frozen=True)
class RelationRow:
    source: Monomial
    codim: int
    entries: tuple  # ((position, coefficient), ...) ascending by position

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def dense(self, ncols: int, modulus: int) -> np.ndarray:
        out = np.zeros(ncols, dtype=np.int64 if modulus else object)
        for pos, c in self.entries:
            out[pos] = c
        return out


@dataclass
class RowBlock:
    """A chunk of consecutive relation rows, dense over the codim's basis."""

    codim: int
    sources: list
    matrix: np.ndarray
    modulus: int

    def nonzero_mask(self) -> np.ndarray:
        if self.matrix.size == 0:
            return np.zeros(len(self.sources), dtype=bool)
        return np.asarray((self.matrix != 0).any(axis=1), dtype=bool)

    def rows(self) -> Iterator[RelationRow]:
        for src, vec in zip(self.sources, self.matrix):
            nz = np.flatnonzero(vec)
            yield RelationRow(src, self.codim, tuple((int(k), int(vec[k])) for k in nz))


@dataclass
class GenerationPlan:
    genus: int
    codim_min: int = 0
    codim_max: Optional[int] = None
    order: str = "socle"
    targets: dict = field(default_factory=dict)  # codim -> rank at which to stop
    modulus: int = 2147483647
    strategy: str = "table"
    chunk_size: int = 2048

    def __post_init__(self):
        if self.codim_max is None:
            self.codim_max = self.genus + 1
        if self.codim_min < 0 or self.codim_max < self.codim_min:
            raise ValueError(f"bad codim range {self.codim_min}..{self.codim_max}")
        if any(t < 0 for t in self.targets.values()):
            raise ValueError("early-stop targets must be nonnegative")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be positive")
        ring_for(self.modulus)  # validates the modulus

    @property
    def codims(self) -> range:
        return range(self.codim_min, self.codim_max + 1)


@dataclass
class GenerationSummary:
    codim: int
    sources: int = 0
    emitted: int = 0
    zero_rows: int = 0
    skipped: int = 0
    stopped_early: bool = False
    seconds: float = 0.0


# -- the image table --------------------------------------------------------

def _level(m: Monomial) -> int:
    return bigrade(m)[1]


class ImageTable:
    """Column-zero images F^{w/2}(m) of positive-weight monomials m.

    Images are dense vectors over Mon_(0, level(m)); ``None`` marks a zero
    image.  Vectors are int64 in [0, p) for a prime modulus, Python ints
    (object arrays) for modulus 0.
    """

    def __init__(self, ctx: GenusContext, modulus: int):
        ring_for(modulus)
        self.ctx = ctx
        self.modulus = modulus
        self._kernel = kernel_for(ctx.genus)
        self._images: dict = {(): self._new(1)}
        self._images[()][0] = 1
        self._maps: dict = {}

    def __len__(self):
        return len(self._images)

    def _new(self, n: int) -> np.ndarray:
        if self.modulus:
            return np.zeros(n, dtype=np.int64)
        out = np.empty(n, dtype=object)
        out[:] = 0
        return out

    def basis(self, level: int):
        return column_zero_basis(self.ctx, level // 2)

    def scatter_map(self, prefix: Monomial, src_level: int) -> np.ndarray:
        """Positions of ``prefix * b`` in Mon_(0, src_level + level(prefix)) for b in Mon_(0, src_level)."""
        key = (prefix, src_level)
        got = self._maps.get(key)
        if got is None:
            src = self.basis(src_level)
            dst = self.basis(src_level + _level(prefix)).index
            got = np.fromiter((dst[mono_mul(prefix, b)] for b in src), dtype=np.intp, count=len(src))
            self._maps[key] = got
        return got

    def image(self, m: Monomial):
        try:
            return self._images[m]
        except KeyError:
            pass
        p = self.modulus
        out = None
        for m2, c in self._kernel._apply(m):
            prefix, red = split_column_zero(m2)
            v = self.image(red)
            if v is None:
                continue
            if out is None:
                out = self._new(len(self.basis(_level(m))))
            idx = self.scatter_map(prefix, _level(red))
            if p:
                out[idx] = (out[idx] + (c % p) * v) % p
            else:
                out[idx] += c * v
        if out is not None and not out.any():
            out = None
        self._images[m] = out
        return out

    def column_zero_image(self, m: Monomial):
        """F^{w/2}(m) as a vector over Mon_(0, level(m)), or None when zero."""
        prefix, red = split_column_zero(m)
        v = self.image(red)
        if v is None:
            return None
        if not prefix:
            return v
        out = self._new(len(self.basis(_level(m))))
        out[self.scatter_map(prefix, _level(red))] = v
        return out

    def fill_rows(self, sources: list, codim: int) -> np.ndarray:
        n = len(self.basis(2 * codim))
        mat = np.zeros((len(sources), n), dtype=np.int64) if self.modulus else np.zeros((len(sources), n), dtype=object)
        for k, src in enumerate(sources):
            prefix, red = split_column_zero(src)
            v = self.image(red)
            if v is not None:
                mat[k, self.scatter_map(prefix, _level(red))] = v
        return mat


_TABLES: dict = {}


def image_table(ctx: GenusContext, modulus: int) -> ImageTable:
    """Shared table per (genus, modulus); only the most recent few are kept."""
    key = (ctx.genus, modulus)
    tab = _TABLES.get(key)
    if tab is None:
        if len(_TABLES) >= 2:
            _TABLES.pop(next(iter(_TABLES)))
        tab = _TABLES[key] = ImageTable(ctx, modulus)
    return tab


def clear_tables() -> None:
    _TABLES.clear()


# -- single rows ------------------------------------------------------------

def _check_source(ctx: GenusContext, alpha: Monomial) -> int:
    w, j = bigrade(alpha)
    if w != 2 * ctx.genus + 2 or j % 2:
        raise BadSourceBigrade(f"source has bigrade ({w},{j}); need ({2 * ctx.genus + 2}, 2i)")
    return j // 2


def project(ctx: GenusContext, poly: SparsePolynomial, codim: int) -> tuple:
    """Coordinates of a column-zero polynomial over Mon_(0, 2*codim)."""
    index = column_zero_basis(ctx, codim).index
    entries = []
    for m, c in poly.terms.items():
        if m not in index:
            raise ValueError(f"term {m} is not in Mon_(0,{2 * codim})")
        entries.append((index[m], c))
    return tuple(sorted(entries))


def relation_for(ctx: GenusContext, alpha: Monomial, modulus: int = 0, strategy: str = "direct") -> RelationRow:
    """The coordinates of F^{g+1}(alpha) over Mon_(0,2i).

    Sources with an x[2,0] factor are accepted (their row is zero), so the
    unfiltered source set can be compared against the filtered one.
    """
    i = _check_source(ctx, alpha)
    if strategy == "table":
        v = image_table(ctx, modulus).column_zero_image(alpha)
        if v is None:
            return RelationRow(alpha, i, ())
        return RelationRow(alpha, i, tuple((int(k), int(v[k])) for k in np.flatnonzero(v)))
    ring = ring_for(modulus)
    poly = apply_F_power(ctx, SparsePolynomial.from_monomial(alpha, ring), ctx.genus + 1)
    return RelationRow(alpha, i, tuple((k, int(c)) for k, c in project(ctx, poly, i)))


def _direct_rows(args) -> list:
    genus, modulus, sources = args
    ctx = GenusContext(genus, threads=1)
    return [relation_for(ctx, s, modulus, "direct") for s in sources]


def _rows_to_matrix(rows: list, ncols: int, modulus: int) -> np.ndarray:
    mat = np.zeros((len(rows), ncols), dtype=np.int64 if modulus else object)
    for k, row in enumerate(rows):
        for pos, c in row.entries:
            mat[k, pos] = c
    return mat


# -- streaming --------------------------------------------------------------

Sink = Callable[[RowBlock], Optional[bool]]


def _chunks(seq: list, size: int, first: Optional[int] = None) -> Iterator[list]:
    """Consecutive slices; with ``first`` they start at that size and double up to ``size``."""
    step = min(size, first or size)
    start = 0
    while start < len(seq):
        yield seq[start:start + step]
        start += step
        step = min(size, 2 * step)


def iter_blocks(ctx: GenusContext, plan: GenerationPlan, codim: int,
                include_x20: bool = False) -> Iterator[RowBlock]:
    sources = enumerate_mon_sources(ctx, codim, plan.order, include_x20=include_x20).monomials
    ncols = len(column_zero_basis(ctx, codim))
    # small first chunks: a codim that saturates quickly stops before much work
    first = max(64, 2 * ncols)
    chunks = _chunks(sources, plan.chunk_size, first)
    if plan.strategy == "table":
        table = image_table(ctx, plan.modulus)
        for chunk in chunks:
            yield RowBlock(codim, chunk, table.fill_rows(chunk, codim), plan.modulus)
    elif ctx.threads > 1:
        with ProcessPoolExecutor(max_workers=ctx.threads) as pool:
            work = ((ctx.genus, plan.modulus, c) for c in chunks)
            for chunk, rows in zip(_chunks(sources, plan.chunk_size, first), pool.map(_direct_rows, work)):
                yield RowBlock(codim, chunk, _rows_to_matrix(rows, ncols, plan.modulus), plan.modulus)
    else:
        for chunk in chunks:
            rows = _direct_rows((ctx.genus, plan.modulus, chunk))
            yield RowBlock(codim, chunk, _rows_to_matrix(rows, ncols, plan.modulus), plan.modulus)


def generate_codim(ctx: GenusContext, plan: GenerationPlan, codim: int, sink: Sink,
                   include_x20: bool = False) -> GenerationSummary:
    """Stream the codim-``codim`` relation rows to ``sink`` in blocks.

    Zero rows are counted and dropped.  A truthy return from the sink stops
    generation; the remaining sources are reported as skipped.
    """
    t0 = time.perf_counter()
    summary = GenerationSummary(codim)
    total = len(enumerate_mon_sources(ctx, codim, plan.order, include_x20=include_x20))
    summary.sources = total
    seen = 0
    for block in iter_blocks(ctx, plan, codim, include_x20):
        seen += len(block.sources)
        mask = block.nonzero_mask()
        summary.zero_rows += int((~mask).sum())
        live = RowBlock(codim, [s for s, keep in zip(block.sources, mask) if keep], block.matrix[mask], block.modulus)
        summary.emitted += len(live.sources)
        if sink(live):
            summary.stopped_early = seen < total
            break
    summary.skipped = total - seen
    summary.seconds = time.perf_counter() - t0
    return summary


def socle_relations(ctx: GenusContext, sink: Sink, modulus: int = 0) -> GenerationSummary:
    """F^nu(M_lambda') over Mon_(0,2g-2) for every partition of k <= g-1 except (g-1)."""
    t0 = time.perf_counter()
    codim = ctx.genus - 1
    table = image_table(ctx, modulus)
    summary = GenerationSummary(codim)
    sources, vectors = [], []
    for lam in socle_partitions(ctx):
        got = socle_monomial(ctx, lam)
        if got is None:
            summary.skipped += 1
            continue
        m, _nu = got
        summary.sources += 1
        v = table.column_zero_image(m)
        if v is None:
            summary.zero_rows += 1
            continue
        sources.append(m)
        vectors.append(v)
    n = len(column_zero_basis(ctx, codim))
    mat = np.zeros((len(vectors), n), dtype=np.int64 if modulus else object)
    for k, v in enumerate(vectors):
        mat[k] = v
    summary.emitted = len(sources)
    sink(RowBlock(codim, sources, mat, modulus))
    summary.seconds = time.perf_counter() - t0
    return summary


# -- triplet files ----------------------------------------------------------

def write_triplets(path, blocks: Iterable[RowBlock], ncols: int, modulus: int, genus: int, codim: int) -> int:
    """Write the relation matrix as ``row col value`` triples; returns the row count.

    Zero rows count toward ROWS but contribute no triples.
    """
    triples, nrows = [], 0
    for block in blocks:
        for k, vec in enumerate(block.matrix):
            for col in np.flatnonzero(vec):
                triples.append(f"{nrows + k} {int(col)} {int(vec[col])}")
        nrows += len(block.sources)
    with open(path, "w") as fh:
        fh.write(f"{nrows} {ncols} {modulus} {genus} {codim}\n")
        for line in triples:
            fh.write(line + "\n")
    return nrows


@dataclass
class TripletMatrix:
    rows: int
    cols: int
    modulus: int
    genus: int
    codim: int
    entries: list  # (row, col, value)

    def dense(self) -> np.ndarray:
        mat = np.zeros((self.rows, self.cols), dtype=np.int64 if self.modulus else object)
        for r, c, v in self.entries:
            mat[r, c] = v
        return mat


def read_triplets(path) -> TripletMatrix:
    with open(path) as fh:
        head = fh.readline().split()
        if len(head) != 5:
            raise ValueError(f"{path}: malformed header")
        rows, cols, modulus, genus, codim = map(int, head)
        entries = []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            r, c, v = map(int, line.split())
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"{path}:{lineno}: index out of range")
            entries.append((r, c, v))
    return TripletMatrix(rows, cols, modulus, genus, codim, entries)
