"""Dimension pipelines and their JSON/CSV reports."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from .enumeration import column_zero_basis, count_mon_sources, count_monomials
from .linalg import Disagreement, EliminationState
from .poly import GenusContext
from .pushforward import kappa1_vanishes, mg_dimension
from .relations import GenerationPlan, generate_codim


class RankDisagreement(RuntimeError):
    def __init__(self, disagreement: Disagreement, codim: int, space: str):
        super().__init__(f"{space} codim {codim}: {disagreement}")
        self.disagreement = disagreement
        self.codim = codim


@dataclass
class CodimRecord:
    codim: int
    generators: int
    sources: int
    rows_absorbed: int
    rank: int
    dimension: int

    def __post_init__(self):
        if self.dimension != self.generators - self.rank:
            raise ValueError(f"codim {self.codim}: dimension must equal generators - rank")
        if self.rank > self.rows_absorbed:
            raise ValueError(f"codim {self.codim}: rank exceeds rows absorbed")


_REPORT_KEYS = ("space", "genus", "primes", "order", "early_stop", "wall_time", "codims", "checks")
_CODIM_KEYS = ("codim", "generators", "sources", "rows_absorbed", "rank", "dimension")


@dataclass
class DimensionReport:
    space: str  # "Mg1" or "Mg"
    genus: int
    primes: list
    order: str
    early_stop: bool
    wall_time: float
    codims: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    @property
    def dims(self) -> list:
        return [r.dimension for r in self.codims]

    def record(self, codim: int) -> CodimRecord:
        for r in self.codims:
            if r.codim == codim:
                return r
        raise KeyError(codim)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["codims"] = [{k: r[k] for k in _CODIM_KEYS} for r in d["codims"]]
        return {k: d[k] for k in _REPORT_KEYS}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "DimensionReport":
        rec = [CodimRecord(**{k: r[k] for k in _CODIM_KEYS}) for r in d["codims"]]
        return cls(d["space"], d["genus"], list(d["primes"]), d["order"], d["early_stop"],
                   d["wall_time"], rec, dict(d.get("checks", {})))

    @classmethod
    def from_json(cls, text: str) -> "DimensionReport":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        """One row per codim; run-level fields repeat on every row."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("space", "genus", "primes", "order", "early_stop", "wall_time") + _CODIM_KEYS)
        primes = " ".join(str(p) for p in self.primes)
        for r in self.codims:
            w.writerow((self.space, self.genus, primes, self.order, int(self.early_stop), repr(self.wall_time))
                       + tuple(getattr(r, k) for k in _CODIM_KEYS))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DimensionReport":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise ValueError("empty CSV report")
        head = rows[0]
        rec = [CodimRecord(**{k: int(r[k]) for k in _CODIM_KEYS}) for r in rows]
        return cls(head["space"], int(head["genus"]), [int(p) for p in head["primes"].split()], head["order"],
                   bool(int(head["early_stop"])), float(head["wall_time"]), rec)


@dataclass
class ExpectedDims:
    genus: int
    dims: list

    def __post_init__(self):
        if any(not isinstance(d, int) or isinstance(d, bool) or d < 0 for d in self.dims):
            raise ValueError("expected dimensions must be nonnegative integers")

    @classmethod
    def load(cls, path) -> "ExpectedDims":
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict) or "genus" not in data or "dims" not in data:
            raise ValueError(f"{path}: expected an object with 'genus' and 'dims'")
        return cls(int(data["genus"]), list(data["dims"]))

    def get(self, codim: int) -> Optional[int]:
        return self.dims[codim] if 0 <= codim < len(self.dims) else None


# -- M_{g,1} ---------------------------------------------------------------

@dataclass
class Run:
    """One modulus' worth of elimination results, keyed by codim."""

    modulus: int
    states: dict = field(default_factory=dict)
    sources: dict = field(default_factory=dict)


def run_codim(ctx: GenusContext, codim: int, modulus: int, order: str = "socle",
              target: Optional[int] = None, strategy: str = "table", chunk_size: int = 2048):
    """Eliminate the codim-``codim`` relations; returns (state, GenerationSummary)."""
    plan = GenerationPlan(ctx.genus, codim, codim, order=order, modulus=modulus, strategy=strategy,
                          chunk_size=chunk_size, targets={} if target is None else {codim: target})
    state = EliminationState(len(column_zero_basis(ctx, codim)), modulus)

    def sink(block):
        if block.matrix.shape[0]:
            state.absorb_block(block.matrix, target)
        return state.full or (target is not None and state.rank >= target)

    summary = generate_codim(ctx, plan, codim, sink)
    return state, summary


def run_mg1(ctx: GenusContext, codims: Sequence[int], modulus: int, order: str = "socle",
            targets: Optional[dict] = None, strategy: str = "table") -> Run:
    run = Run(modulus)
    for i in codims:
        state, summary = run_codim(ctx, i, modulus, order, (targets or {}).get(i), strategy)
        run.states[i] = state
        run.sources[i] = summary.sources
    return run


def _agree(runs: list, codim: int, space: str) -> int:
    ranks = {r.modulus: r.states[codim].rank for r in runs}
    if len(set(ranks.values())) != 1:
        raise RankDisagreement(Disagreement(ranks), codim, space)
    return next(iter(ranks.values()))


def dims_report(ctx: GenusContext, codims: Sequence[int], moduli: Sequence[int], order: str = "socle",
                expected: Optional[ExpectedDims] = None, strategy: str = "table", early_stop: bool = True):
    """Dimensions of the codim pieces of R~ on M_{g,1}; returns (report, runs).

    Every modulus must give the same rank in every codim.  With ``expected``
    and ``early_stop``, generation stops once the rank that would realize
    the expected dimension is reached.
    """
    t0 = time.perf_counter()
    targets = {}
    if expected is not None and early_stop:
        for i in codims:
            d = expected.get(i)
            if d is not None:
                targets[i] = max(len(column_zero_basis(ctx, i)) - d, 0)
    runs = [run_mg1(ctx, codims, p, order, targets, strategy) for p in moduli]
    report = DimensionReport("Mg1", ctx.genus, list(moduli), order, bool(targets), 0.0)
    for i in codims:
        rank = _agree(runs, i, "Mg1")
        st = runs[0].states[i]
        report.codims.append(CodimRecord(i, st.ncols, runs[0].sources[i], max(r.states[i].seen for r in runs),
                                         rank, st.ncols - rank))
        if expected is not None and expected.get(i) is not None:
            report.checks[f"expected dim^{i} = {expected.get(i)}"] = st.ncols - rank == expected.get(i)
    report.wall_time = round(time.perf_counter() - t0, 3)
    return report, runs


# -- M_g --------------------------------------------------------------------

def mg_report(ctx: GenusContext, codims: Sequence[int], moduli: Sequence[int], order: str = "socle",
              strategy: str = "table", runs: Optional[list] = None):
    """Dimensions on M_g from pushed relations; returns (report, runs).

    Needs the full relation spans on M_{g,1} in codims 0..max(codims)+1, so
    no early stop is applied there beyond saturation.
    """
    t0 = time.perf_counter()
    top = max(codims) + 1
    needed = range(0, max(top, ctx.genus - 1) + 1)
    if runs is None:
        runs = [run_mg1(ctx, needed, p, order, None, strategy) for p in moduli]
    report = DimensionReport("Mg", ctx.genus, [r.modulus for r in runs], order, False, 0.0)
    for c in codims:
        results = {}
        for run in runs:
            spans = {i: st.rows for i, st in run.states.items()}
            results[run.modulus] = mg_dimension(ctx, c, spans, run.modulus)
        ranks = {p: r[1] for p, r in results.items()}
        if len(set(ranks.values())) != 1:
            raise RankDisagreement(Disagreement(ranks), c, "Mg")
        gens, rank, _ = next(iter(results.values()))
        pushed = sum(runs[0].states[i].rank * len(column_zero_basis(ctx, c + 1 - i))
                     for i in range(c + 2) if i in runs[0].states)
        report.codims.append(CodimRecord(c, gens, pushed, max(r[2] for r in results.values()), rank, gens - rank))
    g1 = ctx.genus - 1
    report.checks["kappa_1^(g-1) in codim g-1 relations"] = all(
        kappa1_vanishes(ctx, run.states[g1]) for run in runs if g1 in run.states)
    report.wall_time = round(time.perf_counter() - t0, 3)
    return report, runs


def count_table(ctx: GenusContext, codim_max: int) -> list:
    """[(i, #Mon_(0,2i), #mon_(2g+2,2i))] for i = 0..codim_max."""
    return [(i, count_monomials(ctx, 0, 2 * i), count_mon_sources(ctx, i)) for i in range(codim_max + 1)]


__all__ = [
    "CodimRecord", "DimensionReport", "ExpectedDims", "RankDisagreement", "Run", "count_table",
    "dims_report", "mg_report", "run_codim", "run_mg1",
]
