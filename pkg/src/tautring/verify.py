"""Checks of known identities and tables.

Every check returns a :class:`CheckResult`; nothing here raises on a failed
identity, so one bad check never hides the others.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .enumeration import enumerate_Mon, generators, partition_count, phi
from .poly import GenusContext, SparsePolynomial, code_bigrade, mono_from_dict, mono_mul, x_code
from .pushforward import column0_to_kappa, kappa, psi
from .rings import QQ, PrimeField
from .sl2 import apply_E, apply_E_power, apply_F, apply_F_power, apply_H, ef_power_rhs

# -- embedded tables --------------------------------------------------------

TABLE_B = (1, 2, 3, 6, 10, 14, 22, 33, 45, 64, 90, 119)
TABLE_A = (1, 1, 2, 3, 5, 6, 10, 13, 18, 24, 33, 41)
# genus 24, codims 0..23
G24_MON_COUNTS = (1, 2, 4, 7, 12, 19, 30, 45, 67, 97, 139, 195, 272, 373, 508, 684,
                915, 1212, 1597, 2087, 2714, 3506, 4508, 5763)
G24_SOURCE_COUNTS = (0, 0, 0, 0, 0, 0, 0, 0, 0, 5, 49, 325, 1709, 7763, 31530, 117275,
                    404905, 1310010, 3995122, 11532380, 31602373, 82422889, 205123969, 488481821)
TABLE_CHECKSUM = "383a775f5bb7000226683c7b2268dd1a27fb6b2b7aba53896e15426b083c52c5"


def table_checksum() -> str:
    blob = json.dumps([list(TABLE_B), list(TABLE_A), list(G24_MON_COUNTS), list(G24_SOURCE_COUNTS)])
    return hashlib.sha256(blob.encode()).hexdigest()


class OutOfTableRange(ValueError):
    pass


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def _check(name: str, ok: bool, detail: str = "") -> CheckResult:
    return CheckResult(name, bool(ok), detail)


# -- kappa_1 identity ---------------------------------------------------------

def verify_morita(ctx: GenusContext) -> list:
    g = ctx.genus
    x31, x11, x02, y = ctx.x(3, 1), ctx.x(1, 1), ctx.x(0, 2), ctx.y()
    first = apply_F_power(ctx, x31 * x31, 3)
    second = apply_F_power(ctx, x11 * x31, 2)
    want1 = y.scale(2 * g * (3 * g - 1)) - x02.scale(10)
    want2 = y.scale(2 * g * g) - x02.scale(2)
    comb = first.scale(Fraction(-1, 6)) + second.scale(Fraction(1, 2))
    want3 = y.scale(Fraction(g, 3)) + x02.scale(Fraction(2, 3))
    image = column0_to_kappa(ctx, comb)
    want4 = kappa(ctx, 1).scale(Fraction(1, 6)) + psi().scale(g)
    out = []
    for label, got, want in (
        ("F^3(x[3,1]^2)", first, want1),
        ("F^2(x[1,1]*x[3,1])", second, want2),
        ("combination", comb, want3),
        ("kappa image", image, want4),
    ):
        out.append(_check(f"morita g={g}: {label}", got == want, "" if got == want else f"got {got}, want {want}"))
    return out


# -- tables -----------------------------------------------------------------

def verify_table_checksum() -> CheckResult:
    got = table_checksum()
    return _check("embedded tables checksum", got == TABLE_CHECKSUM, got[:16])


def verify_b_sum(n: int) -> CheckResult:
    if not 0 <= n < len(TABLE_B):
        raise OutOfTableRange(f"n = {n} outside 0..{len(TABLE_B) - 1}")
    total = sum(TABLE_A[n - i] for i in range(n + 1) if i % 3 != 2)
    return _check(f"b({n}) = sum of a(n-i), i != 2 mod 3", total == TABLE_B[n], f"{total} vs {TABLE_B[n]}")


def b_relation_index(genus: int, i: int) -> int:
    n = 3 * i - genus - 1
    # i = g/2 is allowed: there the value agrees with the symmetric codim g/2 - 1
    if not (3 * i > genus and i <= genus // 2 and 0 <= n < len(TABLE_B)):
        raise OutOfTableRange(f"(g={genus}, i={i}) is outside the range covered by the b table")
    return n


def expected_from_b(genus: int, i: int) -> int:
    return phi(i) - TABLE_B[b_relation_index(genus, i)]


def verify_b_relation(ctx: GenusContext, i: int, computed_dim: int) -> CheckResult:
    want = expected_from_b(ctx.genus, i)
    return _check(f"d({ctx.genus},{i}) = phi({i}) - b({3 * i - ctx.genus - 1})", computed_dim == want,
                  f"{computed_dim} vs {want}")


def verify_tables() -> list:
    out = [verify_table_checksum()]
    out += [verify_b_sum(n) for n in range(len(TABLE_B))]
    out += [_check(f"phi({i}) = #Mon_(0,{2 * i}) at g=24", phi(i) == G24_MON_COUNTS[i]) for i in range(len(G24_MON_COUNTS))]
    return out


# -- Gorenstein shape -------------------------------------------------------

def gorenstein_report(dims: Sequence[int], socle: int, free: Optional[dict] = None, label: str = "") -> list:
    """Shape checks for a graded ring with socle in codimension ``socle``.

    ``free`` maps codims to the dimension they must have when no relations
    exist there.
    """
    tag = f"{label} " if label else ""
    out = []
    if len(dims) <= socle:
        out.append(_check(f"{tag}covers codims 0..{socle}", False, f"only {len(dims)} values"))
        return out
    out.append(_check(f"{tag}dim^0 = 1", dims[0] == 1, str(dims[0])))
    out.append(_check(f"{tag}socle dim^{socle} = 1", dims[socle] == 1, str(dims[socle])))
    for i, want in sorted((free or {}).items()):
        if i < len(dims):
            out.append(_check(f"{tag}free range dim^{i} = {want}", dims[i] == want, str(dims[i])))
    for i in range(socle + 1):
        a, b = dims[i], dims[socle - i]
        out.append(_check(f"{tag}symmetry dim^{i} = dim^{socle - i}", a == b, f"{a} vs {b}"))
    for i in range(socle + 1, len(dims)):
        out.append(_check(f"{tag}dim^{i} = 0", dims[i] == 0, str(dims[i])))
    return out


def mg1_free_range(genus: int) -> dict:
    return {i: phi(i) for i in range(genus // 3 + 1)}


def mg_free_range(genus: int) -> dict:
    return {i: partition_count(i) for i in range(genus // 3 + 1)}


# -- sl2 --------------------------------------------------------------------

def random_homogeneous(ctx: GenusContext, rng: random.Random, ring=QQ, max_degree: int = 4,
                       max_terms: int = 6, max_level: int = 4, max_weight: int = 6) -> SparsePolynomial:
    """A random bigrade-homogeneous polynomial with coefficients in [-9, 9]."""
    pool = [c for c in generators(ctx, max_weight, min(max_level, ctx.max_level))]
    while True:
        deg = rng.randint(0, max_degree)
        exps: dict = {}
        for _ in range(deg):
            c = rng.choice(pool)
            exps[c] = exps.get(c, 0) + 1
        lead = mono_from_dict(exps)
        w = sum(code_bigrade(c)[0] * e for c, e in lead)
        j = sum(code_bigrade(c)[1] * e for c, e in lead)
        same = [m for m in enumerate_Mon(ctx, w, j).monomials if sum(e for _, e in m) <= max_degree]
        picks = rng.sample(same, min(len(same), rng.randint(1, max_terms)))
        terms = {m: rng.randint(-9, 9) for m in picks}
        poly = SparsePolynomial(terms, ring)
        if not poly.is_zero():
            return poly


def _weight(poly: SparsePolynomial) -> int:
    (w, _), = poly.bigrades()
    return w


def sl2_trial(ctx: GenusContext, rng: random.Random, ring=QQ) -> list:
    """One randomized round; returns the names of the identities that failed."""
    failed = []
    a = random_homogeneous(ctx, rng, ring)
    E, F, H = (lambda p: apply_E(ctx, p)), (lambda p: apply_F(ctx, p)), (lambda p: apply_H(ctx, p))
    if E(F(a)) - F(E(a)) != H(a):
        failed.append("[E,F]=H")
    if H(E(a)) - E(H(a)) != E(a).scale(2):
        failed.append("[H,E]=2E")
    if H(F(a)) - F(H(a)) != F(a).scale(-2):
        failed.append("[H,F]=-2F")
    r, s = rng.randint(0, 4), rng.randint(0, 4)
    mu = _weight(a) - ctx.genus
    if apply_F_power(ctx, apply_E_power(ctx, a, r), s) != ef_power_rhs(ctx, a, mu, r, s):
        failed.append(f"F^s E^r expansion (r={r}, s={s})")
    g = ctx.genus
    j = 2 * rng.randint(0, 3)
    beta = rng.choice(enumerate_Mon(ctx, 2 * g, j).monomials)
    lifted = SparsePolynomial({mono_mul(beta, ((x_code(2, 0), 1),)): 1}, ring)
    if not apply_F_power(ctx, lifted, g + 1).is_zero():
        failed.append("F^(g+1)(x[2,0]*beta) = 0")
    return failed


def verify_sl2(ctx: GenusContext, trials: int, seed: int = 0, ring=QQ) -> list:
    rng = random.Random(seed)
    failures: dict = {}
    for _ in range(trials):
        for name in sl2_trial(ctx, rng, ring):
            failures[name] = failures.get(name, 0) + 1
    label = f"sl2 g={ctx.genus} over {ring!r}, {trials} trials"
    return [_check(label, not failures, ", ".join(f"{k}: {v}" for k, v in failures.items()))]


def verify_sl2_suite(genera=(3, 5, 8), trials: int = 1000, seed: int = 0,
                     rings=(QQ, PrimeField(2147483647))) -> list:
    """Spread ``trials`` rounds over every (genus, ring) pair."""
    pairs = [(g, r) for g in genera for r in rings]
    out = []
    for k, (g, ring) in enumerate(pairs):
        share = trials // len(pairs) + (1 if k < trials % len(pairs) else 0)
        out += verify_sl2(GenusContext(g), share, seed + k, ring)
    return out


__all__ = [
    "G24_MON_COUNTS", "G24_SOURCE_COUNTS", "CheckResult", "OutOfTableRange", "TABLE_A", "TABLE_B",
    "expected_from_b", "gorenstein_report", "mg1_free_range", "mg_free_range", "random_homogeneous",
    "sl2_trial", "table_checksum", "verify_b_relation", "verify_b_sum", "verify_morita", "verify_sl2",
    "verify_sl2_suite", "verify_table_checksum", "verify_tables",
]
