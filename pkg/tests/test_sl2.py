import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tautring.enumeration import enumerate_Mon
from oracles import naive_F
from tautring.poly import GenusContext, SparsePolynomial, VariableId, X, monomial
from tautring.rings import QQ, PrimeField
from tautring.sl2 import (
    NotEigenvector,
    apply_E,
    apply_E_power,
    apply_F,
    apply_F_power,
    apply_H,
    generalized_binomial,
    ef_power_rhs,
)
from tautring.verify import random_homogeneous

GF = PrimeField(2147483647)


# -- examples ---------------------------------------------------------------

def test_apply_E_examples():
    ctx = GenusContext(5)
    one = SparsePolynomial.constant(1)
    assert apply_E(ctx, one) == ctx.x(2, 0)
    assert apply_E(ctx, ctx.x(1, 1)) == ctx.x(2, 0) * ctx.x(1, 1)
    assert apply_E(ctx, ctx.x(3, 1) * ctx.y()).bigrades() == {(5, 3)}


def test_apply_F_examples_g8():
    ctx = GenusContext(8)
    x11, x31, x02, x20, x22, y = (ctx.x(1, 1), ctx.x(3, 1), ctx.x(0, 2), ctx.x(2, 0), ctx.x(2, 2), ctx.y())
    assert apply_F(ctx, x31) == x11
    assert apply_F(ctx, x11 * x11) == y.scale(64) - x02
    assert apply_F(ctx, x11 * x31) == (y * x20).scale(8) - x22 + x11 * x11
    assert apply_F(ctx, SparsePolynomial.constant(1)).is_zero()


@pytest.mark.parametrize("g", range(2, 11))
def test_apply_F_x11_squared(g):
    ctx = GenusContext(g)
    assert apply_F(ctx, ctx.x(1, 1) ** 2) == ctx.y().scale(g * g) - ctx.x(0, 2)


def test_apply_H_examples():
    ctx = GenusContext(8)
    a = ctx.x(3, 1) ** 2
    assert apply_H(ctx, a) == a.scale(-2)
    assert apply_H(ctx, ctx.x(2, 0) ** 4).is_zero()
    assert apply_H(ctx, SparsePolynomial.constant(1)) == SparsePolynomial.constant(-8)


@pytest.mark.parametrize("g", range(2, 11))
def test_apply_F_power_examples(g):
    ctx = GenusContext(g)
    x31, x11, x02, y = ctx.x(3, 1), ctx.x(1, 1), ctx.x(0, 2), ctx.y()
    assert apply_F_power(ctx, x31 * x31, 3) == y.scale(2 * g * (3 * g - 1)) - x02.scale(10)
    assert apply_F_power(ctx, x11 * x31, 2) == y.scale(2 * g * g) - x02.scale(2)


def test_apply_F_power_g8_render():
    ctx = GenusContext(8)
    assert apply_F_power(ctx, ctx.x(3, 1) ** 2, 3).render() == "-10 * x[0,2] + 368 * y"
    assert apply_F_power(ctx, ctx.x(1, 1) * ctx.x(3, 1), 2).render() == "-2 * x[0,2] + 128 * y"


@pytest.mark.parametrize("g", [3, 4, 5])
def test_x20_lift_vanishes(g):
    ctx = GenusContext(g)
    for j in (0, 2, 4):
        for beta in enumerate_Mon(ctx, 2 * g, j).monomials[:5]:
            lifted = ctx.x(2, 0) * SparsePolynomial({beta: 1})
            assert apply_F_power(ctx, lifted, g + 1).is_zero()


def test_bigrade_shift_and_vanishing():
    ctx = GenusContext(5)
    a = ctx.x(4, 2) * ctx.x(3, 1) * ctx.x(1, 1)
    assert apply_F(ctx, a).bigrades() <= {(6, 4)}
    assert apply_F_power(ctx, a, 5).is_zero()  # weight 8 - 10 < 0


def test_generalized_binomial():
    assert generalized_binomial(5, 2) == 10
    assert generalized_binomial(-1, 2) == 1
    assert generalized_binomial(0, 1) == 0
    assert generalized_binomial(7, 0) == 1
    assert generalized_binomial(-3, 3) == Fraction(-10)
    with pytest.raises(ValueError):
        generalized_binomial(3, -1)


def test_ef_power_examples():
    ctx = GenusContext(4)
    g = ctx.genus
    for m in enumerate_Mon(ctx, 2 * g, 2).monomials[:4]:
        alpha = SparsePolynomial({m: 1})
        lhs = ef_power_rhs(ctx, alpha, g, 1, g + 1)
        assert lhs == apply_E(ctx, apply_F_power(ctx, alpha, g + 1))
    alpha = ctx.x(3, 1) * ctx.x(1, 1)
    assert ef_power_rhs(ctx, alpha, 0, 0, 0) == alpha
    mu = 4 - g
    assert ef_power_rhs(ctx, alpha, mu, 1, 1) == apply_E(ctx, apply_F(ctx, alpha)) - alpha.scale(mu)
    assert ef_power_rhs(ctx, alpha, mu, 1, 1) == apply_F(ctx, apply_E(ctx, alpha))


def test_ef_power_rejects_non_eigenvector():
    ctx = GenusContext(4)
    with pytest.raises(NotEigenvector):
        ef_power_rhs(ctx, ctx.x(3, 1) + ctx.x(1, 1), 0, 1, 1)
    with pytest.raises(NotEigenvector):
        ef_power_rhs(ctx, ctx.x(3, 1), 5, 1, 1)


@pytest.mark.parametrize("i,g", [(i, g) for i in range(1, 5) for g in range(2, 3 * i) if i <= g - 1])
def test_pivot_sign(i, g):
    ctx = GenusContext(g)
    image = apply_F_power(ctx, ctx.x(3, 1) ** (2 * i), 3 * i)
    coeff = image.coefficient(monomial(X(0, 2 * i)))
    assert coeff < 0


# -- properties -------------------------------------------------------------

@pytest.mark.parametrize("g", [3, 5, 8])
def test_naive_expander_agrees(g):
    ctx = GenusContext(g)
    rng = random.Random(g)
    for _ in range(40):
        a = random_homogeneous(ctx, rng)
        assert apply_F(ctx, a) == naive_F(ctx, a)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5, 8]), st.integers(0, 10**6), st.sampled_from([QQ, GF]))
def test_commutators(g, seed, ring):
    ctx = GenusContext(g)
    a = random_homogeneous(ctx, random.Random(seed), ring)
    E, F, H = (lambda p: apply_E(ctx, p)), (lambda p: apply_F(ctx, p)), (lambda p: apply_H(ctx, p))
    assert E(F(a)) - F(E(a)) == H(a)
    assert H(E(a)) - E(H(a)) == E(a).scale(2)
    assert H(F(a)) - F(H(a)) == F(a).scale(-2)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5]), st.integers(0, 10**6), st.integers(0, 4), st.integers(0, 4))
def test_ef_power_property(g, seed, r, s):
    ctx = GenusContext(g)
    a = random_homogeneous(ctx, random.Random(seed))
    (w, _), = a.bigrades()
    assert apply_F_power(ctx, apply_E_power(ctx, a, r), s) == ef_power_rhs(ctx, a, w - g, r, s)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_F_shift(seed):
    ctx = GenusContext(6)
    a = random_homogeneous(ctx, random.Random(seed))
    (w, j), = a.bigrades()
    assert apply_F(ctx, a).bigrades() <= {(w - 2, j)}
    assert apply_E(ctx, a).bigrades() == {(w + 2, j)}
    assert apply_H(ctx, a) == a.scale(w - 6)


def test_mod_p_F_matches_exact():
    ctx = GenusContext(5)
    rng = random.Random(7)
    for _ in range(30):
        a = random_homogeneous(ctx, rng)
        assert apply_F(ctx, a).to_ring(GF) == apply_F(ctx, a.to_ring(GF))


def test_variable_ids_hashable():
    assert len({X(1, 1), X(1, 1), VariableId(0, 2, psi=True)}) == 2
