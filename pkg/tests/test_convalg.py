"""The convolution algebra of symbols: products, involution, dual Hopf maps.

Convolutions are checked against a brute-force integral over fine cells,
never against the twisted split used by the implementation.
"""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from hopfgroup import convalg as C
from hopfgroup import schwartz as S
from hopfgroup.errors import UsageError
from hopfgroup.group import parse_group
from hopfgroup.scalar import ZERO, root_of_unity
from hopfgroup.schwartz import BSFunction, from_subgroup, indicator

from strategies import SPANS, evaluate_tensor, fine_points, functions, probe_points

Q2 = parse_group("qp:2")
Q3 = parse_group("qp:3")
SH = parse_group("shift:2")
L = C.ConvElement
GROUPS = list(SPANS)


def chi(g, x, n):
    return indicator(g, x, n)


def brute_conv(f, g, z):
    """(f*g)(z) = int f(y) g(y^-1 z) dy as a sum over fine left cells of supp(f)."""
    grp = f.group
    if f.is_zero() or g.is_zero():
        return ZERO
    fine = min(max(f.level, g.level) + 3, grp.max_level)
    total = ZERO
    for y, c in f.refine(fine).items():
        total = total + c * g(grp.mul(grp.inv(y), z)) * grp.measure(fine)
    return total


def conv_points(f, g):
    grp = f.group
    rng = random.Random(3)
    pts = [grp.mul(x, y) for x in fine_points(f, f.level)[:8] for y in fine_points(g, g.level)[:8]]
    return pts + probe_points(grp, rng, 4)


# -- products ----------------------------------------------------------------


def test_conv_examples():
    h = from_subgroup(Q2, 0)
    assert C.conv_mul(L(h), L(h)) == L(h)
    a, b = F(1), F(2, 3)
    out = C.conv_mul(L(chi(Q3, a, 1)), L(chi(Q3, b, 1)))
    assert out == L(chi(Q3, a + b, 1).scale(F(1, 3)))
    assert C.conv_mul(L(h), L(BSFunction.zero(Q2))).is_zero()


def test_conv_qp3_against_double_coset_sum():
    """Oracle: sum over a Z/9 window of Z_3 for chi(a+3Z_3) * chi(b+3Z_3)."""
    a, b = 1, 2
    fa, fb = chi(Q3, a, 1), chi(Q3, b, 1)
    out = C.conv_mul(L(fa), L(fb)).symbol
    for z in range(9):
        # int over y in a+3Z_3 of [z - y in b+3Z_3]: measure 1/9 per residue mod 9
        s = sum(F(1, 9) for y in range(9) if y % 3 == a and (z - y) % 3 == b)
        assert out(F(z)) == s


@pytest.mark.parametrize("desc", GROUPS)
@given(data=st.data())
def test_conv_matches_brute_force(desc, data):
    f = data.draw(functions(desc, max_terms=3))
    g = data.draw(functions(desc, max_terms=3))
    h = C.conv_mul(L(f), L(g)).symbol
    for z in conv_points(f, g):
        assert h(z) == brute_conv(f, g, z)


@pytest.mark.parametrize("desc", ["qp:2", "shift:2", "finite:S3"])
@given(data=st.data())
def test_conv_associative_and_star_antimultiplicative(desc, data):
    a, b, c = (L(data.draw(functions(desc, max_terms=3))) for _ in range(3))
    assert C.conv_mul(C.conv_mul(a, b), c) == C.conv_mul(a, C.conv_mul(b, c))
    assert C.conv_star(C.conv_mul(a, b)) == C.conv_mul(C.conv_star(b), C.conv_star(a))
    assert C.conv_star(C.conv_star(a)) == a


def test_mixed_groups_rejected():
    with pytest.raises(UsageError):
        C.conv_mul(L(from_subgroup(Q2, 0)), L(from_subgroup(Q3, 0)))


# -- involution, antipode, counit, weight ------------------------------------


def test_star_examples():
    for n in (-1, 0, 2):
        p = L(from_subgroup(Q2, n))
        assert C.conv_star(p) == p
    z4 = root_of_unity(4)
    f = chi(Q2, F(1, 2), 0).scale(z4)
    assert C.conv_star(L(f)) == L(chi(Q2, F(-1, 2), 0).scale(-z4))


@pytest.mark.parametrize("desc", GROUPS)
@given(data=st.data())
def test_star_and_antipode_pointwise(desc, data):
    f = data.draw(functions(desc))
    g = f.group
    star = C.conv_star(L(f)).symbol
    anti = C.dual_antipode(L(f)).symbol
    rng = random.Random(5)
    pts = [g.inv(x) for x in fine_points(f, f.level + 1)] + probe_points(g, rng)
    for x in pts:
        xi = g.inv(x)
        assert star(x) == f(xi).conjugate() / g.modular(x)
        assert anti(x) == f(xi) / g.modular(x)


def test_dual_antipode_on_shift():
    x = (1, F(0))
    f = chi(SH, x, 0)
    s = C.dual_antipode(L(f)).symbol
    # support moves to the inverse coset; the value there is Delta(x) = 2
    xi = SH.inv(x)
    # (x H_0)^-1 = H_0 x^-1 = {(-1, b) : b in Z_2}, a single level-1 cell
    assert s(xi) == 2 and s((-1, F(1))) == 2 and s((-1, F(1, 2))) == 0
    assert s == chi(SH, xi, 1).scale(2)


def test_dual_antipode_unimodular_example():
    a = F(1, 3)
    assert C.dual_antipode(L(chi(Q3, a, 0))) == L(chi(Q3, -a, 0))
    assert C.dual_antipode(L(from_subgroup(Q3, 1))) == L(from_subgroup(Q3, 1))


def test_counit_and_weight_examples():
    assert C.dual_counit(L(from_subgroup(Q2, 1))) == F(1, 2)
    assert C.dual_counit(L(BSFunction.zero(Q2))) == 0
    assert C.haar_weight(L(from_subgroup(Q2, 0))) == 1
    assert C.haar_weight(L(chi(Q2, 1, 1))) == 0


def test_haar_weight_of_star_square():
    """w(f^# * f) for f = chi(1/2 + 2Z_2) is mu(2Z_2) = 1/2.

    Oracle: (f^# * f)(0) = int f^#(y) f(-y) dy = int |f(-y)|^2 dy over
    y in -(1/2) + 2Z_2, which has measure 1/2.
    """
    f = chi(Q2, F(1, 2), 1)
    a = L(f)
    v = C.haar_weight(C.conv_mul(C.conv_star(a), a))
    star = C.conv_star(a).symbol
    assert v == brute_conv(star, f, F(0)) == F(1, 2)


@pytest.mark.parametrize("desc", ["qp:2", "shift:2", "finite:S3", "finite:Z6"])
@given(data=st.data())
def test_counit_is_multiplicative_and_weight_positive(desc, data):
    a = L(data.draw(functions(desc, max_terms=3)))
    b = L(data.draw(functions(desc, max_terms=3)))
    assert C.dual_counit(C.conv_mul(a, b)) == C.dual_counit(a) * C.dual_counit(b)
    w = C.haar_weight(C.conv_mul(C.conv_star(a), a))
    if a.is_zero():
        assert w.is_zero()
    else:
        assert w.is_real() and complex(w).real > 0


# -- dual coproduct ----------------------------------------------------------


def test_dual_coproduct_examples():
    p = C.projection_pH(Q2, 0)
    pairs = C.dual_coproduct(p, p, "right")
    t = S.TensorDecomposition([(x.symbol, y.symbol) for x, y in pairs], 2)
    assert S.tensor_equal(t, S.TensorDecomposition([(p.symbol, p.symbol)], 2))
    f, g = chi(Q2, F(1, 2), 0), from_subgroup(Q2, 0)
    t = C.dual_coproduct(L(f), L(g), "right", as_tensor=True)
    assert S.tensor_equal(t, S.TensorDecomposition([(f, chi(Q2, F(-1, 2), 0))], 2))
    assert C.dual_coproduct(L(BSFunction.zero(Q2)), L(g)) == []


@pytest.mark.parametrize("desc", GROUPS)
@given(data=st.data())
def test_dual_coproduct_pointwise(desc, data):
    f = data.draw(functions(desc, max_terms=3))
    h = data.draw(functions(desc, max_terms=3))
    g = f.group
    rng = random.Random(6)
    right = C.dual_coproduct(L(f), L(h), "right", as_tensor=True)
    xs = fine_points(f, f.level + 1)[:10] + probe_points(g, rng, 3)
    for x in xs:
        zs = [g.mul(x, w) for w in fine_points(h, h.level)[:6]] + probe_points(g, rng, 2)
        for z in zs:
            assert evaluate_tensor(right, x, z) == f(x) * h(g.mul(g.inv(x), z))
    left = C.dual_coproduct(L(f), L(h), "left", as_tensor=True)
    ys = fine_points(h, h.level + 1)[:10] + probe_points(g, rng, 3)
    for y in ys:
        ws = [g.mul(r, y) for r in fine_points(f, f.level)[:6]] + probe_points(g, rng, 2)
        for w in ws:
            expected = f(g.mul(w, g.inv(y))) * h(y) / g.modular(y)
            assert evaluate_tensor(left, w, y) == expected


@pytest.mark.parametrize("desc", ["qp:3", "shift:2", "finite:S3"])
@given(data=st.data())
def test_dual_hopf_laws(desc, data):
    """Counit, antipode and weight-invariance laws of the dual, right-multiplier form."""
    a = L(data.draw(functions(desc, max_terms=3)))
    b = L(data.draw(functions(desc, max_terms=3)))
    pairs = C.dual_coproduct(a, b, "right")
    g = a.group
    lhs = BSFunction.zero(g)
    for ai, bi in pairs:
        lhs = lhs + bi.symbol.scale(C.dual_counit(ai))
    assert L(lhs) == C.conv_mul(a, b)
    anti = BSFunction.zero(g)
    for ai, bi in pairs:
        anti = anti + C.conv_mul(C.dual_antipode(ai), bi).symbol
    assert L(anti) == b.scale(C.dual_counit(a))
    weighted = BSFunction.zero(g)
    for ai, bi in pairs:
        weighted = weighted + bi.symbol.scale(C.haar_weight(ai))
    assert L(weighted) == b.scale(C.haar_weight(a))


# -- p_H, the state tau, E and reconstruction --------------------------------


def test_projection_examples():
    assert C.projection_pH(Q2, 0) == L(from_subgroup(Q2, 0))
    p2 = C.projection_pH(Q2, 2)
    assert p2 == L(from_subgroup(Q2, 2).scale(4))
    assert C.conv_mul(p2, p2) == p2


@pytest.mark.parametrize("desc", GROUPS)
def test_projection_is_group_like_at_every_level(desc):
    g = parse_group(desc)
    for n in g.level_range:
        if abs(n) > 3:
            continue
        p = C.projection_pH(g, n)
        assert C.conv_mul(p, p) == p
        assert C.conv_star(p) == p
        target = S.TensorDecomposition([(p.symbol, p.symbol)], 2)
        assert S.tensor_equal(C.dual_coproduct(p, p, "right", as_tensor=True), target)
        assert S.tensor_equal(C.dual_coproduct(p, p, "left", as_tensor=True), target)


def brute_tau(f, n):
    """<L_f xi, xi> with xi = chi(H_n)/sqrt(mu(H_n)), as a double sum over fine cells."""
    g = f.group
    fine = min(max(f.level, n) + 1, g.max_level)
    reps = g.coset_reps(n, fine)
    mu = g.measure(fine)
    total = ZERO
    for x in reps:
        for y in reps:
            total = total + f(y) * mu * mu  # y^-1 x in H_n for x, y in H_n
    return total / g.measure(n)


def test_tau_examples():
    assert C.vector_state_tau(L(from_subgroup(Q2, 0)), 0) == 1 == brute_tau(from_subgroup(Q2, 0), 0)
    assert C.vector_state_tau(L(chi(Q2, F(1, 2), 0)), 0) == 0
    assert C.vector_state_tau(L(BSFunction.zero(Q2)), 1) == 0


@given(functions("qp:2"), st.integers(-2, 2))
def test_tau_matches_double_sum(f, n):
    assert C.vector_state_tau(L(f), n) == brute_tau(f, n)


def test_expectation_examples():
    f = chi(Q2, 1, 1)
    assert C.cond_expectation(L(f), 0) == L(f)
    assert C.cond_expectation(L(chi(Q2, F(1, 2), 0)), 0).is_zero()
    p = C.projection_pH(Q2, 0)
    assert C.cond_expectation(p, 0) == p


@pytest.mark.parametrize("desc", ["qp:2", "shift:2", "finite:S3"])
@given(data=st.data())
def test_expectation_is_slice_of_dual_coproduct(desc, data):
    """E(a) = sum tau(b_i) a_i over Delta(a)(1 (x) p_H), plus the bimodule law."""
    f = data.draw(functions(desc, max_terms=3))
    h = data.draw(functions(desc, max_terms=3))
    g = f.group
    lo, hi = SPANS[desc]
    n = data.draw(st.integers(lo, hi))
    a = L(f)
    p = C.projection_pH(g, n)
    sliced = BSFunction.zero(g)
    for ai, bi in C.dual_coproduct(a, p, "right"):
        sliced = sliced + ai.symbol.scale(C.vector_state_tau(bi, n))
    e = C.cond_expectation(a, n)
    assert e == L(sliced)
    assert C.cond_expectation(e, n) == e
    assert C.vector_state_tau(e, n) == C.vector_state_tau(a, n)
    b = C.cond_expectation(L(h), n)
    assert C.cond_expectation(C.conv_mul(b, a), n) == C.conv_mul(b, e)
    assert C.cond_expectation(C.conv_mul(a, b), n) == C.conv_mul(e, b)


def test_reconstruction_examples():
    cells, ok = C.coset_reconstruction(L(from_subgroup(Q2, 0)), 0)
    assert cells == [F(0)] and ok
    f = chi(Q2, F(1, 2), 1) + chi(Q2, 3, 0)
    cells, ok = C.coset_reconstruction(L(f), 0)
    # 3 lies in Z_2, so the coset 3 + Z_2 carries the canonical label 0
    assert ok and cells == [F(0), F(1, 2)]
    cells, ok = C.coset_reconstruction(L(BSFunction.zero(Q2)), 0)
    assert cells == [] and ok


@pytest.mark.parametrize("desc", GROUPS)
@given(data=st.data())
def test_reconstruction_holds(desc, data):
    f = data.draw(functions(desc))
    lo, hi = SPANS[desc]
    n = data.draw(st.integers(lo, hi))
    _, ok = C.coset_reconstruction(L(f), n)
    assert ok


def test_dual_membership_examples():
    p = C.projection_pH(Q2, 0)
    first, second = C.dual_membership_certificate(p, 0)
    assert len(first) == len(second) == 1
    first, second = C.dual_membership_certificate(L(chi(Q2, F(1, 2), 0)), 0)
    assert len(first) == len(second) == 1
    first, second = C.dual_membership_certificate(L(BSFunction.zero(Q2)), 0)
    assert len(first) == len(second) == 0


@pytest.mark.parametrize("desc", GROUPS)
@given(data=st.data())
def test_dual_membership_lengths(desc, data):
    f = data.draw(functions(desc))
    lo, hi = SPANS[desc]
    n = data.draw(st.integers(lo, hi))
    first, second = C.dual_membership_certificate(L(f), n)
    bound = C.dual_length_bound(L(f), n)
    assert len(first) <= bound and len(second) <= bound
