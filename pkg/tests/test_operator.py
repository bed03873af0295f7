"""Truncated operator matrices and exact rank."""

from fractions import Fraction as F
from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from hopfgroup import convalg as C
from hopfgroup import operator as OP
from hopfgroup.errors import LeakageError
from hopfgroup.group import parse_group
from hopfgroup.linalg import rank, row_echelon
from hopfgroup.scalar import ONE, ZERO, CycScalar, root_of_unity
from hopfgroup.schwartz import BSFunction, from_subgroup, indicator

from strategies import functions

Q2 = parse_group("qp:2")


def det(m):
    n = len(m)
    total = ZERO
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = CycScalar(sign)
        for i in range(n):
            term = term * m[i][perm[i]]
        total = total + term
    return total


def minor_rank(m):
    """Largest k with a nonzero k x k minor (brute force, small matrices only)."""
    rows, cols = len(m), len(m[0]) if m else 0
    for k in range(min(rows, cols), 0, -1):
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                if not det([[m[r][c] for c in cs] for r in rs]).is_zero():
                    return k
    return 0


scal = st.sampled_from([ZERO, ZERO, ONE, -ONE, CycScalar(F(1, 2)), root_of_unity(4), root_of_unity(3), CycScalar(2)])


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_rank_matches_minors(r, c, data):
    m = [[data.draw(scal) for _ in range(c)] for _ in range(r)]
    assert rank(m) == minor_rank(m)


def test_rank_examples():
    assert rank([[ONE, ZERO], [ZERO, ZERO]]) == 1
    assert rank([[ZERO, ZERO], [ZERO, ZERO]]) == 0
    rows, pivots = row_echelon([[CycScalar(2), CycScalar(4)], [CycScalar(1), CycScalar(2)]])
    assert pivots == [0]


# -- matrices ------------------------------------------------------------------


def test_mult_matrix_example():
    t = OP.Truncation(Q2, 0, [F(0), F(1, 2)])
    m = OP.matrix_of_mult(from_subgroup(Q2, 0), t)
    assert m.rows == [[ONE, ZERO], [ZERO, ZERO]]
    assert OP.exact_rank(m) == 1


def test_conv_matrix_column_of_subgroup_indicator():
    t = OP.Truncation.ball(Q2, -1, 0)
    m = OP.matrix_of_conv(from_subgroup(Q2, 0), t)
    j = t.index_of(F(0))
    col = [row[j] for row in m.rows]
    # chi(Z_2) * chi(Z_2) = chi(Z_2): the column is the basis vector of Z_2
    assert col == [ONE if i == j else ZERO for i in range(len(t))]
    assert OP.matrix_of_conv(BSFunction.zero(Q2), t).is_zero()


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_rank_one_on_growing_windows(k, n):
    """M(chi_H) L(chi_H) xi = mu(H) <xi on H> chi_H: its image is spanned by chi_H."""
    t = OP.Truncation.ball(Q2, -k, n)
    h = from_subgroup(Q2, n)
    conv = OP.matrix_of_conv(h, t)
    mult = OP.matrix_of_mult(h, t)
    prod = mult @ conv
    # explicit image: column j is mu(H_n) [r_j in H_n] e_{H_n}
    e = t.index_of(F(0))
    expected = [[Q2.measure(n) if (i == e and j == e) else ZERO for j in range(len(t))] for i in range(len(t))]
    assert [[CycScalar(c) for c in row] for row in prod.rows] == expected
    assert OP.exact_rank(prod) == 1
    assert OP.commutator_is_zero(conv, mult)


def test_translated_symbol_does_not_commute():
    t = OP.Truncation.ball(Q2, -1, 0)
    a = OP.matrix_of_conv(indicator(Q2, F(1, 2), 0), t)
    b = OP.matrix_of_mult(from_subgroup(Q2, 0), t)
    assert not OP.commutator_is_zero(a, b)
    assert OP.commutator_is_zero(a, a)


def test_leakage_names_cells():
    sh = parse_group("shift:2")
    t = OP.Truncation.ball(sh, -1, 0)
    f = indicator(sh, (1, F(0)), 0)
    with pytest.raises(LeakageError) as info:
        OP.matrix_of_conv(f, t)
    assert (1, F(0)) in set(info.value.missing)
    m = OP.matrix_of_conv(f, t, exact=False)
    assert m.compressed and (1, F(0)) in m.leaked


@pytest.mark.parametrize("desc", ["qp:2", "qp:3", "finite:S3", "zp:2"])
@given(data=st.data())
def test_matrix_laws(desc, data):
    g = parse_group(desc)
    f = data.draw(functions(desc, max_terms=3))
    h = data.draw(functions(desc, max_terms=3))
    top = g.min_level if desc.startswith("finite") else max(g.min_level, -2 if desc == "qp:2" else -1)
    # keep supports inside the window subgroup H_top
    f = f * from_subgroup(g, top)
    h = h * from_subgroup(g, top)
    level = max([top] + [x.level for x in (f, h) if x])
    t = OP.Truncation.ball(g, top, level)
    mf, mh = OP.matrix_of_conv(f, t), OP.matrix_of_conv(h, t)
    fh = C.conv_mul(C.ConvElement(f), C.ConvElement(h)).symbol
    assert mf @ mh == OP.matrix_of_conv(fh, t)
    assert mf.apply(t.vector(h)) == t.vector(fh)
    assert mf.adjoint() == OP.matrix_of_conv(C.conv_star(C.ConvElement(f)).symbol, t)
    assert OP.matrix_of_mult(f * h, t) == OP.matrix_of_mult(f, t) @ OP.matrix_of_mult(h, t)
