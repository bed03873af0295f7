"""Group models: laws, filtrations, coset geometry and the modular function."""

import json
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from hopfgroup.errors import ElementError, LevelRangeError, UsageError, ValidationError
from hopfgroup.group import parse_group, valuation

GROUPS = ["qp:2", "qp:3", "zp:2", "zp:5", "z", "shift:2", "shift:3", "finite:Z6", "finite:S3",
          "prod(qp:2,finite:Z3)", "prod(zp:3,shift:2)"]


def sample_elements(g, count=12):
    """A few elements spread over several cosets (deterministic)."""
    out = [g.identity()]
    lo = max(g.min_level, -2)
    hi = min(g.max_level, 2)
    for r in g.coset_reps(lo, hi):
        out.append(r)
        if len(out) >= count:
            break
    if g.descriptor.startswith("shift"):
        out += [(1, F(0)), (-1, F(1, 2)), (2, F(3))]
    if g.descriptor == "z":
        out += [3, -5]
    return out


# -- group law -------------------------------------------------------------


@pytest.mark.parametrize("desc", GROUPS)
def test_group_axioms_on_samples(desc):
    g = parse_group(desc)
    xs = sample_elements(g)
    e = g.identity()
    for x in xs:
        assert g.mul(x, g.inv(x)) == e or g.canonical_rep(g.mul(x, g.inv(x)), g.max_level) == e
        assert g.mul(e, x) == x and g.mul(x, e) == x
        for y in xs[:6]:
            for z in xs[:4]:
                assert g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z))


def test_qp_addition_example():
    g = parse_group("qp:2")
    assert g.mul(F(3, 4), F(1, 2)) == F(5, 4)


def test_shift_law_example():
    g = parse_group("shift:2")
    # direct evaluation of (k,b)(k',b') = (k+k', b + p^k b')
    assert g.mul((1, F(0)), (0, F(1))) == (1, F(2))
    assert g.mul((0, F(1)), (1, F(0))) == (1, F(1))
    assert not g.abelian


def test_s3_is_nonabelian():
    g = parse_group("finite:S3")
    pairs = [(x, y) for x in range(6) for y in range(6) if g.mul(x, y) != g.mul(y, x)]
    assert pairs
    assert g.format_element(g.identity()) == "p123"


# -- filtrations -------------------------------------------------------------


@pytest.mark.parametrize("desc", GROUPS)
def test_index_is_multiplicative_and_measure_consistent(desc):
    g = parse_group(desc)
    levels = [n for n in range(-3, 4) if g.min_level <= n <= g.max_level]
    for a in levels:
        for b in levels:
            for c in levels:
                if a <= b <= c:
                    assert g.index(a, c) == g.index(a, b) * g.index(b, c)
    for n in levels:
        if n + 1 in levels:
            assert g.measure(n) == g.measure(n + 1) * g.index(n, n + 1)


def test_measure_normalization():
    g = parse_group("qp:2")
    assert g.measure(0) == 1
    assert g.measure(2) == F(1, 4)
    assert g.measure(-3) == 8
    assert g.measure_coset(F(1, 2), 2, "left") == F(1, 4)


def test_coset_reps_examples():
    assert sorted(parse_group("zp:3").coset_reps(0, 1)) == [0, 1, 2]
    assert sorted(parse_group("qp:2").coset_reps(-1, 1)) == [F(0), F(1, 2), F(1), F(3, 2)]
    assert len(parse_group("finite:S3").coset_reps(-1, 0)) == 6


@pytest.mark.parametrize("desc", ["qp:2", "qp:3", "zp:2", "shift:2", "prod(qp:2,finite:Z3)"])
def test_coset_reps_partition(desc):
    """Distinctness and covering at level n, checked by brute force."""
    g = parse_group(desc)
    m, n = max(g.min_level, -1), min(g.max_level, 1)
    reps = g.coset_reps(m, n)
    assert len(reps) == g.index(m, n)
    assert len({g.canonical_rep(r, n) for r in reps}) == len(reps)
    # every element of H_m (sampled finer) lies in exactly one rep's coset
    for x in g.coset_reps(m, n + 1):
        hits = [r for r in reps if g.eq_at_level(x, r, n)]
        assert len(hits) == 1
        assert g.in_subgroup(x, m)


def test_canonical_rep_examples():
    q2 = parse_group("qp:2")
    assert q2.canonical_rep(F(13, 4), 2) == F(13, 4)
    assert q2.canonical_rep(F(13, 4), 1) == F(5, 4)
    assert q2.eq_at_level(F(13, 4), F(5, 4), 1)
    assert parse_group("zp:5").canonical_rep(7, 1) == 2


@given(st.integers(-40, 40), st.integers(1, 8), st.integers(-3, 3))
def test_qp_canonical_rep_oracle(num, k, n):
    """x - canonical_rep(x, n) lies in p^n Z_p and the rep is m p^-j with 0 <= m < p^(n+j)."""
    g = parse_group("qp:3")
    x = F(num, 3**k)
    r = g.canonical_rep(x, n)
    v = valuation(x - r, 3)
    assert v is None or v >= n
    assert 0 <= r
    assert r < F(3) ** n or r == 0


def test_levels_out_of_range():
    with pytest.raises(LevelRangeError):
        parse_group("zp:2").check_level(-1)
    with pytest.raises(LevelRangeError):
        parse_group("finite:S3").check_level(1)
    with pytest.raises(UsageError):
        parse_group("qp:2").coset_reps(2, 1)


def test_product_levels_span_the_widest_factor():
    g = parse_group("prod(qp:2,finite:Z3)")
    assert (g.min_level, g.max_level) == (-12, 12)


# -- conjugation levels and the modular function ----------------------------


def test_conj_level_abelian_is_identity():
    g = parse_group("qp:3")
    assert all(g.conj_level(F(1, 9), n) == n for n in range(-2, 3))
    s3 = parse_group("finite:S3")
    assert all(s3.conj_level(x, 0) == 0 for x in range(6))


@pytest.mark.parametrize("x", [(1, F(0)), (-1, F(1, 2)), (2, F(3, 4)), (0, F(5))])
@pytest.mark.parametrize("n", [-1, 0, 2])
def test_shift_conj_level_by_conjugating_reps(x, n):
    """x H_m x^-1 inside H_n for m = conj_level, and not for m - 1."""
    g = parse_group("shift:2")
    m = g.conj_level(x, n)
    xi = g.inv(x)

    def conj_inside(level):
        return all(
            g.in_subgroup(g.mul(g.mul(x, h), xi), n) for h in g.coset_reps(level, level + 4)
        )

    assert conj_inside(m)
    assert not conj_inside(m - 1)


@pytest.mark.parametrize("n", [2, 3])
def test_shift_modular_by_coset_counting(n):
    """mu(H_n x) counted in level-N cells equals modular(x) mu(H_n)."""
    g = parse_group("shift:2")
    x = (1, F(0))
    big = n + 3
    cells = {g.canonical_rep(g.mul(h, x), big) for h in g.coset_reps(n, big + 2)}
    assert len(cells) * g.measure(big) == g.modular(x) * g.measure(n)
    assert g.modular(x) == 2
    assert g.measure_coset(x, n, "right") / g.measure(n) == g.modular(x)


def test_modular_is_a_homomorphism_trivial_on_h0():
    g = parse_group("shift:3")
    xs = [(1, F(1)), (-2, F(1, 3)), (0, F(2)), (3, F(0))]
    for a in xs:
        for b in xs:
            assert g.modular(g.mul(a, b)) == g.modular(a) * g.modular(b)
    assert g.modular((0, F(7))) == 1
    assert parse_group("qp:5").modular(F(1, 25)) == 1


# -- parsing and validation ------------------------------------------------


def test_parse_elements():
    assert parse_group("qp:2").parse_element("3/4") == F(3, 4)
    assert parse_group("shift:2").parse_element("(1, 1/2)") == (1, F(1, 2))
    assert parse_group("finite:S3").parse_element("p213") == parse_group("finite:S3").parse_element("p213")
    with pytest.raises(ElementError):
        parse_group("qp:2").parse_element("1/3")
    with pytest.raises(ElementError):
        parse_group("zp:2").parse_element("1/2")


@pytest.mark.parametrize("bad", ["qp:4", "qp:1", "finite:S9", "foo", "finite:Q8"])
def test_bad_descriptors(bad):
    with pytest.raises((UsageError, ValidationError)):
        parse_group(bad)


def test_cayley_file(tmp_path):
    path = tmp_path / "klein.json"
    names = ["e", "a", "b", "c"]
    table = [["e", "a", "b", "c"], ["a", "e", "c", "b"], ["b", "c", "e", "a"], ["c", "b", "a", "e"]]
    path.write_text(json.dumps({"elements": names, "table": table}))
    g = parse_group(f"cayley@{path}")
    assert g.order == 4 and g.abelian
    a = g.parse_element("a")
    assert g.mul(a, a) == g.identity()


def test_cayley_rejects_non_group(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"elements": ["e", "a"], "table": [["e", "a"], ["a", "a"]]}))
    with pytest.raises(ValidationError):
        parse_group(f"cayley@{path}")
