"""Locally constant compactly supported functions on a group model.

A :class:`BSFunction` is a finite sum ``sum c_r * chi(r H_n)`` over left cosets
of one filtration subgroup.  The stored form is canonical: keys are canonical
coset representatives, zero coefficients are dropped and the level is the
coarsest one at which the function is still coset-constant.  Equality is
therefore a plain comparison of (group, level, terms).

Two-variable (or k-variable) functions are held as :class:`TensorDecomposition`
lists of leg tuples; their equality is decided by expanding every position over
a common refinement, which turns the comparison into a comparison of finite
coefficient tables.
"""

from itertools import product as _cartesian

from .errors import UsageError, ValidationError
from .scalar import ONE, ZERO, CycScalar

__all__ = [
    "BSFunction",
    "TensorDecomposition",
    "GroupLikeVerdict",
    "indicator",
    "from_subgroup",
    "from_quotient_table",
    "matrix_coefficient",
    "translate",
    "left_translate",
    "right_translate",
    "antipode",
    "counit",
    "integral",
    "coproduct_right",
    "coproduct_left",
    "galois_inverse",
    "is_group_like",
    "translate_span_dim",
    "membership_certificate",
    "local_unit",
    "coset_cells",
    "tensor_table",
    "pointwise_table",
]


def _scalar(c):
    return c if isinstance(c, CycScalar) else CycScalar(c)


def _refine_terms(group, level, terms, m):
    """Re-express sum c_r chi(r H_level) over level-m cosets (m >= level)."""
    if m == level:
        return dict(terms)
    hs = group.coset_reps(level, m)
    out = {}
    for r, c in terms.items():
        for h in hs:
            out[group.canonical_rep(group.mul(r, h), m)] = c
    return out


def _coarsen(group, level, terms):
    """Move to the coarsest level at which the coefficients stay coset-constant."""
    while level > group.min_level and terms:
        parent_level = level - 1
        need = group.index(parent_level, level)
        parents = {}
        ok = True
        for r, c in terms.items():
            p = group.canonical_rep(r, parent_level)
            entry = parents.get(p)
            if entry is None:
                parents[p] = [c, 1]
            elif entry[0] != c:
                ok = False
                break
            else:
                entry[1] += 1
        if not ok or any(cnt != need for _, cnt in parents.values()):
            break
        terms = {p: c for p, (c, _) in parents.items()}
        level = parent_level
    return level, terms


class BSFunction:
    """f = sum_r c_r * chi(r H_n), held in canonical form."""

    __slots__ = ("group", "level", "terms", "_hash")

    def __init__(self, group, level, terms=None):
        group.check_level(level)
        acc = {}
        for r, c in (terms or {}).items():
            key = group.canonical_rep(group.check(r), level)
            acc[key] = acc.get(key, ZERO) + _scalar(c)
        acc = {r: c for r, c in acc.items() if not c.is_zero()}
        if not acc:
            level = group.base_level
        else:
            level, acc = _coarsen(group, level, acc)
        self.group = group
        self.level = level
        self.terms = acc
        self._hash = None

    @classmethod
    def _trusted(cls, group, level, terms):
        """Build from already canonical keys with nonzero coefficients."""
        obj = cls.__new__(cls)
        if not terms:
            level = group.base_level
        else:
            level, terms = _coarsen(group, level, terms)
        obj.group = group
        obj.level = level
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, group):
        return cls._trusted(group, group.base_level, {})

    # -- inspection ------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __call__(self, x):
        return self.terms.get(self.group.canonical_rep(x, self.level), ZERO)

    def items(self):
        """Terms sorted by canonical representative."""
        key = self.group.sort_key
        return sorted(self.terms.items(), key=lambda rc: key(rc[0]))

    def refine(self, m):
        """Term table at the finer level m (a plain dict, not canonical)."""
        if m < self.level:
            raise UsageError(f"cannot refine level {self.level} function to coarser level {m}")
        self.group.check_level(m)
        return _refine_terms(self.group, self.level, self.terms, m)

    def support_cells(self, n):
        """Canonical reps of the level-n cosets meeting the support."""
        g = self.group
        if n >= self.level:
            return set(self.refine(n))
        return {g.canonical_rep(r, n) for r in self.terms}

    def conductor(self):
        from math import lcm

        out = 1
        for c in self.terms.values():
            out = lcm(out, c.conductor)
        return out

    def __eq__(self, other):
        if not isinstance(other, BSFunction):
            return NotImplemented
        return self.group == other.group and self.level == other.level and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.group.descriptor, self.level, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return f"BSFunction({self.group.descriptor}, 0)"
        fmt = self.group.format_element
        body = " + ".join(f"({c})*chi({fmt(r)}, level={self.level})" for r, c in self.items())
        return f"BSFunction({self.group.descriptor}, {body})"

    # -- *-algebra -------------------------------------------------------
    def _same_group(self, other):
        if not isinstance(other, BSFunction):
            raise UsageError(f"expected a BSFunction, got {type(other).__name__}")
        if other.group != self.group:
            raise UsageError(f"mixed groups {self.group.descriptor} and {other.group.descriptor}")

    def _common(self, other):
        self._same_group(other)
        m = max(self.level, other.level)
        return m, self.refine(m), other.refine(m)

    def __add__(self, other):
        m, a, b = self._common(other)
        out = dict(a)
        for r, c in b.items():
            s = out.get(r, ZERO) + c
            if s.is_zero():
                out.pop(r, None)
            else:
                out[r] = s
        return BSFunction._trusted(self.group, m, out)

    def __neg__(self):
        return BSFunction._trusted(self.group, self.level, {r: -c for r, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BSFunction):
            m, a, b = self._common(other)
            out = {}
            for r, c in a.items():
                d = b.get(r)
                if d is not None:
                    out[r] = c * d
            return BSFunction._trusted(self.group, m, out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        c = _scalar(c)
        if c.is_zero():
            return BSFunction.zero(self.group)
        return BSFunction._trusted(self.group, self.level, {r: c * v for r, v in self.terms.items()})

    def star(self):
        return BSFunction._trusted(
            self.group, self.level, {r: c.conjugate() for r, c in self.terms.items()}
        )

    # -- serialization ---------------------------------------------------
    def to_json(self):
        fmt = self.group.format_element
        return {
            "group": self.group.descriptor,
            "level": self.level,
            "terms": [{"rep": fmt(r), "coeff": str(c)} for r, c in self.items()],
        }

    @classmethod
    def from_json(cls, data, group=None):
        from .dsl import parse_scalar
        from .group import parse_group

        g = group or parse_group(data["group"])
        level = data["level"]
        if not isinstance(level, int):
            raise UsageError(f"level must be an integer, got {level!r}")
        terms = {}
        for t in data.get("terms", []):
            r = g.canonical_rep(g.parse_element(t["rep"]), g.check_level(level))
            terms[r] = terms.get(r, ZERO) + parse_scalar(str(t["coeff"]))
        return cls(g, level, terms)


# --------------------------------------------------------------------------
# constructors


def indicator(group, x, n):
    """chi(x H_n)."""
    return BSFunction(group, n, {x: ONE})


def from_subgroup(group, n):
    """chi(H_n)."""
    return indicator(group, group.identity(), n)


def from_quotient_table(group, n, table, top=None):
    """Pull back a function on H_top / H_n given as {coset rep: value}.

    ``top`` defaults to the group's base level (0, or the coarsest valid level
    for finite groups so that H_top / H_n is the whole group).
    """
    top = _default_top(group, top)
    reps = group.coset_reps(top, n)
    keyed = {}
    for r, v in table.items():
        key = group.canonical_rep(group.check(r), n)
        if key not in reps:
            raise ValidationError(f"table key {group.format_element(r)} is not a coset of H_{n} in H_{top}")
        keyed[key] = v
    return BSFunction(group, n, keyed)


def _default_top(group, top):
    if top is None:
        top = group.min_level if group.saturating else group.base_level
    return group.check_level(top)


def matrix_coefficient(group, n, rep, i, j, top=None):
    """h -> rep(h H_n)[i][j] for a unitary representation of H_top / H_n.

    ``rep`` maps each coset representative to a square matrix of scalars.
    The representation is validated: it must be multiplicative on the
    quotient and every matrix must be unitary.
    """
    top = _default_top(group, top)
    reps = group.coset_reps(top, n)
    mats = {}
    for r, mat in rep.items():
        mats[group.canonical_rep(group.check(r), n)] = [[_scalar(v) for v in row] for row in mat]
    if set(mats) != set(reps):
        raise ValidationError(f"representation must be given on all {len(reps)} cosets of H_{n} in H_{top}")
    dims = {len(m) for m in mats.values()} | {len(row) for m in mats.values() for row in m}
    if len(dims) != 1:
        raise ValidationError("representation matrices must be square of one size")
    (d,) = dims
    for a in reps:
        ma = mats[a]
        adj = [[ma[c][r].conjugate() for c in range(d)] for r in range(d)]
        if _matmul(ma, adj) != _identity(d):
            raise ValidationError(f"rep({group.format_element(a)}) is not unitary")
        for b in reps:
            ab = group.canonical_rep(group.mul(a, b), n)
            if _matmul(ma, mats[b]) != mats[ab]:
                raise ValidationError("representation is not a homomorphism on the quotient")
    if not (0 <= i < d and 0 <= j < d):
        raise UsageError(f"matrix index ({i}, {j}) outside dimension {d}")
    return BSFunction(group, n, {r: mats[r][i][j] for r in reps})


def _identity(d):
    return [[ONE if r == c else ZERO for c in range(d)] for r in range(d)]


def _matmul(a, b):
    return [
        [sum((a[r][k] * b[k][c] for k in range(len(b))), ZERO) for c in range(len(b[0]))]
        for r in range(len(a))
    ]


# --------------------------------------------------------------------------
# coset geometry


def coset_cells(group, a, n, b):
    """The set a*H_n*b as a union of left cosets: returns (level, reps).

    The level m is chosen with b H_m b^-1 inside H_n so that the set is right
    H_m-invariant; the enumerated h run over H_n modulo the subgroup
    b H_m b^-1, which contains H_k for k = conj_level(b^-1, m).
    """
    m = group.conj_level(b, n)
    k = max(n, group.conj_level(group.inv(b), m))
    cells = {group.canonical_rep(group.mul(group.mul(a, h), b), m) for h in group.coset_reps(n, k)}
    return m, cells


def _sum_pieces(group, pieces):
    """Add up (level, {rep: coeff}) pieces given at possibly different levels."""
    pieces = [p for p in pieces if p[1]]
    if not pieces:
        return BSFunction.zero(group)
    m = max(level for level, _ in pieces)
    out = {}
    for level, terms in pieces:
        for r, c in _refine_terms(group, level, terms, m).items():
            out[r] = out.get(r, ZERO) + c
    return BSFunction._trusted(group, m, {r: c for r, c in out.items() if not c.is_zero()})


def left_translate(f, x):
    """(_x f)(y) = f(x^-1 y)."""
    g = f.group
    g.check(x)
    terms = {g.canonical_rep(g.mul(x, r), f.level): c for r, c in f.terms.items()}
    return BSFunction._trusted(g, f.level, terms)


def right_translate(f, x):
    """f_x(y) = f(y x); the support r H_n moves to r H_n x^-1."""
    g = f.group
    g.check(x)
    if g.abelian:
        return left_translate(f, g.inv(x))
    xi = g.inv(x)
    pieces = []
    for r, c in f.terms.items():
        m, cells = coset_cells(g, r, f.level, xi)
        pieces.append((m, {s: c for s in cells}))
    return _sum_pieces(g, pieces)


def translate(f, x, side="left"):
    if side == "left":
        return left_translate(f, x)
    if side == "right":
        return right_translate(f, x)
    raise UsageError(f"side must be 'left' or 'right', got {side!r}")


def antipode(f):
    """S(f)(x) = f(x^-1)."""
    g = f.group
    if g.abelian:
        terms = {g.canonical_rep(g.inv(r), f.level): c for r, c in f.terms.items()}
        return BSFunction._trusted(g, f.level, terms)
    e = g.identity()
    pieces = []
    for r, c in f.terms.items():
        m, cells = coset_cells(g, e, f.level, g.inv(r))
        pieces.append((m, {s: c for s in cells}))
    return _sum_pieces(g, pieces)


def counit(f):
    """epsilon(f) = f(e)."""
    return f(f.group.identity())


def integral(f, side="left"):
    """Left or right Haar integral; they differ only on non-unimodular groups."""
    g = f.group
    mu = g.measure(f.level)
    if side == "left":
        return sum(f.terms.values(), ZERO) * mu
    if side == "right":
        # d mu_right(x) = Delta(x^-1) d mu(x)
        return sum((c * (1 / g.modular(r)) for r, c in f.terms.items()), ZERO) * mu
    raise UsageError(f"side must be 'left' or 'right', got {side!r}")


def multiply_by_modular(f, power=1):
    """x -> Delta(x)^power * f(x); Delta is constant on every H_n coset."""
    g = f.group
    terms = {r: c * (g.modular(r) ** power) for r, c in f.terms.items()}
    return BSFunction._trusted(g, f.level, terms)


# --------------------------------------------------------------------------
# tensors


class TensorDecomposition:
    """sum_i f_i (x) g_i (x) ...; a list of equal-length tuples of BSFunctions."""

    __slots__ = ("legs", "arity", "group")

    def __init__(self, legs, arity=2, group=None):
        self.legs = [tuple(t) for t in legs]
        self.arity = arity
        self.group = group
        for t in self.legs:
            if len(t) != arity:
                raise UsageError(f"tensor term of length {len(t)} in an arity-{arity} tensor")

    def __len__(self):
        return len(self.legs)

    def __iter__(self):
        return iter(self.legs)

    def __repr__(self):
        return f"TensorDecomposition({self.legs!r})"

    def evaluate(self, *points):
        return sum(
            (_prod_scalars(f(x) for f, x in zip(t, points)) for t in self.legs),
            ZERO,
        )

    def table(self, levels=None):
        return tensor_table(self, levels)

    def __eq__(self, other):
        if not isinstance(other, TensorDecomposition):
            return NotImplemented
        return tensor_equal(self, other)

    __hash__ = None

    def merged(self):
        """Combine terms sharing a leg (only for arity 2); drops zero terms."""
        if self.arity != 2:
            return self
        by_right = {}
        order = []
        for f, g in self.legs:
            if f.is_zero() or g.is_zero():
                continue
            if g in by_right:
                by_right[g] = by_right[g] + f
            else:
                by_right[g] = f
                order.append(g)
        pairs = [(by_right[g], g) for g in order if not by_right[g].is_zero()]
        by_left = {}
        order = []
        for f, g in pairs:
            if f in by_left:
                by_left[f] = by_left[f] + g
            else:
                by_left[f] = g
                order.append(f)
        legs = [(f, by_left[f]) for f in order if not by_left[f].is_zero()]
        return TensorDecomposition(legs, 2, self.group)

    def swap(self):
        return TensorDecomposition([t[::-1] for t in self.legs], self.arity, self.group)

    def to_json(self):
        return [[f.to_json() for f in t] for t in self.legs]


def _prod_scalars(it):
    out = ONE
    for c in it:
        out = out * c
        if out.is_zero():
            return ZERO
    return out


def tensor_table(t, levels=None):
    """Coefficient table {(r_1, ..., r_k): c} over product cells at fixed levels.

    The cells chi(r_1 H_{L_1}) x ... x chi(r_k H_{L_k}) are linearly
    independent, so two tensors agree as functions iff their tables agree at
    common levels.
    """
    if levels is None:
        levels = [
            max((term[i].level for term in t.legs), default=None) for i in range(t.arity)
        ]
    out = {}
    for term in t.legs:
        if any(f.is_zero() for f in term):
            continue
        tables = [list(f.refine(lv).items()) for f, lv in zip(term, levels)]
        for combo in _cartesian(*tables):
            key = tuple(r for r, _ in combo)
            c = _prod_scalars(v for _, v in combo)
            s = out.get(key, ZERO) + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return out


def tensor_equal(a, b):
    if a.arity != b.arity:
        return False
    la = [max((t[i].level for t in a.legs), default=None) for i in range(a.arity)]
    lb = [max((t[i].level for t in b.legs), default=None) for i in range(b.arity)]
    levels = [max(x for x in (u, v) if x is not None) if (u, v) != (None, None) else 0 for u, v in zip(la, lb)]
    return tensor_table(a, levels) == tensor_table(b, levels)


def pointwise_table(func, cells, levels):
    """Evaluate a k-variable callable on every product of the given cell reps.

    Returns the nonzero entries as a table comparable with tensor_table at the
    same levels.
    """
    out = {}
    for combo in _cartesian(*[sorted(c, key=repr) for c in cells]):
        v = _scalar(func(*combo))
        if not v.is_zero():
            out[tuple(combo)] = v
    return out


# --------------------------------------------------------------------------
# coproduct decompositions


def _check_pair(f, g):
    if not isinstance(f, BSFunction) or not isinstance(g, BSFunction):
        raise UsageError("coproduct arguments must be BSFunctions")
    if f.group != g.group:
        raise UsageError(f"mixed groups {f.group.descriptor} and {g.group.descriptor}")


def coproduct_right(f, g):
    """Delta(f)(1 (x) g): pairs with sum f_i(x) g_i(y) = f(xy) g(y).

    f(x y h) = f(x y) for h in H_m once m >= level(f), so splitting g into
    level-m cells y_k H_m gives the pairs (f_{y_k}, d_k chi(y_k H_m)).
    """
    _check_pair(f, g)
    grp = f.group
    if f.is_zero() or g.is_zero():
        return TensorDecomposition([], 2, grp)
    m = max(f.level, g.level)
    legs = []
    for y, d in sorted(g.refine(m).items(), key=lambda rc: grp.sort_key(rc[0])):
        legs.append((right_translate(f, y), BSFunction._trusted(grp, m, {y: d})))
    return TensorDecomposition(legs, 2, grp)


def _split_for_left_translates(f, g, twist):
    """Split f into cells x_j H_m on which y -> g(z^-1 ... ) is constant.

    Used for f(x) g(x y) (twist='inverse', translate g by x_j^-1) and for
    f(x) g(x^-1 y) (twist='direct', translate g by x_j).  Returns the level m
    and the refined term table of f.
    """
    grp = f.group
    m = max(f.level, g.level)
    if grp.abelian:
        return m, f.refine(m)
    reps_g = list(g.terms)
    while True:
        cells = f.refine(m)
        need = m
        for x in cells:
            for s in reps_g:
                if twist == "inverse":
                    # g(x h y) = g(x y) for h in H_m needs (x^-1 s)^-1 H_m (x^-1 s) in H_ng
                    z = grp.mul(grp.inv(s), x)
                else:
                    # g(h^-1 x^-1 y) = g(x^-1 y) needs s^-1 H_m s in H_ng
                    z = grp.inv(s)
                need = max(need, grp.conj_level(z, g.level))
        if need == m:
            return m, cells
        m = need


def coproduct_left(f, g):
    """(f (x) 1) Delta(g): pairs with sum f_i(x) g_i(y) = f(x) g(x y)."""
    _check_pair(f, g)
    grp = f.group
    if f.is_zero() or g.is_zero():
        return TensorDecomposition([], 2, grp)
    m, cells = _split_for_left_translates(f, g, "inverse")
    legs = []
    for x, c in sorted(cells.items(), key=lambda rc: grp.sort_key(rc[0])):
        legs.append((BSFunction._trusted(grp, m, {x: c}), left_translate(g, grp.inv(x))))
    return TensorDecomposition(legs, 2, grp)


def split_twisted(f, g):
    """Pairs with sum f_i(x) g_i(z) = f(x) g(x^-1 z)."""
    _check_pair(f, g)
    grp = f.group
    if f.is_zero() or g.is_zero():
        return TensorDecomposition([], 2, grp)
    m, cells = _split_for_left_translates(f, g, "direct")
    legs = []
    for x, c in sorted(cells.items(), key=lambda rc: grp.sort_key(rc[0])):
        legs.append((BSFunction._trusted(grp, m, {x: c}), left_translate(g, x)))
    return TensorDecomposition(legs, 2, grp)


def galois_inverse(t, which="T1"):
    """Invert T1: a(x)b(y) -> a(xy)b(y) or T2: a(x)b(y) -> a(x)b(xy).

    T1^-1 sends t(x, y) to t(x y^-1, y), T2^-1 sends it to t(x, x^-1 y); each
    term is decomposed again with the same cell-splitting as the coproducts.
    """
    legs = []
    if which == "T1":
        for f, g in t.legs:
            for a, b in coproduct_right(f, antipode(g)).legs:
                legs.append((a, antipode(b)))
    elif which == "T2":
        for f, g in t.legs:
            legs.extend(split_twisted(f, g).legs)
    else:
        raise UsageError(f"which must be 'T1' or 'T2', got {which!r}")
    return TensorDecomposition(legs, 2, t.group)


# --------------------------------------------------------------------------
# diagnostics


class GroupLikeVerdict:
    """Outcome of :func:`is_group_like`; truthy exactly for a 'yes'."""

    __slots__ = ("ok", "reason", "level", "cells", "witness", "subgroup_level")

    def __init__(self, ok, reason="", level=None, cells=(), witness=None, subgroup_level=None):
        self.ok = ok
        self.reason = reason
        self.level = level
        self.cells = tuple(cells)
        self.witness = witness
        # k with support == H_k, when the recovered subgroup is in the filtration
        self.subgroup_level = subgroup_level

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return f"GroupLikeVerdict(yes, level={self.level}, cells={len(self.cells)})"
        return f"GroupLikeVerdict(no, {self.reason!r})"


def _pure_tensor(f, g):
    return TensorDecomposition([(f, g)], 2, f.group)


def is_group_like(p):
    """Decide p = p^2 = p^*, p != 0 and Delta(p)(1 (x) p) = (p (x) 1)Delta(p) = p (x) p."""
    grp = p.group
    if p.is_zero():
        return GroupLikeVerdict(False, "zero function")
    if p * p != p:
        return GroupLikeVerdict(False, "not idempotent")
    if p.star() != p:
        return GroupLikeVerdict(False, "not self-adjoint")
    target = _pure_tensor(p, p)
    right_ok = tensor_equal(coproduct_right(p, p), target)
    left_ok = tensor_equal(coproduct_left(p, p), target)
    cells = sorted(p.terms, key=grp.sort_key)
    if right_ok and left_ok:
        return GroupLikeVerdict(True, "", p.level, cells, subgroup_level=_filtration_level(p))
    return GroupLikeVerdict(
        False, "support not closed", p.level, cells, witness=_closure_witness(p)
    )


def _filtration_level(p):
    """The k with p == chi(H_k), or None; compares Haar measures first."""
    grp = p.group
    mass = grp.measure(p.level) * len(p.terms)
    for k in range(p.level, grp.min_level - 1, -1):
        if grp.measure(k) == mass:
            return k if p == from_subgroup(grp, k) else None
    return None


def _closure_witness(p):
    """A pair of support cells whose product leaves the support, if any."""
    grp = p.group
    reps = sorted(p.terms, key=grp.sort_key)
    for x in reps:
        for y in reps:
            z = grp.mul(x, y)
            if p(z).is_zero():
                return (x, y)
        if p(grp.inv(x)).is_zero():
            return (x, None)
    return None


def translate_span_dim(f, n):
    """dim span{ _x f : x in H_n }, by exact rank over a common refinement."""
    from .linalg import rank

    grp = f.group
    grp.check_level(n)
    if f.is_zero():
        return 0
    # _{x h} f = _x f once h fixes f on the left: s^-1 H_M s inside H_level(f)
    big = max(n, f.level)
    while True:
        need = big
        for s in f.refine(big):
            need = max(need, grp.conj_level(grp.inv(s), f.level))
        if need == big:
            break
        big = need
    translates = [left_translate(f, h) for h in grp.coset_reps(n, big)]
    level = max(t.level for t in translates)
    tables = [t.refine(level) for t in translates]
    keys = sorted({r for tb in tables for r in tb}, key=grp.sort_key)
    rows = [[tb.get(r, ZERO) for r in keys] for tb in tables]
    return rank(rows)


def membership_certificate(f, n):
    """Finite decompositions witnessing that f lies in P(G), relative to H = H_n.

    Returns (first, second, F):
      first:  sum f_i(x) g_i(y) = f(x y) chi_H(y)
      second: sum f'_j(x) g'_j(y) = f(y) chi_H(x y)
      F:      canonical reps with f = 0 off F H
    """
    grp = f.group
    grp.check_level(n)
    chi_h = from_subgroup(grp, n)
    first = coproduct_right(f, chi_h)
    second = coproduct_right(chi_h, f)
    cells = sorted(f.support_cells(n), key=grp.sort_key) if f else []
    return first, second, cells


def support_hull_cells(f, n):
    """Number of max(level(f), n)-cells in supp(f) H_n: the certificate length bound."""
    grp = f.group
    if f.is_zero():
        return 0
    m = max(f.level, n)
    count = 0
    for r in f.support_cells(n):
        count += grp.index(n, m)
    return count


def local_unit(fs):
    """chi_K for K the union of all support cosets; f * local_unit(fs) = f."""
    if not fs:
        raise UsageError("local_unit needs at least one function")
    grp = fs[0].group
    out = BSFunction.zero(grp)
    for f in fs:
        if f.group != grp:
            raise UsageError("mixed groups in local_unit")
        if f:
            level = f.level
            support = BSFunction._trusted(grp, level, {r: ONE for r in f.terms})
            m = max(out.level, level) if out else level
            merged = {r: ONE for r in out.refine(m)} if out else {}
            merged.update({r: ONE for r in support.refine(m)})
            out = BSFunction._trusted(grp, m, merged)
    return out
