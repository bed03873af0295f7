"""The dual algebra of convolution operators L_f with f locally constant.

Elements are carried by their symbol f; every operation below is the symbol
level formula for the corresponding operator identity:

    L_f L_g        = L_{f*g},   (f*g)(z) = int f(y) g(y^-1 z) dy
    (L_f)^*        = L_{f#},    f#(x) = conj f(x^-1) Delta(x^-1)
    Delta(L_f)(1 (x) L_g)       has symbol f(x) g(x^-1 z)
    (L_f (x) 1)Delta(L_g)       has symbol f(w y^-1) g(y) Delta(y^-1)
    S(L_f)         = L_{f'},    f'(x) = Delta(x^-1) f(x^-1)
    eps(L_f)       = int f,     w_G(L_f) = f(e)

The state tau uses the unit vector chi_H / sqrt(mu(H)), so tau(L_f) is the
integral of f over H = H_n and E(L_f) is restriction of the symbol to H.
"""

from .errors import UsageError
from .schwartz import (
    BSFunction,
    TensorDecomposition,
    antipode,
    from_subgroup,
    integral,
    left_translate,
    multiply_by_modular,
    right_translate,
    split_twisted,
    support_hull_cells,
)

__all__ = [
    "ConvElement",
    "conv_mul",
    "conv_star",
    "dual_coproduct",
    "dual_antipode",
    "dual_counit",
    "haar_weight",
    "projection_pH",
    "vector_state_tau",
    "cond_expectation",
    "coset_reconstruction",
    "dual_membership_certificate",
    "dual_length_bound",
]


class ConvElement:
    """The operator L_f, kept apart from f so the two products never mix."""

    __slots__ = ("symbol",)

    def __init__(self, symbol):
        if not isinstance(symbol, BSFunction):
            raise UsageError("ConvElement needs a BSFunction symbol")
        self.symbol = symbol

    @property
    def group(self):
        return self.symbol.group

    def is_zero(self):
        return self.symbol.is_zero()

    def __eq__(self, other):
        return isinstance(other, ConvElement) and self.symbol == other.symbol

    def __hash__(self):
        return hash(("L", self.symbol))

    def __repr__(self):
        return f"L[{self.symbol!r}]"

    def __add__(self, other):
        return ConvElement(self.symbol + _sym(other))

    def __sub__(self, other):
        return ConvElement(self.symbol - _sym(other))

    def __neg__(self):
        return ConvElement(-self.symbol)

    def __matmul__(self, other):
        return conv_mul(self, other)

    def scale(self, c):
        return ConvElement(self.symbol.scale(c))

    def to_json(self):
        return {"dual": True, "symbol": self.symbol.to_json()}

    @classmethod
    def from_json(cls, data, group=None):
        if not data.get("dual"):
            raise UsageError("dual element JSON needs \"dual\": true")
        return cls(BSFunction.from_json(data["symbol"], group))


def _sym(a):
    if isinstance(a, ConvElement):
        return a.symbol
    raise UsageError(f"expected a ConvElement, got {type(a).__name__}")


def conv_mul(a, b):
    """L_f L_g = L_{f*g} with f*g = sum_j c_j mu(H_m) _{x_j} g."""
    f, g = _sym(a), _sym(b)
    if f.group != g.group:
        raise UsageError(f"mixed groups {f.group.descriptor} and {g.group.descriptor}")
    if f.is_zero() or g.is_zero():
        return ConvElement(BSFunction.zero(f.group))
    out = BSFunction.zero(f.group)
    for left, right in split_twisted(f, g).legs:
        out = out + right.scale(integral(left))
    return ConvElement(out)


def conv_star(a):
    """Symbol conj f(x^-1) Delta(x^-1): the adjoint of L_f."""
    f = _sym(a)
    return ConvElement(multiply_by_modular(antipode(f.star()), -1))


def dual_antipode(a):
    """Symbol Delta(x^-1) f(x^-1)."""
    f = _sym(a)
    return ConvElement(multiply_by_modular(antipode(f), -1))


def dual_counit(a):
    return integral(_sym(a), "left")


def haar_weight(a):
    f = _sym(a)
    return f(f.group.identity())


def _wrap(t):
    return [(ConvElement(x), ConvElement(y)) for x, y in t.legs]


def _left_symbol_pairs(f, g):
    """Pairs (f_{y_k^-1} Delta(y_k^-1), d_k chi(y_k H_m)) for f(w y^-1) g(y) Delta(y^-1)."""
    grp = f.group
    if f.is_zero() or g.is_zero():
        return TensorDecomposition([], 2, grp)
    m = max(f.level, g.level)
    while True:
        cells = g.refine(m)
        # f(w h^-1 y^-1) = f(w y^-1) needs y H_m y^-1 inside H_level(f)
        need = max([m] + [grp.conj_level(y, f.level) for y in cells]) if not grp.abelian else m
        if need == m:
            break
        m = need
    legs = []
    for y, d in sorted(cells.items(), key=lambda rc: grp.sort_key(rc[0])):
        yi = grp.inv(y)
        left = right_translate(f, yi).scale(grp.modular(yi))
        legs.append((left, BSFunction._trusted(grp, m, {y: d})))
    return TensorDecomposition(legs, 2, grp)


def dual_coproduct(a, b, side="right", as_tensor=False):
    """Decompose Delta(a)(1 (x) b) (side='right') or (a (x) 1)Delta(b) (side='left').

    Returns a list of (ConvElement, ConvElement) pairs, or the underlying
    symbol TensorDecomposition when ``as_tensor`` is true.
    """
    f, g = _sym(a), _sym(b)
    if f.group != g.group:
        raise UsageError(f"mixed groups {f.group.descriptor} and {g.group.descriptor}")
    if side == "right":
        t = split_twisted(f, g)
    elif side == "left":
        t = _left_symbol_pairs(f, g)
    else:
        raise UsageError(f"side must be 'right' or 'left', got {side!r}")
    return t if as_tensor else _wrap(t)


def projection_pH(group, n):
    """p_H for H = H_n, with symbol mu(H_n)^-1 chi(H_n) so that p^2 = p = p^*."""
    return ConvElement(from_subgroup(group, n).scale(1 / group.measure(n)))


def _restrict(f, n):
    """f * chi(H_n) as a pointwise product."""
    grp = f.group
    return f * from_subgroup(grp, n)


def vector_state_tau(a, n):
    """<L_f xi, xi> for the unit vector xi = chi(H_n)/sqrt(mu(H_n)); equals int_{H_n} f."""
    f = _sym(a)
    f.group.check_level(n)
    return integral(_restrict(f, n))


def cond_expectation(a, n):
    """E(L_f) = L_{f restricted to H_n}."""
    f = _sym(a)
    f.group.check_level(n)
    return ConvElement(_restrict(f, n))


def _translate_element(a, x):
    """x a = L_x L_f = L_{_x f}."""
    return ConvElement(left_translate(_sym(a), x))


def coset_reconstruction(a, n):
    """Return (F, holds) for a = sum_{x in F} x E(x^-1 a), F the support cosets mod H_n."""
    f = _sym(a)
    grp = f.group
    grp.check_level(n)
    cells = sorted(f.support_cells(n), key=grp.sort_key) if f else []
    total = BSFunction.zero(grp)
    for x in cells:
        piece = cond_expectation(_translate_element(a, grp.inv(x)), n)
        total = total + _translate_element(piece, x).symbol
    return cells, total == f


def dual_membership_certificate(a, n):
    """Both decompositions of Delta(a)(1 (x) p_H) and (a (x) 1)Delta(p_H), H = H_n.

    Terms sharing a leg are merged, which keeps the right-hand certificate at
    one term per support coset mod H_n.
    """
    f = _sym(a)
    f.group.check_level(n)
    p = projection_pH(f.group, n)
    first = dual_coproduct(a, p, "right", as_tensor=True).merged()
    second = dual_coproduct(a, p, "left", as_tensor=True).merged()
    return first, second


def dual_length_bound(a, n):
    """max(level, n)-cells of supp(f) H_n; the bound both certificates respect."""
    return support_hull_cells(_sym(a), n)

