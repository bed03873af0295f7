"""Exact Fourier transform on the abelian models.

Supported groups and the dual models used for them:

    qp(p)          self-dual via chi_xi(x) = exp(2 pi i {xi x}_p)
    zp(p)          dual Q_p/Z_p, stored as Z_p-invariant functions on qp(p)
    finite Z<n>    dual cyclic group with Haar weight 1/n per point
    products       factorwise

Forward transforms conjugate the character, inverse transforms do not, and
both sides use the self-dual normalization mu(Z_p) = 1.  Non-abelian groups,
the discrete group Z (dual is the circle) and abelian Cayley tables without a
cyclic decomposition are rejected.
"""

from fractions import Fraction

from .errors import UnsupportedOperation, UsageError
from .group import FiniteGroup, Integers, ProductGroup, Qp, Shift, Zp, cyclic_group, parse_group, valuation
from .schwartz import BSFunction
from .scalar import ONE, root_of_unity

__all__ = [
    "dual_group",
    "character_value",
    "fourier",
    "inverse_fourier",
    "plancherel_check",
]


def _reject(group):
    if isinstance(group, Shift) or not group.abelian:
        raise UnsupportedOperation(f"group not abelian: {group.descriptor}")
    if isinstance(group, Integers):
        raise UnsupportedOperation("the dual of z is the circle, which has no exact model here")
    raise UnsupportedOperation(
        f"no cyclic decomposition known for {group.descriptor}; write it as prod(finite:Z<a>,...)"
    )


def dual_group(group):
    """The model of the Pontryagin dual used by :func:`fourier`."""
    if isinstance(group, Zp):
        return parse_group(f"qp:{group.p}")
    if isinstance(group, Qp):
        return group
    if isinstance(group, FiniteGroup) and group.cyclic_order:
        d = group.descriptor
        if d.startswith("dual(") and d.endswith(")"):
            return parse_group(d[5:-1])
        n = group.cyclic_order
        return cyclic_group(n, haar_scale=1 / (n * group.haar_scale), descriptor=f"dual({d})")
    if isinstance(group, ProductGroup):
        return parse_group("prod(" + ",".join(dual_group(f).descriptor for f in group.factors) + ")")
    _reject(group)


def _padic_frac(x, p):
    """{x}_p as (m, p^k) with 0 <= m < p^k and x - m/p^k in Z_p."""
    x = Fraction(x)
    den = x.denominator
    return x.numerator % den, den


def _padic_char(p, xi, x):
    m, den = _padic_frac(Fraction(xi) * Fraction(x), p)
    return root_of_unity(den, m) if m else ONE


def character_value(group, xi, x):
    """chi_xi(x), an exact root of unity."""
    if isinstance(group, Qp):  # includes zp
        return _padic_char(group.p, xi, x)
    if isinstance(group, FiniteGroup) and group.cyclic_order:
        n = group.cyclic_order
        k = (xi * x) % n
        return root_of_unity(n, k) if k else ONE
    if isinstance(group, ProductGroup):
        out = ONE
        for f, a, b in zip(group.factors, xi, x):
            out = out * character_value(f, a, b)
        return out
    _reject(group)


# --------------------------------------------------------------------------
# transforms of single coset indicators, factor by factor


def _padic_indicator(src, dst, r, n, conj, weight):
    """Transform of chi(r + p^n Z_p): supported on p^-n Z_p, level max(-n, -v(r))."""
    p = src.p
    v = valuation(r, p)
    level = -n if v is None else max(-n, -v)
    if level < dst.min_level or -n < dst.min_level:
        raise UsageError(f"transform level {level} outside the range of {dst.descriptor}")
    mu = src.measure(n) * weight
    terms = {}
    for xi in dst.coset_reps(-n, level):
        val = _padic_char(p, xi, r)
        terms[xi] = (val.conjugate() if conj else val) * mu
    return BSFunction(dst, level, terms)


def _cyclic_indicator(src, dst, r, n, conj, weight):
    size = src.cyclic_order
    mu = src.haar_scale * weight
    if n < 0:
        # chi of the whole group: its transform sits at the trivial character
        return BSFunction(dst, 0, {0: mu * size})
    terms = {}
    for k in range(size):
        e = (-k * r if conj else k * r) % size
        terms[k] = (root_of_unity(size, e) if e else ONE) * mu
    return BSFunction(dst, 0, terms)


def _clamp(f, n):
    return min(max(n, f.min_level), f.max_level)


def _indicator_transform(src, dst, r, n, conj, weight=1):
    if isinstance(src, Qp):
        if isinstance(dst, Zp):
            dst_q = parse_group(f"qp:{src.p}")
            return _to_zp(_padic_indicator(src, dst_q, r, n, conj, weight), dst)
        return _padic_indicator(src, dst, r, n, conj, weight)
    if isinstance(src, FiniteGroup):
        return _cyclic_indicator(src, dst, r, n, conj, weight)
    if isinstance(src, ProductGroup):
        pieces = [
            _indicator_transform(fs, fd, a, _clamp(fs, n), conj)
            for fs, fd, a in zip(src.factors, dst.factors, r)
        ]
        out = _outer(dst, pieces)
        return out.scale(weight) if weight != 1 else out
    _reject(src)


def _outer(group, pieces):
    """Product function x -> prod_i pieces[i](x_i) on a product model."""
    level = group.min_level
    for f, piece in zip(group.factors, pieces):
        if piece.is_zero():
            return BSFunction.zero(group)
        if piece.level > f.min_level or not f.saturating:
            level = max(level, piece.level)
    level = group.check_level(level)
    tables = [piece.refine(_clamp(f, level)) for f, piece in zip(group.factors, pieces)]
    terms = {(): ONE}
    for tb in tables:
        terms = {k + (r,): c * d for k, c in terms.items() for r, d in tb.items()}
    return BSFunction(group, level, terms)


def _to_zp(f, target):
    """Reinterpret a qp function supported in Z_p (level >= 0) on zp."""
    if f.is_zero():
        return BSFunction.zero(target)
    level = max(f.level, 0)
    table = f.refine(level)
    terms = {}
    for r, c in table.items():
        if Fraction(r).denominator != 1:
            raise UsageError(f"result is not supported in Z_{target.p}")
        terms[int(r)] = c
    return BSFunction(target, level, terms)


def _as_qp(f):
    """A zp function viewed on qp (same cosets p^n Z_p, n >= 0)."""
    g = f.group
    q = parse_group(f"qp:{g.p}")
    return BSFunction(q, f.level, {Fraction(r): c for r, c in f.terms.items()})


def _zp_variant(target, natural):
    """target equals natural up to replacing some qp factors by zp."""
    if isinstance(target, Zp):
        return isinstance(natural, Qp) and natural.p == target.p
    if isinstance(target, ProductGroup) and isinstance(natural, ProductGroup):
        return len(target.factors) == len(natural.factors) and all(
            t.descriptor == n.descriptor or _zp_variant(t, n)
            for t, n in zip(target.factors, natural.factors)
        )
    return False


def _transform(f, target, conj):
    src = f.group
    if isinstance(src, Zp):
        f = _as_qp(f)
        src = f.group
    natural = dual_group(src)
    if target is None:
        target = natural
    elif target.descriptor != natural.descriptor and not _zp_variant(target, natural):
        raise UsageError(f"{target.descriptor} is not a dual model of {src.descriptor}")
    out = BSFunction.zero(target)
    for r, c in f.terms.items():
        out = out + _indicator_transform(src, target, r, f.level, conj).scale(c)
    return out


def fourier(f, target=None):
    """f^(xi) = int f(x) conj(chi_xi(x)) dx, exactly, as a function on the dual."""
    if not f.group.abelian or isinstance(f.group, (Shift, Integers)):
        _reject(f.group)
    return _transform(f, target, conj=True)


def inverse_fourier(g, target=None):
    """int g(xi) chi_xi(x) dxi; ``target`` picks zp when inverting a zp transform."""
    if not g.group.abelian or isinstance(g.group, (Shift, Integers)):
        _reject(g.group)
    return _transform(g, target, conj=False)


def plancherel_check(f):
    """(int |f|^2, int |f^|^2, equal?) with exact arithmetic on both sides."""
    from .schwartz import integral

    fh = fourier(f)
    lhs = integral(f * f.star())
    rhs = integral(fh * fh.star())
    return lhs, rhs, lhs == rhs

