"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is stored as ``sum c_k zeta_N^k`` in the power basis
``1, zeta, ..., zeta^(phi(N)-1)``, i.e. reduced modulo the N-th cyclotomic
polynomial, with N the *smallest* conductor whose field contains the value.
That normal form makes equality a plain comparison of (conductor, coeffs).

Equality is exact.  Scalars carry no ordering; ``complex(c)`` gives the
floating-point value under the standard embedding zeta_N -> exp(2 pi i / N)
for diagnostics such as sign checks on real values.
"""

import cmath
import os
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import ConductorError

__all__ = [
    "CycScalar",
    "root_of_unity",
    "cyclotomic_polynomial",
    "euler_phi",
    "max_conductor",
    "ZERO",
    "ONE",
]

_DEFAULT_MAX_CONDUCTOR = 256


def max_conductor():
    """Conductor cap, read from HOPFGROUP_MAX_CONDUCTOR (default 256)."""
    raw = os.environ.get("HOPFGROUP_MAX_CONDUCTOR")
    if not raw:
        return _DEFAULT_MAX_CONDUCTOR
    return int(raw)


def _lcm(a, b):
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def euler_phi(n):
    result = n
    for p in _prime_factors(n):
        result = result // p * (p - 1)
    return result


def _poly_divexact(num, den):
    # integer polynomials, low-to-high; den monic
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            out[i - dd] = c
            for j, d in enumerate(den):
                num[i - dd + j] -= c * d
    assert not any(num[:dd]), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n):
    """Reduced form of zeta_n^k for every 0 <= k < n, as tuples of (exp, int)."""
    phi = euler_phi(n)
    cyc = cyclotomic_polynomial(n)
    table = []
    cur = [0] * phi
    cur[0] = 1
    for k in range(n):
        table.append(tuple((e, c) for e, c in enumerate(cur) if c))
        # multiply by x, then substitute x^phi = -sum cyc[i] x^i
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * cyc[i]
    return tuple(table)


def _reduce(n, raw):
    """Reduce a map exponent -> coefficient (any integer exponents) mod Phi_n."""
    phi = euler_phi(n)
    table = _power_table(n)
    out = {}
    for k, c in raw.items():
        if not c:
            continue
        k %= n
        if k < phi:
            out[k] = out.get(k, 0) + c
        else:
            for e, w in table[k]:
                out[e] = out.get(e, 0) + c * w
    return {k: v for k, v in out.items() if v}


def _solve(columns, rhs, dim):
    """Solve sum_j y_j columns[j] = rhs over Q, dense; columns are dicts.

    Returns the list y, or None if rhs is outside the column span.
    """
    ncols = len(columns)
    rows = []
    for i in range(dim):
        row = [Fraction(col.get(i, 0)) for col in columns]
        row.append(Fraction(rhs.get(i, 0)))
        rows.append(row)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, dim) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(dim):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(rows[i][ncols] for i in range(r, dim)):
        return None
    y = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        y[c] = rows[i][ncols]
    return y


@lru_cache(maxsize=None)
def _descent_matrices(m, n):
    """Data for testing membership of Q(zeta_n) elements in Q(zeta_m), m = n/q.

    Returns (B, C): y_j = B[j] . x gives coordinates in Q(zeta_m), and x lies
    in the subfield iff every row of C annihilates x. Rows are sparse dicts.
    """
    q = n // m
    phi_n, phi_m = euler_phi(n), euler_phi(m)
    cols = [dict(_reduce(n, {q * j: 1})) for j in range(phi_m)]
    # Gauss-Jordan on [A | I]
    rows = []
    for i in range(phi_n):
        a = [Fraction(col.get(i, 0)) for col in cols]
        ident = [Fraction(int(i == k)) for k in range(phi_n)]
        rows.append(a + ident)
    r = 0
    for c in range(phi_m):
        piv = next(i for i in range(r, phi_n) if rows[i][c])
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(phi_n):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1

    def sparse(row):
        return tuple((k, v) for k, v in enumerate(row[phi_m:]) if v)

    B = tuple(sparse(rows[j]) for j in range(phi_m))
    C = tuple(sparse(rows[j]) for j in range(phi_m, phi_n))
    return B, C


def _try_descend(m, n, coeffs):
    q = n // m
    if m % q == 0:
        # phi(n) = q*phi(m): the image of the power basis is {zeta_n^(q*j)}
        if all(k % q == 0 for k in coeffs):
            return {k // q: v for k, v in coeffs.items()}
        return None
    B, C = _descent_matrices(m, n)
    for row in C:
        if sum(v * coeffs.get(k, 0) for k, v in row):
            return None
    out = {}
    for j, row in enumerate(B):
        s = sum(v * coeffs.get(k, 0) for k, v in row)
        if s:
            out[j] = s
    return out


def _canonical(n, coeffs):
    """Smallest conductor holding the (already reduced) element."""
    if not coeffs:
        return 1, coeffs
    if n > 1 and len(coeffs) == 1 and 0 in coeffs:
        return 1, coeffs
    descended = True
    while descended and n > 1:
        descended = False
        for q in _prime_factors(n):
            y = _try_descend(n // q, n, coeffs)
            if y is not None:
                n, coeffs = n // q, y
                descended = True
                break
    return n, coeffs


def _promote(n, coeffs, target):
    if n == target:
        return coeffs
    s = target // n
    return _reduce(target, {k * s: v for k, v in coeffs.items()})


def _check_conductor(n):
    cap = max_conductor()
    if n > cap:
        raise ConductorError(
            f"conductor {n} exceeds HOPFGROUP_MAX_CONDUCTOR={cap}"
        )


class CycScalar:
    """Immutable element of a cyclotomic field, canonical on construction.

    >>> root_of_unity(4, 1) * root_of_unity(4, 1)
    CycScalar('-1')
    """

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, value=0):
        if isinstance(value, CycScalar):
            self.conductor = value.conductor
            self.coeffs = value.coeffs
        else:
            q = Fraction(value)
            self.conductor = 1
            self.coeffs = {0: q} if q else {}
        self._hash = None

    @classmethod
    def _raw(cls, n, coeffs):
        obj = object.__new__(cls)
        obj.conductor = n
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def from_coeffs(cls, conductor, coeffs):
        """Build sum c_k zeta_N^k from an arbitrary exponent map; reduces fully."""
        if conductor < 1:
            raise ValueError("conductor must be positive")
        _check_conductor(conductor)
        raw = {int(k): Fraction(v) for k, v in dict(coeffs).items()}
        n, c = _canonical(conductor, _reduce(conductor, raw))
        return cls._raw(n, c)

    # -- predicates / views ---------------------------------------------
    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_rational(self):
        return self.conductor == 1

    def to_fraction(self):
        if self.conductor != 1:
            raise ValueError(f"{self} is not rational")
        return self.coeffs.get(0, Fraction(0))

    def is_real(self):
        return self == self.conjugate()

    def __complex__(self):
        n = self.conductor
        return sum((complex(v) * cmath.exp(2j * cmath.pi * k / n) for k, v in self.coeffs.items()), 0j)

    def canonicalize(self):
        n, c = _canonical(self.conductor, _reduce(self.conductor, self.coeffs))
        return CycScalar._raw(n, c)

    # -- arithmetic ------------------------------------------------------
    def _binary(self, other, op):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self, other
        if a.conductor == 1 and b.conductor == 1:
            x = a.coeffs.get(0, 0)
            y = b.coeffs.get(0, 0)
            if op == "add":
                v = x + y
            elif op == "sub":
                v = x - y
            else:
                v = x * y
            return CycScalar._raw(1, {0: Fraction(v)} if v else {})
        n = _lcm(a.conductor, b.conductor)
        _check_conductor(n)
        ca = _promote(a.conductor, a.coeffs, n)
        cb = _promote(b.conductor, b.coeffs, n)
        if op == "mul":
            raw = {}
            for i, x in ca.items():
                for j, y in cb.items():
                    k = (i + j) % n
                    raw[k] = raw.get(k, 0) + x * y
            res = _reduce(n, raw)
        else:
            res = dict(ca)
            sign = 1 if op == "add" else -1
            for k, v in cb.items():
                res[k] = res.get(k, 0) + sign * v
            res = {k: v for k, v in res.items() if v}
        m, c = _canonical(n, res)
        return CycScalar._raw(m, c)

    def __add__(self, other):
        return self._binary(other, "add")

    def __radd__(self, other):
        return self._binary(other, "add")

    def __sub__(self, other):
        return self._binary(other, "sub")

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other._binary(self, "sub")

    def __mul__(self, other):
        return self._binary(other, "mul")

    def __rmul__(self, other):
        return self._binary(other, "mul")

    def __neg__(self):
        return CycScalar._raw(self.conductor, {k: -v for k, v in self.coeffs.items()})

    def __pos__(self):
        return self

    def inverse(self):
        """1/a as the product of the non-trivial Galois conjugates over the norm."""
        if not self.coeffs:
            raise ZeroDivisionError("division by zero in Q(zeta_N)")
        n = self.conductor
        if n == 1:
            return CycScalar._raw(1, {0: 1 / self.coeffs[0]})
        phi = euler_phi(n)
        # integer numerators over a common denominator keep the product cheap
        den = 1
        for v in self.coeffs.values():
            den = _lcm(den, v.denominator)
        base = {k: int(v * den) for k, v in self.coeffs.items()}
        others = {0: 1}
        for b in range(2, n):
            if gcd(b, n) == 1:
                conj = _reduce(n, {(b * k) % n: v for k, v in base.items()})
                raw = {}
                for i, x in others.items():
                    for j, y in conj.items():
                        raw[i + j] = raw.get(i + j, 0) + x * y
                others = _reduce(n, raw)
        raw = {}
        for i, x in others.items():
            for j, y in base.items():
                raw[i + j] = raw.get(i + j, 0) + x * y
        norm = _reduce(n, raw)
        assert set(norm) == {0} and phi, "norm must be rational"
        scale = Fraction(den, norm[0])
        res = {k: v * scale for k, v in others.items()}
        m, c = _canonical(n, res)
        return CycScalar._raw(m, c)

    def galois(self, b):
        """Apply the automorphism zeta_N -> zeta_N^b (gcd(b, N) = 1)."""
        n = self.conductor
        if n == 1:
            return self
        res = _reduce(n, {(b * k) % n: v for k, v in self.coeffs.items()})
        return CycScalar._raw(n, res)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = ONE
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self):
        """Complex conjugation: zeta_N -> zeta_N^(N-1)."""
        n = self.conductor
        if n == 1:
            return self
        res = _reduce(n, {(-k) % n: v for k, v in self.coeffs.items()})
        return CycScalar._raw(n, res)

    def abs2(self):
        """|a|^2 = a * conj(a), an element of the real subfield."""
        return self * self.conjugate()

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.conductor == other.conductor and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            if self.conductor == 1:
                self._hash = hash(self.coeffs.get(0, 0))
            else:
                self._hash = hash((self.conductor, frozenset(self.coeffs.items())))
        return self._hash

    # -- text ------------------------------------------------------------
    def __str__(self):
        if not self.coeffs:
            return "0"
        n = self.conductor
        parts = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            if k == 0:
                body, coef = "", c
            else:
                body = f"z{n}" if k == 1 else f"z{n}^{k}"
                coef = c
            neg = coef < 0
            mag = -coef if neg else coef
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            if not parts:
                parts.append(f"-{text}" if neg else text)
            else:
                parts.append(f"- {text}" if neg else f"+ {text}")
        return " ".join(parts)

    def __repr__(self):
        return f"CycScalar({str(self)!r})"

    def is_single_term(self):
        return len(self.coeffs) <= 1


def _coerce(x):
    if isinstance(x, CycScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return CycScalar(x)
    return NotImplemented


def root_of_unity(n, k=1):
    """zeta_n^k in canonical form; root_of_unity(n, 0) == 1."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"root_of_unity needs a positive order, got {n!r}")
    k %= n
    g = gcd(n, k) if k else n
    n, k = n // g, k // g
    if n == 1:
        return ONE
    _check_conductor(n)
    return CycScalar.from_coeffs(n, {k: 1})


ZERO = CycScalar(0)
ONE = CycScalar(1)
