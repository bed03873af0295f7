"""Locally profinite groups presented by a filtration H_n of compact open subgroups.

Every model exposes the same small vocabulary: the group law, canonical
representatives of left cosets x*H_n, enumeration of H_n-cosets inside H_m,
the Haar measure mu(H_n) (normalized by mu(H_0) = 1), the modular function and
a conjugation-stable refinement level.

Elements are plain hashable Python values:

    qp(p)      Fraction with p-power denominator (the dense subgroup Z[1/p])
    zp(p)      int
    z          int
    shift(p)   (k, b) with k int, b as for qp; law (k,b)(k',b') = (k+k', b + p^k b')
    finite     int index into the element list
    product    tuple of factor elements

Modular function convention: mu(E x) = modular(x) * mu(E) for the left Haar
measure mu.
"""

import itertools
import json
import re
from fractions import Fraction
from functools import lru_cache

from .errors import ElementError, LevelRangeError, UsageError, ValidationError

__all__ = [
    "GroupModel",
    "Qp",
    "Zp",
    "Integers",
    "Shift",
    "FiniteGroup",
    "ProductGroup",
    "parse_group",
    "cyclic_group",
    "symmetric_group",
    "load_cayley",
    "DEFAULT_PADIC_LEVELS",
]

# desk-scale clamp on p-adic filtration indices
DEFAULT_PADIC_LEVELS = 12


class GroupModel:
    """Common interface; subclasses fill in the group-specific pieces."""

    descriptor = "?"
    min_level = 0
    max_level = 0
    abelian = True
    # saturating factors clamp foreign levels inside products (finite, z)
    saturating = False

    # -- levels ----------------------------------------------------------
    @property
    def level_range(self):
        return range(self.min_level, self.max_level + 1)

    def check_level(self, n):
        if not isinstance(n, int) or not self.min_level <= n <= self.max_level:
            raise LevelRangeError(
                f"level {n!r} outside [{self.min_level}, {self.max_level}] for {self.descriptor}"
            )
        return n

    @property
    def base_level(self):
        """Level used for the zero function and default windows (0 when valid)."""
        return min(max(0, self.min_level), self.max_level)

    def measure(self, n):
        """mu(H_n) with mu(H_0) = 1."""
        self.check_level(n)
        if n >= 0:
            return Fraction(1, self.index(0, n)) * self.haar_scale
        return Fraction(self.index(n, 0)) * self.haar_scale

    haar_scale = Fraction(1)

    def index(self, m, n):
        raise NotImplementedError

    def coset_reps(self, m, n):
        """Canonical level-n representatives of the H_n-cosets inside H_m."""
        self.check_level(m)
        self.check_level(n)
        if m > n:
            raise UsageError(f"coset_reps needs m <= n, got m={m}, n={n}")
        return self._coset_reps(m, n)

    def eq_at_level(self, x, y, n):
        return self.canonical_rep(x, n) == self.canonical_rep(y, n)

    def measure_coset(self, x, n, side="left"):
        if side == "left":
            return self.measure(n)
        if side == "right":
            return self.modular(x) * self.measure(n)
        raise UsageError(f"side must be 'left' or 'right', got {side!r}")

    def in_subgroup(self, x, n):
        """x in H_n."""
        return self.canonical_rep(x, n) == self.identity()

    def check(self, x):
        if not self.contains(x):
            raise ElementError(f"{x!r} is not an element of {self.descriptor}")
        return x

    def group_ops(self, op, x=None, y=None, n=None):
        if op == "mul":
            return self.mul(self.check(x), self.check(y))
        if op == "inv":
            return self.inv(self.check(x))
        if op == "identity":
            return self.identity()
        if op == "eq_at_level":
            return self.eq_at_level(self.check(x), self.check(y), self.check_level(n))
        raise UsageError(f"unknown group op {op!r}")

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor}>"

    def __eq__(self, other):
        return isinstance(other, GroupModel) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)


# --------------------------------------------------------------------------
# p-adic helpers on Z[1/p]

def _is_p_power(d, p):
    while d % p == 0:
        d //= p
    return d == 1


def valuation(x, p):
    """p-adic valuation of a nonzero element of Z[1/p]; None for 0."""
    x = Fraction(x)
    if not x:
        return None
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _mod_pn(x, p, n):
    """Representative of x + p^n Z_p in [0, p^n), for x in Z[1/p]."""
    if n >= 0:
        m = p**n
        num, den = x.numerator, x.denominator
        # den is a p-power; x mod p^n computed on numerator*(p^n/den) scale
        return Fraction(num % (m * den), den)
    den_m = p ** (-n)
    num, den = x.numerator, x.denominator
    # x mod 1/den_m  ==  (x*den_m mod 1) / den_m
    scaled_num = num * den_m
    return Fraction(scaled_num % den, den * den_m)


_PADIC_LITERAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*(?:\^\s*(\d+))?)?\s*$")


def _parse_padic(text, p):
    m = _PADIC_LITERAL.match(text)
    if not m:
        raise ElementError(f"cannot parse p-adic literal {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if m.group(3):
        den = den ** int(m.group(3))
    if den == 0:
        raise ElementError(f"zero denominator in {text!r}")
    value = Fraction(num, den)
    if not _is_p_power(value.denominator, p):
        raise ElementError(f"{text!r} has a denominator prime to {p}: not in Z[1/{p}]")
    return value


class Qp(GroupModel):
    """The additive group Q_p, H_n = p^n Z_p."""

    def __init__(self, p, levels=DEFAULT_PADIC_LEVELS):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise UsageError(f"qp needs a prime, got {p}")
        self.p = p
        self.min_level = -levels
        self.max_level = levels
        self.descriptor = f"qp:{p}"

    def identity(self):
        return Fraction(0)

    def mul(self, x, y):
        return x + y

    def inv(self, x):
        return -x

    def contains(self, x):
        return isinstance(x, (int, Fraction)) and _is_p_power(Fraction(x).denominator, self.p)

    def canonical_rep(self, x, n):
        return _mod_pn(Fraction(x), self.p, n)

    def index(self, m, n):
        return self.p ** (n - m)

    def _coset_reps(self, m, n):
        return _padic_reps(self.p, m, n)

    def conj_level(self, x, n):
        return self.check_level(n)

    def modular(self, x):
        return Fraction(1)

    def parse_element(self, text):
        return _parse_padic(text, self.p)

    def format_element(self, x):
        return str(Fraction(x))

    def sort_key(self, x):
        return Fraction(x)


@lru_cache(maxsize=None)
def _padic_reps(p, m, n):
    step = Fraction(p) ** m
    return tuple(j * step for j in range(p ** (n - m)))


class Zp(Qp):
    """The compact group Z_p (integers as the dense subgroup), levels n >= 0."""

    def __init__(self, p, levels=DEFAULT_PADIC_LEVELS):
        super().__init__(p, levels)
        self.min_level = 0
        self.descriptor = f"zp:{p}"

    def identity(self):
        return 0

    def contains(self, x):
        return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)

    def canonical_rep(self, x, n):
        return int(x) % (self.p**n)

    def _coset_reps(self, m, n):
        return tuple(j * self.p**m for j in range(self.p ** (n - m)))

    def parse_element(self, text):
        value = _parse_padic(text, self.p)
        if value.denominator != 1:
            raise ElementError(f"{text!r} is not in Z_{self.p}")
        return int(value)

    def format_element(self, x):
        return str(int(x))


class Integers(GroupModel):
    """The discrete group Z; its only compact open subgroup is {0}."""

    descriptor = "z"
    saturating = True

    def identity(self):
        return 0

    def mul(self, x, y):
        return x + y

    def inv(self, x):
        return -x

    def contains(self, x):
        return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)

    def canonical_rep(self, x, n):
        return int(x)

    def index(self, m, n):
        return 1

    def _coset_reps(self, m, n):
        return (0,)

    def conj_level(self, x, n):
        return self.check_level(n)

    def modular(self, x):
        return Fraction(1)

    def parse_element(self, text):
        try:
            return int(text.strip())
        except ValueError:
            raise ElementError(f"{text!r} is not an integer") from None

    def format_element(self, x):
        return str(int(x))

    def sort_key(self, x):
        return int(x)


class Shift(GroupModel):
    """Q_p x| Z with (k,b)(k',b') = (k+k', b + p^k b'); H_n = {0} x p^n Z_p.

    Not unimodular: mu(H_n (k,b)) = p^k mu(H_n).
    """

    abelian = False

    def __init__(self, p, levels=DEFAULT_PADIC_LEVELS):
        Qp(p)  # validates p
        self.p = p
        self.min_level = -levels
        self.max_level = levels
        self.descriptor = f"shift:{p}"

    def identity(self):
        return (0, Fraction(0))

    def mul(self, x, y):
        k, b = x
        k2, b2 = y
        return (k + k2, b + Fraction(self.p) ** k * b2)

    def inv(self, x):
        k, b = x
        return (-k, -b / Fraction(self.p) ** k)

    def contains(self, x):
        return (
            isinstance(x, tuple)
            and len(x) == 2
            and isinstance(x[0], int)
            and isinstance(x[1], (int, Fraction))
            and _is_p_power(Fraction(x[1]).denominator, self.p)
        )

    def canonical_rep(self, x, n):
        k, b = x
        return (k, _mod_pn(Fraction(b), self.p, n + k))

    def index(self, m, n):
        return self.p ** (n - m)

    def _coset_reps(self, m, n):
        return tuple((0, b) for b in _padic_reps(self.p, m, n))

    def conj_level(self, x, n):
        # (k,b) H_m (k,b)^-1 = {0} x p^(m+k) Z_p
        self.check_level(n)
        m = n - x[0]
        if not self.min_level <= m <= self.max_level:
            raise LevelRangeError(f"conj_level({x}, {n}) = {m} leaves the level range")
        return m

    def modular(self, x):
        return Fraction(self.p) ** x[0]

    def parse_element(self, text):
        parts = split_top_level(_strip_parens(text))
        if len(parts) != 2:
            raise ElementError(f"shift element must look like '(k, b)', got {text!r}")
        try:
            k = int(parts[0])
        except ValueError:
            raise ElementError(f"bad shift exponent in {text!r}") from None
        return (k, _parse_padic(parts[1], self.p))

    def format_element(self, x):
        return f"({x[0]}, {Fraction(x[1])})"

    def sort_key(self, x):
        return (x[0], Fraction(x[1]))


class FiniteGroup(GroupModel):
    """A finite group from a Cayley table; H_0 = {e}, H_-1 = G.

    Haar measure is counting measure times ``haar_scale`` (1 unless this is
    a Fourier dual).
    """

    saturating = True

    def __init__(self, names, table, descriptor, cyclic_order=None, haar_scale=1):
        self.names = list(names)
        self.table = [list(row) for row in table]
        self.descriptor = descriptor
        self.cyclic_order = cyclic_order
        self.haar_scale = Fraction(haar_scale)
        self.min_level = -1
        self.max_level = 0
        self._index_of = {name: i for i, name in enumerate(self.names)}
        self._validate()
        n = len(self.names)
        self.abelian = all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(n))

    def _validate(self):
        n = len(self.names)
        if n == 0:
            raise ValidationError("empty group")
        if len(set(self.names)) != n:
            raise ValidationError("duplicate element names")
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise ValidationError("Cayley table must be square and match the element list")
        if any(not (isinstance(v, int) and 0 <= v < n) for r in self.table for v in r):
            raise ValidationError("Cayley table entries must name elements")
        ident = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e] for x in range(n))]
        if not ident:
            raise ValidationError("no identity element")
        self._e = ident[0]
        self._inv = []
        for x in range(n):
            inv = [y for y in range(n) if self.table[x][y] == self._e]
            if len(inv) != 1 or self.table[inv[0]][x] != self._e:
                raise ValidationError(f"element {self.names[x]!r} has no two-sided inverse")
            self._inv.append(inv[0])
        t = self.table
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                for c in range(n):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise ValidationError("Cayley table is not associative")

    @property
    def order(self):
        return len(self.names)

    def identity(self):
        return self._e

    def mul(self, x, y):
        return self.table[x][y]

    def inv(self, x):
        return self._inv[x]

    def contains(self, x):
        return isinstance(x, int) and 0 <= x < len(self.names)

    def canonical_rep(self, x, n):
        return self._e if n < 0 else x

    def index(self, m, n):
        return len(self.names) if (m < 0 <= n) else 1

    def _coset_reps(self, m, n):
        if m < 0 <= n:
            return tuple(range(len(self.names)))
        return (self._e,)

    def conj_level(self, x, n):
        return self.check_level(n)

    def modular(self, x):
        return Fraction(1)

    def parse_element(self, text):
        t = text.strip()
        if t == "e":
            return self._e
        try:
            return self._index_of[t]
        except KeyError:
            raise ElementError(f"{text!r} is not an element of {self.descriptor}") from None

    def format_element(self, x):
        return self.names[x]

    def sort_key(self, x):
        return x


def cyclic_group(n, haar_scale=1, descriptor=None):
    names = [str(i) for i in range(n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(names, table, descriptor or f"finite:Z{n}", cyclic_order=n, haar_scale=haar_scale)


def symmetric_group(n):
    """S_n; elements named 'p' + one-line notation, e.g. p213 swaps 1 and 2."""
    perms = list(itertools.permutations(range(n)))
    idx = {p: i for i, p in enumerate(perms)}
    names = ["p" + "".join(str(v + 1) for v in p) for p in perms]
    # (s*t)(i) = s(t(i))
    table = [[idx[tuple(s[t[i]] for i in range(n))] for t in perms] for s in perms]
    return FiniteGroup(names, table, f"finite:S{n}")


def load_cayley(path):
    """Load {"elements": [...], "table": [[name, ...], ...]} and validate the axioms."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        names = [str(n) for n in data["elements"]]
        index = {n: i for i, n in enumerate(names)}
        table = [[index[str(v)] for v in row] for row in data["table"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed Cayley file {path}: {exc}") from None
    return FiniteGroup(names, table, f"cayley@{path}")


# --------------------------------------------------------------------------
# products


class ProductGroup(GroupModel):
    """Direct product with a shared level index.

    Saturating factors (finite groups, Z) clamp the shared level into their own
    range, so prod(qp:2, finite:Z3) has the levels of qp:2.
    """

    def __init__(self, factors):
        if not factors:
            raise UsageError("product of no groups")
        self.factors = tuple(factors)
        self.descriptor = "prod(" + ",".join(f.descriptor for f in self.factors) + ")"
        strict = [f for f in self.factors if not f.saturating]
        pool = strict or self.factors
        if strict:
            self.min_level = max(f.min_level for f in strict)
            self.max_level = min(f.max_level for f in strict)
        else:
            self.min_level = min(f.min_level for f in pool)
            self.max_level = max(f.max_level for f in pool)
        if self.min_level > self.max_level:
            raise UsageError(f"factors of {self.descriptor} share no level")
        self.abelian = all(f.abelian for f in self.factors)
        self.saturating = not strict

    def _clamp(self, f, n):
        return min(max(n, f.min_level), f.max_level)

    def identity(self):
        return tuple(f.identity() for f in self.factors)

    def mul(self, x, y):
        return tuple(f.mul(a, b) for f, a, b in zip(self.factors, x, y))

    def inv(self, x):
        return tuple(f.inv(a) for f, a in zip(self.factors, x))

    def contains(self, x):
        return (
            isinstance(x, tuple)
            and len(x) == len(self.factors)
            and all(f.contains(a) for f, a in zip(self.factors, x))
        )

    def canonical_rep(self, x, n):
        return tuple(f.canonical_rep(a, self._clamp(f, n)) for f, a in zip(self.factors, x))

    def index(self, m, n):
        out = 1
        for f in self.factors:
            out *= f.index(self._clamp(f, m), self._clamp(f, n))
        return out

    def measure(self, n):
        self.check_level(n)
        out = Fraction(1)
        for f in self.factors:
            out *= f.measure(self._clamp(f, n))
        return out

    def _coset_reps(self, m, n):
        parts = [f.coset_reps(self._clamp(f, m), self._clamp(f, n)) for f in self.factors]
        return tuple(itertools.product(*parts))

    def conj_level(self, x, n):
        self.check_level(n)
        m = n
        for f, a in zip(self.factors, x):
            if not f.saturating:
                m = max(m, f.conj_level(a, self._clamp(f, n)))
        return self.check_level(m)

    def modular(self, x):
        out = Fraction(1)
        for f, a in zip(self.factors, x):
            out *= f.modular(a)
        return out

    def parse_element(self, text):
        parts = split_top_level(_strip_parens(text))
        if len(parts) != len(self.factors):
            raise ElementError(f"expected a {len(self.factors)}-tuple, got {text!r}")
        return tuple(f.parse_element(s) for f, s in zip(self.factors, parts))

    def format_element(self, x):
        return "(" + ", ".join(f.format_element(a) for f, a in zip(self.factors, x)) + ")"

    def sort_key(self, x):
        return tuple(f.sort_key(a) for f, a in zip(self.factors, x))


# --------------------------------------------------------------------------
# descriptor grammar


def _strip_parens(text):
    t = text.strip()
    if not (t.startswith("(") and t.endswith(")")):
        raise ElementError(f"expected a parenthesized tuple, got {text!r}")
    return t[1:-1]


def split_top_level(text, sep=","):
    """Split on separators not nested inside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


_GROUP_CACHE = {}


def parse_group(desc):
    """Parse finite:<name> | cayley@<file> | zp:<p> | qp:<p> | z | shift:<p> | prod(...)."""
    key = desc.strip()
    if key in _GROUP_CACHE:
        return _GROUP_CACHE[key]
    g = _parse_group(key)
    _GROUP_CACHE[key] = g
    return g


def _parse_group(d):
    if d == "z":
        return Integers()
    if d.startswith("prod(") and d.endswith(")"):
        return ProductGroup([parse_group(s) for s in split_top_level(d[5:-1])])
    if d.startswith("dual(") and d.endswith(")"):
        from .fourier import dual_group

        return dual_group(parse_group(d[5:-1]))
    if d.startswith("cayley@"):
        return load_cayley(d[len("cayley@"):])
    m = re.fullmatch(r"(zp|qp|shift):(\d+)", d)
    if m:
        cls = {"zp": Zp, "qp": Qp, "shift": Shift}[m.group(1)]
        return cls(int(m.group(2)))
    if d.startswith("finite:"):
        name = d[len("finite:"):]
        if name.startswith("cayley@"):
            return load_cayley(name[len("cayley@"):])
        m = re.fullmatch(r"Z(\d+)", name)
        if m and int(m.group(1)) >= 1:
            return cyclic_group(int(m.group(1)))
        m = re.fullmatch(r"S(\d)", name)
        if m and 1 <= int(m.group(1)) <= 5:
            return symmetric_group(int(m.group(1)))
        raise UsageError(f"unknown finite group {name!r} (use Z<n>, S<n> or cayley@<file>)")
    raise UsageError(f"cannot parse group descriptor {d!r}")
