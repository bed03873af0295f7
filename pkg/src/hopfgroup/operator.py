"""Exact matrices of convolution and multiplication operators on truncations of L^2(G).

A truncation is a finite window of level-n cells r H_n with basis chi(r H_n).
All cells have the same measure mu(H_n), so the Gram matrix is a scalar
multiple of the identity and adjoints are conjugate transposes.
"""

from .convalg import ConvElement, conv_mul
from .errors import LeakageError, UsageError
from .linalg import rank
from .schwartz import BSFunction
from .scalar import ONE, ZERO

__all__ = [
    "Truncation",
    "TruncMatrix",
    "matrix_of_mult",
    "matrix_of_conv",
    "exact_rank",
    "commutator_is_zero",
    "commutator_witness",
]


class Truncation:
    """Window of level-n cells; ``reps`` are canonical and sorted."""

    __slots__ = ("group", "level", "reps", "_index")

    def __init__(self, group, level, reps):
        group.check_level(level)
        canon = {group.canonical_rep(group.check(r), level) for r in reps}
        self.group = group
        self.level = level
        self.reps = tuple(sorted(canon, key=group.sort_key))
        self._index = {r: i for i, r in enumerate(self.reps)}

    @classmethod
    def ball(cls, group, top, level):
        """All level-n cells inside the subgroup H_top (e.g. 2^-k Z_2 for top = -k)."""
        return cls(group, level, group.coset_reps(top, level))

    @classmethod
    def covering(cls, functions, level):
        """Cells of the given level meeting the support of any listed function."""
        group = functions[0].group
        reps = set()
        for f in functions:
            reps |= f.support_cells(level)
        return cls(group, level, reps)

    def __len__(self):
        return len(self.reps)

    def index_of(self, r):
        return self._index.get(self.group.canonical_rep(r, self.level))

    def refine(self, level):
        if level < self.level:
            raise UsageError("refinement must not coarsen")
        hs = self.group.coset_reps(self.level, level)
        return Truncation(self.group, level, [self.group.mul(r, h) for r in self.reps for h in hs])

    def vector(self, f):
        """Coordinates of a window-supported function; raises on leakage."""
        if f.is_zero():
            return [ZERO] * len(self.reps)
        if f.level > self.level:
            raise UsageError(f"function at level {f.level} is finer than the window level {self.level}")
        table = f.refine(self.level)
        missing = [r for r in table if r not in self._index]
        if missing:
            raise LeakageError(self._leak_message(missing), missing)
        return [table.get(r, ZERO) for r in self.reps]

    def function(self, vec):
        return BSFunction(self.group, self.level, {r: c for r, c in zip(self.reps, vec)})

    def _leak_message(self, missing):
        fmt = self.group.format_element
        names = ", ".join(fmt(r) for r in sorted(missing, key=self.group.sort_key)[:8])
        more = "" if len(missing) <= 8 else f" (+{len(missing) - 8} more)"
        return f"image leaves the window at level {self.level}: missing cells {names}{more}"

    def describe(self):
        fmt = self.group.format_element
        return {"level": self.level, "cells": [fmt(r) for r in self.reps]}

    def __eq__(self, other):
        return (
            isinstance(other, Truncation)
            and self.group == other.group
            and self.level == other.level
            and self.reps == other.reps
        )

    def __hash__(self):
        return hash((self.group.descriptor, self.level, self.reps))


class TruncMatrix:
    """Dense exact matrix between truncations; ``leaked`` lists dropped cells."""

    __slots__ = ("domain", "codomain", "rows", "leaked", "compressed")

    def __init__(self, domain, codomain, rows, leaked=(), compressed=False):
        if len(rows) != len(codomain) or any(len(r) != len(domain) for r in rows):
            raise UsageError("matrix shape does not match its truncations")
        self.domain = domain
        self.codomain = codomain
        self.rows = [list(r) for r in rows]
        self.leaked = tuple(leaked)
        self.compressed = compressed

    @property
    def shape(self):
        return (len(self.codomain), len(self.domain))

    def __matmul__(self, other):
        if self.domain != other.codomain:
            raise UsageError("incompatible truncations in matrix product")
        k = len(other.domain)
        # sparse rows of the right factor: t -> [(j, b)]
        right = [[(j, b) for j, b in enumerate(row) if not b.is_zero()] for row in other.rows]
        rows = []
        for a in self.rows:
            acc = {}
            for t, at in enumerate(a):
                if at.is_zero() or not right[t]:
                    continue
                for j, b in right[t]:
                    acc[j] = acc[j] + at * b if j in acc else at * b
            rows.append([acc.get(j, ZERO) for j in range(k)])
        return TruncMatrix(other.domain, self.codomain, rows)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise UsageError(f"shape mismatch {self.shape} vs {other.shape}")
        rows = [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        return TruncMatrix(self.domain, self.codomain, rows)

    def adjoint(self):
        rows = [[self.rows[i][j].conjugate() for i in range(len(self.rows))] for j in range(len(self.domain))]
        return TruncMatrix(self.codomain, self.domain, rows)

    def apply(self, vec):
        return [sum((a * b for a, b in zip(row, vec)), ZERO) for row in self.rows]

    def is_zero(self):
        return all(c.is_zero() for row in self.rows for c in row)

    def __eq__(self, other):
        return isinstance(other, TruncMatrix) and self.shape == other.shape and self.rows == other.rows

    __hash__ = None

    def __repr__(self):
        body = "; ".join(" ".join(str(c) for c in row) for row in self.rows)
        return f"TruncMatrix[{body}]"


def matrix_of_mult(g, t):
    """diag(g(r)) for the multiplication operator M(g)."""
    if g.group != t.group:
        raise UsageError("function and window live on different groups")
    if g and g.level > t.level:
        raise UsageError(
            f"M(g) needs a window at level >= {g.level}; refine the truncation first"
        )
    diag = [g(r) for r in t.reps]
    rows = [[diag[i] if i == j else ZERO for j in range(len(t))] for i in range(len(t))]
    return TruncMatrix(t, t, rows)


def matrix_of_conv(f, t, exact=True):
    """Column j is the coordinate vector of f * chi(r_j H_n).

    In exact mode any image leaving the window raises LeakageError naming the
    missing cells; otherwise they are dropped (compression P_K L_f P_K) and
    recorded in ``leaked``.
    """
    if isinstance(f, ConvElement):
        f = f.symbol
    if f.group != t.group:
        raise UsageError("function and window live on different groups")
    group = t.group
    cols = []
    leaked = set()
    for r in t.reps:
        image = conv_mul(ConvElement(f), ConvElement(BSFunction._trusted(group, t.level, {r: ONE}))).symbol
        table = image.refine(t.level) if image else {}
        col = [ZERO] * len(t)
        for s, c in table.items():
            i = t.index_of(s)
            if i is None:
                leaked.add(s)
            else:
                col[i] = c
        cols.append(col)
    if leaked and exact:
        raise LeakageError(t._leak_message(leaked), leaked)
    rows = [[cols[j][i] for j in range(len(t))] for i in range(len(t))]
    ordered = sorted(leaked, key=group.sort_key)
    return TruncMatrix(t, t, rows, ordered, compressed=not exact)


def exact_rank(m):
    return rank(m.rows) if m.rows else 0


def commutator_witness(a, b):
    """First (i, j, value) with (ab - ba)[i][j] != 0, or None."""
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise UsageError(f"commutator needs equal square shapes, got {a.shape} and {b.shape}")
    c = (a @ b) - (b @ a)
    for i, row in enumerate(c.rows):
        for j, v in enumerate(row):
            if not v.is_zero():
                return (i, j, v)
    return None


def commutator_is_zero(a, b):
    return commutator_witness(a, b) is None
