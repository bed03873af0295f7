"""Exact row reduction over cyclotomic fields."""

from .scalar import CycScalar

__all__ = ["rank", "row_echelon"]


def _pivot_cost(c):
    # small conductors and few terms keep later arithmetic cheap
    return (c.conductor, len(c.coeffs))


def row_echelon(rows):
    """Gauss-Jordan elimination; returns (echelon rows, pivot columns).

    Every entry stays an exact CycScalar; the pivot in each column is the
    cheapest nonzero candidate rather than the first one.
    """
    work = [[c if isinstance(c, CycScalar) else CycScalar(c) for c in row] for row in rows]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots = []
    r = 0
    for col in range(ncols):
        best = None
        for i in range(r, len(work)):
            c = work[i][col]
            if not c.is_zero() and (best is None or _pivot_cost(c) < _pivot_cost(work[best][col])):
                best = i
        if best is None:
            continue
        work[r], work[best] = work[best], work[r]
        inv = work[r][col].inverse()
        work[r] = [v * inv for v in work[r]]
        for i in range(len(work)):
            if i != r:
                factor = work[i][col]
                if not factor.is_zero():
                    work[i] = [a - factor * b for a, b in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def rank(rows):
    """Exact rank of a matrix given as a list of rows."""
    if not rows or not rows[0]:
        return 0
    return len(row_echelon(rows)[1])

