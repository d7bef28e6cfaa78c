"""Exact Gaussian elimination over GF(q^2).

Small dense systems only: the package never solves anything bigger than the
27-equation, 9-unknown intertwiner systems, so plain row reduction over
FieldElem entries is the right tool.
"""

from __future__ import annotations

from .gf import Field, FieldElem


def rref(rows: list[list[FieldElem]], field: Field):
    """Reduced row echelon form in place; returns the pivot column list."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inv()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def nullspace(rows: list[list[FieldElem]], ncols: int, field: Field):
    """Basis of the right nullspace {v : rows . v = 0}.

    Returns a list of ncols-tuples of FieldElem, one per free column, in
    ascending free-column order (deterministic).
    """
    work = [list(row) for row in rows if any(row)]
    if not work:
        one, zero = field.one, field.zero
        return [tuple(one if i == j else zero for i in range(ncols))
                for j in range(ncols)]
    pivots = rref(work, field)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    zero, one = field.zero, field.one
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -work[r][fc]
        basis.append(tuple(v))
    return basis
