"""Small exact linear algebra over Q (Fraction entries throughout)."""

from __future__ import annotations

from fractions import Fraction


def rref(matrix, width):
    """Row-reduce in place semantics-free: returns (rows, pivot columns)."""
    rows = [list(map(Fraction, r)) for r in matrix]
    pivots = []
    r = 0
    for c in range(width):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def solve(matrix, rhs):
    """One solution of A x = b with free variables set to zero, or None."""
    if not matrix:
        return [] if not any(rhs) else None
    width = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(aug, width)
    for row in rows:
        if not any(row[:width]) and row[width]:
            return None
    x = [Fraction(0)] * width
    for r, c in enumerate(pivots):
        x[c] = rows[r][width]
    return x


def solve_tracked(matrix, rhs, labels):
    """Solve A x = b; on inconsistency report which input rows combine to 0 = 1.

    Returns ("ok", solution) or ("inconsistent", offending label list).
    """
    if not matrix:
        return ("ok", [])
    width = len(matrix[0])
    m = len(matrix)
    aug = []
    for i, (row, b) in enumerate(zip(matrix, rhs)):
        combo = [Fraction(0)] * m
        combo[i] = Fraction(1)
        aug.append(list(row) + [b] + combo)
    rows, pivots = rref(aug, width)
    for row in rows:
        if not any(row[:width]) and row[width]:
            involved = [labels[j] for j in range(m) if row[width + 1 + j]]
            return ("inconsistent", involved)
    x = [Fraction(0)] * width
    for r, c in enumerate(pivots):
        x[c] = rows[r][width]
    return ("ok", x)


def nullspace(matrix, width):
    """Basis of the kernel of A as lists of Fractions."""
    rows, pivots = rref(matrix, width)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * width
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def independent_rows(matrix, width):
    """Indices of a maximal independent subset, scanning in order."""
    kept = []
    staged = []
    for i, row in enumerate(matrix):
        trial = staged + [list(row)]
        rows, pivots = rref(trial, width)
        if len(pivots) > len(staged):
            kept.append(i)
            staged = [r for r in rows if any(r)]
    return kept
