"""Fraction-free integer row reduction (pure Python reference implementation).

All routines take matrices as lists of rows of Python ints and never mutate
their input.  Rational matrices are handled one level up by clearing
denominators row by row, which changes neither row space nor null space.

The compiled twin of this module is qla_cy.pyx; both must stay
behaviourally identical (the test suite runs the same checks against each).
"""

from math import gcd

BACKEND = "python"


def _copy(rows):
    return [list(r) for r in rows]


def _pivot_row(rows, start, col):
    # smallest nonzero magnitude wins; ties go to the earliest row
    best = -1
    best_bits = -1
    for i in range(start, len(rows)):
        v = rows[i][col]
        if v:
            bits = (v if v > 0 else -v).bit_length()
            if best < 0 or bits < best_bits:
                best = i
                best_bits = bits
    return best


def echelon(rows, ncols):
    """Bareiss forward elimination.

    Returns (reduced rows, pivot column list).  The returned matrix is in
    (non-reduced) echelon form; entries stay integral because every division
    by the previous pivot is exact.
    """
    m = _copy(rows)
    nrows = len(m)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        i = _pivot_row(m, r, c)
        if i < 0:
            continue
        if i != r:
            m[r], m[i] = m[i], m[r]
        piv = m[r][c]
        # the full Bareiss update (including head == 0 rows, which are scaled
        # by piv) keeps every entry an exact minor, so // never truncates
        for i in range(r + 1, nrows):
            head = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for j in range(c, ncols):
                row_i[j] = (piv * row_i[j] - head * row_r[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows, ncols):
    return len(echelon(rows, ncols)[1])


def _primitive(row):
    g = 0
    for v in row:
        if v:
            g = gcd(g, v if v > 0 else -v)
    if g > 1:
        row = [v // g for v in row]
    else:
        row = list(row)
    for v in row:
        if v:
            if v < 0:
                row = [-x for x in row]
            break
    return row


def rref(rows, ncols):
    """Canonical reduced echelon basis of the row space.

    One-pass fraction-free Gauss-Jordan: every non-pivot row (above and
    below) takes the update (piv * row - head * pivot_row) // prev, which is
    an exact division, so entries stay minor-sized instead of compounding.
    Each returned row is primitive with positive pivot; two matrices have
    the same row space over Q iff their rref outputs are identical.
    """
    m = _copy(rows)
    nrows = len(m)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        i = _pivot_row(m, r, c)
        if i < 0:
            continue
        if i != r:
            m[r], m[i] = m[i], m[r]
        piv = m[r][c]
        row_r = m[r]
        for i in range(nrows):
            if i == r:
                continue
            row_i = m[i]
            head = row_i[c]
            for j in range(ncols):
                row_i[j] = (piv * row_i[j] - head * row_r[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return [_primitive(row) for row in m[: len(pivots)]], pivots


def nullspace(rows, ncols):
    """Primitive integer basis of the right kernel, one vector per free column."""
    red, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        # numerators over the common denominator prod of pivots: scale directly
        vec = [0] * ncols
        denom = 1
        for r, pc in enumerate(pivots):
            denom = denom * red[r][pc] // gcd(denom, red[r][pc])
        vec[fc] = denom
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc] * (denom // red[r][pc])
        basis.append(_primitive(vec))
    return basis
