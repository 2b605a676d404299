# cython: language_level=3
"""Compiled twin of qla_py: fraction-free integer row reduction.

Arithmetic stays on Python ints (arbitrary precision is required), the win
comes from typed loop indices and the removal of interpreter dispatch in the
inner update loops.  Keep the semantics identical to qla_py.
"""

from math import gcd

BACKEND = "cython"


cdef list _copy(rows):
    return [list(r) for r in rows]


cdef Py_ssize_t _pivot_row(list m, Py_ssize_t start, Py_ssize_t col):
    cdef Py_ssize_t i, best = -1
    cdef long best_bits = -1, bits
    for i in range(start, len(m)):
        v = (<list>m[i])[col]
        if v:
            bits = (v if v > 0 else -v).bit_length()
            if best < 0 or bits < best_bits:
                best = i
                best_bits = bits
    return best


def echelon(rows, Py_ssize_t ncols):
    cdef list m = _copy(rows)
    cdef Py_ssize_t nrows = len(m)
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, i, j
    prev = 1
    for c in range(ncols):
        if r >= nrows:
            break
        i = _pivot_row(m, r, c)
        if i < 0:
            continue
        if i != r:
            m[r], m[i] = m[i], m[r]
        piv = (<list>m[r])[c]
        # full Bareiss update: head == 0 rows are still scaled by piv so that
        # every entry stays an exact minor and // never truncates
        for i in range(r + 1, nrows):
            row_i = <list>m[i]
            head = row_i[c]
            row_r = <list>m[r]
            for j in range(c, ncols):
                row_i[j] = (piv * row_i[j] - head * row_r[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows, Py_ssize_t ncols):
    return len(echelon(rows, ncols)[1])


cdef list _primitive(list row):
    cdef Py_ssize_t j
    g = 0
    for j in range(len(row)):
        v = row[j]
        if v:
            g = gcd(g, v if v > 0 else -v)
    if g > 1:
        row = [v // g for v in row]
    else:
        row = list(row)
    for j in range(len(row)):
        v = row[j]
        if v:
            if v < 0:
                row = [-x for x in row]
            break
    return row


def rref(rows, Py_ssize_t ncols):
    # one-pass fraction-free Gauss-Jordan; the division by the previous
    # pivot is exact, keeping entries minor-sized
    cdef list m = _copy(rows)
    cdef Py_ssize_t nrows = len(m)
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, i, j
    prev = 1
    for c in range(ncols):
        if r >= nrows:
            break
        i = _pivot_row(m, r, c)
        if i < 0:
            continue
        if i != r:
            m[r], m[i] = m[i], m[r]
        row_r = <list>m[r]
        piv = row_r[c]
        for i in range(nrows):
            if i == r:
                continue
            row_i = <list>m[i]
            head = row_i[c]
            for j in range(ncols):
                row_i[j] = (piv * row_i[j] - head * row_r[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return [_primitive(<list>row) for row in m[: len(pivots)]], pivots


def nullspace(rows, Py_ssize_t ncols):
    red_, pivots_ = rref(rows, ncols)
    cdef list red = <list>red_
    cdef list pivots = <list>pivots_
    cdef set pivot_set = set(pivots)
    cdef list basis = []
    cdef Py_ssize_t fc, r
    for fc in range(ncols):
        if fc in pivot_set:
            continue
        vec = [0] * ncols
        denom = 1
        for r in range(len(pivots)):
            p = (<list>red[r])[<Py_ssize_t>pivots[r]]
            denom = denom * p // gcd(denom, p)
        vec[fc] = denom
        for r in range(len(pivots)):
            pc = <Py_ssize_t>pivots[r]
            p = (<list>red[r])[pc]
            vec[pc] = -(<list>red[r])[fc] * (denom // p)
        basis.append(_primitive(<list>vec))
    return basis
