"""Exact linear algebra over Q on top of the integer row-reduction kernels.

Conventions used throughout the package:

* vectors are rows; a linear map with matrix M (shape n x m, list of n rows)
  acts on the right, v |-> v @ M;
* a subspace is a list of spanning row vectors; its canonical form is the
  primitive integer rref, so two subspaces are equal iff their canonical
  forms are equal as lists.

Every function accepts entries that are ints or fractions.Fraction and is
exact.  Denominators are cleared row by row, which preserves row spaces and
null spaces.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from . import echelon as _echelon
from . import nullspace as _nullspace
from . import rank as _rank
from . import rref as _rref


def _int_rows(rows):
    out = []
    for row in rows:
        den = 1
        for v in row:
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
        if den == 1:
            out.append([int(v) for v in row])
        else:
            out.append([int(v * den) for v in row])
    return out


def transpose(rows, ncols):
    return [[row[j] for row in rows] for j in range(ncols)]


def mat_mul(a, b):
    """Product of row-matrices: (n x k) @ (k x m)."""
    if not a:
        return []
    m = len(b[0]) if b else 0
    bt = transpose(b, m)
    return [[sum(ra[i] * bc[i] for i in range(len(ra))) for bc in bt] for ra in a]


def identity(n):
    return [[Fraction(i == j) for j in range(n)] for i in range(n)]


def zero_matrix(n, m):
    return [[Fraction(0)] * m for _ in range(n)]


def qrank(rows, ncols):
    if not rows or ncols == 0:
        return 0
    return _rank(_int_rows(rows), ncols)


def row_space(rows, ncols):
    """Canonical (primitive integer rref) basis of the row span."""
    if not rows or ncols == 0:
        return []
    red, _ = _rref(_int_rows(rows), ncols)
    return red


def right_nullspace(rows, ncols):
    """Basis of {x : M x = 0}, as rows of length ncols."""
    if ncols == 0:
        return []
    if not rows:
        return [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
    return _nullspace(_int_rows(rows), ncols)


def left_nullspace(rows, ncols):
    """Basis of {v : v @ M = 0} for M with len(rows) rows."""
    n = len(rows)
    if n == 0:
        return []
    return right_nullspace(transpose(rows, ncols), n)


def subspace_eq(a, b, ncols):
    return row_space(a, ncols) == row_space(b, ncols)


def subspace_contains(big, small, ncols):
    if not small:
        return True
    r = qrank(big, ncols)
    return qrank(list(big) + list(small), ncols) == r


def intersect_rowspaces(a, b, ncols):
    """Basis of rowspace(a) n rowspace(b) (Zassenhaus style via kernels)."""
    if not a or not b:
        return []
    stacked = list(a) + list(b)
    combos = left_nullspace(stacked, ncols)
    # each combo c gives sum c_i a_i = -sum c_j b_j, a vector in the intersection
    out = []
    for c in combos:
        vec = [sum(Fraction(c[i]) * Fraction(a[i][j]) for i in range(len(a))) for j in range(ncols)]
        if any(vec):
            out.append(vec)
    return row_space(out, ncols)


def solve_in_span(basis, targets, ncols):
    """Coordinates of each target row in the span of the basis rows.

    The basis rows must be linearly independent.  Returns a list of
    coordinate rows (Fractions), or raises ValueError if some target is not
    in the span.
    """
    d = len(basis)
    k = len(targets)
    if k == 0:
        return []
    if d == 0:
        for t in targets:
            if any(t):
                raise ValueError("target not in span")
        return [[] for _ in range(k)]
    # columns: basis vectors, then targets; rows: ambient coordinates
    aug = [
        [basis[r][i] for r in range(d)] + [targets[s][i] for s in range(k)]
        for i in range(ncols)
    ]
    red, pivots = _rref(_int_rows(aug), d + k)
    if len(pivots) != d or any(p >= d for p in pivots):
        raise ValueError("basis dependent or target not in span")
    coords = [[Fraction(0)] * d for _ in range(k)]
    for r, p in enumerate(pivots):
        piv = red[r][p]
        for s in range(k):
            coords[s][p] = Fraction(red[r][d + s], piv)
    return coords


class Quotient:
    """A quotient V/W of row subspaces of an ambient Q^n.

    V is given by independent spanning rows, W by rows contained in V.  The
    class exposes quotient coordinates and induced matrices of operators
    that preserve both spaces.
    """

    def __init__(self, v_rows, w_rows, ncols):
        self.ncols = ncols
        self.v_rows = [list(map(Fraction, r)) for r in v_rows]
        d = len(self.v_rows)
        if w_rows:
            w_coords = solve_in_span(self.v_rows, w_rows, ncols)
        else:
            w_coords = []
        self._w_red, self._w_pivots = (
            (_rref(_int_rows(w_coords), d) if w_coords else ([], []))
        )
        pivot_set = set(self._w_pivots)
        self.free = [i for i in range(d) if i not in pivot_set]
        self.dim = len(self.free)

    def reduce_coords(self, coords):
        x = list(map(Fraction, coords))
        for row, p in zip(self._w_red, self._w_pivots):
            if x[p]:
                c = x[p] / row[p]
                for j in range(len(x)):
                    if row[j]:
                        x[j] -= c * Fraction(row[j])
        return [x[i] for i in self.free]

    def project(self, ambient_rows):
        """Quotient coordinates of ambient vectors lying in V."""
        if not ambient_rows:
            return []
        coords = solve_in_span(self.v_rows, ambient_rows, self.ncols)
        return [self.reduce_coords(c) for c in coords]

    def basis_reps(self):
        """Ambient representatives of the quotient basis."""
        return [self.v_rows[i] for i in self.free]

    def induced_matrix(self, op_rows):
        """Matrix (dim x dim) of v |-> v @ op on the quotient."""
        images = [mat_mul([rep], op_rows)[0] for rep in self.basis_reps()]
        return self.project(images)


def restrict_operator(sub_rows, op_rows, ncols):
    """Matrix of an operator on an invariant row-subspace, in the given basis."""
    if not sub_rows:
        return []
    images = [mat_mul([r], op_rows)[0] for r in sub_rows]
    return solve_in_span(sub_rows, images, ncols)
