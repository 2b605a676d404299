"""Linear algebra over the PID R = Q[t, t^-1].

Provides Smith normal form with unimodular transforms, homology of bounded
complexes of free R-modules, the structure-theory operations on finitely
generated modules (torsion, conjugation, Ext-duality, UCT, restriction of
scalars to Q[t^N, t^-N]) and exact rank/minor computations used elsewhere
for torsion order bounds.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from ._kernels import linalg
from .laurent import (
    LaurentPoly,
    divides,
    divmod_poly,
    exact_div,
    gcd_poly,
    gcdex_poly,
    normalize,
)


class NotTorsion(ValueError):
    pass


class DegreeOutOfRange(KeyError):
    pass


_ZERO = LaurentPoly.zero()
_ONE = LaurentPoly.one()


class MatrixOverR:
    """Dense matrix of Laurent polynomials; column c holds the image of the
    c-th source generator."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        if entries is None:
            self.entries = [[_ZERO] * cols for _ in range(rows)]
        else:
            if len(entries) != rows or any(len(r) != cols for r in entries):
                raise ValueError("inconsistent matrix dimensions")
            self.entries = [list(r) for r in entries]

    @staticmethod
    def identity(n: int) -> "MatrixOverR":
        m = MatrixOverR(n, n)
        for i in range(n):
            m.entries[i][i] = _ONE
        return m

    @staticmethod
    def from_rows(entries) -> "MatrixOverR":
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        return MatrixOverR(rows, cols, entries)

    def copy(self) -> "MatrixOverR":
        return MatrixOverR(self.rows, self.cols, self.entries)

    def transpose(self) -> "MatrixOverR":
        return MatrixOverR(
            self.cols, self.rows,
            [[self.entries[r][c] for r in range(self.rows)] for c in range(self.cols)],
        )

    def map_entries(self, f) -> "MatrixOverR":
        return MatrixOverR(
            self.rows, self.cols, [[f(e) for e in row] for row in self.entries]
        )

    def __matmul__(self, other: "MatrixOverR") -> "MatrixOverR":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = MatrixOverR(self.rows, other.cols)
        for i in range(self.rows):
            for k in range(self.cols):
                a = self.entries[i][k]
                if a.is_zero():
                    continue
                for j in range(other.cols):
                    b = other.entries[k][j]
                    if not b.is_zero():
                        out.entries[i][j] = out.entries[i][j] + a * b
        return out

    def __eq__(self, other):
        return (
            isinstance(other, MatrixOverR)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def column(self, c: int):
        return [self.entries[r][c] for r in range(self.rows)]

    def specialize(self, t0: Fraction):
        """Evaluate at t = t0, as rows of Fractions."""
        return [[e.evaluate(t0) for e in row] for row in self.entries]

    def __repr__(self):
        body = "; ".join(
            "[" + ", ".join(str(e) for e in row) + "]" for row in self.entries
        )
        return f"MatrixOverR({self.rows}x{self.cols}: {body})"


# -- Smith normal form -------------------------------------------------------


@dataclass
class SmithForm:
    d: MatrixOverR
    left: MatrixOverR
    right: MatrixOverR
    right_inv: MatrixOverR
    diagonal: list = field(default_factory=list)

    def nonzero_diagonal(self):
        return [p for p in self.diagonal if not p.is_zero()]


def _min_pivot(m, k):
    """Position of the nonzero entry of minimal (spread, degree) in the
    trailing block; deterministic tie-break by (row, col)."""
    best = None
    best_key = None
    for i in range(k, m.rows):
        for j in range(k, m.cols):
            e = m.entries[i][j]
            if e.is_zero():
                continue
            key = (e.spread(), len(e.coeffs), i, j)
            if best is None or key < best_key:
                best, best_key = (i, j), key
    return best


class _Snf:
    def __init__(self, a: MatrixOverR):
        self.m = a.copy()
        self.left = MatrixOverR.identity(a.rows)
        self.right = MatrixOverR.identity(a.cols)
        self.right_inv = MatrixOverR.identity(a.cols)

    # elementary operations, mirrored on the transforms

    def swap_rows(self, i, j):
        if i == j:
            return
        self.m.entries[i], self.m.entries[j] = self.m.entries[j], self.m.entries[i]
        self.left.entries[i], self.left.entries[j] = (
            self.left.entries[j],
            self.left.entries[i],
        )

    def swap_cols(self, i, j):
        if i == j:
            return
        for mat in (self.m, self.right):
            for row in mat.entries:
                row[i], row[j] = row[j], row[i]
        # E^-1 of a column swap acts on right_inv as the row swap
        ri = self.right_inv.entries
        ri[i], ri[j] = ri[j], ri[i]

    def add_row(self, dst, src, f: LaurentPoly):
        """row[dst] += f * row[src]"""
        if f.is_zero():
            return
        for mat in (self.m, self.left):
            rd, rs = mat.entries[dst], mat.entries[src]
            for c in range(len(rd)):
                if not rs[c].is_zero():
                    rd[c] = rd[c] + f * rs[c]

    def add_col(self, dst, src, f: LaurentPoly):
        """col[dst] += f * col[src]; right_inv gets the inverse row op."""
        if f.is_zero():
            return
        for mat in (self.m, self.right):
            for row in mat.entries:
                if not row[src].is_zero():
                    row[dst] = row[dst] + f * row[src]
        ri = self.right_inv.entries
        rs, rd = ri[src], ri[dst]
        for c in range(len(rs)):
            if not rd[c].is_zero():
                rs[c] = rs[c] - f * rd[c]

    def scale_row(self, i, u: LaurentPoly):
        for mat in (self.m, self.left):
            mat.entries[i] = [u * e for e in mat.entries[i]]

    def scale_col(self, j, u: LaurentPoly):
        for mat in (self.m, self.right):
            for row in mat.entries:
                row[j] = u * row[j]
        (e, c), = u.coeffs.items()
        inv = LaurentPoly({-e: 1 / c})
        ri = self.right_inv.entries
        ri[j] = [inv * x for x in ri[j]]

    def bezout_rows(self, i, j, col):
        """Combine rows i, j so that entry (i, col) becomes their gcd."""
        a, b = self.m.entries[i][col], self.m.entries[j][col]
        g, x, y = gcdex_poly(a, b)
        aa, bb = exact_div(a, g), exact_div(b, g)
        for mat in (self.m, self.left):
            ri, rj = mat.entries[i], mat.entries[j]
            for c in range(len(ri)):
                e1, e2 = ri[c], rj[c]
                ri[c] = x * e1 + y * e2
                rj[c] = -bb * e1 + aa * e2

    def bezout_cols(self, i, j, row):
        a, b = self.m.entries[row][i], self.m.entries[row][j]
        g, x, y = gcdex_poly(a, b)
        aa, bb = exact_div(a, g), exact_div(b, g)
        for mat in (self.m, self.right):
            for r in mat.entries:
                e1, e2 = r[i], r[j]
                r[i] = x * e1 + y * e2
                r[j] = -bb * e1 + aa * e2
        # inverse of [[x, -bb], [y, aa]] (det 1) is [[aa, bb], [-y, x]]
        ri = self.right_inv.entries
        row_i, row_j = ri[i], ri[j]
        for c in range(len(row_i)):
            e1, e2 = row_i[c], row_j[c]
            row_i[c] = aa * e1 + bb * e2
            row_j[c] = -y * e1 + x * e2

    # main loop

    def reduce_corner(self, k):
        while True:
            pos = _min_pivot(self.m, k)
            if pos is None:
                return False
            self.swap_rows(k, pos[0])
            self.swap_cols(k, pos[1])
            dirty = False
            for i in range(k + 1, self.m.rows):
                e = self.m.entries[i][k]
                if e.is_zero():
                    continue
                piv = self.m.entries[k][k]
                if divides(piv, e):
                    self.add_row(i, k, -exact_div(e, piv))
                else:
                    self.bezout_rows(k, i, k)
                    dirty = True
            for j in range(k + 1, self.m.cols):
                e = self.m.entries[k][j]
                if e.is_zero():
                    continue
                piv = self.m.entries[k][k]
                if divides(piv, e):
                    self.add_col(j, k, -exact_div(e, piv))
                else:
                    self.bezout_cols(k, j, k)
                    dirty = True
            if not dirty and all(
                self.m.entries[i][k].is_zero() for i in range(k + 1, self.m.rows)
            ) and all(
                self.m.entries[k][j].is_zero() for j in range(k + 1, self.m.cols)
            ):
                return True

    def _normalize_diagonal(self, rank):
        for i in range(rank):
            d = self.m.entries[i][i]
            nd = normalize(d)
            if d != nd and not d.is_zero():
                self.scale_row(i, exact_div(nd, d))

    def run(self):
        n = min(self.m.rows, self.m.cols)
        k = 0
        while k < n:
            if not self.reduce_corner(k):
                break
            k += 1
        rank = k
        # enforce the divisibility chain; a fix can disturb later corners,
        # so rediagonalize from the offending position after each one
        guard = 0
        while True:
            self._normalize_diagonal(rank)
            bad = None
            for i in range(rank - 1):
                if not divides(self.m.entries[i][i], self.m.entries[i + 1][i + 1]):
                    bad = i
                    break
            if bad is None:
                break
            guard += 1
            if guard > 40 * (rank + 1):
                raise AssertionError("divisibility enforcement failed to settle")
            self.add_col(bad, bad + 1, _ONE)
            for k2 in range(bad, rank):
                self.reduce_corner(k2)
        diagonal = [self.m.entries[i][i] for i in range(n)]
        return SmithForm(self.m, self.left, self.right, self.right_inv, diagonal)


def smith_normal_form(a: MatrixOverR) -> SmithForm:
    """L * A * R = D with D diagonal, d_1 | d_2 | ..., entries normalized,
    L and R invertible over R (R^-1 is returned alongside)."""
    return _Snf(a).run()


# -- determinants, exact rank, minor gcds ------------------------------------


def det_poly(a: MatrixOverR) -> LaurentPoly:
    """Determinant via fraction-free (Bareiss) elimination over Q[t]."""
    n = a.rows
    if n != a.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return _ONE
    m = [[e for e in row] for row in a.entries]
    sign = 1
    prev = _ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return _ZERO
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = exact_div(num, prev)
            m[i][k] = _ZERO
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return d if sign == 1 else -d


_SPECIALIZE_POOL = [
    Fraction(2), Fraction(3), Fraction(-2), Fraction(5, 2), Fraction(7, 3),
    Fraction(-5, 3), Fraction(11, 4),
]


def rank_over_fractions(a: MatrixOverR, rng: random.Random | None = None) -> int:
    """Exact rank over Q(t).

    A specialization gives a lower bound; the bound is certified exact by
    checking that all (r+1) x (r+1) minors vanish (skipped when r is already
    maximal).
    """
    if a.rows == 0 or a.cols == 0:
        return 0
    pool = list(_SPECIALIZE_POOL)
    if rng is not None:
        rng.shuffle(pool)
    r = 0
    for t0 in pool[:3]:
        r = max(r, linalg.qrank(a.specialize(t0), a.cols))
    while r < min(a.rows, a.cols):
        found = False
        for rows in itertools.combinations(range(a.rows), r + 1):
            for cols in itertools.combinations(range(a.cols), r + 1):
                sub = MatrixOverR(
                    r + 1, r + 1,
                    [[a.entries[i][j] for j in cols] for i in rows],
                )
                if not det_poly(sub).is_zero():
                    found = True
                    break
            if found:
                break
        if not found:
            break
        r += 1
    return r


def minors_gcd(a: MatrixOverR, r: int) -> LaurentPoly:
    """Normalized gcd of all r x r minors (1 for r = 0); early exit at a unit.

    For r = rank(a) this is d_1 * ... * d_r, the order of the torsion of
    coker(a).
    """
    if r == 0:
        return _ONE
    if r > min(a.rows, a.cols):
        return _ZERO
    g = _ZERO
    for rows in itertools.combinations(range(a.rows), r):
        for cols in itertools.combinations(range(a.cols), r):
            sub = MatrixOverR(r, r, [[a.entries[i][j] for j in cols] for i in rows])
            g = gcd_poly(g, det_poly(sub))
            if g.is_one():
                return g
    return g


def torsion_order_bound(a: MatrixOverR) -> LaurentPoly:
    """Order of the torsion part of coker(a): gcd of the rank-sized minors."""
    r = rank_over_fractions(a)
    return minors_gcd(a, r)


# -- finitely generated modules ----------------------------------------------


def _companion(p: LaurentPoly):
    """Companion matrix of the normalized polynomial p, rows of Fractions."""
    _, coeffs = normalize(p).dense()
    n = len(coeffs) - 1
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n):
        m[i][i - 1] = Fraction(1)
    for i in range(n):
        m[i][n - 1] = -coeffs[i]
    return m


class FgRModule:
    """Finitely generated R-module: free rank plus normalized invariant factors."""

    __slots__ = ("free_rank", "invariant_factors")

    def __init__(self, free_rank: int, invariant_factors=()):
        factors = []
        for p in invariant_factors:
            q = normalize(p)
            if q.is_zero():
                raise ValueError("zero invariant factor")
            if q.is_unit():
                continue
            factors.append(q)
        for a, b in zip(factors, factors[1:]):
            if not divides(a, b):
                raise ValueError("invariant factors must form a divisibility chain")
        self.free_rank = free_rank
        self.invariant_factors = tuple(factors)

    @staticmethod
    def zero() -> "FgRModule":
        return FgRModule(0, ())

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def is_torsion(self) -> bool:
        return self.free_rank == 0

    def torsion_dimension(self) -> int:
        return sum(p.degree() for p in self.invariant_factors)

    def order(self) -> LaurentPoly:
        """Product of the invariant factors (order of the torsion part)."""
        out = _ONE
        for p in self.invariant_factors:
            out = out * p
        return normalize(out)

    def t_matrix(self):
        """Action of t on the torsion part: block diagonal of companions."""
        blocks = [_companion(p) for p in self.invariant_factors]
        n = sum(len(b) for b in blocks)
        m = [[Fraction(0)] * n for _ in range(n)]
        off = 0
        for b in blocks:
            k = len(b)
            for i in range(k):
                for j in range(k):
                    m[off + i][off + j] = b[i][j]
            off += k
        return m

    def __eq__(self, other):
        return (
            isinstance(other, FgRModule)
            and self.free_rank == other.free_rank
            and self.invariant_factors == other.invariant_factors
        )

    def __hash__(self):
        return hash((self.free_rank, self.invariant_factors))

    def __repr__(self):
        facs = ", ".join(str(p) for p in self.invariant_factors)
        return f"FgRModule(free_rank={self.free_rank}, factors=[{facs}])"

    def to_json(self):
        return {
            "free_rank": self.free_rank,
            "invariant_factors": [str(p) for p in self.invariant_factors],
        }

    @staticmethod
    def from_json(obj) -> "FgRModule":
        return FgRModule(
            int(obj["free_rank"]),
            [LaurentPoly.parse(s) for s in obj.get("invariant_factors", [])],
        )


def module_from_operator(t_rows) -> FgRModule:
    """Torsion module defined by a Q-linear operator: the invariant factors
    of t*I - T, i.e. the rational canonical structure of T."""
    n = len(t_rows)
    if n == 0:
        return FgRModule.zero()
    entries = [
        [
            (LaurentPoly.t() if i == j else _ZERO) - LaurentPoly.const(t_rows[i][j])
            for j in range(n)
        ]
        for i in range(n)
    ]
    snf = smith_normal_form(MatrixOverR(n, n, entries))
    return FgRModule(0, snf.nonzero_diagonal())


# -- complexes and homology ---------------------------------------------------


class ComplexOverR:
    """Bounded complex of free R-modules.

    ranks: {degree: rank}; boundary maps d[i]: C_i -> C_{i-1} given as
    MatrixOverR of shape (rank_{i-1} x rank_i).  Composites d_{i} o d_{i+1}
    are checked to vanish.
    """

    def __init__(self, ranks: dict, boundaries: dict):
        self.ranks = dict(ranks)
        self.boundaries = {}
        for i, m in boundaries.items():
            if m.cols != self.rank(i) or m.rows != self.rank(i - 1):
                raise ValueError(f"boundary {i} has inconsistent shape")
            self.boundaries[i] = m
        for i in list(self.boundaries):
            upper = self.boundaries.get(i + 1)
            if upper is not None and not (self.boundaries[i] @ upper).is_zero():
                raise ValueError(f"d_{i} o d_{i+1} != 0")

    def rank(self, i: int) -> int:
        return self.ranks.get(i, 0)

    def boundary(self, i: int) -> MatrixOverR:
        return self.boundaries.get(i) or MatrixOverR(self.rank(i - 1), self.rank(i))

    def degrees(self):
        return sorted(self.ranks)


def _kernel_basis_and_coords(d_i: MatrixOverR):
    """Kernel of d_i as columns of the right transform, plus the change of
    basis needed to express vectors in that kernel."""
    snf = smith_normal_form(d_i)
    n = min(d_i.rows, d_i.cols)
    zero_cols = [j for j in range(d_i.cols) if j >= n or snf.diagonal[j].is_zero()]
    return snf, zero_cols


def homology(c: ComplexOverR, i: int) -> FgRModule:
    """H_i(C) = ker d_i / im d_{i+1} via two Smith reductions."""
    if c.rank(i) == 0:
        if i not in c.ranks and (i - 1) not in c.ranks and (i + 1) not in c.ranks:
            raise DegreeOutOfRange(i)
        return FgRModule.zero()
    d_i = c.boundary(i)
    d_up = c.boundary(i + 1)
    snf, zero_cols = _kernel_basis_and_coords(d_i)
    k = len(zero_cols)
    if k == 0:
        return FgRModule.zero()
    # express im(d_{i+1}) in kernel coordinates: rows of right_inv @ d_up
    coords = snf.right_inv @ d_up
    for r in range(d_i.cols):
        if r not in zero_cols:
            for ccol in range(coords.cols):
                if not coords.entries[r][ccol].is_zero():
                    raise AssertionError("image not contained in kernel")
    sub = MatrixOverR(
        k, d_up.cols, [coords.entries[r] for r in zero_cols]
    )
    sub_snf = smith_normal_form(sub)
    factors = sub_snf.nonzero_diagonal()
    free_rank = k - len(factors)
    return FgRModule(free_rank, factors)


def homology_dimension_specialized(c: ComplexOverR, i: int, t0: Fraction) -> int:
    """dim_Q H_i of the complex specialized at t = t0 (oracle helper)."""
    d_i = c.boundary(i).specialize(t0)
    d_up = c.boundary(i + 1).specialize(t0)
    n_i = c.rank(i)
    rank_di = linalg.qrank(d_i, n_i) if n_i else 0
    rank_dup = linalg.qrank(d_up, c.rank(i + 1)) if c.rank(i + 1) else 0
    return n_i - rank_di - rank_dup


# -- structure operations ------------------------------------------------------


def torsion_part(m: FgRModule) -> FgRModule:
    return FgRModule(0, m.invariant_factors)


def conjugate(m: FgRModule) -> FgRModule:
    """Same module with t acting by t^-1: substitute and renormalize."""
    return FgRModule(
        m.free_rank,
        [normalize(p.substitute_inverse()) for p in m.invariant_factors],
    )


def ext1_dual(m: FgRModule) -> FgRModule:
    """Isomorphism class of Ext^1_R(M, R).

    Free summands contribute nothing; for torsion modules the class equals
    M itself by the structure theorem.  Only the class is returned, the
    residue pairing is not materialized.
    """
    return FgRModule(0, m.invariant_factors)


def uct_cohomology(h_lower: FgRModule, h_this: FgRModule) -> FgRModule:
    """H^i from the split universal coefficients sequence:
    Ext^1(H_{i-1}, R) + Hom(H_i, R)."""
    return FgRModule(h_this.free_rank, h_lower.invariant_factors)


def restrict_to_RN(m: FgRModule, n: int) -> FgRModule:
    """The same Q-vector space as a module over R(N) = Q[t^N, t^-N].

    Computed from the rational canonical structure of the N-th power of the
    t-action; the returned invariant factors are polynomials in u = t^N
    (written in the same variable).
    """
    if n < 1:
        raise ValueError("N must be positive")
    if not m.is_torsion():
        raise NotTorsion("restriction of scalars needs a torsion module")
    t_rows = m.t_matrix()
    if not t_rows:
        return FgRModule.zero()
    power = linalg.identity(len(t_rows))
    base = [list(map(Fraction, row)) for row in t_rows]
    e = n
    while e:
        if e & 1:
            power = linalg.mat_mul(power, base)
        base = linalg.mat_mul(base, base)
        e >>= 1
    return module_from_operator(power)
