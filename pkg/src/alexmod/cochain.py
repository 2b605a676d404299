"""Twisted cochain complexes over quotients R/(g(t)^m) and psi-kernel torsion.

Given a bounded complex C of free R-modules, the cochain complex
Hom_R(C, R/(g^m)) with the conjugate twist (boundary entries p(t) act as
multiplication by p(t^-1)) is a complex of finite dimensional Q-vector
spaces.  The coefficient inclusion psi: R/(g^m) -> R/(g^(2m)), 1 -> g^m,
induces maps on cohomology whose kernels recover the g-primary torsion of
the cohomology of Hom_R(C, R) once g^m annihilates it (snake lemma on
0 -> Hom(C,R) --g^m--> Hom(C,R) -> Hom(C, R/(g^m)) -> 0).

The modulus base g is discovered from the order of the torsion of the
cokernel of the incoming coboundary (gcd of rank-sized minors), which every
torsion prime of the cohomology divides.  Taking g = t - 1 recovers the
classical unipotent picture; a wider g is the restriction of scalars to
Q[t^N, t^-N] performed at the coefficient level.
"""

from __future__ import annotations

import os
from fractions import Fraction

from ._kernels import linalg
from .laurent import (
    LaurentPoly,
    normalize,
    squarefree_decomposition,
    squarefree_part,
)
from .rmodule import (
    ComplexOverR,
    FgRModule,
    MatrixOverR,
    det_poly,
    module_from_operator,
    torsion_order_bound,
)


class NoStabilization(RuntimeError):
    """The psi ladder hit the cap; this signals a bug, not a math failure."""


DEFAULT_MAX_M = 64


def _max_m() -> int:
    return int(os.environ.get("ALEXMOD_MAX_M", DEFAULT_MAX_M))


def _reduce_dense(p: LaurentPoly, modulus_dense):
    deg = len(modulus_dense) - 1
    if p.is_zero():
        return [Fraction(0)] * deg
    lo, cs = p.dense()
    if lo < 0:
        raise AssertionError("negative exponents must be eliminated before reduction")
    dense = [Fraction(0)] * max(deg, lo + len(cs))
    for k, c in enumerate(cs):
        dense[lo + k] = c
    i = len(dense) - 1
    while i >= deg:
        c = dense[i]
        if c:
            for j in range(deg + 1):
                dense[i - deg + j] -= c * modulus_dense[j]
        i -= 1
    return [dense[j] for j in range(deg)]


def _mult_matrix(p: LaurentPoly, modulus_dense, t_inv: LaurentPoly):
    """Matrix (rows act on the right) of multiplication by p on Q[t]/(modulus);
    negative powers of t go through the precomputed ordinary-poly inverse."""
    deg = len(modulus_dense) - 1
    poly = LaurentPoly.zero()
    for e, c in p.coeffs.items():
        if e >= 0:
            poly = poly + LaurentPoly({e: c})
        else:
            poly = poly + LaurentPoly.const(c) * (t_inv ** (-e))
    rows = []
    for i in range(deg):
        rows.append(_reduce_dense(poly.shift(i), modulus_dense))
    return rows


class TwistedCochain:
    """Hom_R(C_*, R/(g^m)) with the conjugate twist, flattened over Q."""

    def __init__(self, cx: ComplexOverR, g: LaurentPoly, m: int):
        if m < 1:
            raise ValueError("m must be >= 1")
        g = normalize(g)
        if g.is_zero() or g.is_unit():
            raise ValueError("modulus must be a non-unit polynomial")
        self.cx = cx
        self.g = g
        self.m = m
        gm = normalize(g**m)
        _, self.modulus_dense = gm.dense()
        self.block = len(self.modulus_dense) - 1
        # g normalized has nonzero constant term, so t is invertible mod g^m:
        # t^-1 = -(g^m - g^m(0)) / (t * g^m(0)), an ordinary polynomial
        c0 = self.modulus_dense[0]
        self.t_inv = (gm - LaurentPoly.const(c0)).shift(-1) * (-1 / c0)
        self.degrees = cx.degrees()
        self.dims = {i: cx.rank(i) * self.block for i in self.degrees}
        self.coboundaries = {}
        for i in self.degrees:
            if cx.rank(i) and cx.rank(i + 1):
                self.coboundaries[i] = self._dual_matrix(cx.boundary(i + 1))
        for i in self.degrees:
            a = self.coboundaries.get(i)
            b = self.coboundaries.get(i + 1)
            if a is not None and b is not None:
                comp = linalg.mat_mul(a, b)
                if any(any(v for v in row) for row in comp):
                    raise AssertionError("coboundary composite nonzero")
        self._tblock = None

    def _dual_matrix(self, d: MatrixOverR):
        """For d: C_i -> C_{i-1}, the coboundary C^{i-1} -> C^i has block
        (j, k) equal to multiplication by entry (j, k) of d conjugated."""
        nrows = d.rows * self.block
        ncols = d.cols * self.block
        out = [[Fraction(0)] * ncols for _ in range(nrows)]
        for j in range(d.rows):
            for k in range(d.cols):
                p = d.entries[j][k]
                if p.is_zero():
                    continue
                blockmat = _mult_matrix(
                    p.substitute_inverse(), self.modulus_dense, self.t_inv
                )
                for a in range(self.block):
                    row = out[j * self.block + a]
                    brow = blockmat[a]
                    off = k * self.block
                    for b in range(self.block):
                        if brow[b]:
                            row[off + b] = brow[b]
        return out

    def t_action(self, i: int):
        """Multiplication by t on C^i, block diagonal."""
        if self._tblock is None:
            self._tblock = _mult_matrix(
                LaurentPoly.t(), self.modulus_dense, self.t_inv
            )
        block = self._tblock
        n = self.dims.get(i, 0)
        out = [[Fraction(0)] * n for _ in range(n)]
        for r in range(n // self.block if self.block else 0):
            off = r * self.block
            for a in range(self.block):
                for b in range(self.block):
                    if block[a][b]:
                        out[off + a][off + b] = block[a][b]
        return out

    def cohomology(self, i: int) -> linalg.Quotient:
        n = self.dims.get(i, 0)
        if n == 0:
            return linalg.Quotient([], [], 0)
        delta_out = self.coboundaries.get(i)
        if delta_out is None:
            kernel = linalg.identity(n)
        else:
            kernel = linalg.left_nullspace(delta_out, self.dims[i + 1])
        delta_in = self.coboundaries.get(i - 1)
        image = linalg.row_space(delta_in, n) if delta_in is not None else []
        return linalg.Quotient(kernel, image, n)

    def cohomology_dimension(self, i: int) -> int:
        return self.cohomology(i).dim

    def psi_matrix(self, other: "TwistedCochain", i: int):
        """Cochain matrix of psi = multiplication by g^m into order 2m."""
        if other.g != self.g or other.m != 2 * self.m:
            raise ValueError("psi goes from order m to order 2m of the same modulus")
        gm = normalize(self.g**self.m)
        small, big = self.block, other.block
        base = [_reduce_dense(gm.shift(a), other.modulus_dense) for a in range(small)]
        reps = self.dims.get(i, 0) // small if small else 0
        out = [[Fraction(0)] * (reps * big) for _ in range(reps * small)]
        for r in range(reps):
            for a in range(small):
                row = out[r * small + a]
                for b in range(big):
                    if base[a][b]:
                        row[r * big + b] = base[a][b]
        return out


def char_poly_of(t_rows) -> LaurentPoly:
    n = len(t_rows)
    if n == 0:
        return LaurentPoly.one()
    entries = [
        [
            (LaurentPoly.t() if i == j else LaurentPoly.zero())
            - LaurentPoly.const(t_rows[i][j])
            for j in range(n)
        ]
        for i in range(n)
    ]
    return normalize(det_poly(MatrixOverR(n, n, entries)))


def psi_kernel_stage(cx: ComplexOverR, g: LaurentPoly, m: int, degree: int):
    """Kernel of psi_mm^*: H^degree(g^m) -> H^degree(g^2m) with its t-action.

    Returns (kernel rows in H^degree(g^m) coordinates, restricted t matrix,
    the cohomology quotient at order m).
    """
    small = TwistedCochain(cx, g, m)
    big = TwistedCochain(cx, g, 2 * m)
    q_small = small.cohomology(degree)
    if q_small.dim == 0:
        return [], [], q_small
    q_big = big.cohomology(degree)
    psi = small.psi_matrix(big, degree)
    images = [linalg.mat_mul([rep], psi)[0] for rep in q_small.basis_reps()]
    if q_big.dim == 0:
        kernel_rows = linalg.identity(q_small.dim)
    else:
        induced = q_big.project(images)
        kernel_rows = linalg.left_nullspace(induced, q_big.dim)
    if not kernel_rows:
        return [], [], q_small
    t_h = q_small.induced_matrix(small.t_action(degree))
    t_ker = linalg.restrict_operator(kernel_rows, t_h, q_small.dim)
    return kernel_rows, t_ker, q_small


def psi_modulus(cx: ComplexOverR, degree: int):
    """(order bound, squarefree modulus base, largest prime multiplicity).

    Tors H^degree of the dual complex embeds in the torsion of the cokernel
    of the incoming coboundary, whose order is the gcd of the rank-sized
    minors of the conjugated transpose of the boundary out of C_degree.
    """
    d_in = cx.boundary(degree)
    delta = d_in.map_entries(lambda p: p.substitute_inverse()).transpose()
    order = normalize(torsion_order_bound(delta))
    if order.is_unit() or order.is_zero():
        return order, None, 0
    g = squarefree_part(order)
    v_max = max(mult for _, mult in squarefree_decomposition(order))
    return order, g, v_max


def psi_torsion(cx: ComplexOverR, degree: int, max_m: int | None = None) -> FgRModule:
    """Torsion of H^degree(Hom_R(C, R-conjugate)) via stabilized psi kernels.

    m doubles until a stage is certified: either the kernel dimension
    exhausts the order bound, or m reaches the largest prime multiplicity of
    the bound (from which point the psi kernel equals the full torsion).
    """
    cap = max_m if max_m is not None else _max_m()
    if cx.rank(degree) == 0:
        return FgRModule.zero()
    order, g, v_max = psi_modulus(cx, degree)
    if g is None:
        return FgRModule.zero()
    deg_bound = order.degree()
    m = 1
    prev = None
    while m <= cap:
        kernel_rows, t_ker, _ = psi_kernel_stage(cx, g, m, degree)
        dim = len(kernel_rows)
        cur = (dim, char_poly_of(t_ker))
        if dim == deg_bound or m >= v_max:
            if prev is not None and prev != cur and m // 2 >= v_max:
                raise NoStabilization("stages disagree past the certified order")
            return module_from_operator(t_ker)
        prev = cur
        m *= 2
    raise NoStabilization(f"no certification below m = {cap}")
