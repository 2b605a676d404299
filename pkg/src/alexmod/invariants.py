"""Checkers and decompositions on finitely generated torsion R-modules:
eigenvalue constraints, Jordan profiles and bounds, semisimplicity, the
fixed/moving eigenvalue splitting, unipotence order and the weight window.
"""

from __future__ import annotations

from math import lcm

from .laurent import (
    LaurentPoly,
    cyclotomic,
    cyclotomic_factor,
    divides,
    exact_div,
    gcd_poly,
    normalize,
    squarefree_decomposition,
    squarefree_part,
)
from .rmodule import FgRModule, NotTorsion


class NotRootsOfUnity(ValueError):
    pass


class NotSemisimpleOrNotUnityPowerTorsion(ValueError):
    pass


def roots_of_unity_check(m: FgRModule) -> dict:
    """ok iff every invariant factor is a product of cyclotomics."""
    for p in m.invariant_factors:
        fac = cyclotomic_factor(p)
        if not fac.remainder.is_one():
            return {"ok": False, "offending": fac.remainder}
    return {"ok": True, "offending": None}


def _require_torsion(m: FgRModule):
    if not m.is_torsion():
        raise NotTorsion("operation needs a torsion module")


def _coprime_basis(polys):
    """Pairwise coprime normalized polynomials spanning the same divisors."""
    basis = []
    for p in polys:
        queue = [normalize(p)]
        while queue:
            cur = queue.pop()
            if cur.is_unit():
                continue
            split = False
            for idx, b in enumerate(basis):
                g = gcd_poly(cur, b)
                if g.is_one():
                    continue
                if g != b:
                    # refine the existing element
                    basis[idx] = g
                    basis.append(exact_div(b, g))
                queue.append(exact_div(cur, g))
                split = True
                break
            if not split:
                basis.append(cur)
    return [b for b in basis if not b.is_unit()]


def jordan_profile(m: FgRModule) -> dict:
    """Block-size multisets per irreducible factor.

    Cyclotomic factors are keyed by their index.  Non-cyclotomic parts are
    keyed by the elements of a pairwise-coprime squarefree basis (printed as
    polynomial strings); every irreducible inside such a key carries the
    same multiplicity in each invariant factor, so the block sizes are
    exact even though the key itself may be reducible.
    """
    _require_torsion(m)
    profile = {}

    def add(key, size):
        profile.setdefault(key, []).append(size)

    remainders = []
    for p in m.invariant_factors:
        fac = cyclotomic_factor(p)
        for n, mult in fac.factors:
            add(n, mult)
        if not fac.remainder.is_one():
            remainders.append(fac.remainder)
    keys = _coprime_basis([sf for rem in remainders
                           for sf, _ in squarefree_decomposition(rem)])
    for p in m.invariant_factors:
        rem = cyclotomic_factor(p).remainder
        if rem.is_one():
            continue
        for q in keys:
            mult = 0
            cur = rem
            while divides(q, cur):
                cur = exact_div(cur, q)
                mult += 1
            if mult:
                add(str(q), mult)
    return {k: sorted(v) for k, v in profile.items()}


def jordan_bound(i: int, n: int) -> int:
    """min(ceil((i+1)/2), n - floor((i+1)/2))."""
    up = (i + 2) // 2
    down = n - (i + 1) // 2
    return min(up, down)


def jordan_bound_check(m: FgRModule, i: int, n: int) -> bool:
    """True iff every Jordan block size respects the homological bound."""
    _require_torsion(m)
    bound = jordan_bound(i, n)
    for p in m.invariant_factors:
        for _, mult in squarefree_decomposition(p):
            if mult > bound:
                return False
    return True


def semisimplicity_check(m: FgRModule) -> bool:
    """Squarefree invariant factors; it suffices to test the largest."""
    _require_torsion(m)
    if not m.invariant_factors:
        return True
    largest = m.invariant_factors[-1]
    return largest == squarefree_part(largest)


def eigen_split(m: FgRModule):
    """(fixed part, moving part): the t = 1 primary component and its
    complement, for semisimple modules killed by some t^N - 1."""
    _require_torsion(m)
    if not semisimplicity_check(m):
        raise NotSemisimpleOrNotUnityPowerTorsion("module is not semisimple")
    rc = roots_of_unity_check(m)
    if not rc["ok"]:
        raise NotSemisimpleOrNotUnityPowerTorsion(
            f"eigenvalues are not roots of unity: {rc['offending']}"
        )
    t_minus_1 = LaurentPoly.t() - 1
    fixed = []
    moving = []
    for p in m.invariant_factors:
        if divides(t_minus_1, p):
            fixed.append(t_minus_1)
            q = normalize(exact_div(p, t_minus_1))
            if not q.is_unit():
                moving.append(q)
        else:
            moving.append(p)
    return FgRModule(0, fixed), FgRModule(0, sorted(moving, key=lambda q: q.degree()))


def unipotent_order(m: FgRModule) -> int:
    """Least N with every eigenvalue an N-th root of unity."""
    _require_torsion(m)
    n = 1
    for p in m.invariant_factors:
        fac = cyclotomic_factor(p)
        if not fac.remainder.is_one():
            raise NotRootsOfUnity(f"offending factor {fac.remainder}")
        for idx, _ in fac.factors:
            n = lcm(n, idx)
    return n


def weight_window(i: int, n: int):
    """[i, min(2i, 2n-2)], the only weights that can carry the torsion of the
    degree-(i+1) cohomology module for an n-dimensional source."""
    if i < 0 or n < 1:
        raise ValueError("need i >= 0 and n >= 1")
    return (i, min(2 * i, 2 * n - 2))


def log_nilpotency_orders(m: FgRModule):
    """(order of t - 1, order of log t) on a unipotent torsion module; the
    two agree because log(t)/(t - 1) is a unit in the complete local ring."""
    _require_torsion(m)
    if unipotent_order(m) != 1:
        raise NotRootsOfUnity("module is not unipotent")
    t_rows = m.t_matrix()
    n = len(t_rows)
    if n == 0:
        return 0, 0
    from fractions import Fraction

    from ._kernels import linalg

    ident = linalg.identity(n)
    nilp = [[t_rows[i][j] - ident[i][j] for j in range(n)] for i in range(n)]

    def order_of(mat):
        k = 0
        cur = ident
        while any(any(v for v in row) for row in cur if True):
            if all(all(v == 0 for v in row) for row in cur):
                break
            if k > n:
                raise AssertionError("not nilpotent")
            cur = linalg.mat_mul(cur, mat)
            k += 1
            if all(all(v == 0 for v in row) for row in cur):
                return k
        return k

    order_s = order_of(nilp)
    # log t = sum (-1)^(j-1) N^j / j up to the nilpotency order
    log_rows = [[Fraction(0)] * n for _ in range(n)]
    power = ident
    for j in range(1, n + 1):
        power = linalg.mat_mul(power, nilp)
        if all(all(v == 0 for v in row) for row in power):
            power = None
        coeff = Fraction((-1) ** (j - 1), j)
        if power is None:
            break
        for a in range(n):
            for b in range(n):
                log_rows[a][b] += coeff * power[a][b]
    order_log = order_of(log_rows)
    return order_s, order_log


def check_suite(m: FgRModule, suites, i: int = 1, n: int = 2) -> dict:
    """Named checker results for the CLI report."""
    out = {}
    for name in suites:
        if name == "roots":
            rc = roots_of_unity_check(m)
            out["roots"] = {
                "ok": rc["ok"],
                "offending": str(rc["offending"]) if rc["offending"] else None,
            }
        elif name == "jordan":
            out["jordan"] = {
                "ok": jordan_bound_check(m, i, n),
                "bound": jordan_bound(i, n),
            }
        elif name == "semisimple":
            out["semisimple"] = {"ok": semisimplicity_check(m)}
        else:
            raise KeyError(f"unknown check suite {name!r}")
    return out
