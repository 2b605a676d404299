"""Rational line arrangements: intersection combinatorics, Orlik-Solomon
algebras, closed-form Alexander polynomials for the central family, the
purity criterion and degree-one Hodge reports.

Built-in fixtures pair an arrangement with a presentation of the complement
group; the non-product ones were derived offline (see the fixture
docstrings) and are revalidated by the test suite through the pipelines of
this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .laurent import LaurentPoly, cyclotomic_factor, normalize
from .localsys import Epimorphism, GroupPresentation
from .thicken import BifilteredCDGA, Direction


class DuplicateLine(ValueError):
    pass


class NotEssential(ValueError):
    pass


class InconsistentFixedPart(ValueError):
    pass


class OddNonUnityPart(ValueError):
    pass


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class ArrangementSpec:
    """Lines a*x + b*y = c with rational coefficients, pairwise distinct."""

    lines: tuple

    def __post_init__(self):
        cleaned = []
        for a, b, c in self.lines:
            a, b, c = _frac(a), _frac(b), _frac(c)
            if a == 0 and b == 0:
                raise ValueError("degenerate line")
            # normalize so that equality detection is exact
            scale = a if a else b
            cleaned.append((a / scale, b / scale, c / scale))
        for i in range(len(cleaned)):
            for j in range(i + 1, len(cleaned)):
                if cleaned[i] == cleaned[j]:
                    raise DuplicateLine(f"lines {i} and {j} coincide")
        object.__setattr__(self, "lines", tuple(cleaned))

    @property
    def d(self) -> int:
        return len(self.lines)

    def to_json(self):
        return {
            "lines": [
                [f"{v.numerator}/{v.denominator}" for v in line] for line in self.lines
            ]
        }

    @staticmethod
    def from_json(obj) -> "ArrangementSpec":
        return ArrangementSpec(tuple(tuple(Fraction(v) for v in line) for line in obj["lines"]))


@dataclass
class IntersectionData:
    points: list  # (x, y, multiplicity, sorted incident line indices)
    parallel_classes: list  # partition of line indices by direction
    rank: int


def intersection_data(arr: ArrangementSpec) -> IntersectionData:
    """Exact rational enumeration of the pairwise intersections."""
    d = arr.d
    by_point = {}
    directions = {}
    for i, (a, b, c) in enumerate(arr.lines):
        directions.setdefault((a, b), []).append(i)
    for i in range(d):
        a1, b1, c1 = arr.lines[i]
        for j in range(i + 1, d):
            a2, b2, c2 = arr.lines[j]
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            x = (c1 * b2 - c2 * b1) / det
            y = (a1 * c2 - a2 * c1) / det
            by_point.setdefault((x, y), set()).update((i, j))
    points = [
        (x, y, len(incident), tuple(sorted(incident)))
        for (x, y), incident in sorted(by_point.items())
    ]
    parallel_classes = [tuple(v) for _, v in sorted(directions.items())]
    rank = 2 if len(directions) > 1 else 1
    data = IntersectionData(points, parallel_classes, rank)
    # pair count bookkeeping: every pair meets in exactly one point or is parallel
    pair_total = sum(m * (m - 1) // 2 for _, _, m, _ in points)
    parallel_pairs = sum(len(cl) * (len(cl) - 1) // 2 for cl in parallel_classes)
    if pair_total + parallel_pairs != d * (d - 1) // 2:
        raise AssertionError("intersection bookkeeping is inconsistent")
    return data


def os_algebra(arr: ArrangementSpec) -> BifilteredCDGA:
    """Orlik-Solomon algebra of an essential planar arrangement.

    Degree-1 basis e_1..e_d; degree-2 basis from the broken-circuit rule
    (for each intersection point with lowest line i0, the pairs (i0, j));
    zero differential, weights and hodge levels equal to the degree.
    """
    data = intersection_data(arr)
    if data.rank < 2:
        raise NotEssential("all lines are parallel; reduce to a point complement")
    d = arr.d
    point_of = {}
    lowest = {}
    for x, y, m, incident in data.points:
        for i in incident:
            for j in incident:
                if i < j:
                    point_of[(i, j)] = (x, y)
        lowest[(x, y)] = min(incident)
    basis2 = []
    index2 = {}
    for x, y, m, incident in data.points:
        i0 = min(incident)
        for j in incident:
            if j != i0:
                index2[(i0, j)] = len(basis2)
                basis2.append((i0, j))
    dims = {0: 1, 1: d, 2: len(basis2)}
    names = {(0, 0): "1"}
    for i in range(d):
        names[(1, i)] = f"e{i+1}"
    for k, (i, j) in enumerate(basis2):
        names[(2, k)] = f"e{i+1}e{j+1}"

    def pair_product(i, j):
        """e_i e_j for i < j as a coefficient dict on basis2."""
        if (i, j) not in point_of:
            return {}
        p = point_of[(i, j)]
        i0 = lowest[p]
        if i == i0:
            return {index2[(i, j)]: Fraction(1)}
        # e_i e_j = e_i0 e_j - e_i0 e_i  (three lines through one point)
        return {
            index2[(i0, j)]: Fraction(1),
            index2[(i0, i)]: Fraction(-1),
        }

    products = {}
    for i in range(d):
        for j in range(i + 1, d):
            vec = pair_product(i, j)
            if vec:
                products[((1, i), (1, j))] = vec
    weights = {(0, 0): 0}
    hodge = {(0, 0): 0}
    for i in range(d):
        weights[(1, i)] = 1
        hodge[(1, i)] = 1
    for k in range(len(basis2)):
        weights[(2, k)] = 2
        hodge[(2, k)] = 2
    return BifilteredCDGA(dims, products, {}, weights, hodge, names=names)


def os_default_direction(cdga: BifilteredCDGA) -> Direction:
    return Direction(cdga, [Fraction(1)] * cdga.dim(1), hodge_mode=True)


def central_delta(d: int) -> LaurentPoly:
    """First Alexander polynomial of d concurrent lines.

    Closed form (t^d - 1)^(d-2) (t - 1), reproduced independently from the
    pair count #{(a, b) in [1, d-1]^2 : a + b = k mod d} of products of
    nontrivial d-th roots of unity.
    """
    if d < 2:
        raise ValueError("need at least two lines")
    t = LaurentPoly.t
    closed = normalize((t(d) - 1) ** (d - 2) * (t(1) - 1))
    counts = [0] * d
    for a in range(1, d):
        for b in range(1, d):
            counts[(a + b) % d] += 1
    base = counts[1]
    if any(c != base for c in counts[1:]):
        raise AssertionError("pair count is not uniform away from 1")
    recomputed = normalize((t(d) - 1) ** base * (t(1) - 1) ** (counts[0] - base))
    if recomputed != closed:
        raise AssertionError("pair count disagrees with the closed form")
    return closed


def purity_criterion(arr: ArrangementSpec) -> dict:
    """Sufficient condition for the Alexander polynomial to be a power of
    t - 1: some line without parallel partner avoids, for every m > 2, all
    points of multiplicity divisible by m."""
    data = intersection_data(arr)
    if data.rank < 2:
        raise NotEssential("criterion needs an essential arrangement")
    solo = [cl[0] for cl in data.parallel_classes if len(cl) == 1]
    if not solo:
        return {"applies": False, "reason": "every line has a parallel partner"}
    max_mult = max((m for _, _, m, _ in data.points), default=2)
    witness = {}
    for m in range(3, max_mult + 1):
        found = None
        for line in solo:
            bad = False
            for _, _, mult, incident in data.points:
                if line in incident and mult % m == 0:
                    bad = True
                    break
            if not bad:
                found = line
                break
        if found is None:
            return {"applies": False, "reason": f"no solo line avoids multiplicity {m}"}
        witness[m] = found
    return {"applies": True, "witness": witness}


@dataclass
class HodgeReport:
    d: int
    delta1: LaurentPoly
    b1_torsion: int
    h11: int
    h10: int
    h01: int
    spectral: dict
    pure: bool
    provenance: str

    def to_json(self):
        return {
            "d": self.d,
            "delta1": str(self.delta1),
            "b1_torsion": self.b1_torsion,
            "h11": self.h11,
            "h10": self.h10,
            "h01": self.h01,
            "spectral": {str(k): v for k, v in sorted(self.spectral.items())},
            "pure": self.pure,
            "provenance": self.provenance,
        }


def hodge_report(d: int, delta1: LaurentPoly, provenance: str = "user-supplied") -> HodgeReport:
    """Degree-one Hodge numbers of an essential, not-all-parallel arrangement
    from its Alexander polynomial: the fixed part is pure of type (1,1) and
    dimension d - 1, the rest is pure of weight one and splits evenly.

    The consistency requirements are errors, never silent adjustments.
    """
    delta = normalize(delta1)
    if delta.is_zero():
        raise ValueError("zero polynomial")
    fac = cyclotomic_factor(delta)
    if not fac.remainder.is_one():
        raise OddNonUnityPart(
            f"non-root-of-unity factor {fac.remainder} violates weight-one purity"
        )
    mult_fixed = next((m for n, m in fac.factors if n == 1), 0)
    if mult_fixed != d - 1:
        raise InconsistentFixedPart(
            f"multiplicity of t - 1 is {mult_fixed}, expected d - 1 = {d - 1}"
        )
    deg = delta.degree() if not delta.is_unit() else 0
    rest = deg - (d - 1)
    if rest % 2:
        raise OddNonUnityPart("non-unity part has odd dimension")
    return HodgeReport(
        d=d,
        delta1=delta,
        b1_torsion=deg,
        h11=d - 1,
        h10=rest // 2,
        h01=rest // 2,
        spectral={n: m for n, m in fac.factors},
        pure=(rest == 0),
        provenance=provenance,
    )


# -- built-in fixtures -----------------------------------------------------------


@dataclass(frozen=True)
class ArrangementFixture:
    name: str
    arrangement: ArrangementSpec | None
    presentation: GroupPresentation
    epimorphism: Epimorphism
    ambient_dimension: int  # n in the Jordan bound
    description: str = ""


def central_arrangement(d: int) -> ArrangementSpec:
    """d distinct rational lines through the origin: x = 0 and y = k x."""
    if d < 2:
        raise ValueError("need at least two lines")
    lines = [(Fraction(1), Fraction(0), Fraction(0))]
    for k in range(d - 1):
        lines.append((Fraction(-k), Fraction(1), Fraction(0)))
    return ArrangementSpec(tuple(lines))


def central_fixture(d: int) -> ArrangementFixture:
    """Product model of the complement of d concurrent lines: the complement
    deformation retracts to (wedge of d-1 circles) x circle, giving the
    presentation <x_1..x_{d-1}, z | [x_i, z]> with eps(x_i) = 1, eps(z) = d."""
    relators = tuple((i, d, -i, -d) for i in range(1, d))
    pres = GroupPresentation(d, relators)
    eps = Epimorphism(tuple([1] * (d - 1) + [d]))
    return ArrangementFixture(
        name=f"central-{d}",
        arrangement=central_arrangement(d),
        presentation=pres,
        epimorphism=eps,
        ambient_dimension=2,
        description=f"{d} concurrent lines, product model",
    )


def generic_fixture(d: int) -> ArrangementFixture:
    """General-position arrangement of up to four lines; the complement group
    is free abelian on the meridians, so all commutators present it."""
    if d < 2 or d > 4:
        raise ValueError("generic presentations ship for 2 <= d <= 4 lines")
    slopes = [Fraction(0), Fraction(1), Fraction(-1), Fraction(2)]
    offsets = [Fraction(1), Fraction(0), Fraction(3), Fraction(17, 2)]
    lines = tuple(
        (-slopes[k], Fraction(1), offsets[k]) for k in range(d)
    )
    arr = ArrangementSpec(lines)
    data = intersection_data(arr)
    if any(m != 2 for _, _, m, _ in data.points):
        raise AssertionError("generic fixture has an unexpected multiple point")
    relators = []
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            relators.append((i, j, -i, -j))
    return ArrangementFixture(
        name=f"generic-{d}",
        arrangement=arr,
        presentation=GroupPresentation(d, tuple(relators)),
        epimorphism=Epimorphism(tuple([1] * d)),
        ambient_dimension=2,
        description=f"{d} lines in general position (abelian complement group)",
    )


def triangle_fixture() -> ArrangementFixture:
    """x = 0, y = 0, x + y = 1: three lines with three double points."""
    arr = ArrangementSpec(
        (
            (Fraction(1), Fraction(0), Fraction(0)),
            (Fraction(0), Fraction(1), Fraction(0)),
            (Fraction(1), Fraction(1), Fraction(1)),
        )
    )
    relators = ((1, 2, -1, -2), (1, 3, -1, -3), (2, 3, -2, -3))
    return ArrangementFixture(
        name="triangle",
        arrangement=arr,
        presentation=GroupPresentation(3, relators),
        epimorphism=Epimorphism((1, 1, 1)),
        ambient_dimension=2,
        description="three lines bounding a triangle (general position)",
    )


# The deleted example x(x-1)y(y-1)(x+y-1).
#
# The presentation below was derived offline by the braid monodromy of the
# generic linear projection (x, y) -> y - 0.37 x: the fiber meets the five
# lines in five points, the four critical values are the images of the four
# intersection points, the monodromy braids were obtained by tracking the
# five punctures numerically along loops around each critical value
# (adaptive bisection; the concurrent triples force simultaneous aligned
# crossings which contribute half twists), and the complement group is the
# quotient of the free group on the five fiber meridians by the braid
# relations g = beta(g).  Generator k is the meridian of line k in the
# order (x, x-1, x+y-1, y, y-1).  The derivation is revalidated by the test
# suite: the Alexander polynomial, the Milnor sequence count, the cyclic
# cover Betti numbers for N = 2, 3 and both duality checks.
_DELETED_RELATORS = (
    (1, 1, 4, -1, -4, -1),
    (2, 1, 4, -1, -4, -2, 4, 1, -4, -1),
    (3, 1, 4, -1, -4, -3, 4, 1, -4, -1),
    (4, 1, -4, -1),
    (1, 1, 3, 4, 5, -4, -1, 4, -5, -4, -3, -1),
    (2, 1, 3, 4, 5, -4, -1, 4, -5, -4, -3, -2, 3, 4, 5, -4, 1, 4, -5, -4, -3, -1),
    (3, 1, 3, 4, 5, -4, -3, 4, -5, -4, -3, -1),
    (5, -4, 1, 3, 4, -5, -4, -3, -1, 4),
    (2, 2, 3, 4, -2, -4, -3, -2),
    (3, 2, 3, 4, -3, -4, -3, -2),
    (4, 2, 3, -4, -3, -2),
    (2, 2, 3, 4, 5, -4, -3, -2, 3, 4, -5, -4, -3, -2),
    (5, -4, -3, 2, 3, 4, -5, -4, -3, -2, 3, 4),
)


def deleted_fixture() -> ArrangementFixture:
    arr = ArrangementSpec(
        (
            (Fraction(1), Fraction(0), Fraction(0)),   # x = 0
            (Fraction(1), Fraction(0), Fraction(1)),   # x = 1
            (Fraction(0), Fraction(1), Fraction(0)),   # y = 0
            (Fraction(0), Fraction(1), Fraction(1)),   # y = 1
            (Fraction(1), Fraction(1), Fraction(1)),   # x + y = 1
        )
    )
    return ArrangementFixture(
        name="deleted",
        arrangement=arr,
        presentation=GroupPresentation(5, _DELETED_RELATORS),
        epimorphism=Epimorphism((1, 1, 1, 1, 1)),
        ambient_dimension=2,
        description="x(x-1)y(y-1)(x+y-1): two triple points, two double points",
    )


def all_fixtures():
    out = [central_fixture(d) for d in range(2, 6)]
    out.append(triangle_fixture())
    out.append(generic_fixture(3))
    out.append(generic_fixture(4))
    out.append(deleted_fixture())
    return out
