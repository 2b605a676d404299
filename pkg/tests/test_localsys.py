"""Fox calculus, Alexander modules, psi-kernel torsion, covers and reports."""

import random

import pytest

from alexmod.cochain import psi_torsion
from alexmod.laurent import LaurentPoly, normalize
from alexmod.localsys import (
    Epimorphism,
    GroupPresentation,
    NotEpimorphism,
    RelatorNotInKernel,
    alexander_homology,
    cover_kernel_check,
    cover_presentation,
    duality_check,
    fox_derivative,
    milnor_split_check,
    presentation_complex,
    rm_cochain_complex,
    torsion_via_psi,
    untwisted_betti,
)
from alexmod.rmodule import FgRModule, conjugate, homology, torsion_part

t = LaurentPoly.t


def poly(s):
    return LaurentPoly.parse(s)


def circle():
    return presentation_complex(GroupPresentation(1, ()), Epimorphism((1,)))


def trefoil():
    return presentation_complex(
        GroupPresentation(2, ((1, 2, 1, -2, -1, -2),)), Epimorphism((1, 1))
    )


def free2():
    return presentation_complex(GroupPresentation(2, ()), Epimorphism((1, 1)))


def central_model(d):
    relators = tuple((i, d, -i, -d) for i in range(1, d))
    return presentation_complex(
        GroupPresentation(d, relators), Epimorphism(tuple([1] * (d - 1) + [d]))
    )


class TestValidation:
    def test_gcd_condition(self):
        with pytest.raises(NotEpimorphism):
            presentation_complex(GroupPresentation(2, ()), Epimorphism((2, 4)))

    def test_relator_in_kernel(self):
        with pytest.raises(RelatorNotInKernel):
            presentation_complex(GroupPresentation(2, ((1, 2),)), Epimorphism((1, 1)))

    def test_bad_letter(self):
        with pytest.raises(ValueError):
            GroupPresentation(1, ((2,),))


class TestFox:
    def test_inverse_letter(self):
        eps = Epimorphism((1,))
        assert fox_derivative((-1,), 1, eps) == -t(-1)

    def test_product_rule_on_commutator(self):
        eps = Epimorphism((1, 3))
        w = (1, 2, -1, -2)
        assert fox_derivative(w, 1, eps) == 1 - t(3)
        assert fox_derivative(w, 2, eps) == t(1) - 1

    def test_fundamental_identity(self):
        """sum_g (dw/dg)(t^eps(g) - 1) telescopes to t^eps(w) - 1."""
        rng = random.Random(3)
        eps = Epimorphism((1, -2, 3))
        for _ in range(30):
            w = tuple(rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(rng.randint(1, 8)))
            total = LaurentPoly.zero()
            for g in (1, 2, 3):
                total = total + fox_derivative(w, g, eps) * (t(eps.images[g - 1]) - 1)
            assert total == t(eps.value(w)) - 1


class TestAlexanderHomology:
    def test_h0_is_always_fixed_line(self):
        for pc in (circle(), trefoil(), free2(), central_model(4)):
            assert alexander_homology(pc, 0) == FgRModule(0, [t(1) - 1])

    def test_trefoil(self):
        assert alexander_homology(trefoil(), 1) == FgRModule(0, [t(2) - t(1) + 1])

    def test_free_group(self):
        assert alexander_homology(free2(), 1) == FgRModule(1, [])

    def test_central_model(self):
        h1 = alexander_homology(central_model(4), 1)
        assert h1 == FgRModule(0, [t(1) - 1, t(4) - 1, t(4) - 1])
        assert h1.order() == normalize((t(4) - 1) ** 2 * (t(1) - 1))


class TestCochain:
    def test_circle_dimensions(self):
        cc = rm_cochain_complex(circle(), 2)
        assert cc.cohomology_dimension(0) == 1
        assert cc.cohomology_dimension(1) == 1

    def test_untwisted_recovers_betti(self):
        cc = rm_cochain_complex(central_model(3), 1)
        assert [cc.cohomology_dimension(i) for i in (0, 1, 2)] == [1, 3, 2]

    def test_trefoil_m1(self):
        cc = rm_cochain_complex(trefoil(), 1)
        assert cc.cohomology_dimension(1) == 1


class TestPsiTorsion:
    def test_circle(self):
        assert torsion_via_psi(circle(), 1) == FgRModule(0, [t(1) - 1])
        assert torsion_via_psi(circle(), 0).is_zero()

    def test_trefoil_degree2(self):
        assert torsion_via_psi(trefoil(), 2) == FgRModule(0, [t(2) - t(1) + 1])

    @pytest.mark.parametrize(
        "builder", [circle, trefoil, free2, lambda: central_model(3), lambda: central_model(4)]
    )
    def test_duality(self, builder):
        pc = builder()
        for i in (0, 1):
            assert duality_check(pc, i)["ok"]

    def test_epimorphism_with_zero_image(self):
        pc = presentation_complex(
            GroupPresentation(2, ((1, 2, -1, -2),)), Epimorphism((0, 1))
        )
        assert alexander_homology(pc, 1) == FgRModule(0, [t(1) - 1])
        assert duality_check(pc, 1)["ok"]


class TestMilnor:
    def test_central(self):
        rep = milnor_split_check(central_model(4))
        assert rep["dim_H1_fixed"] == 3
        assert rep["dim_H1_untwisted"] == 4
        assert rep["ok"] is True

    def test_free_guard(self):
        rep = milnor_split_check(free2())
        assert rep["free_part_present"]
        assert rep["ok"] == "not-applicable"

    def test_trefoil(self):
        rep = milnor_split_check(trefoil())
        assert rep["dim_H1_fixed"] == 0
        assert rep["dim_H1_untwisted"] == 1
        assert rep["ok"] is True


class TestCovers:
    def test_index_two_of_z(self):
        p, e = cover_presentation(GroupPresentation(1, ()), Epimorphism((1,)), 2)
        assert p.generator_count == 1 and p.relators == ()
        assert e.images == (1,)

    def test_n_equals_one(self):
        pres = GroupPresentation(2, ((1, 2, 1, -2, -1, -2),))
        eps = Epimorphism((1, 1))
        assert cover_presentation(pres, eps, 1) == (pres, eps)

    def test_euler_characteristic_scales(self):
        pres = GroupPresentation(2, ((1, 2, 1, -2, -1, -2),))
        eps = Epimorphism((1, 1))
        for n in (2, 3, 5):
            cp, ce = cover_presentation(pres, eps, n)
            chi = 1 - cp.generator_count + len(cp.relators)
            assert chi == n * (1 - 2 + 1)
            ce.validate(cp)

    def test_nontrivial_images(self):
        cp, ce = cover_presentation(GroupPresentation(2, ()), Epimorphism((2, 3)), 4)
        assert cp.generator_count == 5
        ce.validate(cp)

    @pytest.mark.parametrize(
        "builder,n",
        [
            (circle, 2),
            (circle, 3),
            (trefoil, 6),
            (lambda: central_model(3), 3),
            (free2, 2),
        ],
    )
    def test_cover_count(self, builder, n):
        assert cover_kernel_check(builder(), n)["ok"]


class TestRandomizedDuality:
    def test_against_homology(self):
        from alexmod.rmodule import ComplexOverR, MatrixOverR, smith_normal_form

        rng = random.Random(12)
        for _ in range(15):
            a, b, c = rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 2)
            d1 = MatrixOverR(
                a, b,
                [[LaurentPoly({e: rng.randint(-2, 2) for e in range(0, rng.randint(1, 3))})
                  for _ in range(b)] for _ in range(a)],
            )
            snf = smith_normal_form(d1)
            nmin = min(a, b)
            zero_cols = [j for j in range(b) if j >= nmin or snf.diagonal[j].is_zero()]
            cols = []
            for _ in range(c):
                col = [LaurentPoly.zero()] * b
                for z in zero_cols:
                    f = LaurentPoly({e: rng.randint(-1, 1) for e in range(0, 2)})
                    for r in range(b):
                        col[r] = col[r] + f * snf.right.entries[r][z]
                cols.append(col)
            d2 = MatrixOverR(b, c, [[cols[j][i] for j in range(c)] for i in range(b)])
            cx = ComplexOverR({0: a, 1: b, 2: c}, {1: d1, 2: d2})
            for i in (0, 1):
                assert psi_torsion(cx, i + 1) == conjugate(torsion_part(homology(cx, i)))


def test_untwisted_betti():
    assert untwisted_betti(trefoil(), 1) == 1
    assert untwisted_betti(central_model(5), 1) == 5
