"""Thickened complexes: differentials, gauges, filtrations, torsion."""

import random
from fractions import Fraction

import pytest

from alexmod._kernels import linalg
from alexmod.laurent import LaurentPoly
from alexmod.rmodule import FgRModule
from alexmod.thicken import (
    BifilteredCDGA,
    CdgaMorphism,
    Direction,
    NotClosed,
    NotW1,
    ThickenedComplex,
    WitnessMismatch,
    exterior_algebra,
    gauge_isomorphism,
    hodge_graded_interplay,
    induced_map,
    polynomial_pair,
    structure_maps,
    tate_graded_check,
    tensor_cdga,
    thicken_cdga,
    torsion_of_thickening,
    torsion_thickening_oracle,
    weight_graded,
)

t = LaurentPoly.t
F = Fraction


def circle_cdga():
    return exterior_algebra(1)


def circle_eta(cdga):
    return Direction(cdga, [F(1)], hodge_mode=True)


class TestThickening:
    def test_m1_recovers_the_algebra(self):
        cdga = circle_cdga()
        thick = thicken_cdga(cdga, circle_eta(cdga), 1)
        assert thick.betti() == {0: 1, 1: 1}

    def test_m2_dimensions(self):
        cdga = circle_cdga()
        thick = thicken_cdga(cdga, circle_eta(cdga), 2)
        assert thick.betti() == {0: 1, 1: 1}
        # H^0 is spanned by 1 (x) s: the annihilator of s
        q0 = thick.cohomology(0)
        rep = q0.basis_reps()[0]
        assert rep[thick.flat(0, 0, 1)] != 0

    def test_direction_validation(self):
        # x * e1 in the tensor of the truncated pair with a circle satisfies
        # d(x e1) = e e1 != 0, so it cannot serve as a direction
        big = tensor_cdga(polynomial_pair(2), exterior_algebra(1))
        bad_index = next(
            i for i in range(big.dim(1)) if big.name(1, i) in ("x*e1", "xe1")
        )
        vec = [F(0)] * big.dim(1)
        vec[bad_index] = F(1)
        with pytest.raises(NotClosed):
            Direction(big, vec)
        heavy = exterior_algebra(1, weights=[2])
        with pytest.raises(NotW1):
            Direction(heavy, [F(1)])

    def test_os_central3_at_m1(self):
        from alexmod.arrangements import central_arrangement, os_algebra, os_default_direction

        os3 = os_algebra(central_arrangement(3))
        thick = thicken_cdga(os3, os_default_direction(os3), 1)
        # at m = 1 the truncation kills s, so cohomology is the algebra itself
        assert thick.betti() == {0: 1, 1: 3, 2: 2}


class TestGauge:
    def test_zero_witness_is_identity(self):
        pair = polynomial_pair(3)
        eta = Direction(pair, [F(0), F(0)])
        fwd, bwd = gauge_isomorphism(pair, eta, eta, [F(0)] * 3, 2)
        for p in pair.degrees():
            n = pair.dim(p) * 2
            assert fwd[p] == linalg.identity(n)

    def test_exponential_witness(self):
        pair = polynomial_pair(3)
        e1 = Direction(pair, [F(1), F(0)])
        e2 = Direction(pair, [F(0), F(0)])
        witness = [F(0), F(1), F(0)]  # the element x with dx = e
        fwd, bwd = gauge_isomorphism(pair, e1, e2, witness, 2)
        comp = linalg.mat_mul(fwd[0], bwd[0])
        assert comp == linalg.identity(6)

    def test_witness_mismatch(self):
        pair = polynomial_pair(3)
        e1 = Direction(pair, [F(1), F(0)])
        e2 = Direction(pair, [F(1), F(0)])
        with pytest.raises(WitnessMismatch):
            gauge_isomorphism(pair, e1, e2, [F(0), F(1), F(0)], 2)

    def test_composition_law(self):
        """Gauging by a then a' equals gauging by a + a'."""
        pair = polynomial_pair(4)
        x = [F(0), F(1), F(0), F(0)]
        x2 = [F(0), F(2), F(0), F(0)]
        e1 = Direction(pair, [F(1), F(0), F(0)])
        mid_vec = [a - b for a, b in zip(e1.vector, pair.d_apply(0, x))]
        e2 = Direction(pair, mid_vec)
        end_vec = [a - b for a, b in zip(mid_vec, pair.d_apply(0, x2))]
        e3 = Direction(pair, end_vec)
        f1, _ = gauge_isomorphism(pair, e1, e2, x, 3)
        f2, _ = gauge_isomorphism(pair, e2, e3, x2, 3)
        total, _ = gauge_isomorphism(pair, e1, e3, [a + b for a, b in zip(x, x2)], 3)
        for p in pair.degrees():
            assert linalg.mat_mul(f1[p], f2[p]) == total[p]


class TestStructureMaps:
    def test_phi_psi_compose_to_zero_at_order_one(self):
        cdga = circle_cdga()
        eta = circle_eta(cdga)
        phi, psi, s = structure_maps(cdga, eta, 1, 1)
        comp = linalg.mat_mul(psi[1], phi[1])
        assert all(all(v == 0 for v in row) for row in comp)

    def test_psi_phi_is_s(self):
        cdga = circle_cdga()
        eta = circle_eta(cdga)
        thick = ThickenedComplex(cdga, eta, 2)
        phi, psi, _ = structure_maps(cdga, eta, 1, 1)
        comp = linalg.mat_mul(phi[1], psi[1])
        assert comp == thick.mult_s_matrix(1)

    def test_s_squared(self):
        cdga = circle_cdga()
        eta = circle_eta(cdga)
        _, _, s = structure_maps(cdga, eta, 3, 0)
        s2 = linalg.mat_mul(s[0], s[0])
        thick = ThickenedComplex(cdga, eta, 3)
        expected = linalg.mat_mul(thick.mult_s_matrix(0), thick.mult_s_matrix(0))
        assert s2 == expected


class TestGradedPieces:
    def test_weight_membership(self):
        cdga = circle_cdga()  # w(1) = 0, w(e) = 1
        thick = ThickenedComplex(cdga, circle_eta(cdga), 2)
        w0 = thick.weight_sub(0, 1)
        # W_0 in degree one is spanned by e (x) s alone
        assert linalg.qrank(w0, thick.dim(1)) == 1
        assert w0[0][thick.flat(1, 0, 1)] == 1

    def test_graded_differential_is_base_differential(self):
        pair = polynomial_pair(3)
        eta = Direction(pair, [F(1), F(0)])
        thick = ThickenedComplex(pair, eta, 2)
        for level in thick.weight_levels(0):
            weight_graded(thick, level)  # raises if the eta part survives

    def test_interplay_and_tate(self):
        cdga = circle_cdga()
        thick = ThickenedComplex(cdga, circle_eta(cdga), 2)
        for level in (-2, -1, 0, 1):
            for p in (-1, 0, 1, 2):
                assert hodge_graded_interplay(thick, level, p)["ok"]
            assert tate_graded_check(thick, level)

    def test_vacuous_levels(self):
        cdga = circle_cdga()
        thick = ThickenedComplex(cdga, circle_eta(cdga), 2)
        rep = hodge_graded_interplay(thick, -9, 7)
        assert rep["ok"]

    def test_corrupted_hodge_table_detected(self):
        cdga = circle_cdga()
        thick = ThickenedComplex(cdga, circle_eta(cdga), 2)
        thick.f_index[(1, 0, 1)] += 3
        assert not all(tate_graded_check(thick, lv) for lv in (-1, 0, 1))


class TestInducedMaps:
    def test_identity_morphism(self):
        cdga = circle_cdga()
        ident = CdgaMorphism(cdga, cdga, {p: linalg.identity(cdga.dim(p)) for p in cdga.degrees()})
        mats, eta_b, quasi = induced_map(ident, circle_eta(cdga), 2)
        assert quasi
        for p in cdga.degrees():
            assert mats[p] == linalg.identity(cdga.dim(p) * 2)

    def test_quasi_iso_subalgebra(self):
        """The inclusion of the exterior circle into circle (x) acyclic pair."""
        circle = circle_cdga()
        pair = polynomial_pair(2)  # acyclic in positive degree? H^0 = Q, H^1 = 0
        big = tensor_cdga(pair, circle)
        # embed: 1 -> 1 (x) 1, e -> e_pair? the acyclic factor contributes
        # H = Q in degree 0, so the inclusion of circle is a quasi-iso
        mats = {}
        for p in circle.degrees():
            mat = [[F(0)] * big.dim(p) for _ in range(circle.dim(p))]
            mats[p] = mat
        # locate the basis elements 1 (x) 1 and 1 (x) e in the tensor algebra
        names = {big.name(p, i): (p, i) for p in big.degrees() for i in range(big.dim(p))}
        mats[0][0][names["1"][1]] = F(1)
        mats[1][0][names["e1"][1]] = F(1)
        inc = CdgaMorphism(circle, big, mats)
        assert inc.is_quasi_isomorphism()
        _, _, quasi = induced_map(inc, circle_eta(circle), 2)
        assert quasi

    def test_non_morphism_rejected(self):
        cdga = circle_cdga()
        bad = {p: [[F(2) * (i == j) for j in range(cdga.dim(p))] for i in range(cdga.dim(p))]
               for p in cdga.degrees()}
        with pytest.raises(Exception):
            CdgaMorphism(cdga, cdga, bad)


class TestTorsion:
    def test_circle(self):
        cdga = circle_cdga()
        eta = circle_eta(cdga)
        assert torsion_of_thickening(cdga, eta, 1) == FgRModule(0, [t(1) - 1])
        assert torsion_of_thickening(cdga, eta, 0).is_zero()

    def test_oracle_matches_on_randoms(self):
        from alexmod.accept import _random_cdga, _random_direction

        rng = random.Random(31)
        for _ in range(20):
            cdga = _random_cdga(rng)
            eta = _random_direction(rng, cdga)
            for degree in cdga.degrees():
                lhs = torsion_of_thickening(cdga, eta, degree, cross_check=False)
                assert lhs == torsion_thickening_oracle(cdga, eta, degree)

    def test_central3_unipotent_part(self):
        from alexmod.arrangements import central_arrangement, os_algebra, os_default_direction

        os3 = os_algebra(central_arrangement(3))
        tors = torsion_of_thickening(os3, os_default_direction(os3), 2)
        # the thickening sees the part of the torsion at t = 1: two lines of
        # the fixed spectrum out of the four-dimensional Alexander module
        assert tors == FgRModule(0, [t(1) - 1, t(1) - 1])

    def test_cover_model_reaches_the_full_dimension(self):
        """A model of the unipotence cover of the central arrangement (Milnor
        fiber times circle) has degree-2 torsion of the full Alexander
        dimension (d - 1)^2."""
        from alexmod.arrangements import central_delta

        for d in (3, 4):
            k = (d - 1) ** 2
            wedge = BifilteredCDGA(
                {0: 1, 1: k},
                {},
                {},
                {(0, 0): 0, **{(1, i): 1 for i in range(k)}},
                {(0, 0): 0, **{(1, i): 1 for i in range(k)}},
                names={(0, 0): "1", **{(1, i): f"w{i+1}" for i in range(k)}},
            )
            cover = tensor_cdga(exterior_algebra(1, names=["c"]), wedge)
            eta_vec = [F(0)] * cover.dim(1)
            c_index = next(
                i for i in range(cover.dim(1)) if cover.name(1, i) == "c"
            )
            eta_vec[c_index] = F(1)
            eta = Direction(cover, eta_vec, hodge_mode=True)
            tors = torsion_of_thickening(cover, eta, 2)
            assert tors.torsion_dimension() == k
            assert k == central_delta(d).degree()


class TestFiltrationPreservation:
    def test_d_eta_preserves_both_filtrations(self):
        """d_eta(W_l) stays in W_l and d_eta(F^p) stays in F^p whenever the
        direction lies in W_1 and F^1."""
        pair = polynomial_pair(3)
        eta = Direction(pair, [F(1), F(0)], hodge_mode=True)
        thick = ThickenedComplex(pair, eta, 3)
        for p in pair.degrees():
            if pair.dim(p + 1) == 0:
                continue
            d = thick.d_matrix(p)
            for level in thick.weight_levels(p):
                for row in thick.weight_sub(level, p):
                    img = linalg.mat_mul([row], d)[0]
                    target = thick.weight_sub(level, p + 1)
                    assert linalg.subspace_contains(target, [img], thick.dim(p + 1))
            f_levels = sorted({thick.f_index[k] for k in thick.f_index if k[0] == p})
            for level in f_levels:
                for row in thick.hodge_sub(level, p):
                    img = linalg.mat_mul([row], d)[0]
                    target = thick.hodge_sub(level, p + 1)
                    assert linalg.subspace_contains(target, [img], thick.dim(p + 1))


class TestCrossPipelineDegreeOne:
    def test_exact_agreement_with_psi(self):
        """In degree one (dual of the connected component count) the
        thickening and presentation pipelines produce the same module."""
        from alexmod.arrangements import all_fixtures, os_algebra, os_default_direction
        from alexmod.localsys import presentation_complex, torsion_via_psi

        for fx in all_fixtures():
            if fx.arrangement is None:
                continue
            osalg = os_algebra(fx.arrangement)
            thick = torsion_of_thickening(osalg, os_default_direction(osalg), 1)
            pc = presentation_complex(fx.presentation, fx.epimorphism)
            assert thick == torsion_via_psi(pc, 1) == FgRModule(0, [t(1) - 1])


class TestNoStabilization:
    def test_cap_raises(self):
        from alexmod.cochain import NoStabilization
        from alexmod.localsys import GroupPresentation, Epimorphism, presentation_complex, torsion_via_psi

        tre = presentation_complex(
            GroupPresentation(2, ((1, 2, 1, -2, -1, -2),)), Epimorphism((1, 1))
        )
        with pytest.raises(NoStabilization):
            torsion_via_psi(tre, 2, max_m=0)


class TestTensor:
    def test_torus_betti(self):
        torus = tensor_cdga(exterior_algebra(1), exterior_algebra(1, names=["f"]))
        assert {p: torus.dim(p) for p in torus.degrees()} == {0: 1, 1: 2, 2: 1}
        eta = Direction(torus, [F(1), F(1)])
        thick = thicken_cdga(torus, eta, 2)
        assert thick.betti()[0] == 1
