"""Eigenvalue, Jordan, semisimplicity and weight-window checkers."""

import pytest

from alexmod.invariants import (
    NotRootsOfUnity,
    NotSemisimpleOrNotUnityPowerTorsion,
    check_suite,
    eigen_split,
    jordan_bound,
    jordan_bound_check,
    jordan_profile,
    log_nilpotency_orders,
    roots_of_unity_check,
    semisimplicity_check,
    unipotent_order,
    weight_window,
)
from alexmod.laurent import LaurentPoly
from alexmod.rmodule import FgRModule, NotTorsion

t = LaurentPoly.t


def mod(*factors):
    return FgRModule(0, list(factors))


class TestRoots:
    def test_cyclotomic_passes(self):
        assert roots_of_unity_check(mod(t(2) + t(1) + 1))["ok"]

    def test_offending_factor(self):
        rep = roots_of_unity_check(mod(t(1) - 2))
        assert not rep["ok"]
        assert rep["offending"] == t(1) - 2

    def test_central_shape(self):
        assert roots_of_unity_check(mod((t(4) - 1) ** 2 * (t(1) - 1)))["ok"]


class TestJordanProfile:
    def test_unipotent_blocks(self):
        assert jordan_profile(mod(t(1) - 1, (t(1) - 1) ** 2)) == {1: [1, 2]}

    def test_squarefree_split(self):
        assert jordan_profile(mod(t(2) - 1)) == {1: [1], 2: [1]}

    def test_chain(self):
        assert jordan_profile(mod(t(1) - 1, t(3) - 1)) == {1: [1, 1], 3: [1]}

    def test_non_cyclotomic_keys(self):
        prof = jordan_profile(mod((t(1) - 2) * (t(1) - 3), (t(1) - 2) ** 2 * (t(1) - 3)))
        assert prof == {"t - 2": [1, 2], "t - 3": [1, 1]}

    def test_requires_torsion(self):
        with pytest.raises(NotTorsion):
            jordan_profile(FgRModule(1, []))


class TestJordanBound:
    def test_formula(self):
        assert jordan_bound(1, 2) == 1
        assert jordan_bound(0, 5) == 1
        assert jordan_bound(3, 4) == 2

    def test_check(self):
        assert not jordan_bound_check(mod((t(1) - 1) ** 2), 1, 2)
        assert jordan_bound_check(mod(t(2) + t(1) + 1), 1, 2)

    def test_equivalent_to_semisimplicity_at_bound_one(self):
        for m in (mod(t(2) - 1), mod((t(1) - 1) ** 2), mod(t(3) - 1, t(3) - 1)):
            assert jordan_bound_check(m, 1, 2) == semisimplicity_check(m)


class TestSemisimple:
    def test_squarefree(self):
        assert semisimplicity_check(mod((t(1) - 1) * (t(1) + 1)))
        assert not semisimplicity_check(mod((t(1) - 1) ** 2))

    def test_central5(self):
        m = mod(t(1) - 1, t(5) - 1, t(5) - 1, t(5) - 1)
        assert semisimplicity_check(m)


class TestEigenSplit:
    def test_coprime_split(self):
        fixed, moving = eigen_split(mod((t(1) - 1) * (t(2) + t(1) + 1)))
        assert fixed == mod(t(1) - 1)
        assert moving == mod(t(2) + t(1) + 1)

    def test_pure_fixed(self):
        fixed, moving = eigen_split(mod(t(1) - 1))
        assert fixed == mod(t(1) - 1) and moving.is_zero()

    def test_deleted_dimensions(self):
        m = mod(t(1) - 1, t(1) - 1, t(1) - 1, t(3) - 1)
        fixed, moving = eigen_split(m)
        assert fixed.torsion_dimension() == 4
        assert moving.torsion_dimension() == 2
        # direct sum reproduces the module
        total = sorted(
            [p for p in fixed.invariant_factors] + [p for p in moving.invariant_factors],
            key=str,
        )
        recombined = {}
        assert fixed.order() * moving.order() == m.order()

    def test_rejects_nonsemisimple(self):
        with pytest.raises(NotSemisimpleOrNotUnityPowerTorsion):
            eigen_split(mod((t(1) - 1) ** 2))

    def test_rejects_non_unity(self):
        with pytest.raises(NotSemisimpleOrNotUnityPowerTorsion):
            eigen_split(mod(t(1) - 2))


class TestUnipotentOrder:
    def test_values(self):
        assert unipotent_order(mod(t(2) + t(1) + 1)) == 3
        assert unipotent_order(mod((t(1) - 1) ** 3)) == 1
        assert unipotent_order(mod((t(5) - 1) * (t(1) - 1))) == 5

    def test_order_one_iff_unipotent(self):
        assert unipotent_order(mod((t(1) - 1) ** 2, (t(1) - 1) ** 2)) == 1
        assert unipotent_order(mod(t(2) - 1)) == 2

    def test_rejects(self):
        with pytest.raises(NotRootsOfUnity):
            unipotent_order(mod(t(1) - 2))


class TestWeightWindow:
    def test_examples(self):
        assert weight_window(1, 2) == (1, 2)
        assert weight_window(0, 5) == (0, 0)
        lo, hi = weight_window(3, 2)
        assert (lo, hi) == (3, 2) and lo > hi  # empty window


class TestLogUnit:
    def test_nilpotency_orders_agree(self):
        for m in (mod((t(1) - 1) ** 3), mod(t(1) - 1), mod((t(1) - 1) ** 2, (t(1) - 1) ** 4)):
            order_s, order_log = log_nilpotency_orders(m)
            assert order_s == order_log


def test_check_suite_shape():
    rep = check_suite(mod(t(1) - 2), ["roots", "jordan", "semisimple"], i=1, n=2)
    assert rep["roots"]["ok"] is False
    assert rep["roots"]["offending"] == "t - 2"
    assert rep["semisimple"]["ok"] is True
