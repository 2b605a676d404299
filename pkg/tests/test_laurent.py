"""Ring arithmetic, canonical associates, truncations and cyclotomics."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alexmod.laurent import (
    CyclotomicFactorization,
    LaurentPoly,
    TruncatedPoly,
    ZeroPolynomial,
    cyclotomic,
    cyclotomic_factor,
    divmod_poly,
    euler_phi,
    exact_div,
    gcd_poly,
    gcdex_poly,
    normalize,
    squarefree_decomposition,
    squarefree_part,
    truncate,
    twist_series,
    unit_log_series,
)

t = LaurentPoly.t


def poly(s):
    return LaurentPoly.parse(s)


small_polys = st.builds(
    LaurentPoly,
    st.dictionaries(
        st.integers(min_value=-3, max_value=4),
        st.fractions(min_value=-3, max_value=3, max_denominator=4),
        max_size=5,
    ),
)


class TestNormalize:
    def test_unit_stripping(self):
        p = LaurentPoly.const(3) * t(-1) * (t(1) - 1)
        assert normalize(p) == poly("t - 1")

    def test_zero(self):
        assert normalize(LaurentPoly.zero()).is_zero()

    def test_expand_and_strip(self):
        q = (t(3) - 1) * (t(1) - 1) * t(5)
        assert normalize(q) == poly("t^4 - t^3 - t + 1")

    @given(small_polys)
    @settings(max_examples=80)
    def test_idempotent(self, p):
        assert normalize(normalize(p)) == normalize(p)

    @given(small_polys, small_polys)
    @settings(max_examples=80)
    def test_multiplicative_up_to_normalization(self, p, q):
        assert normalize(p * q) == normalize(normalize(p) * normalize(q))


class TestTruncate:
    def test_t(self):
        assert truncate(t(1), 2) == TruncatedPoly(2, [1, 1])

    def test_t_inverse(self):
        assert truncate(t(-1), 3) == TruncatedPoly(3, [1, -1, 1])

    def test_degree_one_at_order_one(self):
        assert truncate(t(1) - 1, 1).is_zero()

    @given(small_polys, small_polys, st.integers(min_value=1, max_value=5))
    @settings(max_examples=60)
    def test_ring_homomorphism(self, p, q, m):
        assert truncate(p * q, m) == truncate(p, m) * truncate(q, m)
        assert truncate(p + q, m) == truncate(p, m) + truncate(q, m)

    @given(st.integers(min_value=1, max_value=6))
    def test_unit_times_inverse(self, m):
        assert truncate(t(1) * t(-1), m) == TruncatedPoly.one(m)


class TestCyclotomic:
    def test_phi_values(self):
        assert cyclotomic(1) == poly("t - 1")
        assert cyclotomic(2) == poly("t + 1")
        assert cyclotomic(3) == poly("t^2 + t + 1")
        assert cyclotomic(6) == poly("t^2 - t + 1")
        assert cyclotomic(12) == poly("t^4 - t^2 + 1")

    def test_phi3_factor(self):
        fac = cyclotomic_factor(t(2) + t(1) + 1)
        assert fac.factors == [(3, 1)]
        assert fac.remainder.is_one()

    def test_mixed_factor(self):
        p = (t(4) - 1) ** 2 * (t(1) - 2)
        fac = cyclotomic_factor(p)
        assert fac.factors == [(1, 2), (2, 2), (4, 2)]
        assert fac.remainder == poly("t - 2")
        assert fac.reassemble() == p

    def test_no_cyclotomic_part(self):
        fac = cyclotomic_factor(t(1) - 2)
        assert fac.factors == []
        assert fac.remainder == poly("t - 2")

    def test_zero_rejected(self):
        with pytest.raises(ZeroPolynomial):
            cyclotomic_factor(LaurentPoly.zero())

    @given(st.integers(min_value=1, max_value=30))
    def test_degree_is_totient(self, n):
        assert cyclotomic(n).degree() == euler_phi(n)

    @given(small_polys)
    @settings(max_examples=50)
    def test_roundtrip(self, p):
        if p.is_zero():
            return
        fac = cyclotomic_factor(p)
        assert fac.reassemble() == p
        assert isinstance(fac, CyclotomicFactorization)


class TestSeries:
    def test_log(self):
        assert unit_log_series(1).is_zero()
        assert unit_log_series(2) == TruncatedPoly(2, [0, 1])
        assert unit_log_series(3) == TruncatedPoly(3, [0, 1, Fraction(-1, 2)])

    def test_twist(self):
        assert twist_series(1).is_zero()
        assert twist_series(2) == TruncatedPoly(2, [0, 1])
        assert twist_series(3) == TruncatedPoly(3, [0, 1, Fraction(1, 2)])

    @pytest.mark.parametrize("m", range(2, 8))
    def test_unit_quotients(self, m):
        s_unit = truncate(t(1), m) - TruncatedPoly.one(m)
        for series in (unit_log_series(m), twist_series(m)):
            q = series.divide_by(s_unit)
            assert q.is_unit(), "quotient must have nonzero constant term"


class TestDivision:
    @given(small_polys, small_polys)
    @settings(max_examples=80)
    def test_divmod(self, a, b):
        if b.is_zero():
            return
        q, r = divmod_poly(a, b)
        a0 = a.shift(-a.valuation()) if not a.is_zero() else a
        b0 = b.shift(-b.valuation())
        assert q * b0 + r == a0
        if not r.is_zero():
            assert r.degree() < b0.degree()

    @given(small_polys, small_polys)
    @settings(max_examples=80)
    def test_gcd_divides(self, a, b):
        g = gcd_poly(a, b)
        if g.is_zero():
            assert a.is_zero() and b.is_zero()
            return
        assert divmod_poly(a, g)[1].is_zero()
        assert divmod_poly(b, g)[1].is_zero()

    @given(small_polys, small_polys)
    @settings(max_examples=80)
    def test_gcdex(self, a, b):
        g, x, y = gcdex_poly(a, b)
        assert x * a + y * b == g

    def test_squarefree(self):
        p = (t(1) - 1) ** 3 * (t(2) + t(1) + 1) ** 2 * (t(1) + 2)
        assert squarefree_part(p) == normalize((t(1) - 1) * (t(2) + t(1) + 1) * (t(1) + 2))
        dec = dict((m, f) for f, m in squarefree_decomposition(p))
        assert dec[3] == poly("t - 1")
        assert dec[2] == poly("t^2 + t + 1")
        assert dec[1] == poly("t + 2")


class TestSerialization:
    @given(small_polys)
    @settings(max_examples=80)
    def test_json_roundtrip(self, p):
        assert LaurentPoly.from_json(p.to_json()) == p

    @given(small_polys)
    @settings(max_examples=80)
    def test_str_parse_roundtrip(self, p):
        assert LaurentPoly.parse(str(p)) == p

    def test_parse_examples(self):
        assert poly("t^2 - t + 1") == t(2) - t(1) + 1
        assert poly("1/2*t^-3 + 2 - t") == LaurentPoly({-3: Fraction(1, 2), 0: 2, 1: -1})
        assert poly("0").is_zero()


def test_exact_div_errors():
    with pytest.raises(ValueError):
        exact_div(t(1) + 1, t(1) - 1)
