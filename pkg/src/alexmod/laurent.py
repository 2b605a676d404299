"""Exact arithmetic in Q[t, t^-1] and its truncations Q[s]/(s^m), s = t - 1.

Laurent polynomials are stored sparsely as {exponent: coefficient} with
Fraction coefficients and no explicit zeros, as in

>>> p = LaurentPoly({-1: 3, 0: -3})     # 3/t - 3
>>> print(normalize(p))
t - 1

Everything here is immutable and pure.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

Rational = Fraction


class ZeroPolynomial(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class LaurentPoly:
    """Element of R = Q[t, t^-1]."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        d = {}
        if coeffs:
            for e, c in coeffs.items():
                c = _frac(c)
                if c:
                    d[int(e)] = c
        self.coeffs = d

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly({0: 1})

    @staticmethod
    def t(k: int = 1) -> "LaurentPoly":
        return LaurentPoly({k: 1})

    @staticmethod
    def const(c) -> "LaurentPoly":
        return LaurentPoly({0: _frac(c)})

    @staticmethod
    def from_int_list(coeffs, low: int = 0) -> "LaurentPoly":
        return LaurentPoly({low + i: c for i, c in enumerate(coeffs)})

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no degree")
        return max(self.coeffs)

    def valuation(self) -> int:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no valuation")
        return min(self.coeffs)

    def spread(self) -> int:
        """degree - valuation; 0 for monomials.  Used for pivot selection."""
        if not self.coeffs:
            return -1
        return max(self.coeffs) - min(self.coeffs)

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def is_one(self) -> bool:
        return self.coeffs == {0: Fraction(1)}

    def leading(self) -> Fraction:
        return self.coeffs[self.degree()]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        d = dict(self.coeffs)
        for e, c in other.coeffs.items():
            v = d.get(e, Fraction(0)) + c
            if v:
                d[e] = v
            else:
                d.pop(e, None)
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = d
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {e: -c for e, c in self.coeffs.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return LaurentPoly.const(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            out = LaurentPoly.__new__(LaurentPoly)
            out.coeffs = {e: v * c for e, v in self.coeffs.items()} if c else {}
            return out
        d = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                v = d.get(e, Fraction(0)) + c1 * c2
                if v:
                    d[e] = v
                else:
                    d.pop(e, None)
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = d
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_unit():
                raise ValueError("negative power of a non-unit")
            (e, c), = self.coeffs.items()
            return LaurentPoly({e * n: c**n})
        out = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by t^k."""
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {e + k: c for e, c in self.coeffs.items()}
        return out

    def substitute_inverse(self) -> "LaurentPoly":
        """p(t) -> p(1/t)."""
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {-e: c for e, c in self.coeffs.items()}
        return out

    def evaluate(self, x: Fraction) -> Fraction:
        x = _frac(x)
        total = Fraction(0)
        for e, c in self.coeffs.items():
            total += c * x**e
        return total

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({e - 1: c * e for e, c in self.coeffs.items() if e})

    # -- dense helpers (ordinary-polynomial part) --------------------------

    def dense(self):
        """(valuation, [c_0, ..., c_deg-val]) with Fraction entries."""
        if not self.coeffs:
            return 0, []
        lo, hi = self.valuation(), self.degree()
        out = [Fraction(0)] * (hi - lo + 1)
        for e, c in self.coeffs.items():
            out[e - lo] = c
        return lo, out

    # -- printing / parsing -------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            if e == 0:
                term = str(c)
            else:
                tpow = "t" if e == 1 else f"t^{e}"
                if c == 1:
                    term = tpow
                elif c == -1:
                    term = f"-{tpow}"
                else:
                    term = f"{c}*{tpow}"
            parts.append(term)
        s = " + ".join(parts).replace("+ -", "- ")
        return s

    __repr__ = __str__

    @staticmethod
    def parse(text: str) -> "LaurentPoly":
        """Inverse of str(); accepts e.g. 't^2 - t + 1', '1/2*t^-3 + 2'."""
        text = text.replace(" ", "")
        if text in ("", "0"):
            return LaurentPoly.zero()
        term_re = re.compile(
            r"([+-]?)(?:(\d+(?:/\d+)?)\*?)?(t(?:\^(-?\d+))?)?"
        )
        pos = 0
        coeffs = {}
        while pos < len(text):
            m = term_re.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse polynomial: {text!r}")
            sign, num, tpart, expo = m.groups()
            if num is None and tpart is None:
                raise ValueError(f"cannot parse polynomial: {text!r}")
            c = Fraction(num) if num else Fraction(1)
            if sign == "-":
                c = -c
            e = 0
            if tpart:
                e = int(expo) if expo is not None else 1
            coeffs[e] = coeffs.get(e, Fraction(0)) + c
            pos = m.end()
        return LaurentPoly(coeffs)

    # -- JSON (exponent string -> "num/den") --------------------------------

    def to_json(self):
        return {str(e): f"{c.numerator}/{c.denominator}" for e, c in sorted(self.coeffs.items())}

    @staticmethod
    def from_json(obj) -> "LaurentPoly":
        return LaurentPoly({int(e): Fraction(v) for e, v in obj.items()})


def normalize(p: LaurentPoly) -> LaurentPoly:
    """Canonical associate: monic ordinary polynomial with nonzero constant term.

    normalize(0) = 0.  Each nonzero p has a unique unit multiple of this
    form, so normalized polynomials are comparable across pipelines.
    """
    if p.is_zero():
        return p
    q = p.shift(-p.valuation())
    lead = q.leading()
    if lead != 1:
        q = q * (1 / lead)
    return q


def divmod_poly(a: LaurentPoly, b: LaurentPoly):
    """Division with remainder on the ordinary-polynomial parts.

    Both arguments are first shifted to have valuation 0 (units do not
    change divisibility in R).  Returns (q, r) with a0 = q*b0 + r and
    deg r < deg b0.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    a0 = a.shift(-a.valuation()) if not a.is_zero() else a
    b0 = b.shift(-b.valuation())
    _, bd = b0.dense()
    _, ad = a0.dense()
    ad = list(ad)
    db = len(bd) - 1
    inv_lead = 1 / bd[-1]
    q = {}
    while len(ad) - 1 >= db and ad:
        da = len(ad) - 1
        c = ad[-1] * inv_lead
        q[da - db] = c
        for i in range(db + 1):
            ad[da - db + i] -= c * bd[i]
        while ad and not ad[-1]:
            ad.pop()
    return LaurentPoly(q), LaurentPoly({i: c for i, c in enumerate(ad)})


def divides(b: LaurentPoly, a: LaurentPoly) -> bool:
    """True iff b | a in R."""
    if a.is_zero():
        return True
    if b.is_zero():
        return False
    return divmod_poly(a, b)[1].is_zero()


def exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """a / b when b | a, with the unit bookkeeping put back."""
    if a.is_zero():
        return a
    q, r = divmod_poly(a, b)
    if not r.is_zero():
        raise ValueError("not an exact division")
    return q.shift(a.valuation() - b.valuation())


def gcd_poly(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Normalized gcd in R (monic, nonzero constant term); gcd(0,0) = 0."""
    a, b = normalize(a), normalize(b)
    while not b.is_zero():
        a, b = b, normalize(divmod_poly(a, b)[1])
    return a


def gcdex_poly(a: LaurentPoly, b: LaurentPoly):
    """(g, x, y) with x*a + y*b = g = gcd(a, b), g normalized."""
    r0, r1 = a, b
    x0, x1 = LaurentPoly.one(), LaurentPoly.zero()
    y0, y1 = LaurentPoly.zero(), LaurentPoly.one()
    while not r1.is_zero():
        # divmod works on the valuation-0 parts; shift the quotient back so
        # that r0 - q_full * r1 is the true remainder in R
        q_, _ = divmod_poly(r0, r1)
        v0 = r0.valuation() if not r0.is_zero() else 0
        v1 = r1.valuation()
        q_full = q_.shift(v0 - v1)
        rem_full = r0 - q_full * r1
        r0, r1 = r1, rem_full
        x0, x1 = x1, x0 - q_full * x1
        y0, y1 = y1, y0 - q_full * y1
    if r0.is_zero():
        return LaurentPoly.zero(), LaurentPoly.zero(), LaurentPoly.zero()
    g = normalize(r0)
    u = exact_div(g, r0)  # unit
    return g, x0 * u, y0 * u


def squarefree_part(p: LaurentPoly) -> LaurentPoly:
    """Product of the distinct irreducible factors of p, normalized."""
    p = normalize(p)
    if p.is_zero() or p.is_unit():
        return p
    return normalize(exact_div(p, gcd_poly(p, p.derivative())))


def squarefree_decomposition(p: LaurentPoly):
    """Yun decomposition: list of (factor, multiplicity), factors coprime
    and squarefree, product of factor^multiplicity = normalize(p)."""
    p = normalize(p)
    out = []
    if p.is_zero() or p.is_unit():
        return out
    g = gcd_poly(p, p.derivative())
    c = exact_div(p, g)
    i = 1
    while not c.is_unit():
        d = gcd_poly(c, g)
        factor = normalize(exact_div(c, d))
        if not factor.is_unit():
            out.append((factor, i))
        c = d
        g = exact_div(g, d)
        i += 1
    return out


# -- cyclotomic machinery ---------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> LaurentPoly:
    """The n-th cyclotomic polynomial, exactly (integer coefficients).

    >>> print(cyclotomic(6))
    t^2 - t + 1
    """
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    p = LaurentPoly({n: 1, 0: -1})  # t^n - 1
    for d in range(1, n):
        if n % d == 0:
            p = exact_div(p, cyclotomic(d))
    return p


def euler_phi(n: int) -> int:
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


class CyclotomicFactorization:
    """p = unit * prod Phi_n^mult * remainder, remainder cyclotomic-free."""

    __slots__ = ("factors", "remainder", "unit")

    def __init__(self, factors, remainder, unit):
        self.factors = list(factors)
        self.remainder = remainder
        self.unit = unit

    def reassemble(self) -> LaurentPoly:
        p = self.unit * self.remainder
        for n, mult in self.factors:
            p = p * cyclotomic(n) ** mult
        return p

    def indices(self):
        return [n for n, _ in self.factors]

    def __repr__(self):
        return (
            f"CyclotomicFactorization(factors={self.factors}, "
            f"remainder={self.remainder}, unit={self.unit})"
        )


def cyclotomic_factor(p: LaurentPoly) -> CyclotomicFactorization:
    """Exact extraction of all cyclotomic factors, ascending index.

    Phi_n can divide p only if phi(n) <= deg, so trial division over that
    finite index set is exhaustive.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    q = normalize(p)
    deg = q.degree() if not q.is_unit() else 0
    factors = []
    rem = q
    n = 1
    while n <= 2 * deg * deg + 2:
        if euler_phi(n) <= (rem.degree() if not rem.is_unit() else 0):
            phi_n = cyclotomic(n)
            mult = 0
            while divides(phi_n, rem):
                rem = exact_div(rem, phi_n)
                mult += 1
            if mult:
                factors.append((n, mult))
        if rem.is_unit():
            break
        n += 1
    rem = normalize(rem)
    unit = exact_div(p, q)  # c * t^k taking the normalized product back to p
    return CyclotomicFactorization(factors, rem, unit)


# -- truncated ring R_m = Q[s]/(s^m) ----------------------------------------


class TruncatedPoly:
    """Element of R_m, stored as m coefficients of s^0 .. s^(m-1)."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs=()):
        if m < 1:
            raise ValueError("truncation order must be >= 1")
        self.m = m
        cs = [Fraction(0)] * m
        for i, c in enumerate(coeffs):
            if i >= m:
                break
            cs[i] = _frac(c)
        self.coeffs = tuple(cs)

    @staticmethod
    def zero(m: int) -> "TruncatedPoly":
        return TruncatedPoly(m)

    @staticmethod
    def one(m: int) -> "TruncatedPoly":
        return TruncatedPoly(m, [1])

    @staticmethod
    def s(m: int) -> "TruncatedPoly":
        return TruncatedPoly(m, [0, 1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return bool(self.coeffs[0])

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedPoly)
            and self.m == other.m
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.m, self.coeffs))

    def __add__(self, other):
        self._check(other)
        return TruncatedPoly(self.m, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return TruncatedPoly(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            return TruncatedPoly(self.m, [a * c for a in self.coeffs])
        self._check(other)
        m = self.m
        out = [Fraction(0)] * m
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= m:
                    break
                if b:
                    out[i + j] += a * b
        return TruncatedPoly(m, out)

    __rmul__ = __mul__

    def _check(self, other):
        if not isinstance(other, TruncatedPoly) or other.m != self.m:
            raise ValueError("mixed truncation orders")

    def inverse(self) -> "TruncatedPoly":
        if not self.is_unit():
            raise ZeroDivisionError("not a unit in R_m")
        m = self.m
        inv = [Fraction(0)] * m
        inv[0] = 1 / self.coeffs[0]
        for k in range(1, m):
            acc = Fraction(0)
            for j in range(1, k + 1):
                acc += self.coeffs[j] * inv[k - j]
            inv[k] = -acc / self.coeffs[0]
        return TruncatedPoly(m, inv)

    def divide_by(self, other: "TruncatedPoly"):
        """Exact division a = q * b in R_m when val(b) <= val(a); the quotient
        is determined modulo s^(m - val(b)) and returned at order m."""
        self._check(other)
        vb = other.valuation()
        if vb is None:
            raise ZeroDivisionError("division by zero in R_m")
        va = self.valuation()
        if self.is_zero():
            return TruncatedPoly(self.m)
        if va < vb:
            raise ValueError("not divisible in R_m")
        k = self.m - vb
        a_shift = TruncatedPoly(k, self.coeffs[vb:])
        b_shift = TruncatedPoly(k, other.coeffs[vb:])
        q = a_shift * b_shift.inverse()
        return TruncatedPoly(self.m, q.coeffs)

    def reduce(self, m: int) -> "TruncatedPoly":
        return TruncatedPoly(m, self.coeffs[:m])

    def lift(self, m: int) -> "TruncatedPoly":
        if m < self.m:
            raise ValueError("lift must not truncate")
        return TruncatedPoly(m, self.coeffs)

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                spow = "s" if i == 1 else f"s^{i}"
                if c == 1:
                    parts.append(spow)
                elif c == -1:
                    parts.append(f"-{spow}")
                else:
                    parts.append(f"{c}*{spow}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    __repr__ = __str__


def truncate(p: LaurentPoly, m: int) -> TruncatedPoly:
    """Image of p in R_m under t = 1 + s (negative powers via the inverse
    geometric series).

    >>> print(truncate(LaurentPoly.t(-1), 3))
    1 - s + s^2
    """
    if m < 1:
        raise ValueError("truncation order must be >= 1")
    one_plus_s = TruncatedPoly(m, [1, 1])
    inv = one_plus_s.inverse()
    out = TruncatedPoly(m)
    for e, c in p.coeffs.items():
        base = one_plus_s if e >= 0 else inv
        power = TruncatedPoly.one(m)
        k = abs(e)
        b = base
        while k:
            if k & 1:
                power = power * b
            b = b * b
            k >>= 1
        out = out + power * c
    return out


def unit_log_series(m: int) -> TruncatedPoly:
    """log(1 + s) truncated to order m; equals s times a unit of R_m."""
    if m < 1:
        raise ValueError("order must be >= 1")
    return TruncatedPoly(m, [Fraction(0)] + [Fraction((-1) ** (j - 1), j) for j in range(1, m)])


def twist_series(m: int) -> TruncatedPoly:
    """exp(s) - 1 truncated to order m; equals s times a unit of R_m."""
    if m < 1:
        raise ValueError("order must be >= 1")
    coeffs = [Fraction(0)]
    fact = 1
    for j in range(1, m):
        fact *= j
        coeffs.append(Fraction(1, fact))
    return TruncatedPoly(m, coeffs)


def content_lcm_denominators(p: LaurentPoly) -> int:
    out = 1
    for c in p.coeffs.values():
        out = out * c.denominator // gcd(out, c.denominator)
    return out
