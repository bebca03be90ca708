import random

import pytest

from qconvenc.errors import ExponentOverflowError, ParseError
from qconvenc.poly import (
    LaurentPoly,
    Poly,
    RationalFn,
    is_symmetric,
    laurent_divides,
    laurent_divmod,
    laurent_div,
    parse_laurent,
    poly_gcd,
    series_head,
    set_max_span,
    symmetric_decompose,
    xgcd,
)

L = parse_laurent


def poly(s: str) -> Poly:
    lp = parse_laurent(s)
    if lp.is_zero():
        return Poly.zero()
    assert lp.offset >= 0, "not a plain polynomial"
    return Poly(lp.bits << lp.offset)


def coeff_map(a: LaurentPoly) -> dict[int, int]:
    return {e: 1 for e in a.exponents()}


def xor_maps(m1: dict[int, int], m2: dict[int, int]) -> dict[int, int]:
    out = dict(m1)
    for e in m2:
        if e in out:
            del out[e]
        else:
            out[e] = 1
    return out


def convolve_maps(m1: dict[int, int], m2: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for e1 in m1:
        for e2 in m2:
            e = e1 + e2
            out[e] = out.get(e, 0) ^ 1
    return {e: 1 for e, c in out.items() if c}


def random_laurent(rng: random.Random, max_deg: int = 8, off_range: int = 4) -> LaurentPoly:
    bits = rng.getrandbits(max_deg + 1)
    return LaurentPoly(rng.randint(-off_range, off_range), bits)


class TestAdd:
    def test_self_cancellation(self):
        assert L("1+D") + L("1+D") == L("0")

    def test_coefficient_xor(self):
        assert L("1+D") + L("D") == L("1")

    def test_laurent_xor_against_map_oracle(self):
        a, b = L("D^-1+D"), L("D^-1+1")
        expect = xor_maps(coeff_map(a), coeff_map(b))
        got = a + b
        assert coeff_map(got) == expect
        assert got == L("1+D")


class TestMul:
    def test_frobenius_square(self):
        assert L("1+D") * L("1+D") == L("1+D^2")

    def test_negative_offset_entry(self):
        # the (D^2+1)/D shape that appears as a Laurent entry after clearing
        assert L("D^-1") * L("D^2+1") == L("D+D^-1")

    def test_schoolbook_convolution_oracle(self):
        a, b = L("1+D"), L("1+D+D^2")
        assert coeff_map(a * b) == convolve_maps(coeff_map(a), coeff_map(b))
        assert a * b == L("1+D^3")


class TestDivmod:
    def test_multiply_back(self):
        q, rem = divmod(poly("D^3+D^2+D"), poly("D^2+D"))
        assert (q, rem) == (poly("D"), poly("D"))
        assert q * poly("D^2+D") + rem == poly("D^3+D^2+D")
        assert rem.degree < poly("D^2+D").degree

    def test_square_factor(self):
        assert divmod(poly("D^2+1"), poly("D+1")) == (poly("D+1"), Poly.zero())

    def test_low_degree_numerator(self):
        assert divmod(poly("D"), poly("D^2+1")) == (Poly.zero(), poly("D"))

    def test_zero_divisor_rejected(self):
        with pytest.raises(ZeroDivisionError):
            divmod(poly("D"), Poly.zero())


def all_divisors(p: Poly) -> list[Poly]:
    # exhaustive enumeration up to deg(p); oracle for gcd checks
    out = []
    for bits in range(1, 1 << (p.degree + 1)):
        d = Poly(bits)
        if d.divides(p):
            out.append(d)
    return out


class TestXgcd:
    def test_common_factor_via_divisor_enumeration(self):
        a, b = poly("D^2+D"), poly("D^3+D^2+D")
        g, u, v = xgcd(a, b)
        common = [d for d in all_divisors(a) if d.divides(b)]
        assert max(common, key=lambda d: d.degree) == g == poly("D")
        assert u * a + v * b == g

    def test_gcd_with_zero(self):
        f = poly("D^2+1")
        assert xgcd(f, Poly.zero()) == (f, Poly.one(), Poly.zero())

    def test_coprime_certificate(self):
        g, u, v = xgcd(poly("D+1"), poly("D"))
        assert g == Poly.one()
        assert u * poly("D+1") + v * poly("D") == Poly.one()

    def test_both_zero_rejected(self):
        with pytest.raises(ZeroDivisionError):
            xgcd(Poly.zero(), Poly.zero())


class TestReciprocal:
    def test_exponent_negation(self):
        assert L("1+D+D^3").reciprocal() == L("1+D^-1+D^-3")

    def test_zero_fixed_point(self):
        assert LaurentPoly.zero().reciprocal() == LaurentPoly.zero()

    def test_mixed_offsets(self):
        assert L("D^-1+D^2").reciprocal() == L("D+D^-2")


class TestLaurentDegree:
    def test_span(self):
        assert L("D^-1+D^2").degree == 3

    def test_single_term(self):
        assert L("1").degree == 0

    def test_plain_poly_span(self):
        assert L("D^3+D^2+D").degree == 2

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            LaurentPoly.zero().degree


class TestIsSymmetric:
    def test_constant_free_pair(self):
        chk = is_symmetric(L("D^-1+D"))
        assert chk and chk.constant_free

    def test_palindrome_with_center(self):
        chk = is_symmetric(L("1+D^-1+D"))
        assert chk and not chk.constant_free

    def test_asymmetric(self):
        assert not is_symmetric(L("D"))

    def test_decompose(self):
        assert symmetric_decompose(L("1+D^-1+D")) == (True, (1,))
        assert symmetric_decompose(L("D^-2+D^2+D^-1+D")) == (False, (1, 2))
        assert symmetric_decompose(L("D")) is None


def long_division_series(num: Poly, den: Poly, k: int) -> tuple[int, ...]:
    # coefficient recurrence oracle, independent of series_head's bit loop
    n = [num.coeff(i) for i in range(k)]
    d = [den.coeff(i) for i in range(k)]
    c = []
    for j in range(k):
        acc = n[j]
        for i in range(1, j + 1):
            acc ^= d[i] * c[j - i]
        c.append(acc)
    return tuple(c)


class TestSeriesHead:
    def test_all_ones_stream(self):
        # the state pair allowed by the single-qubit Z-generator 1+D
        assert series_head(RationalFn(Poly.one(), poly("1+D")), 4) == (1, 1, 1, 1)

    def test_unit_denominator(self):
        assert series_head(RationalFn(Poly.one(), Poly.one()), 3) == (1, 0, 0)

    def test_period_three_against_long_division(self):
        r = RationalFn(Poly.one(), poly("1+D+D^2"))
        assert series_head(r, 6) == long_division_series(Poly.one(), poly("1+D+D^2"), 6)
        assert series_head(r, 6) == (1, 1, 0, 1, 1, 0)

    def test_non_power_series_rejected(self):
        with pytest.raises(ValueError):
            series_head(RationalFn(Poly.one(), poly("D")), 3)


class TestRationalFn:
    def test_reduction(self):
        r = RationalFn(poly("D^2+D"), poly("D^3+D^2"))
        assert (r.num, r.den) == (Poly.one(), poly("D"))

    def test_zero_canonical(self):
        r = RationalFn(Poly.zero(), poly("D^2+1"))
        assert (r.num, r.den) == (Poly.zero(), Poly.one())

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            RationalFn(Poly.one(), Poly.zero())

    def test_laurent_detection(self):
        assert RationalFn(poly("D^2+1"), poly("D")).is_laurent()
        assert not RationalFn(Poly.one(), poly("1+D")).is_laurent()


class TestRingProperties:
    def test_ring_axioms(self):
        rng = random.Random(101)
        for _ in range(300):
            a, b, c = (random_laurent(rng) for _ in range(3))
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + a == LaurentPoly.zero()

    def test_reciprocal_is_ring_homomorphism(self):
        rng = random.Random(102)
        for _ in range(300):
            a, b = random_laurent(rng), random_laurent(rng)
            assert (a * b).reciprocal() == a.reciprocal() * b.reciprocal()
            assert (a + b).reciprocal() == a.reciprocal() + b.reciprocal()
            assert a.reciprocal().reciprocal() == a

    def test_divmod_round_trip(self):
        rng = random.Random(103)
        for _ in range(300):
            a = Poly(rng.getrandbits(9))
            b = Poly(rng.getrandbits(7))
            if b.is_zero():
                continue
            q, rem = divmod(a, b)
            assert q * b + rem == a
            assert rem.is_zero() or rem.degree < b.degree

    def test_laurent_divmod_round_trip(self):
        rng = random.Random(104)
        for _ in range(300):
            a, b = random_laurent(rng), random_laurent(rng)
            if b.is_zero():
                continue
            q, rem = laurent_divmod(a, b)
            assert q * b + rem == a
            assert rem.is_zero() or rem.degree < b.degree

    def test_xgcd_certificate(self):
        rng = random.Random(105)
        for _ in range(300):
            a = Poly(rng.getrandbits(8))
            b = Poly(rng.getrandbits(8))
            if a.is_zero() and b.is_zero():
                continue
            g, u, v = xgcd(a, b)
            assert u * a + v * b == g
            assert g.divides(a) and g.divides(b)

    def test_degree_additivity(self):
        rng = random.Random(106)
        for _ in range(300):
            a, b = random_laurent(rng), random_laurent(rng)
            if a.is_zero() or b.is_zero():
                continue
            assert (a * b).degree == a.degree + b.degree


class TestLaurentDivision:
    def test_exact_unit_division(self):
        assert laurent_div(L("1+D"), L("D^3")) == L("D^-3+D^-2")

    def test_inexact(self):
        assert laurent_div(L("D"), L("D^2+D")) is None

    def test_divides_on_bodies(self):
        assert laurent_divides(L("D"), L("D^3+D^2+D"))
        assert laurent_divides(L("D^2+D"), L("D^4+D^2"))  # 1+D divides 1+D^2
        assert not laurent_divides(L("D^2+D"), L("D"))


class TestGrammar:
    def test_round_trip_canonical(self):
        for text in ["0", "1", "D", "1+D", "D^-1+1+D", "D^2+D^5", "D^-3"]:
            assert str(parse_laurent(text)) == str(parse_laurent(str(parse_laurent(text))))

    def test_duplicate_terms_cancel(self):
        assert parse_laurent("D+D") == LaurentPoly.zero()
        assert parse_laurent("1+D+1") == L("D")

    def test_whitespace_ignored(self):
        assert parse_laurent(" 1 + D ^ 2 ".replace(" ", "")) == parse_laurent("1+D^2")
        assert parse_laurent("1 +\tD") == L("1+D")

    def test_bad_terms_rejected(self):
        for bad in ["", "x", "D^", "2", "D**2", "1+"]:
            with pytest.raises(ParseError):
                parse_laurent(bad)

    def test_printing(self):
        assert str(LaurentPoly.zero()) == "0"
        assert str(L("D^-1+1+D^3")) == "D^-1+1+D^3"


class TestSpanLimit:
    def test_overflow_detected(self):
        old = set_max_span(16)
        try:
            with pytest.raises(ExponentOverflowError):
                L("D^20") * L("1+D^20")
            assert L("D^30") * L("D^-30") == L("1")  # monomials never widen
        finally:
            set_max_span(old)
