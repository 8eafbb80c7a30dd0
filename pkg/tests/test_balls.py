"""Inclusion and comparison semantics of the ball layer.

Oracle strategy: exact rational endpoints make containment checkable without
any floating tolerance; transcendental values are pinned by mpmath at several
hundred bits, far beyond the ball widths under test.
"""

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mahlerkit.balls import (
    ComplexBall,
    RealBall,
    fraction_to_mpf,
    hypot_lower,
    hypot_upper,
    sqrt_lower,
    sqrt_upper,
    to_fraction,
)
from mahlerkit.errors import DomainError


def high_precision(expr, dps=80):
    with mpmath.workdps(dps):
        return expr()


class TestConstruction:
    def test_int_exact(self):
        b = RealBall(7)
        assert b.is_exact and b.mid == 7 and b.rad == 0

    def test_large_int_contained(self):
        n = 10 ** 50
        b = RealBall(n, 64)
        assert b.lower <= n <= b.upper

    def test_fraction_contained(self):
        x = Fraction(1, 3)
        b = RealBall(x, 64)
        assert b.lower <= x <= b.upper
        assert b.rad < Fraction(1, 2 ** 60)

    def test_endpoints_order(self):
        with pytest.raises(ValueError):
            RealBall.from_endpoints(2, 1)

    def test_nondyadic_endpoints_round_outward(self):
        b = RealBall.from_endpoints(Fraction(1, 3), Fraction(2, 3), 64)
        assert b.lower <= Fraction(1, 3) and b.upper >= Fraction(2, 3)

    def test_to_fraction_mpf(self):
        x = mpmath.mpf("1.5")
        assert to_fraction(x) == Fraction(3, 2)


class TestArithmetic:
    def test_add_contains(self):
        a, b = RealBall(Fraction(1, 3)), RealBall(Fraction(1, 7))
        s = a + b
        assert s.lower <= Fraction(1, 3) + Fraction(1, 7) <= s.upper

    def test_mul_signs(self):
        a = RealBall.from_endpoints(-2, 3)
        b = RealBall.from_endpoints(-1, 5)
        p = a * b
        # extremes of products of endpoints
        assert p.lower <= -10 and p.upper >= 15

    def test_div_by_zero_interval(self):
        with pytest.raises(ZeroDivisionError):
            RealBall(1) / RealBall.from_endpoints(-1, 1)

    def test_pow_int(self):
        b = RealBall.from_endpoints(-2, 3)
        sq = b ** 2
        assert sq.lower >= 0 and sq.upper >= 9
        assert sq.contains(Fraction(4))

    def test_pow_negative(self):
        b = RealBall(2)
        assert (b ** -2).contains(Fraction(1, 4))

    def test_rational_ops_coerce(self):
        b = RealBall(2) * Fraction(3, 2) + 1 - Fraction(1, 2)
        assert b.contains(Fraction(7, 2))


class TestFunctions:
    def test_log_contains(self):
        b2 = RealBall(2, 128).log()
        ln2 = high_precision(lambda: mpmath.log(2))
        assert b2.contains(to_fraction(ln2)) or abs(b2.mid - to_fraction(ln2)) < b2.rad * 2
        assert b2.rad < Fraction(1, 2 ** 100)

    def test_log_domain(self):
        with pytest.raises(DomainError):
            RealBall.from_endpoints(-1, 1).log()

    def test_exp_log_roundtrip(self):
        x = RealBall(Fraction(5, 3), 96)
        y = x.log().exp()
        assert y.contains(Fraction(5, 3))

    def test_sqrt(self):
        s = RealBall(2, 96).sqrt()
        r2 = high_precision(lambda: mpmath.sqrt(2))
        assert s.lower <= to_fraction(r2) <= s.upper

    def test_pow_fraction(self):
        b = RealBall(2, 96).pow_fraction(Fraction(5, 6))
        v = high_precision(lambda: mpmath.power(2, mpmath.mpf(5) / 6))
        assert b.lower <= to_fraction(v) <= b.upper

    def test_max1(self):
        assert RealBall(Fraction(1, 2)).max1().mid == 1
        assert RealBall(3).max1().mid == 3
        straddle = RealBall.from_endpoints(Fraction(1, 2), 2).max1()
        assert straddle.lower == 1 and straddle.upper >= 2


class TestComparisons:
    def test_certified_lt(self):
        a = RealBall.from_endpoints(1, 2)
        b = RealBall.from_endpoints(3, 4)
        assert a.lt(b) is True
        assert b.lt(a) is False
        c = RealBall.from_endpoints(Fraction(3, 2), Fraction(7, 2))
        assert a.lt(c) is None

    def test_cmp_with_fraction(self):
        a = RealBall.from_endpoints(1, 2)
        assert a.lt(3) is True
        assert a.gt(Fraction(5, 2)) is False
        assert a.ge(Fraction(3, 2)) is None

    def test_intersect(self):
        a = RealBall.from_endpoints(0, 2)
        b = RealBall.from_endpoints(1, 3)
        c = a.intersect(b)
        assert c.lower <= 1 and c.upper >= 2
        with pytest.raises(DomainError):
            RealBall.from_endpoints(0, 1).intersect(RealBall.from_endpoints(2, 3))


@settings(max_examples=200, deadline=None)
@given(
    st.fractions(min_value=-100, max_value=100),
    st.fractions(min_value=-100, max_value=100),
    st.sampled_from(["add", "sub", "mul"]),
)
def test_inclusion_property(x, y, op):
    """Result interval always contains the exact rational image."""
    a, b = RealBall(x, 64), RealBall(y, 64)
    if op == "add":
        got, want = a + b, x + y
    elif op == "sub":
        got, want = a - b, x - y
    else:
        got, want = a * b, x * y
    assert got.lower <= want <= got.upper


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=1000))
def test_inclusion_monotone_under_precision(x):
    """Recomputation at doubled precision lands inside the coarse ball."""
    coarse = RealBall(x, 53).log()
    fine = RealBall(x, 106).log()
    assert coarse.lower <= fine.lower and fine.upper <= coarse.upper


class TestSqrtBounds:
    def test_sqrt_bracket(self):
        for x in [Fraction(2), Fraction(1, 2), Fraction(10, 7), Fraction(144)]:
            lo, hi = sqrt_lower(x), sqrt_upper(x)
            assert lo * lo <= x <= hi * hi
            assert hi - lo < Fraction(1, 2 ** 60) * max(1, hi)

    def test_hypot(self):
        lo = hypot_lower(Fraction(3), Fraction(4))
        hi = hypot_upper(Fraction(3), Fraction(4))
        assert lo <= 5 <= hi


class TestComplexBall:
    def test_mul_contains(self):
        z = ComplexBall(RealBall(Fraction(1, 3)), RealBall(Fraction(1, 5)))
        w = ComplexBall(RealBall(2), RealBall(-1))
        p = z * w
        want_re = Fraction(1, 3) * 2 - Fraction(1, 5) * (-1)
        want_im = Fraction(1, 3) * (-1) + Fraction(1, 5) * 2
        assert p.re.contains(want_re) and p.im.contains(want_im)

    def test_div_roundtrip(self):
        z = ComplexBall(RealBall(3), RealBall(4))
        w = ComplexBall(RealBall(1), RealBall(-2))
        back = (z / w) * w
        assert back.re.contains(Fraction(3)) and back.im.contains(Fraction(4))

    def test_abs(self):
        z = ComplexBall(RealBall(3), RealBall(4))
        assert abs(z).contains(Fraction(5))

    def test_div_by_zero_rect(self):
        z = ComplexBall(RealBall(1), RealBall(1))
        w = ComplexBall(RealBall.from_endpoints(-1, 1), RealBall.from_endpoints(-1, 1))
        with pytest.raises(ZeroDivisionError):
            z / w

    def test_distance_lower(self):
        a = ComplexBall(RealBall(0), RealBall(0))
        b = ComplexBall(RealBall(3), RealBall(4))
        assert a.distance_lower(b) <= 5
        assert a.distance_lower(b) > Fraction(49, 10)

    def test_log_positive_real(self):
        z = ComplexBall(RealBall(2, 96), RealBall(0, 96))
        w = z.log()
        ln2 = to_fraction(high_precision(lambda: mpmath.log(2)))
        assert w.re.contains(ln2)
        assert w.im.contains(Fraction(0))

    def test_log_negative_real_exact(self):
        z = ComplexBall(RealBall(-1, 96), RealBall(0, 96))
        w = z.log()
        assert w.re.contains(Fraction(0))
        pi = to_fraction(high_precision(lambda: +mpmath.pi))
        assert w.im.contains(pi)

    def test_log_branch_cut_rejected(self):
        z = ComplexBall(RealBall(-2), RealBall.from_endpoints(-1, 1))
        with pytest.raises(DomainError):
            z.log()

    def test_log_generic_point(self):
        z = ComplexBall(RealBall(1, 128), RealBall(1, 128))
        w = z.log()
        want = high_precision(lambda: mpmath.log(mpmath.mpc(1, 1)))
        assert w.re.contains(to_fraction(want.real))
        assert w.im.contains(to_fraction(want.imag))

    def test_from_mid_rad(self):
        c = ComplexBall.from_mid_rad(mpmath.mpc(1, 2), Fraction(1, 10), 64)
        assert c.contains(mpmath.mpc(1, 2))
        assert c.re.rad >= Fraction(1, 10)


def test_fraction_to_mpf_directed():
    x = Fraction(1, 3)
    lo = fraction_to_mpf(x, 53, "f")
    hi = fraction_to_mpf(x, 53, "c")
    assert to_fraction(lo) <= x <= to_fraction(hi)
    assert to_fraction(lo) < to_fraction(hi)


class TestPickle:
    # worker pools ship balls between processes; the round trip must not
    # move either endpoint

    def test_real_lossless(self):
        import pickle

        for x in (RealBall(2, 96).log(), RealBall(Fraction(1, 3), 64),
                  RealBall(0), RealBall(-7, 128).exp(),
                  RealBall.from_endpoints(Fraction(-1, 3), Fraction(22, 7), 80)):
            y = pickle.loads(pickle.dumps(x))
            assert y.lower == x.lower
            assert y.upper == x.upper
            assert y.prec == x.prec

    def test_complex_lossless(self):
        import pickle

        z = ComplexBall(RealBall(2, 96).log(), RealBall(3, 96).sqrt())
        w = pickle.loads(pickle.dumps(z))
        assert w.re.lower == z.re.lower and w.re.upper == z.re.upper
        assert w.im.lower == z.im.lower and w.im.upper == z.im.upper

    def test_arithmetic_survives(self):
        import pickle

        x = pickle.loads(pickle.dumps(RealBall(5, 64).log()))
        assert (x * 2).contains(to_fraction(high_precision(
            lambda: 2 * mpmath.log(5))))
