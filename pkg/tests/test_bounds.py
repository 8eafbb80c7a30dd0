"""Exponent algebra and lower-bound evaluators against direct high-precision
evaluation oracles (mpmath at 50 digits, computed from the same exact rational
inputs the module receives)."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mahlerkit.balls import RealBall, to_fraction
from mahlerkit.bounds import (
    BoundContext,
    BoundValue,
    HypothesisReport,
    as_fraction,
    bound_conjecture,
    bound_feldman,
    bound_mahler_exp,
    bound_mahler_log,
    bound_nw,
    bound_rw,
    kappa,
    liouville_linear_form,
    phi1,
    phi2,
    theta,
    validate_nw,
)
from mahlerkit.errors import (
    DegenerateExponent,
    DomainError,
    HypothesisViolation,
    MissingConstant,
)


def mpf50(expr):
    """Evaluate a thunk at 50 digits and return the exact Fraction of the result."""
    with mpmath.workdps(50):
        return to_fraction(expr())


class TestExponents:
    def test_theta_examples(self):
        assert theta(2, 3, 1) == Fraction(5, 6)
        assert theta(1, 1, 1) == 2
        assert theta(2, 2, 1) == 1

    def test_kappa_examples(self):
        assert kappa(2, 3, 1) == 6
        assert kappa(3, 3, 1) == 3
        with pytest.raises(DegenerateExponent):
            kappa(2, 2, 1)

    def test_identities_exact(self):
        for m in range(1, 11):
            for n in range(1, 11):
                for r in range(1, min(m, n) + 1):
                    if m * n <= r * (m + n):
                        continue
                    th, ka = theta(m, n, r), kappa(m, n, r)
                    assert ka * (1 - th) == 1
                    assert r * ka * (Fraction(1, m) + Fraction(1, n)) + 1 == ka

    def test_validation(self):
        with pytest.raises(DomainError):
            theta(0, 1, 1)
        with pytest.raises(DomainError):
            kappa(2, 3, 0)


class TestPhi1:
    def test_high_branch(self):
        ctx = BoundContext(m=2, n=3, r=1, D=1, h1=4, h2=2)
        ball, branch = phi1(ctx)
        assert branch == "high"
        want = mpf50(lambda: 4 * mpmath.power(2, mpmath.mpf(5) / 6))
        assert ball.contains(want)
        assert abs(ball.mid_float() - 7.127) < 2e-3

    def test_seam_both_branches_equal(self):
        # Dh1 = (Dh2)^(1-theta): 2 = 64^(1/6)
        ctx = BoundContext(m=2, n=3, r=1, D=1, h1=2, h2=64)
        ball, branch = phi1(ctx)
        assert branch == "high"  # closed condition, boundary included
        assert ball.contains(Fraction(64))
        low = RealBall(2, 96).pow_fraction(6)
        assert ball.overlaps(low)

    def test_low_branch_unit_base(self):
        ctx = BoundContext(m=2, n=3, r=1, D=1, h1=1, h2=64)
        ball, branch = phi1(ctx)
        assert branch == "low"
        assert ball.contains(Fraction(1)) and ball.rad == 0

    def test_degenerate_low_branch(self):
        ctx = BoundContext(m=2, n=2, r=1, D=1, h1=Fraction(1, 2), h2=2)
        with pytest.raises(DegenerateExponent):
            phi1(ctx)

    def test_degenerate_high_branch_still_works(self):
        # theta = 1 but Dh1 >= (Dh2)^0 = 1, so the first branch applies
        ctx = BoundContext(m=2, n=2, r=1, D=1, h1=3, h2=2)
        ball, branch = phi1(ctx)
        assert branch == "high"
        assert ball.contains(Fraction(6))  # 3 * 2^1

    def test_monotone_in_heights(self):
        prev = None
        for h1 in (1, 2, 4, 8):
            ball, _ = phi1(BoundContext(m=2, n=3, r=1, D=1, h1=h1, h2=3))
            if prev is not None:
                assert ball.mid > prev.mid
            prev = ball

    def test_missing_field(self):
        with pytest.raises(DomainError):
            phi1(BoundContext(m=2, n=3, r=1, D=1, h1=4))


class TestPhi2:
    def test_examples(self):
        assert phi2(BoundContext(m=2, n=3, r=1, D=1, h=2)).contains(Fraction(64))
        assert phi2(BoundContext(m=2, n=3, r=1, D=2, h=1)).contains(Fraction(64))
        assert phi2(BoundContext(m=3, n=3, r=1, D=1, h=3)).contains(Fraction(27))

    def test_integer_kappa_is_exact(self):
        ball = phi2(BoundContext(m=2, n=3, r=1, D=1, h=2))
        assert ball.rad == 0

    def test_degenerate(self):
        with pytest.raises(DegenerateExponent):
            phi2(BoundContext(m=2, n=2, r=1, D=1, h=2))


class TestMahlerBounds:
    def test_log_bound_oracle(self):
        bv = bound_mahler_log(100, 40)
        want = mpf50(lambda: -40 * mpmath.log(mpmath.log(100)) * mpmath.log(100))
        assert bv.log_value.contains(want)
        # around 10^-122
        assert -282 < bv.log_value.mid_float() < -281

    def test_log_bound_zero_exponent(self):
        bv = bound_mahler_log(3, 0)
        assert bv.value.contains(Fraction(1)) and bv.log_value.rad == 0

    def test_log_bound_monotone_in_exponent(self):
        a40 = bound_mahler_log(100, 40).log_value
        a19 = bound_mahler_log(100, 19.183).log_value
        assert a19.lower > a40.upper

    def test_log_bound_domain(self):
        for a in (2, 1, 0, -5):
            with pytest.raises(DomainError):
                bound_mahler_log(a)

    def test_exp_bound_direct(self):
        assert bound_mahler_exp(2, 40).value.contains(Fraction(1, 2 ** 80))
        assert bound_mahler_exp(10, 40).value.contains(Fraction(1, 10 ** 400))

    def test_exp_bound_refined_exponent(self):
        bv = bound_mahler_exp(2, 19.183)
        e = as_fraction(19.183)
        want = mpf50(lambda: -2 * mpmath.mpf(e.numerator) / e.denominator * mpmath.log(2))
        assert bv.log_value.contains(want)

    def test_exp_bound_domain(self):
        with pytest.raises(DomainError):
            bound_mahler_exp(1)


class TestBoundNW:
    def test_pin(self):
        bv = bound_nw(BoundContext(D=1, h1=1, h2=1))
        assert bv.log_value.rad == 0
        assert bv.log_value.contains(Fraction(-2_000_000))
        v = bv.value
        assert v.lower > 0 and v.upper <= 1

    def test_oracle_d2(self):
        bv = bound_nw(BoundContext(D=2, h1=1, h2=2))
        want = mpf50(lambda: -2 * 10 ** 6 * 8 * 2 * (mpmath.log(2) + 1))
        assert bv.log_value.contains(want)

    def test_validation_passes_on_clean_list(self):
        ctx = BoundContext(D=1, h1=1, h2=1)
        rep = validate_nw(ctx, h_alpha=1, lambda_abs=1, h_beta=1)
        assert isinstance(rep, HypothesisReport) and rep.passed
        assert len(rep.rows) == 7

    def test_validation_rejects_each_perturbation(self):
        base = dict(D=1, h1=Fraction(1), h2=Fraction(1))
        data = dict(h_alpha=Fraction(1), lambda_abs=Fraction(1), h_beta=Fraction(1))
        perturbed = [
            ({**base, "h1": Fraction(9, 10)}, data),
            ({**base, "h2": Fraction(9, 10)}, data),
            (base, {**data, "h_alpha": Fraction(11, 10)}),
            (base, {**data, "lambda_abs": Fraction(11, 10)}),
            (base, {**data, "h_beta": Fraction(11, 10)}),
        ]
        for ctx_kw, d in perturbed:
            rep = validate_nw(BoundContext(**ctx_kw), **d)
            assert not rep.passed
            with pytest.raises(HypothesisViolation) as err:
                bound_nw(BoundContext(**ctx_kw), **d)
            assert err.value.report is not None
            assert err.value.report.failing()

    def test_h2_floor_example(self):
        rep = validate_nw(BoundContext(D=1, h1=1, h2=Fraction(1, 2)),
                          h_alpha=Fraction(1, 2), lambda_abs=Fraction(1, 2),
                          h_beta=Fraction(1, 2))
        names = {r.name for r in rep.failing()}
        assert "h2 >= 1" in names

    def test_ball_data_accepted(self):
        h_alpha = RealBall.from_endpoints(Fraction(1, 2), Fraction(3, 4))
        rep = validate_nw(BoundContext(D=1, h1=1, h2=1),
                          h_alpha=h_alpha, lambda_abs=1, h_beta=1)
        assert rep.passed


class TestFeldman:
    def test_examples(self):
        bv = bound_feldman(1, 1, 1, 1)
        assert bv.log_value.contains(Fraction(-2)) and bv.log_value.rad == 0
        bv = bound_feldman(2, 1, 0, 1)
        assert bv.log_value.contains(Fraction(-1))

    def test_oracle(self):
        bv = bound_feldman(2, 4, 1, 1)
        want = mpf50(
            lambda: -mpmath.power(4, mpmath.mpf(5) / 2)
            * (1 + mpmath.log(4) + 1) / (mpmath.log(4) + 1)
        )
        assert bv.log_value.contains(want)
        assert abs(bv.log_value.mid_float() + 45.40991) < 1e-4

    def test_parametric_label(self):
        assert bound_feldman(1, 1, 1, 1).conjectural

    def test_domain(self):
        with pytest.raises(DomainError):
            bound_feldman(1, 1, 1, 0)
        with pytest.raises(DomainError):
            bound_feldman(0, 1, 1, 1)


class TestRW:
    def test_unit_case(self):
        bv = bound_rw(1, 1, 1, 1, 1)
        assert bv.log_value.contains(Fraction(-1))

    def test_oracle(self):
        h1 = float(mpmath.e)
        bv = bound_rw(2, 1, h1, 1, 1)
        h1f = as_fraction(h1)
        want = mpf50(
            lambda: -(
                mpmath.mpf(h1f.numerator) / h1f.denominator
                * mpmath.sqrt(mpmath.log(mpmath.mpf(h1f.numerator) / h1f.denominator) + 1)
            )
        )
        assert bv.log_value.contains(want)

    def test_negative_interior(self):
        with pytest.raises(DomainError):
            bound_rw(1, 1, float(mpmath.exp(-2)), 1, 1)

    def test_domain(self):
        with pytest.raises(DomainError):
            bound_rw(1, 1, 0, 1, 1)


class TestConjectures:
    def test_examples(self):
        bv0 = bound_conjecture(0, BoundContext(D=1, h=1, constants={"c0": 1}))
        assert bv0.log_value.contains(Fraction(-1)) and bv0.conjectural
        bv1 = bound_conjecture(1, BoundContext(m=3, D=2, h=1, constants={"c1": 1}))
        assert bv1.log_value.contains(Fraction(-12))
        bv2 = bound_conjecture(2, BoundContext(m=2, D=4, h=1, constants={"c2": 1}))
        assert bv2.log_value.contains(Fraction(-16))

    def test_missing_constant(self):
        with pytest.raises(MissingConstant):
            bound_conjecture(0, BoundContext(D=1, h=1))

    def test_bad_which(self):
        with pytest.raises(DomainError):
            bound_conjecture(3, BoundContext(D=1, h=1, constants={"c3": 1}))

    def test_hypothesis_list(self):
        ctx = BoundContext(D=1, h=1, constants={"c0": 1})
        bv = bound_conjecture(0, ctx, h_alpha=1, h_beta=1, lambda_abs=1)
        assert bv.hypothesis_report.passed
        with pytest.raises(HypothesisViolation):
            bound_conjecture(0, ctx, h_alpha=2, h_beta=1, lambda_abs=1)


class TestLiouville:
    def test_examples(self):
        assert liouville_linear_form(1, 1, 1, 0).value.contains(Fraction(1, 2))
        want = mpf50(lambda: mpmath.exp(-2) / 2)
        assert liouville_linear_form(2, 1, 1, 1).value.contains(want)

    def test_oracle(self):
        bv = liouville_linear_form(2, 3, 5, "0.7")
        want = mpf50(lambda: -3 * mpmath.log(2) - 21)
        assert bv.log_value.contains(want)

    def test_domain(self):
        with pytest.raises(DomainError):
            liouville_linear_form(0, 1, 1, 1)
        with pytest.raises(DomainError):
            liouville_linear_form(1, 1, 1, -1)


class TestContext:
    def test_validation(self):
        with pytest.raises(DomainError):
            BoundContext(m=2, n=2, r=3)
        with pytest.raises(DomainError):
            BoundContext(m=0)
        with pytest.raises(DomainError):
            BoundContext(h=-1)

    def test_constant_parsing(self):
        ctx = BoundContext(constants={"c0": "3/2"})
        assert ctx.constant("c0") == Fraction(3, 2)

    def test_rational_strings(self):
        ctx = BoundContext(h1="1/3", h2="0.25")
        assert ctx.h1 == Fraction(1, 3) and ctx.h2 == Fraction(1, 4)


@settings(max_examples=30, deadline=None)
@given(
    st.integers(min_value=1, max_value=3),
    st.integers(min_value=1, max_value=4),
    st.fractions(min_value=Fraction(1), max_value=Fraction(8)),
    st.fractions(min_value=Fraction(1), max_value=Fraction(8)),
)
def test_bounds_land_in_unit_interval(m, D, h1, h2):
    """With hypotheses satisfied and constants >= 1, every evaluator yields a
    value in (0, 1]."""
    results = [
        bound_nw(BoundContext(D=D, h1=h1, h2=h2)),
        bound_feldman(m, D, h1, 1),
        bound_rw(m, D, h1, h2, 1),
        bound_conjecture(0, BoundContext(D=D, h=h1, constants={"c0": 1})),
        bound_conjecture(1, BoundContext(m=m, D=D, h=h1, constants={"c1": 1})),
        bound_conjecture(2, BoundContext(m=m, D=D, h=h1, constants={"c2": 1})),
        liouville_linear_form(m, D, 1, h1),
        bound_mahler_log(3 + m, 40),
        bound_mahler_exp(2 + D, 40),
    ]
    for bv in results:
        assert isinstance(bv, BoundValue)
        # log_value <= 0 is exactly "value in (0, 1]" (exp is positive);
        # materialize the exp enclosure only when it will not be astronomically
        # denormal, exact endpoints of exp(-10^6) cost megabit integers
        assert bv.log_value.upper <= 0
        if bv.log_value.lower > -10 ** 4:
            v = bv.value
            assert v.lower > 0 and v.upper <= 1
