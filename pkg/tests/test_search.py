"""Nearest-integer scans, the integer sequence rows, and continued fractions."""

import io
import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mahlerkit.balls import RealBall, to_fraction
from mahlerkit.errors import (
    DomainError,
    PrecisionBudgetExceeded,
    RationalDetected,
)
from mahlerkit.search import (
    CSV_COLUMNS,
    ConvergentList,
    ScanRecord,
    convergents,
    csv_row,
    mahler_problem_probe,
    mahler_sequence,
    nearest_int_distance,
    scan_exp,
    scan_log,
    write_csv,
)


# --- oracles -----------------------------------------------------------------


def dist_oracle(x_expr, dps=60):
    """High-precision nearest-integer distance as an exact Fraction."""
    with mpmath.workdps(dps):
        x = x_expr()
        n = int(mpmath.nint(x))
        return to_fraction(abs(x - n)), n


def log_exponent_oracle(a, dps=60):
    with mpmath.workdps(dps):
        la = mpmath.log(a)
        d = abs(la - mpmath.nint(la))
        return to_fraction(-mpmath.log(d) / (la * mpmath.log(la)))


def exp_exponent_oracle(b, dps=60):
    with mpmath.workdps(dps):
        eb = mpmath.exp(b)
        d = abs(eb - mpmath.nint(eb))
        return to_fraction(-mpmath.log(d) / (b * mpmath.log(b)))


def cf_oracle(x_expr, count, dps=80):
    """Partial quotients via exact Fraction arithmetic on one high-precision
    evaluation; independent of the module's ball-certified extraction."""
    with mpmath.workdps(dps):
        y = to_fraction(x_expr())
    out = []
    for _ in range(count):
        a = int(math.floor(y))
        out.append(a)
        y = y - a
        assert y != 0, "oracle hit a rational"
        y = 1 / y
    return out


# --- nearest-integer distance --------------------------------------------------


class TestNearestIntDistance:
    def test_log20(self):
        n, d = nearest_int_distance(RealBall(20, 96).log())
        truth, n_truth = dist_oracle(lambda: mpmath.log(20))
        assert n == n_truth == 3
        assert d.lower <= truth <= d.upper
        assert abs(d.mid - Fraction(42677, 10 ** 7)) < Fraction(1, 10 ** 5)

    def test_exact_half_tie_breaks_even(self):
        n, d = nearest_int_distance(RealBall(Fraction(1, 2)))
        assert n == 0 and d.lower == d.upper == Fraction(1, 2)
        n, d = nearest_int_distance(RealBall(Fraction(3, 2)))
        assert n == 2 and d.upper == Fraction(1, 2)
        n, d = nearest_int_distance(RealBall(Fraction(-1, 2)))
        assert n == 0 and d.upper == Fraction(1, 2)

    def test_exact_integer(self):
        n, d = nearest_int_distance(RealBall(7))
        assert n == 7
        assert d.lower == d.upper == 0

    def test_wide_ball_needs_refiner(self):
        wide = RealBall.from_endpoints(Fraction(0), Fraction(3, 5), 64)
        with pytest.raises(DomainError):
            nearest_int_distance(wide)
        n, d = nearest_int_distance(
            wide, refine=lambda bits: RealBall(Fraction(1, 4), bits)
        )
        assert n == 0
        assert d.lower == d.upper == Fraction(1, 4)

    def test_budget(self):
        wide = RealBall.from_endpoints(Fraction(0), Fraction(3, 5), 64)
        with pytest.raises(PrecisionBudgetExceeded):
            nearest_int_distance(wide, refine=lambda bits: wide, precision_cap=256)

    def test_shift_invariance_bulk(self):
        # ||x + k|| = ||x||, spot-checked on 1000 tight random balls
        rng = random.Random(31415)
        for _ in range(1000):
            mid = Fraction(rng.randint(-10 ** 6, 10 ** 6), 2 ** 20)
            k = rng.randint(-50, 50)
            x = RealBall(mid, 96)
            n1, d1 = nearest_int_distance(x)
            n2, d2 = nearest_int_distance(x + k)
            assert n2 == n1 + k
            assert max(d1.lower, d2.lower) <= min(d1.upper, d2.upper)
            assert 0 <= d1.lower and d1.lower <= Fraction(1, 2)


# --- scans ---------------------------------------------------------------------


class TestScanLog:
    def test_a20_against_oracle(self):
        rec = next(iter(scan_log(20, 20)))
        truth, n = dist_oracle(lambda: mpmath.log(20))
        assert rec.nearest == n == 3
        assert rec.distance.lower <= truth <= rec.distance.upper
        c_truth = log_exponent_oracle(20)
        assert rec.exponent.lower <= c_truth <= rec.exponent.upper
        assert abs(rec.exponent.mid - Fraction(1660136, 10 ** 6)) < Fraction(1, 10 ** 4)
        assert not rec.flagged

    def test_a3_small_a_anomaly(self):
        rec = next(iter(scan_log(3, 3)))
        c_truth = log_exponent_oracle(3)
        assert rec.exponent.lower <= c_truth <= rec.exponent.upper
        assert abs(rec.exponent.mid - Fraction(2242075, 10 ** 5)) < Fraction(1, 100)
        assert not rec.flagged          # default reference is 40
        sharp = next(iter(scan_log(3, 3, exponent_ref="19183/1000")))
        assert sharp.flagged            # exceeds the sharper 19.183 reference

    def test_distances_certified_positive(self):
        for rec in scan_log(3, 120):
            assert rec.error is None
            assert rec.distance.lower > 0
            assert rec.distance.upper <= Fraction(1, 2)

    def test_deterministic_under_doubled_precision(self):
        base = list(scan_log(3, 30))
        fine = list(scan_log(3, 30, precision=128))
        for b, f in zip(base, fine):
            assert b.nearest == f.nearest
            assert max(b.exponent.lower, f.exponent.lower) <= \
                min(b.exponent.upper, f.exponent.upper)

    def test_parallel_matches_serial_exactly(self):
        serial = list(scan_log(10, 60))
        parallel = list(scan_log(10, 60, jobs=2))
        assert len(serial) == len(parallel) == 51
        for s, p in zip(serial, parallel):
            assert s.key == p.key and s.nearest == p.nearest
            assert s.distance.lower == p.distance.lower
            assert s.distance.upper == p.distance.upper
            assert s.exponent.lower == p.exponent.lower
            assert s.precision_used == p.precision_used

    def test_record_independent_of_range(self):
        solo = next(iter(scan_log(17, 17)))
        in_range = [r for r in scan_log(3, 30) if r.key == 17][0]
        assert solo.distance.lower == in_range.distance.lower
        assert solo.distance.upper == in_range.distance.upper

    def test_domain(self):
        with pytest.raises(DomainError):
            list(scan_log(2, 10))
        with pytest.raises(DomainError):
            list(scan_log(10, 5))
        with pytest.raises(DomainError):
            list(scan_log(3.0, 10))


class TestScanExp:
    def test_b3_against_oracle(self):
        rec = next(iter(scan_exp(3, 3)))
        truth, n = dist_oracle(lambda: mpmath.exp(3))
        assert rec.nearest == n == 20
        assert rec.distance.lower <= truth <= rec.distance.upper
        assert abs(rec.distance.mid - Fraction(855369, 10 ** 7)) < Fraction(1, 10 ** 5)
        c_truth = exp_exponent_oracle(3)
        assert rec.exponent.lower <= c_truth <= rec.exponent.upper
        assert abs(rec.exponent.mid - Fraction(746034, 10 ** 6)) < Fraction(1, 10 ** 4)

    def test_b2(self):
        rec = next(iter(scan_exp(2, 2)))
        assert rec.nearest == 7
        assert abs(rec.distance.mid - Fraction(3890561, 10 ** 7)) < Fraction(1, 10 ** 5)

    def test_precision_scales_with_b(self):
        rec = next(iter(scan_exp(100, 100)))
        assert rec.error is None
        assert rec.precision_used >= 145   # e^100 has about 144 bits upstairs
        assert rec.distance.lower > 0

    def test_parallel_matches_serial(self):
        serial = list(scan_exp(2, 25))
        parallel = list(scan_exp(2, 25, jobs=2))
        for s, p in zip(serial, parallel):
            assert (s.key, s.nearest) == (p.key, p.nearest)
            assert s.distance.upper == p.distance.upper

    def test_domain(self):
        with pytest.raises(DomainError):
            list(scan_exp(1, 10))


# --- the sequence rows and the open-problem probe --------------------------------


class TestMahlerSequence:
    def test_first_rows(self):
        rows = mahler_sequence(5)
        assert [(r.b, r.a) for r in rows] == \
            [(1, 3), (2, 7), (3, 20), (4, 55), (5, 148)]
        assert all(r.passed for r in rows)
        assert rows[0].threshold == Fraction(1, 3)
        truth, _ = dist_oracle(lambda: mpmath.log(3) - 1 + 1)  # |log 3 - 1|
        gap = rows[0].gap
        with mpmath.workdps(60):
            g_truth = to_fraction(abs(mpmath.log(3) - 1))
        assert gap.lower <= g_truth <= gap.upper

    def test_b3_row(self):
        row = mahler_sequence(3)[-1]
        assert row.a == 20
        assert abs(row.gap.mid - Fraction(4267726, 10 ** 9)) < Fraction(1, 10 ** 7)
        assert row.passed and row.threshold == Fraction(1, 20)

    def test_prefix_passes_and_increases(self):
        rows = mahler_sequence(12)
        for prev, cur in zip(rows, rows[1:]):
            assert cur.a > prev.a
        assert all(r.passed for r in rows)

    def test_domain(self):
        with pytest.raises(DomainError):
            mahler_sequence(0)


class TestMahlerProblemProbe:
    def test_c1_holds_at_b3(self):
        row = [r for r in mahler_problem_probe(4, 1) if r.b == 3][0]
        assert row.a == 20
        assert row.holds
        assert row.threshold.lower <= Fraction(1, 20) <= row.threshold.upper
        assert row.threshold.relative_radius() < Fraction(1, 2 ** 16)
        assert abs(row.ratio.mid - Fraction(1710738, 10 ** 6)) < Fraction(1, 10 ** 3)

    def test_c_half_fails_at_b3(self):
        row = [r for r in mahler_problem_probe(3, "1/2") if r.b == 3][0]
        assert not row.holds
        with mpmath.workdps(50):
            want = to_fraction(abs(mpmath.exp(3) - 20) * mpmath.sqrt(20))
        assert row.ratio.lower <= want <= row.ratio.upper

    def test_c0_always_fails(self):
        rows = mahler_problem_probe(6, 0)
        assert all(not r.holds for r in rows)
        for r in rows:
            assert r.threshold.lower <= 1 <= r.threshold.upper
            assert r.threshold.relative_radius() < Fraction(1, 2 ** 16)

    def test_domain(self):
        with pytest.raises(DomainError):
            mahler_problem_probe(1, 1)
        with pytest.raises(DomainError):
            mahler_problem_probe(4, -1)


# --- continued fractions ----------------------------------------------------------


class TestConvergents:
    def test_log2_prefix(self):
        cl = convergents(RealBall(2, 128).log(), 5,
                         refine=lambda b: RealBall(2, b).log())
        assert cl.quotients == (0, 1, 2, 3, 1)
        assert cl.convergents == ((0, 1), (1, 1), (2, 3), (7, 10), (9, 13))
        # |ln 2 - 7/10| < 1/(10*13), via an oracle sharper than the claim
        with mpmath.workdps(60):
            err = to_fraction(abs(mpmath.log(2) - mpmath.mpf(7) / 10))
        assert err < Fraction(1, 130)

    def test_matches_exact_arithmetic_oracle(self):
        want = cf_oracle(lambda: mpmath.log(2), 20)
        cl = convergents(RealBall(2, 128).log(), 20,
                         refine=lambda b: RealBall(2, b).log())
        assert list(cl.quotients) == want

    def test_golden_ratio_self_test(self):
        golden = lambda bits: (1 + RealBall(5, bits).sqrt()) / 2
        cl = convergents(golden(128), 10, refine=golden)
        assert cl.quotients == (1,) * 10
        # Fibonacci convergents
        assert cl.convergents[:5] == ((1, 1), (2, 1), (3, 2), (5, 3), (8, 5))

    def test_recurrence_exact(self):
        cl = convergents(RealBall(2, 160).log(), 12,
                         refine=lambda b: RealBall(2, b).log())
        p = [1, cl.quotients[0]]
        q = [0, 1]
        for k, a in enumerate(cl.quotients[1:], start=1):
            p.append(a * p[-1] + p[-2])
            q.append(a * q[-1] + q[-2])
            assert cl.convergents[k] == (p[-1], q[-1])

    def test_alternation_around_value(self):
        cl = convergents(RealBall(2, 160).log(), 8,
                         refine=lambda b: RealBall(2, b).log())
        with mpmath.workdps(60):
            x = to_fraction(mpmath.log(2))
        for k, (p, q) in enumerate(cl.convergents):
            if k % 2 == 0:
                assert Fraction(p, q) < x
            else:
                assert Fraction(p, q) > x

    def test_rational_detected(self):
        with pytest.raises(RationalDetected) as exc:
            convergents(RealBall(Fraction(1, 2)), 3)
        assert exc.value.prefix == [0, 2]
        with pytest.raises(RationalDetected):
            convergents(RealBall(7), 2)

    def test_exact_fraction_terminates(self):
        # non-dyadic rationals never become exact balls; the exact path
        # expands them without touching precision
        with pytest.raises(RationalDetected) as exc:
            convergents(Fraction(355, 113), 10)
        assert exc.value.prefix == [3, 7, 16]
        with pytest.raises(RationalDetected) as exc:
            convergents(Fraction(-7, 3), 10)
        assert exc.value.prefix == [-3, 1, 2]
        with pytest.raises(RationalDetected) as exc:
            convergents(9, 4)
        assert exc.value.prefix == [9]

    def test_exact_fraction_truncated(self):
        cl = convergents(Fraction(355, 113), 2)
        assert cl.quotients == (3, 7)
        assert cl.convergents == ((3, 1), (22, 7))
        assert cl.value == Fraction(355, 113)
        # prefix quotients agree with the exact-arithmetic oracle
        assert list(cl.quotients) == cf_oracle(lambda: mpmath.mpf(355) / 113, 2)

    @given(st.fractions(min_value=-1000, max_value=1000, max_denominator=10 ** 6))
    @settings(max_examples=200, deadline=None)
    def test_exact_expansion_reconstructs(self, x):
        # Euclidean expansions of bounded rationals are short, so 64 always
        # sees the terminating step
        with pytest.raises(RationalDetected) as exc:
            convergents(x, 64)
        qs = exc.value.prefix
        back = Fraction(qs[-1])
        for a in reversed(qs[:-1]):
            back = a + 1 / back
        assert back == x
        assert all(a >= 1 for a in qs[1:])

    def test_needs_refiner_when_too_loose(self):
        with pytest.raises(PrecisionBudgetExceeded):
            convergents(RealBall(2, 64).log(), 40)

    def test_domain(self):
        with pytest.raises(DomainError):
            convergents(RealBall(2, 64).log(), 0)


# --- CSV / plot output ----------------------------------------------------------


class TestOutput:
    def test_csv_shape(self):
        recs = list(scan_log(3, 12))
        buf = io.StringIO()
        assert write_csv(iter(recs), buf) == 10
        lines = buf.getvalue().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 11
        first = lines[1].split(",")
        assert first[0] == "3"
        float(first[1]); float(first[2]); float(first[4]); float(first[5])
        assert first[6] in {"0", "1"}

    def test_plot_mode(self):
        recs = list(scan_log(3, 7))
        buf = io.StringIO()
        write_csv(iter(recs), buf, plot=True)
        lines = buf.getvalue().splitlines()
        assert len(lines) == 5
        for line in lines:
            key, val = line.split()
            int(key); float(val)

    def test_error_record_row(self):
        # cap below what e^200 needs: the record reports, the scan survives
        recs = list(scan_exp(200, 200, precision_cap=128))
        assert len(recs) == 1
        assert recs[0].error is not None
        row = csv_row(recs[0])
        assert row[0] == "200" and row[6].startswith("error:")
        buf = io.StringIO()
        assert write_csv(iter(recs), buf) == 1


# --- property checks --------------------------------------------------------------


@given(st.fractions(min_value=Fraction(-100), max_value=Fraction(100),
                    max_denominator=10 ** 6),
       st.integers(-10 ** 6, 10 ** 6))
@settings(max_examples=200, deadline=None)
def test_shift_property(mid, k):
    x = RealBall(mid, 96)
    n1, d1 = nearest_int_distance(x)
    n2, d2 = nearest_int_distance(x + k)
    assert n2 == n1 + k
    assert max(d1.lower, d2.lower) <= min(d1.upper, d2.upper)
    assert Fraction(0) <= d1.lower <= Fraction(1, 2)


@given(st.integers(3, 500))
@settings(max_examples=30, deadline=None)
def test_scan_record_reproducible(a):
    r1 = next(iter(scan_log(a, a)))
    r2 = next(iter(scan_log(a, a)))
    assert r1.nearest == r2.nearest
    assert r1.distance.lower == r2.distance.lower
    assert r1.distance.upper == r2.distance.upper
