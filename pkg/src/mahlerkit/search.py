"""Certified nearest-integer scans for log a and e^b.

Everything here rides one adaptive protocol: evaluate at a working precision,
test whether the deciding comparison is separated by the ball, and double the
precision until it is or the cap trips.  A record is never silently wrong;
an undecidable comparison surfaces as PrecisionBudgetExceeded, either raised
(single queries) or stored on the record (bulk scans keep going).
"""

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Tuple

from .balls import RealBall
from .bounds import as_fraction
from .errors import DomainError, PrecisionBudgetExceeded, RationalDetected

DEFAULT_PRECISION = 64
DEFAULT_PRECISION_CAP = 1 << 20
CHECKPOINT_EVERY = 10 ** 4

_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)
_REL_TARGET = Fraction(1, 1 << 20)


def nearest_int_distance(x: RealBall, refine: Optional[Callable[[int], RealBall]] = None,
                         precision_cap: int = DEFAULT_PRECISION_CAP) -> Tuple[int, RealBall]:
    """Nearest integer to x and a ball containing min_n |x - n|.

    The ball must have radius < 1/4 (or `refine`, mapping a bit count to a
    fresh enclosure, is used to get there).  If the distance ball pokes past
    1/2 the precision is doubled until the nearest integer is unambiguous.
    Exact half-integers tie-break to the even neighbour.
    """
    ball = x
    work = max(getattr(x, "prec", DEFAULT_PRECISION), DEFAULT_PRECISION)
    while True:
        if ball.rad < _QUARTER:
            n = int(round(ball.mid))   # round-half-even on the exact midpoint
            d = abs(ball - n)
            if d.upper <= _HALF:
                return n, d
        if refine is None:
            raise DomainError(
                "ball too wide for a nearest-integer decision and no refiner given"
            )
        if work >= precision_cap:
            raise PrecisionBudgetExceeded(
                f"nearest-integer distance undecided at {precision_cap} bits"
            )
        work = min(precision_cap, work * 2)
        ball = refine(work)


@dataclass(frozen=True)
class ScanRecord:
    key: int
    value: Optional[RealBall]
    nearest: Optional[int]
    distance: Optional[RealBall]
    exponent: Optional[RealBall]
    precision_used: int
    flagged: bool = False
    error: Optional[str] = None


CSV_COLUMNS = ("key", "midpoint", "radius", "nearest", "distance", "exponent", "flag")


def _ball_cell(ball: Optional[RealBall]) -> str:
    if ball is None:
        return ""
    return str(ball.mid_float())


def csv_row(record: ScanRecord) -> Tuple[str, ...]:
    if record.error is not None:
        return (str(record.key), "", "", "", "", "", f"error:{record.error}")
    return (
        str(record.key),
        _ball_cell(record.value),
        str(float(record.value.rad)),
        str(record.nearest),
        _ball_cell(record.distance),
        _ball_cell(record.exponent),
        "1" if record.flagged else "0",
    )


def write_csv(records: Iterable[ScanRecord], sink,
              checkpoint_every: int = CHECKPOINT_EVERY,
              plot: bool = False) -> int:
    """Stream records to a CSV (or two-column plot) sink, flushing every
    `checkpoint_every` rows so interrupted scans leave a usable file.
    Returns the number of rows written."""
    own = isinstance(sink, (str, bytes))
    fh = open(sink, "w", newline="") if own else sink
    try:
        n = 0
        if plot:
            for rec in records:
                if rec.error is not None:
                    continue
                y = rec.exponent if rec.exponent is not None else rec.distance
                fh.write(f"{rec.key} {_ball_cell(y)}\n")
                n += 1
                if n % checkpoint_every == 0:
                    fh.flush()
        else:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for rec in records:
                writer.writerow(csv_row(rec))
                n += 1
                if n % checkpoint_every == 0:
                    fh.flush()
        fh.flush()
        return n
    finally:
        if own:
            fh.close()


def _certified_record(key, make, denom_make, ref, start, cap) -> ScanRecord:
    """One scan record: distance certified positive, at most 1/2, relatively
    tight, and the exponent comparison against `ref` decided."""
    work = start
    while True:
        val = make(work)
        if val.rad < _QUARTER:
            n = int(round(val.mid))
            d = abs(val - n)
            if d.lower > 0 and d.upper <= _HALF and d.relative_radius() <= _REL_TARGET:
                exponent = None
                flagged = False
                decided = True
                if denom_make is not None:
                    exponent = (-d.log()) / denom_make(work)
                    side = exponent.gt(ref)
                    if side is None:
                        decided = False
                    else:
                        flagged = side
                if decided:
                    return ScanRecord(key, val, n, d, exponent, work, flagged)
        if work >= cap:
            raise PrecisionBudgetExceeded(
                f"record for key {key} undecided at {cap} bits"
            )
        work = min(cap, work * 2)


def _log_record(a: int, ref: Fraction, precision: int, cap: int) -> ScanRecord:
    def make(bits):
        return RealBall(a, bits).log()

    def denom(bits):
        la = RealBall(a, bits).log()
        return la * la.log()

    try:
        return _certified_record(a, make, denom, ref, max(precision, DEFAULT_PRECISION), cap)
    except PrecisionBudgetExceeded as exc:
        return ScanRecord(a, None, None, None, None, cap, error=str(exc))


def _exp_start(b: int, precision: int) -> int:
    # e^b carries about b*log2(e) bits of integer part; start above that
    return max(precision, DEFAULT_PRECISION, math.ceil(b * math.log2(math.e)) + 16)


def _exp_record(b: int, ref: Fraction, precision: int, cap: int) -> ScanRecord:
    def make(bits):
        return RealBall(b, bits).exp()

    def denom(bits):
        return RealBall(b, bits) * RealBall(b, bits).log()

    try:
        return _certified_record(b, make, denom, ref, _exp_start(b, precision), cap)
    except PrecisionBudgetExceeded as exc:
        return ScanRecord(b, None, None, None, None, cap, error=str(exc))


def _scan_log_chunk(args):
    a_lo, a_hi, ref, precision, cap = args
    return [_log_record(a, ref, precision, cap) for a in range(a_lo, a_hi + 1)]


def _scan_exp_chunk(args):
    b_lo, b_hi, ref, precision, cap = args
    return [_exp_record(b, ref, precision, cap) for b in range(b_lo, b_hi + 1)]


def _chunks(lo: int, hi: int, jobs: int):
    span = hi - lo + 1
    width = max(1, math.ceil(span / (jobs * 4)))
    start = lo
    while start <= hi:
        yield (start, min(hi, start + width - 1))
        start += width


def _scan(lo, hi, one_record, chunk_fn, ref, precision, cap, jobs) -> Iterator[ScanRecord]:
    if jobs <= 1:
        for key in range(lo, hi + 1):
            yield one_record(key, ref, precision, cap)
        return
    payloads = [(a, b, ref, precision, cap) for a, b in _chunks(lo, hi, jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for block in pool.map(chunk_fn, payloads):
            yield from block


def scan_log(a_min: int, a_max: int, exponent_ref=40,
             precision: int = DEFAULT_PRECISION,
             precision_cap: int = DEFAULT_PRECISION_CAP,
             jobs: int = 1) -> Iterator[ScanRecord]:
    """Certified ||log a|| and the exponent c(a) = -ln||log a||/(ln a lnln a)
    for every integer a in [a_min, a_max].  Records with c(a) certified above
    `exponent_ref` come back flagged.  a >= 3 so that lnln a > 0."""
    if not isinstance(a_min, int) or not isinstance(a_max, int):
        raise DomainError("a_min, a_max must be integers")
    if a_min < 3 or a_min > a_max:
        raise DomainError("need 3 <= a_min <= a_max")
    ref = as_fraction(exponent_ref, "exponent_ref")
    return _scan(a_min, a_max, _log_record, _scan_log_chunk, ref,
                 precision, precision_cap, jobs)


def scan_exp(b_min: int, b_max: int, exponent_ref=40,
             precision: int = DEFAULT_PRECISION,
             precision_cap: int = DEFAULT_PRECISION_CAP,
             jobs: int = 1) -> Iterator[ScanRecord]:
    """Certified ||e^b|| and c'(b) = -ln||e^b||/(b ln b) for b in
    [b_min, b_max], b >= 2.  Working precision scales with b up front since
    e^b spends about b*log2(e) bits on its integer part."""
    if not isinstance(b_min, int) or not isinstance(b_max, int):
        raise DomainError("b_min, b_max must be integers")
    if b_min < 2 or b_min > b_max:
        raise DomainError("need 2 <= b_min <= b_max")
    ref = as_fraction(exponent_ref, "exponent_ref")
    return _scan(b_min, b_max, _exp_record, _scan_exp_chunk, ref,
                 precision, precision_cap, jobs)


# --- the integer sequence behind the log problem ----------------------------


@dataclass(frozen=True)
class SequenceRow:
    b: int
    a: int
    gap: RealBall          # |log a - b|
    threshold: Fraction    # 1/a
    passed: bool
    precision_used: int


def _certified_lt(make, rhs: Fraction, start: int, cap: int):
    """(ball, bits, verdict) with ball.lt(rhs) decided by doubling."""
    work = start
    while True:
        ball = make(work)
        res = ball.lt(rhs)
        if res is not None and ball.relative_radius() <= _REL_TARGET:
            return ball, work, res
        if work >= cap:
            raise PrecisionBudgetExceeded(f"comparison against {rhs} undecided at {cap} bits")
        work = min(cap, work * 2)


def mahler_sequence(b_max: int, precision: int = DEFAULT_PRECISION,
                    precision_cap: int = DEFAULT_PRECISION_CAP) -> list:
    """For b = 1..b_max: a = nearest integer to e^b, with the certified
    comparison |log a - b| < 1/a row by row.  The a values must increase
    strictly, which is checked."""
    if not isinstance(b_max, int) or b_max < 1:
        raise DomainError("b_max must be a positive integer")
    rows = []
    prev_a = 0
    for b in range(1, b_max + 1):
        start = _exp_start(b, precision)
        a, _ = nearest_int_distance(
            RealBall(b, start).exp(),
            refine=lambda bits, b=b: RealBall(b, bits).exp(),
            precision_cap=precision_cap,
        )
        gap, bits, ok = _certified_lt(
            lambda w, a=a, b=b: abs(RealBall(a, w).log() - b),
            Fraction(1, a), start, precision_cap,
        )
        if a <= prev_a:
            raise AssertionError(f"sequence not increasing at b={b}: {a} after {prev_a}")
        prev_a = a
        rows.append(SequenceRow(b, a, gap, Fraction(1, a), ok, bits))
    return rows


@dataclass(frozen=True)
class ProbeRow:
    b: int
    a: int
    gap: RealBall          # |e^b - a|
    threshold: RealBall    # a^(-c)
    holds: bool            # gap >= threshold, certified
    ratio: RealBall        # gap / threshold
    precision_used: int


def mahler_problem_probe(b_max: int, c, precision: int = DEFAULT_PRECISION,
                         precision_cap: int = DEFAULT_PRECISION_CAP) -> list:
    """Exploratory table for the open question whether |e^b - a| can dip
    below a^(-c): reports the certified side of the comparison for each
    b = 2..b_max with a the nearest integer to e^b.  Nothing is asserted;
    the point is the table."""
    if not isinstance(b_max, int) or b_max < 2:
        raise DomainError("b_max must be an integer >= 2")
    cf = as_fraction(c, "c")
    if cf < 0:
        raise DomainError(f"c must be nonnegative, got {cf}")
    rows = []
    for b in range(2, b_max + 1):
        work = _exp_start(b, precision)
        while True:
            val = RealBall(b, work).exp()
            a, gap = nearest_int_distance(
                val, refine=lambda bits, b=b: RealBall(b, bits).exp(),
                precision_cap=precision_cap,
            )
            threshold = RealBall(a, work).pow_fraction(-cf)
            side = gap.ge(threshold)
            if side is not None and gap.lower > 0 and gap.relative_radius() <= _REL_TARGET:
                rows.append(ProbeRow(b, a, gap, threshold, side,
                                     gap / threshold, work))
                break
            if work >= precision_cap:
                raise PrecisionBudgetExceeded(
                    f"probe comparison undecided for b={b} at {precision_cap} bits"
                )
            work = min(precision_cap, work * 2)
    return rows


# --- continued fractions ------------------------------------------------------


@dataclass(frozen=True)
class ConvergentList:
    quotients: Tuple[int, ...]
    convergents: Tuple[Tuple[int, int], ...]   # (p_k, q_k), exact
    value: object                              # RealBall, or Fraction when exact
    precision_used: int


def _cf_quotients(ball: RealBall, want: int):
    """Partial quotients read off a fixed enclosure; None when the enclosure
    is too loose to pin one down.  Raises RationalDetected on exact
    termination."""
    qs = []
    y = ball
    for _ in range(want):
        lo, hi = y.lower, y.upper
        flo = int(math.floor(lo))
        if flo != int(math.floor(hi)):
            return None
        qs.append(flo)
        frac = y - flo
        if frac.upper == 0:
            raise RationalDetected(
                f"expansion terminates after {len(qs)} quotients", prefix=qs
            )
        if frac.lower <= 0:
            return None
        y = 1 / frac
    return qs


def _cf_validate(ball: RealBall, qs, count: int):
    """Convergent pairs once the certification comparisons all decide, else
    None (caller refines and retries).  Alternation genuinely failing is a
    bug, not a precision problem, and raises."""
    ps = [1, qs[0]]
    qden = [0, 1]
    for a in qs[1:]:
        ps.append(a * ps[-1] + ps[-2])
        qden.append(a * qden[-1] + qden[-2])
    # ps[k+1]/qden[k+1] is the k-th convergent
    pairs = list(zip(ps[1:], qden[1:]))

    for k in range(count):
        p, q = pairs[k]
        approx = Fraction(p, q)
        err = abs(ball - approx)
        limit = Fraction(1, q * pairs[k + 1][1])
        if err.lt(limit) is not True:
            return None
        side = ball.gt(approx)
        if side is None:
            return None
        if side != (k % 2 == 0):
            raise AssertionError(f"convergents failed to alternate at k={k}")
    return pairs


def _convergents_exact(x: Fraction, count: int) -> ConvergentList:
    # plain Euclidean expansion; nothing to certify when the input is exact
    qs = []
    p0, q0, p1, q1 = 0, 1, 1, 0
    pairs = []
    y = x
    while len(qs) < count:
        a = int(math.floor(y))
        qs.append(a)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        pairs.append((p1, q1))
        rest = y - a
        if rest == 0:
            raise RationalDetected(
                f"expansion terminates after {len(qs)} quotients", prefix=qs
            )
        y = 1 / rest
    return ConvergentList(tuple(qs), tuple(pairs), x, 0)


def convergents(x, count: int,
                refine: Optional[Callable[[int], RealBall]] = None,
                precision_cap: int = DEFAULT_PRECISION_CAP) -> ConvergentList:
    """First `count` certified partial quotients of x with their convergents.

    x may be a RealBall or an exact rational (Fraction or int).  For balls,
    one extra quotient is extracted internally so every reported convergent
    p_k/q_k passes the classical |x - p_k/q_k| < 1/(q_k q_{k+1}) test against
    the certified enclosure; convergents alternate around x, which is also
    checked.  Exactly rational inputs with an expansion shorter than `count`
    raise RationalDetected carrying the finite prefix."""
    if not isinstance(count, int) or count < 1:
        raise DomainError("count must be a positive integer")
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return _convergents_exact(Fraction(x), count)
    work = max(getattr(x, "prec", DEFAULT_PRECISION), DEFAULT_PRECISION)
    ball = x
    while True:
        qs = _cf_quotients(ball, count + 1)
        if qs is not None:
            pairs = _cf_validate(ball, qs, count)
            if pairs is not None:
                return ConvergentList(tuple(qs[:count]), tuple(pairs[:count]),
                                      ball, work)
        if refine is None:
            raise PrecisionBudgetExceeded(
                "enclosure too loose for the requested quotients; no refiner given"
            )
        if work >= precision_cap:
            raise PrecisionBudgetExceeded(
                f"quotients undecided at {precision_cap} bits"
            )
        work = min(precision_cap, work * 2)
        ball = refine(work)
