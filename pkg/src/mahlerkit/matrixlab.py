"""Exact rational linear algebra: rank, the constructive low-rank
factorization with height certificates, the rank-gap distance bound, the
multiplicative independence box checks, and the proof-parameter audits.

Everything arithmetic here is exact: ranks and determinants over Q, height
certificates as integer comparisons, power products of rationals with
rational exponents compared via a common integer power.  Ball arithmetic
appears only where a genuinely transcendental quantity (a logarithm, e)
enters a comparison, and then with precision doubling until the comparison
is decided.
"""

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

from .algnum import canonical_integers
from .balls import ComplexBall, RealBall
from .bounds import (
    HypothesisReport,
    HypothesisRow,
    as_fraction,
    kappa,
    log_ball,
    phi1_high_branch,
    theta,
)
from .errors import (
    BudgetExceeded,
    DomainError,
    HypothesisViolation,
    PrecisionBudgetExceeded,
    RankMismatch,
    ZeroVector,
)

DEFAULT_PRECISION = 64
DEFAULT_PRECISION_CAP = 1 << 20
DEFAULT_BOX_BUDGET = 10 ** 8


# ---------------------------------------------------------------------------
# rational matrices
# ---------------------------------------------------------------------------


class RationalMatrix:
    """Immutable matrix of exact rationals."""

    __slots__ = ("entries",)

    def __init__(self, rows):
        data = tuple(tuple(as_fraction(x, "entry") for x in row) for row in rows)
        if not data or not data[0]:
            raise DomainError("matrix dimensions must be positive")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise DomainError("ragged rows")
        object.__setattr__(self, "entries", data)

    def __setattr__(self, *_):
        raise AttributeError("RationalMatrix is immutable")

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.m, self.n)

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"RationalMatrix({[list(map(str, r)) for r in self.entries]})"

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def from_csv(cls, text: str) -> "RationalMatrix":
        rows = []
        for record in csv.reader(io.StringIO(text)):
            cells = [c.strip() for c in record if c.strip()]
            if cells:
                rows.append(cells)
        if not rows:
            raise DomainError("empty CSV matrix")
        return cls(rows)

    def to_csv(self) -> str:
        return "\n".join(",".join(str(x) for x in row) for row in self.entries) + "\n"

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.n != other.m:
            raise DomainError(f"shape mismatch: {self.shape} @ {other.shape}")
        return RationalMatrix(
            [
                [
                    sum((self.entries[i][k] * other.entries[k][j] for k in range(self.n)),
                        Fraction(0))
                    for j in range(other.n)
                ]
                for i in range(self.m)
            ]
        )

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self.entries)))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix([[self.entries[i][j] for j in cols] for i in rows])

    def permute(self, row_order: Sequence[int], col_order: Sequence[int]) -> "RationalMatrix":
        return self.submatrix(row_order, col_order)


def rational_rank(M: RationalMatrix) -> int:
    """Exact rank over Q by fraction-free (Bareiss) elimination on the
    denominator-cleared integer matrix."""
    A = []
    for row in M.entries:
        den = math.lcm(*(x.denominator for x in row))
        A.append([int(x * den) for x in row])
    m, n = len(A), len(A[0])
    rank = 0
    prev = 1
    for c in range(n):
        pivot = next((i for i in range(rank, m) if A[i][c]), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        for i in range(rank + 1, m):
            for j in range(c + 1, n):
                num = A[i][j] * A[rank][c] - A[i][c] * A[rank][j]
                q, rem = divmod(num, prev)
                assert rem == 0, "fraction-free elimination lost exactness"
                A[i][j] = q
            A[i][c] = 0
        prev = A[rank][c]
        rank += 1
        if rank == m:
            break
    return rank


def determinant(M: RationalMatrix) -> Fraction:
    """Exact determinant by Gaussian elimination over Q."""
    if M.m != M.n:
        raise DomainError("determinant needs a square matrix")
    A = [list(row) for row in M.entries]
    n = M.m
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if A[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            A[c], A[pivot] = A[pivot], A[c]
            det = -det
        det *= A[c][c]
        inv = 1 / A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv
                for j in range(c, n):
                    A[i][j] -= f * A[c][j]
    return det


def _pivot_columns(rows, limit: Optional[int] = None):
    """Indices of the first linearly independent columns, left to right."""
    work = [list(r) for r in rows]
    m = len(work)
    n = len(work[0])
    pivots = []
    rr = 0
    for c in range(n):
        pivot = next((i for i in range(rr, m) if work[i][c]), None)
        if pivot is None:
            continue
        work[rr], work[pivot] = work[pivot], work[rr]
        inv = 1 / work[rr][c]
        for i in range(rr + 1, m):
            if work[i][c]:
                f = work[i][c] * inv
                for j in range(c, n):
                    work[i][j] -= f * work[rr][j]
        pivots.append(c)
        rr += 1
        if rr == m or (limit is not None and rr == limit):
            break
    return pivots


def _maxint(entries) -> int:
    return max(abs(v) for v in canonical_integers(entries))


def height_base_int(M: RationalMatrix) -> int:
    """Smallest integer whose log dominates every row height h(1 : row)."""
    return max(_maxint((Fraction(1),) + row) for row in M.entries)


# ---------------------------------------------------------------------------
# low-rank factorization with height certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeightCertRow:
    name: str
    height_int: int       # exp of the row height, exact integer
    allowed_int: int      # exp of the allowed bound, exact integer
    passed: bool


@dataclass(frozen=True)
class FactorizationCertificate:
    matrix: RationalMatrix
    rank: int
    row_order: Tuple[int, ...]
    col_order: Tuple[int, ...]
    delta: Fraction
    b_prime: RationalMatrix
    b_dprime: RationalMatrix
    base_b: int
    height_rows: Tuple[HeightCertRow, ...]

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.height_rows)

    def permuted(self) -> RationalMatrix:
        return self.matrix.permute(self.row_order, self.col_order)

    def verify(self) -> bool:
        return self.b_prime @ self.b_dprime == self.permuted()

    def to_json(self) -> dict:
        """Plain-dict form with every rational kept exact as a string."""
        def grid(M):
            return [[str(v) for v in row] for row in M.entries]
        return {
            "rank": self.rank,
            "row_order": list(self.row_order),
            "col_order": list(self.col_order),
            "delta": str(self.delta),
            "b_prime": grid(self.b_prime),
            "b_dprime": grid(self.b_dprime),
            "base_b": self.base_b,
            "height_rows": [
                {"name": r.name, "height_int": str(r.height_int),
                 "allowed_int": str(r.allowed_int), "pass": r.passed}
                for r in self.height_rows
            ],
            "pass": self.passed,
        }


def lemma2_factor(B: RationalMatrix, r: int) -> FactorizationCertificate:
    """Factor a rank-r matrix as B = B' B'' with B' the pivot columns and
    B'' = [I | Cramer tail], all exact, plus integer height certificates:
    each row of (1 : B') stays under base^m and each row of B'' under
    r! * base^(r n), base the integer height base of B."""
    if not isinstance(r, int) or r < 1:
        raise DomainError(f"r must be a positive integer, got {r!r}")
    true_rank = rational_rank(B)
    if true_rank != r:
        raise RankMismatch(f"supplied r = {r}, exact rank is {true_rank}")

    piv_cols = _pivot_columns(B.entries, limit=r)
    col_rest = [j for j in range(B.n) if j not in piv_cols]
    restricted = [[B.entries[i][j] for j in piv_cols] for i in range(B.m)]
    piv_rows = _pivot_columns(list(zip(*restricted)), limit=r)
    row_rest = [i for i in range(B.m) if i not in piv_rows]

    row_order = tuple(piv_rows + row_rest)
    col_order = tuple(piv_cols + col_rest)
    Bp = B.permute(row_order, col_order)

    minor = Bp.submatrix(range(r), range(r))
    delta = determinant(minor)
    assert delta != 0, "pivot minor must be regular"

    b_prime = Bp.submatrix(range(B.m), range(r))
    dprime_rows = []
    for rho in range(r):
        row = [Fraction(int(rho == k)) for k in range(r)]
        dprime_rows.append(row)
    for j in range(r, B.n):
        col = [Bp.entries[i][j] for i in range(r)]
        for rho in range(r):
            swapped = [
                [col[i] if k == rho else minor.entries[i][k] for k in range(r)]
                for i in range(r)
            ]
            dprime_rows[rho].append(determinant(RationalMatrix(swapped)) / delta)
    b_dprime = RationalMatrix(dprime_rows)

    assert b_prime @ b_dprime == Bp, "factorization identity failed"

    base = height_base_int(B)
    rfact = math.factorial(r)
    rows = []
    for i in range(B.m):
        hint = _maxint((Fraction(1),) + b_prime.entries[i])
        allowed = base ** B.m
        rows.append(HeightCertRow(f"h(1 : B' row {i}) <= m log base",
                                  hint, allowed, hint <= allowed))
    for rho in range(r):
        hint = _maxint(b_dprime.entries[rho])
        allowed = rfact * base ** (r * B.n)
        rows.append(HeightCertRow(f"h(B'' row {rho}) <= r n log base + log r!",
                                  hint, allowed, hint <= allowed))

    return FactorizationCertificate(
        matrix=B, rank=r, row_order=row_order, col_order=col_order,
        delta=delta, b_prime=b_prime, b_dprime=b_dprime,
        base_b=base, height_rows=tuple(rows),
    )


# ---------------------------------------------------------------------------
# rank-gap distance bound
# ---------------------------------------------------------------------------


def lemma1_bound(n: int, D: int, B=None, logB=None,
                 precision: int = DEFAULT_PRECISION) -> RealBall:
    """n^(-nD) * B^(-n(n+1)D), in ball form; B >= 2 required.

    Give either B (rational, exact path) or logB (real)."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not isinstance(D, int) or D < 1:
        raise DomainError(f"D must be a positive integer, got {D!r}")
    if (B is None) == (logB is None):
        raise DomainError("give exactly one of B, logB")
    if B is not None:
        Bv = as_fraction(B, "B")
        if Bv < 2:
            raise DomainError(f"B must be at least 2, got {Bv}")
        exact = Fraction(1, n ** (n * D)) * Bv ** (-n * (n + 1) * D)
        return RealBall(exact, max(precision, DEFAULT_PRECISION))
    lb = logB if isinstance(logB, RealBall) else RealBall(as_fraction(logB, "logB"), precision)
    work_cmp = max(precision, 64)
    while True:
        verdict = lb.ge(RealBall(2, work_cmp).log())
        if verdict is not None:
            break
        if work_cmp >= DEFAULT_PRECISION_CAP:
            raise PrecisionBudgetExceeded("cannot separate logB from log 2")
        work_cmp *= 2
    if not verdict:
        raise DomainError(f"logB must be certified >= log 2, got {lb.nstr()}")
    work = max(precision, DEFAULT_PRECISION)
    return (-(RealBall(n * D, work) * RealBall(n, work).log())
            - RealBall(n * (n + 1) * D, work) * lb).exp()


@dataclass(frozen=True)
class Lemma1Report:
    n: int
    D: int
    base_b: int
    rank_b: int
    declared_rank_l: int
    distance_lower: Fraction
    bound: RealBall
    passed: bool


def lemma1_check(B: RationalMatrix, L, declared_rank_L: int, D: int = 1,
                 precision: int = DEFAULT_PRECISION) -> Lemma1Report:
    """Certified check that a rational matrix of larger rank stays at least
    the lemma distance away from a given lower-rank matrix.

    L is a square matrix of the same shape with entries that are numbers,
    RealBalls or ComplexBalls; its rank must be known by construction and is
    supplied, not inferred."""
    if B.m != B.n:
        raise DomainError("square matrices required")
    n = B.n
    rows = [list(row) for row in (L.entries if isinstance(L, RationalMatrix) else L)]
    if len(rows) != n or any(len(row) != n for row in rows):
        raise DomainError("L must match the shape of B")
    rank_b = rational_rank(B)
    if not isinstance(declared_rank_L, int) or declared_rank_L < 0:
        raise DomainError("declared_rank_L must be a nonnegative integer")
    if rank_b <= declared_rank_L:
        raise HypothesisViolation(
            f"rank(B) = {rank_b} must exceed declared rank(L) = {declared_rank_L}"
        )
    # B >= 2 clamp: identity-like matrices have height base 1
    base = max(2, height_base_int(B))
    bound = lemma1_bound(n, D, B=base, precision=precision)

    work = max(precision, DEFAULT_PRECISION)
    best = Fraction(0)
    for i in range(n):
        for j, lam in enumerate(rows[i]):
            beta = B.entries[i][j]
            if isinstance(lam, ComplexBall):
                diff = ComplexBall(lam.re - beta, lam.im)
                dist = abs(diff).lower
            else:
                ball = lam if isinstance(lam, RealBall) else RealBall(as_fraction(lam, "entry"), work)
                dist = abs(ball - beta).lower
            if dist > best:
                best = dist
    return Lemma1Report(
        n=n, D=D, base_b=base, rank_b=rank_b, declared_rank_l=declared_rank_L,
        distance_lower=best, bound=bound, passed=best >= bound.upper,
    )


# ---------------------------------------------------------------------------
# log matrices over positive rationals, exact via prime exponent vectors
# ---------------------------------------------------------------------------


_PRIME_COUNT = 10 ** 4


@lru_cache(maxsize=1)
def _prime_table() -> Tuple[int, ...]:
    limit = 104730  # the 10^4-th prime is 104729
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(sieve[p * p::p]))
    primes = tuple(i for i in range(limit) if sieve[i])
    assert len(primes) >= _PRIME_COUNT
    return primes[:_PRIME_COUNT]


def _factor_positive_int(v: int) -> dict:
    out = {}
    for p in _prime_table():
        if p * p > v:
            break
        while v % p == 0:
            out[p] = out.get(p, 0) + 1
            v //= p
    if v > 1:
        d = _prime_table()[-1] + 2
        while d * d <= v:
            while v % d == 0:
                out[d] = out.get(d, 0) + 1
                v //= d
            d += 2
        if v > 1:
            out[v] = out.get(v, 0) + 1
    return out


class LogMatrix:
    """Matrix of logarithms of positive rationals.

    Each entry alpha_ij is stored with its exact prime exponent vector, so a
    vanishing test for any integer bilinear combination of the logs reduces
    to exact integer arithmetic.  Log enclosures are cached per entry and
    tightened monotonically under precision bumps."""

    __slots__ = ("entries", "primes", "_vectors", "_log_cache")

    def __init__(self, rows):
        data = tuple(tuple(as_fraction(x, "entry") for x in row) for row in rows)
        if not data or not data[0]:
            raise DomainError("matrix dimensions must be positive")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise DomainError("ragged rows")
        for row in data:
            for x in row:
                if x <= 0:
                    raise DomainError(f"entries must be positive, got {x}")
        object.__setattr__(self, "entries", data)
        factored = [
            [self._factor(x) for x in row]
            for row in data
        ]
        primes = sorted({p for row in factored for f in row for p in f})
        object.__setattr__(self, "primes", tuple(primes))
        vectors = tuple(
            tuple(
                tuple(
                    f.get(p, 0) for p in primes
                )
                for f in row
            )
            for row in factored
        )
        object.__setattr__(self, "_vectors", vectors)
        object.__setattr__(self, "_log_cache", {})
        # reconstruction invariant: the exponent vectors rebuild every entry
        for i, row in enumerate(data):
            for j, x in enumerate(row):
                rebuilt = Fraction(1)
                for p, e in zip(primes, vectors[i][j]):
                    rebuilt *= Fraction(p) ** e
                assert rebuilt == x, "prime exponent vector does not reconstruct entry"

    def __setattr__(self, *_):
        raise AttributeError("LogMatrix is immutable")

    @staticmethod
    def _factor(x: Fraction) -> dict:
        out = dict(_factor_positive_int(x.numerator)) if x.numerator != 1 else {}
        for p, e in _factor_positive_int(x.denominator).items():
            out[p] = out.get(p, 0) - e
        return out

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.m, self.n)

    def alpha(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def exponent_vector(self, i: int, j: int) -> Tuple[int, ...]:
        return self._vectors[i][j]

    def log_ball(self, i: int, j: int, precision: int = DEFAULT_PRECISION) -> RealBall:
        cached = self._log_cache.get((i, j))
        if cached is not None and cached.prec >= precision:
            return cached
        fresh = RealBall(self.entries[i][j], precision + 8).log()
        if cached is not None:
            fresh = fresh.intersect(cached).at_prec(precision + 8)
        self._log_cache[(i, j)] = fresh
        return fresh

    def __repr__(self):
        return f"LogMatrix({[list(map(str, r)) for r in self.entries]})"


def make_lic_matrix(m: int, n: int) -> LogMatrix:
    """LogMatrix with a distinct prime per entry: alpha_ij is the (i n + j)-th
    prime, so the independence condition holds for all nonzero tuples."""
    if not isinstance(m, int) or not isinstance(n, int) or m < 1 or n < 1:
        raise DomainError("m, n must be positive integers")
    if m * n > _PRIME_COUNT:
        raise DomainError(f"m*n = {m * n} exceeds the prime table ({_PRIME_COUNT})")
    table = _prime_table()
    return LogMatrix([[table[i * n + j] for j in range(n)] for i in range(m)])


@dataclass(frozen=True)
class BoxCheckResult:
    passed: bool
    witness: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]
    pairs_checked: int
    method: str            # "exponent-rank" or "enumeration"
    box: Tuple[int, int]


def _nonzero_index(t: Tuple[int, ...], bound: int) -> int:
    """Index of t in the lexicographic run over nonzero tuples of the box."""
    width = 2 * bound + 1
    idx = 0
    for v in t:
        idx = idx * width + (v + bound)
    zero_idx = (width ** len(t) - 1) // 2
    return idx - (1 if idx > zero_idx else 0)


def _lic_partition(args):
    vectors, m, n, T, S, lead = args
    zero = tuple(0 for _ in range(len(vectors[0][0])))
    s_range = range(-S, S + 1)
    for t_rest in itertools.product(range(-T, T + 1), repeat=m - 1):
        t = (lead,) + t_rest
        if not any(t):
            continue
        w = []
        for j in range(n):
            w.append(tuple(
                sum(t[i] * vectors[i][j][k] for i in range(m))
                for k in range(len(zero))
            ))
        for s in itertools.product(s_range, repeat=n):
            if not any(s):
                continue
            combo = tuple(
                sum(s[j] * w[j][k] for j in range(n)) for k in range(len(zero))
            )
            if combo == zero:
                return (t, s)
    return None


def lic_check_box(L: LogMatrix, T: int, S: int,
                  budget: int = DEFAULT_BOX_BUDGET, jobs: int = 1) -> BoxCheckResult:
    """Search the box |t_i| <= T, |s_j| <= S for a nonzero pair killing the
    bilinear exponent form.

    If the mn exponent vectors are linearly independent over Q the form can
    only vanish trivially, which settles every box at once without
    enumeration.  Otherwise the box is enumerated in lexicographic order
    (partitioned by the leading coordinate of t when jobs > 1) and the first
    witness is returned; the nominal enumeration cost is checked against the
    budget first."""
    if not isinstance(T, int) or not isinstance(S, int) or T < 0 or S < 0:
        raise DomainError("T, S must be nonnegative integers")
    m, n = L.shape

    if L.primes:
        flat = RationalMatrix([
            [Fraction(v) for v in L.exponent_vector(i, j)]
            for i in range(m) for j in range(n)
        ])
        if rational_rank(flat) == m * n:
            return BoxCheckResult(True, None, 0, "exponent-rank", (T, S))

    t_count = (2 * T + 1) ** m - 1
    s_count = (2 * S + 1) ** n - 1
    if t_count * s_count > budget:
        raise BudgetExceeded(
            f"box needs {t_count * s_count} pairs, budget is {budget}"
        )
    if t_count == 0 or s_count == 0:
        return BoxCheckResult(True, None, 0, "enumeration", (T, S))

    vectors = L._vectors
    leads = list(range(-T, T + 1))
    payloads = [(vectors, m, n, T, S, lead) for lead in leads]
    witness = None
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for result in pool.map(_lic_partition, payloads):
                if result is not None:
                    witness = result
                    break
    else:
        for payload in payloads:
            result = _lic_partition(payload)
            if result is not None:
                witness = result
                break

    if witness is None:
        return BoxCheckResult(True, None, t_count * s_count, "enumeration", (T, S))
    t, s = witness
    pairs = _nonzero_index(t, T) * s_count + _nonzero_index(s, S) + 1
    return BoxCheckResult(False, witness, pairs, "enumeration", (T, S))


def lemma3_count(L: LogMatrix, t: Sequence[int], S: int,
                 budget: int = DEFAULT_BOX_BUDGET) -> int:
    """Exact number of distinct products prod alpha_ij^(t_i s_j) over the box
    |s_j| <= S, counted via canonical exponent vectors.  When the matrix
    passes the independence check on the matching box the count is checked
    against the (2S+1)^(n-1) floor."""
    t = tuple(int(v) for v in t)
    m, n = L.shape
    if len(t) != m:
        raise DomainError(f"t must have length {m}")
    if not any(t):
        raise ZeroVector("t must be nonzero")
    if not isinstance(S, int) or S < 0:
        raise DomainError("S must be a nonnegative integer")

    vectors = L._vectors
    width = len(L.primes)
    w = [
        tuple(sum(t[i] * vectors[i][j][k] for i in range(m)) for k in range(width))
        for j in range(n)
    ]
    seen = set()
    for s in itertools.product(range(-S, S + 1), repeat=n):
        seen.add(tuple(
            sum(s[j] * w[j][k] for j in range(n)) for k in range(width)
        ))
    count = len(seen)

    # floor cross-check; skipped when the box enumeration is unaffordable
    try:
        box = lic_check_box(L, max(abs(v) for v in t), S, budget=budget)
    except BudgetExceeded:
        box = None
    if box is not None and box.passed and count < (2 * S + 1) ** (n - 1):
        raise AssertionError(
            f"count {count} below the floor {(2 * S + 1) ** (n - 1)} despite "
            f"the independence condition holding on the box"
        )
    return count


# ---------------------------------------------------------------------------
# exact power products: prod base_i ^ exp_i with rational bases and exponents
# ---------------------------------------------------------------------------


def _iroot(N: int, q: int) -> int:
    """floor(N^(1/q)) for N >= 0."""
    if N < 0:
        raise ValueError("negative radicand")
    if N == 0:
        return 0
    if q == 1:
        return N
    x = 1 << (-(-N.bit_length() // q))
    while True:
        y = ((q - 1) * x + N // x ** (q - 1)) // q
        if y >= x:
            break
        x = y
    while x ** q > N:
        x -= 1
    while (x + 1) ** q <= N:
        x += 1
    return x


def _pp_qpow(factors):
    """Common integer power: returns (q, X) with value^q = X exactly."""
    q = 1
    for _, e in factors:
        q = math.lcm(q, Fraction(e).denominator)
    X = Fraction(1)
    for b, e in factors:
        X *= Fraction(b) ** int(Fraction(e) * q)
    return q, X


def _pp_floor(factors) -> int:
    q, X = _pp_qpow(factors)
    a, b = X.numerator, X.denominator
    k = _iroot(a // b, q)
    while (k + 1) ** q * b <= a:
        k += 1
    while k > 0 and k ** q * b > a:
        k -= 1
    return k


def _pp_cmp_fraction(factors, c) -> int:
    """Sign of (value - c) for rational c, exact."""
    c = Fraction(c)
    if c < 0:
        return 1
    q, X = _pp_qpow(factors)
    rhs = c ** q
    return (X > rhs) - (X < rhs)


def _pp_ball(factors, prec: int) -> RealBall:
    out = RealBall(1, prec)
    for b, e in factors:
        out = out * RealBall(Fraction(b), prec).pow_fraction(Fraction(e))
    return out


# ---------------------------------------------------------------------------
# proof-parameter audits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuditRow:
    name: str
    lhs: object
    rhs: object
    relation: str
    passed: bool

    def to_dict(self):
        def show(v):
            return v.nstr() if isinstance(v, RealBall) else str(v)
        return {"name": self.name, "lhs": show(self.lhs), "rhs": show(self.rhs),
                "relation": self.relation, "pass": self.passed}


@dataclass(frozen=True)
class ProofParameters:
    m: int
    n: int
    r: int
    D: int
    c0: int
    h1: Optional[Fraction] = None
    h2: Optional[Fraction] = None
    h: Optional[Fraction] = None
    theta: Optional[Fraction] = None
    kappa: Optional[Fraction] = None
    S: Optional[int] = None
    T: Optional[int] = None
    T0: Optional[int] = None
    S0: Optional[int] = None
    M: Optional[int] = None
    d: Optional[int] = None
    U: Optional[RealBall] = None
    V: Optional[RealBall] = None
    log_A: Optional[object] = None       # Fraction (exact) or RealBall
    log_B1: Optional[object] = None
    log_B2: Optional[object] = None
    gamma_u: Optional[Fraction] = None
    gamma_t: Optional[Fraction] = None
    gamma_s: Optional[Fraction] = None


@dataclass(frozen=True)
class AuditReport:
    params: ProofParameters
    rows: Tuple[AuditRow, ...]

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def failing(self):
        return [row for row in self.rows if not row.passed]

    def to_rows(self):
        return [row.to_dict() for row in self.rows]


def _certified_ge_log(value: Fraction, x: Fraction, precision: int, cap: int) -> bool:
    """value >= log(x), certified by refinement (x = 1 is exact)."""
    work = max(precision, DEFAULT_PRECISION)
    while True:
        ball = log_ball(x, work)
        res = ball.le(value)
        if res is not None:
            return res
        if work >= cap:
            raise PrecisionBudgetExceeded(
                f"comparison {value} >= log({x}) undecided within {cap} bits"
            )
        work *= 2


def _ball_row(name, lhs_make, rhs_make, relation, precision, cap) -> AuditRow:
    """Certified comparison row with precision doubling.  Makers map a
    precision to a RealBall or an exact Fraction."""
    ops = {"<=": "le", "<": "lt", ">=": "ge", ">": "gt"}[relation]
    work = max(precision, DEFAULT_PRECISION)
    while True:
        lhs = lhs_make(work) if callable(lhs_make) else lhs_make
        rhs = rhs_make(work) if callable(rhs_make) else rhs_make
        if isinstance(lhs, RealBall):
            res = getattr(lhs, ops)(rhs)
        elif isinstance(rhs, RealBall):
            flipped = {"le": "ge", "lt": "gt", "ge": "le", "gt": "lt"}[ops]
            res = getattr(rhs, flipped)(lhs)
        else:
            res = {"<=": lhs <= rhs, "<": lhs < rhs,
                   ">=": lhs >= rhs, ">": lhs > rhs}[relation]
        if res is not None:
            return AuditRow(name, lhs, rhs, relation, res)
        if work >= cap:
            raise PrecisionBudgetExceeded(f"row {name!r} undecided within {cap} bits")
        work *= 2


def audit_theorem1_params(m: int, n: int, r: int, D: int, h1, h2, c0: int,
                          precision: int = DEFAULT_PRECISION,
                          precision_cap: int = DEFAULT_PRECISION_CAP) -> AuditReport:
    """Derive the two-block proof parameters for a given c0 and row-check the
    inequality chain the construction requires.  Exact integer and power
    product comparisons wherever both sides are algebraic over the inputs,
    certified balls where a log enters."""
    for name, v in (("m", m), ("n", n), ("r", r), ("D", D)):
        if not isinstance(v, int) or v < 1:
            raise DomainError(f"{name} must be a positive integer")
    if r > min(m, n):
        raise DomainError(f"r = {r} exceeds min(m, n)")
    h1 = as_fraction(h1, "h1")
    h2 = as_fraction(h2, "h2")
    if h1 <= 0 or h2 <= 0:
        raise DomainError("h1, h2 must be positive")
    th = theta(m, n, r)
    Dh1, Dh2 = D * h1, D * h2

    pre = []
    pre.append(HypothesisRow("D*h1 >= (D*h2)^(1-theta)", f"(D*h2)^(1-theta), theta={th}",
                             Dh1, phi1_high_branch(Dh1, Dh2, 1 - th)))
    pre.append(HypothesisRow("h2 >= 1", Fraction(1), h2, h2 >= 1))
    pre.append(HypothesisRow("h2 >= log(D)", f"log({D})", h2,
                             _certified_ge_log(h2, Fraction(D), precision, precision_cap)))
    pre.append(HypothesisRow("h2 >= log(D*h1)", f"log({Dh1})", h2,
                             _certified_ge_log(h2, Dh1, precision, precision_cap)))
    pre.append(HypothesisRow("c0 >= 2", 2, c0, isinstance(c0, int) and c0 >= 2))
    report = HypothesisReport(tuple(pre))
    if not report.passed:
        bad = ", ".join(row.name for row in report.failing())
        raise HypothesisViolation(f"preconditions failed: {bad}", report=report)

    S = _pp_floor([(Fraction(c0 ** 3 * D) * h2, Fraction(r, n))])
    T = _pp_floor([(Fraction(c0 ** 2 * D) * h2, Fraction(r, m))])
    if phi1_high_branch(Dh1, Dh2, 1 - th):
        phi_factors = [(Dh1, Fraction(1)), (Dh2, th)]
    else:
        phi_factors = [(Dh1, 1 / (1 - th))]
    V_factors = [(Fraction(c0), 3 + 4 * th)] + phi_factors
    U_factors = [(Fraction(c0), 2 + 4 * th)] + phi_factors
    T0 = _pp_floor(U_factors + [(Fraction(c0 * D) * h2, Fraction(-1))])
    S0 = T0
    M = (2 * S + 1) ** n
    d = r + m
    log_B = c0 * h2                       # B1 = B2 = exp(c0 h2)
    log_A = Fraction(c0 * S) * h1         # A_i = exp(c0 S h1)

    rows = []
    smallest = min(T, S, T0, S0)
    rows.append(AuditRow("T0, S0, T, S >= 1", smallest, 1, ">=", smallest >= 1))
    rows.append(AuditRow("D*T0*log(B1) <= U", Fraction(D * T0) * log_B, _pp_ball(U_factors, precision),
                         "<=", _pp_cmp_fraction(U_factors, Fraction(D * T0) * log_B) >= 0))
    rows.append(AuditRow("D*S0*log(B2) <= U", Fraction(D * S0) * log_B, _pp_ball(U_factors, precision),
                         "<=", _pp_cmp_fraction(U_factors, Fraction(D * S0) * log_B) >= 0))
    rows.append(AuditRow("m*D*T*log(A) <= U", Fraction(m * D * T) * log_A, _pp_ball(U_factors, precision),
                         "<=", _pp_cmp_fraction(U_factors, Fraction(m * D * T) * log_A) >= 0))
    if D == 1:
        rows.append(AuditRow("U > c0*D*(log(D)+1)", _pp_ball(U_factors, precision),
                             Fraction(c0), ">", _pp_cmp_fraction(U_factors, Fraction(c0)) > 0))
    else:
        rows.append(_ball_row(
            "U > c0*D*(log(D)+1)",
            lambda p: _pp_ball(U_factors, p),
            lambda p: Fraction(c0 * D) * (log_ball(Fraction(D), p) + 1),
            ">", precision, precision_cap,
        ))
    binom_lhs = math.comb(T0 + r, r) * (T + 1) ** m
    Vr_times4 = [(Fraction(4), Fraction(1))] + [(b, e * r) for b, e in V_factors]
    rows.append(AuditRow("binom(T0+r, r)*(T+1)^m > 4*V^r", binom_lhs,
                         _pp_ball(Vr_times4, precision), ">",
                         _pp_cmp_fraction(Vr_times4, Fraction(binom_lhs)) < 0))
    lhs8 = S0 ** r * (2 * S + 1) ** n
    rhs8 = c0 * T0 ** r * T ** m
    rows.append(AuditRow("S0^r*(2S+1)^n > c0*T0^r*T^m", lhs8, rhs8, ">", lhs8 > rhs8))
    K = T0 + m * T + d * S0
    rows.append(AuditRow("log(B2) >= log(T0 + m*T + d*S0)", log_B,
                         log_ball(Fraction(K), precision), ">=",
                         _certified_ge_log(log_B, Fraction(K), precision, precision_cap)))

    params = ProofParameters(
        m=m, n=n, r=r, D=D, c0=c0, h1=h1, h2=h2, theta=th,
        S=S, T=T, T0=T0, S0=S0, M=M, d=d,
        U=_pp_ball(U_factors, precision), V=_pp_ball(V_factors, precision),
        log_A=log_A, log_B1=log_B, log_B2=log_B,
    )
    return AuditReport(params=params, rows=tuple(rows))


@dataclass(frozen=True)
class SweepResult:
    first_passing: Optional[int]
    reports: Tuple[Tuple[int, AuditReport], ...]


def audit_theorem1_sweep(m: int, n: int, r: int, D: int, h1, h2,
                         c0_values: Optional[Sequence[int]] = None,
                         precision: int = DEFAULT_PRECISION) -> SweepResult:
    """Run the parameter audit over a c0 sweep (powers of two up to 2^10 by
    default) and report the least fully passing c0, if any."""
    if c0_values is None:
        c0_values = [2 ** k for k in range(1, 11)]
    reports = []
    first = None
    for c0 in c0_values:
        rep = audit_theorem1_params(m, n, r, D, h1, h2, c0, precision=precision)
        reports.append((c0, rep))
        if first is None and rep.passed:
            first = c0
    return SweepResult(first_passing=first, reports=tuple(reports))


def gamma_parameters(m: int, n: int, r: int) -> Tuple[Fraction, Fraction, Fraction]:
    """The explicit admissible exponent triple (gamma_u, gamma_t, gamma_s)."""
    for name, v in (("m", m), ("n", n), ("r", r)):
        if not isinstance(v, int) or v < 1:
            raise DomainError(f"{name} must be a positive integer")
    gamma_u = Fraction(1)
    gamma_t = Fraction(r, m) + Fraction(1, 2 * m * m * n)
    gamma_s = Fraction(r, n) + Fraction(1, m * n * n)
    return gamma_u, gamma_t, gamma_s


def audit_theorem2_params(m: int, n: int, r: int, D: int, h, c0: int,
                          precision: int = DEFAULT_PRECISION,
                          precision_cap: int = DEFAULT_PRECISION_CAP) -> AuditReport:
    """Parameter audit for the single-height theorem: exact gamma and kappa
    rows, exact power-product comparisons for the box inequalities, certified
    balls where e enters through log A."""
    for name, v in (("m", m), ("n", n), ("r", r), ("D", D)):
        if not isinstance(v, int) or v < 1:
            raise DomainError(f"{name} must be a positive integer")
    if r > min(m, n):
        raise DomainError(f"r = {r} exceeds min(m, n)")
    if not isinstance(c0, int) or c0 < 2:
        raise DomainError("c0 must be an integer >= 2")
    h = as_fraction(h, "h")
    if h <= 0:
        raise DomainError("h must be positive")
    ka = kappa(m, n, r)                   # raises DegenerateExponent if mn <= r(m+n)
    gamma_u, gamma_t, gamma_s = gamma_parameters(m, n, r)
    gd = gamma_u - gamma_t - gamma_s
    Dh = D * h

    U_factors = [(Fraction(c0), gamma_u), (Dh, ka)]
    V_factors = [(Fraction(12 * m + 9), Fraction(1))] + U_factors
    T = _pp_floor([(Fraction(c0), gamma_t), (Dh, Fraction(r) * ka / m)])
    S = _pp_floor([(Fraction(c0), gamma_s), (Dh, Fraction(r) * ka / n)])
    B = Fraction(m * n) * Dh ** (m * n)   # B1 = B2, exact

    def log_A_ball(p):
        e_ball = RealBall(1, p).exp()
        return (_pp_ball([(Fraction(c0), gd)], p) * (Fraction(S) * h / m)) / e_ball

    rows = []
    rows.append(AuditRow("gamma_u > gamma_t + gamma_s", gamma_u, gamma_t + gamma_s,
                         ">", gamma_u > gamma_t + gamma_s))
    rows.append(AuditRow("r*gamma_u < m*gamma_t", r * gamma_u, m * gamma_t,
                         "<", r * gamma_u < m * gamma_t))
    rows.append(AuditRow("m*gamma_t < n*gamma_s", m * gamma_t, n * gamma_s,
                         "<", m * gamma_t < n * gamma_s))
    identity = r * ka * (Fraction(1, m) + Fraction(1, n)) + 1
    rows.append(AuditRow("r*kappa*(1/m+1/n) + 1 == kappa", identity, ka,
                         "==", identity == ka))
    smallest = min(T, S)
    rows.append(AuditRow("T, S >= 1", smallest, 1, ">=", smallest >= 1))
    nSh = Fraction(n * S) * h
    rows.append(_ball_row("n*S*h <= log(A)", nSh, log_A_ball, "<=",
                          precision, precision_cap))
    rows.append(_ball_row("e*n*S*h <= log(A)",
                          lambda p: RealBall(1, p).exp() * nSh, log_A_ball, "<=",
                          precision, precision_cap))
    rows.append(_ball_row("m*D*T*log(A) <= U",
                          lambda p: Fraction(m * D * T) * log_A_ball(p),
                          lambda p: _pp_ball(U_factors, p), "<=",
                          precision, precision_cap))
    box_lhs = (2 * T + 1) ** m
    Vr_times2 = [(Fraction(2), Fraction(1))] + [(b, e * r) for b, e in V_factors]
    rows.append(AuditRow("(2T+1)^m > 2*V^r", box_lhs, _pp_ball(Vr_times2, precision),
                         ">", _pp_cmp_fraction(Vr_times2, Fraction(box_lhs)) < 0))
    lhs_mt = math.factorial(m) * T ** m
    rhs_mt = (2 * S + 1) ** n
    rows.append(AuditRow("m!*T^m < (2S+1)^n", lhs_mt, rhs_mt, "<", lhs_mt < rhs_mt))
    lhs_s = S ** (n - 1)
    rhs_s = math.factorial(m) * T
    rows.append(AuditRow("S^(n-1) > m!*T", lhs_s, rhs_s, ">", lhs_s > rhs_s))

    params = ProofParameters(
        m=m, n=n, r=r, D=D, c0=c0, h=h, kappa=ka,
        gamma_u=gamma_u, gamma_t=gamma_t, gamma_s=gamma_s,
        S=S, T=T,
        U=_pp_ball(U_factors, precision), V=_pp_ball(V_factors, precision),
        log_A=log_A_ball(precision),
        log_B1=RealBall(B, precision).log(), log_B2=RealBall(B, precision).log(),
    )
    return AuditReport(params=params, rows=tuple(rows))
