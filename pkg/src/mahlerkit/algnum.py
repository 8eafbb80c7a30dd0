"""Algebraic numbers, Mahler measures, and Weil/projective heights over Q.

The measure of an integer polynomial is computed two independent ways:

  * mahler_measure_roots: |lc(f)| * prod max(1, |rho_i|) over certified root
    enclosures -- a rigorous ball;
  * mahler_measure_integral: exp of the mean of log|f| on the unit circle by
    trapezoidal quadrature with node doubling -- spectrally accurate but not
    certified; its radius is the last doubling delta, an error estimate.

Keeping both routes separate is deliberate: their agreement is the
cross-check, so neither may call the other.

Heights are exact over Q: h(p/q) = log max(|p|, |q|) in lowest terms, and
projectively the log sup-norm of the canonical coprime integer
representative.  For tuples of rationals the subadditivity bound
h(1:t_1:...:t_N) <= sum h(t_i) is checked with exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .balls import ComplexBall, RealBall, _mp_prec, to_fraction
from .errors import DomainError, QuadratureDivergence, ZeroDenominator, ZeroVector
from .intpoly import IntPolynomial
from .roots import MAX_PREC_DEFAULT, RootEnclosure, isolate_roots, refine_enclosure

RationalVector = Sequence[Fraction]


# ---------------------------------------------------------------------------
# Mahler measure
# ---------------------------------------------------------------------------


def mahler_measure_roots(
    f: IntPolynomial, precision: int = 53, max_prec: int = MAX_PREC_DEFAULT
) -> RealBall:
    """Certified ball around M(f), radius <= 2^(8-precision) * midpoint."""
    if f.degree < 1:
        raise DomainError("measure needs degree >= 1")
    target_rel = Fraction(1, 2 ** (precision - 8))
    work = precision + 16
    while True:
        encs = isolate_roots(f, precision=work, max_prec=max_prec)
        ball = RealBall(abs(f.leading_coefficient), work + 16)
        for enc in encs:
            ball = ball * enc.abs_ball().max1() ** enc.multiplicity
        if ball.is_positive() and ball.rad <= target_rel * ball.mid:
            return ball
        work *= 2
        if work > max_prec:
            from .errors import RootIsolationFailure

            raise RootIsolationFailure("measure ball did not reach target radius")


def mahler_measure_integral(
    f: IntPolynomial,
    quadrature_points: int = 64,
    precision: int = 53,
    max_points: int = 1 << 18,
) -> RealBall:
    """Quadrature estimate of M(f); the radius is an error estimate only.

    Trapezoidal sums on the unit circle converge spectrally for root-free
    neighbourhoods of the circle; nodes are doubled until two successive
    estimates agree.  A node landing exactly on a root shifts the node count
    by one.  QuadratureDivergence signals estimates that stop improving
    (root on or hugging the circle).
    """
    if f.degree < 1:
        raise DomainError("measure needs degree >= 1")
    n = max(16, 2 * (f.degree + 1), int(quadrature_points))
    atol = max(2.0 ** (-precision), 1e-14)
    prev = _circle_mean_log(f, n, precision)
    history: list[float] = []
    while True:
        n2 = 2 * n
        cur = _circle_mean_log(f, n2, precision)
        delta = abs(float(cur - prev))
        history.append(delta)
        if delta <= atol:
            break
        if (
            len(history) >= 4
            and delta > 8 * atol
            and all(history[-k] > 0.5 * history[-k - 1] for k in range(1, 4))
        ):
            raise QuadratureDivergence(
                f"doubling stalled at {n2} nodes (delta {delta:.3e})"
            )
        n = n2
        if n > max_points:
            raise QuadratureDivergence(f"no convergence within {max_points} nodes")
        prev = cur
    est = float(mpmath.exp(cur))
    spread = Fraction(est) * (Fraction(history[-1] if history else 0.0) + Fraction(atol))
    return RealBall.from_endpoints(
        Fraction(est) - spread, Fraction(est) + spread, max(precision, 53)
    )


def _circle_mean_log(f: IntPolynomial, n: int, precision: int):
    """Mean of log|f| over n equispaced circle nodes.

    A node landing exactly on a root first shifts all nodes by a half step
    (keeps the composite-trapezoid accuracy), then perturbs the node count.
    """
    bumps = 0
    offset = 0.0
    while True:
        if precision <= 53:
            k = np.arange(n) + offset
            nodes = np.exp((2j * np.pi / n) * k)
            vals = np.abs(np.polyval(list(reversed(f.coeffs)), nodes))
            hit = not np.all(vals > 0)
            if not hit:
                return mpmath.mpf(float(np.mean(np.log(vals))))
        else:
            with _mp_prec(precision + 16):
                total = mpmath.mpf(0)
                hit = False
                for k in range(n):
                    z = mpmath.expjpi((2 * (mpmath.mpf(k) + offset)) / n)
                    v = abs(_eval_mpc(f.coeffs, z))
                    if v == 0:
                        hit = True
                        break
                    total += mpmath.log(v)
                if not hit:
                    return total / n
        if offset == 0.0:
            offset = 0.5
            continue
        n += 1
        bumps += 1
        if bumps > 4:
            raise QuadratureDivergence("nodes keep landing on roots")


def _eval_mpc(coeffs, z):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


# ---------------------------------------------------------------------------
# Algebraic numbers
# ---------------------------------------------------------------------------


class AlgebraicNumber:
    """A root of an irreducible integer polynomial, pinned by a certified
    isolating rectangle.

    Construction goes through `root_of` (full isolation) or `from_rational`.
    Irreducibility is verified exactly through degree 3; above that the
    constructor trusts the caller's contract but still checks that the
    selector is compatible (0 in f(selector))."""

    __slots__ = ("minpoly", "root_selector")

    def __init__(self, minpoly: IntPolynomial, root_selector: ComplexBall):
        if minpoly.is_irreducible() is False:
            raise ValueError(f"{minpoly.to_string()!r} is reducible over Q")
        probe = minpoly.eval_ball(root_selector)
        if not probe.contains_zero():
            raise ValueError("selector rectangle cannot contain a root")
        self.minpoly = minpoly
        self.root_selector = root_selector

    def __setattr__(self, name, value):
        if name in ("minpoly", "root_selector") and hasattr(self, "root_selector"):
            raise AttributeError("AlgebraicNumber is immutable")
        object.__setattr__(self, name, value)

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @classmethod
    def from_rational(cls, x, precision: int = 64) -> "AlgebraicNumber":
        x = Fraction(x)
        poly = IntPolynomial([-x.numerator, x.denominator])
        ball = ComplexBall(RealBall(x, precision), RealBall(0, precision))
        return cls(poly, ball)

    @classmethod
    def root_of(
        cls, poly: IntPolynomial, which=None, precision: int = 64
    ) -> "AlgebraicNumber":
        """Select a root of an irreducible polynomial.

        `which` is an index into the roots sorted by decreasing real then
        decreasing imaginary midpoint (default 0: rightmost root), or a
        complex number whose nearest root is taken."""
        encs = isolate_roots(poly, precision=precision)
        if not encs:
            raise DomainError("constant polynomial has no roots")
        ordered = sorted(
            encs, key=lambda e: (-e.ball.re.mid, -e.ball.im.mid)
        )
        if which is None:
            pick = ordered[0]
        elif isinstance(which, int):
            pick = ordered[which]
        else:
            zr, zi = Fraction(float(which.real)), Fraction(float(which.imag))
            pick = min(
                ordered,
                key=lambda e: (e.ball.re.mid - zr) ** 2 + (e.ball.im.mid - zi) ** 2,
            )
        return cls(poly, pick.ball)

    def is_rational(self) -> bool:
        return self.degree == 1

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise DomainError("not a rational number")
        c0, c1 = self.minpoly.coeffs
        return Fraction(-c0, c1)

    def refine(self, precision: int) -> ComplexBall:
        """A tighter selector for the same root (also returned)."""
        enc = refine_enclosure(
            self.minpoly, RootEnclosure(self.root_selector, 1), precision
        )
        return enc.ball

    def height(self, precision: int = 53) -> RealBall:
        return weil_height(self, precision)

    def log(self, precision: int = 64, max_prec: int = MAX_PREC_DEFAULT) -> ComplexBall:
        """Principal log as a ComplexBall; refines until certifiable."""
        if self.is_rational() and self.rational_value() == 0:
            raise DomainError("log of zero")
        work = precision
        ball = self.root_selector
        while True:
            try:
                return ball.log()
            except DomainError:
                work *= 2
                if work > max_prec:
                    from .errors import PrecisionBudgetExceeded

                    raise PrecisionBudgetExceeded(
                        "selector cannot be pushed off the branch cut"
                    )
                ball = self.refine(work)

    def __repr__(self):
        return f"AlgebraicNumber({self.minpoly.to_string()} @ {self.root_selector.nstr(8)})"


# ---------------------------------------------------------------------------
# Heights
# ---------------------------------------------------------------------------


def weil_height(alpha, precision: int = 53) -> RealBall:
    """h(alpha) = (1/deg) log M(minpoly); exact closed form for rationals."""
    if isinstance(alpha, (int, Fraction)):
        x = Fraction(alpha)
        return height_rational(x.numerator, x.denominator, precision)
    if not isinstance(alpha, AlgebraicNumber):
        raise TypeError("weil_height takes an AlgebraicNumber, int, or Fraction")
    if alpha.is_rational():
        x = alpha.rational_value()
        return height_rational(x.numerator, x.denominator, precision)
    measure = mahler_measure_roots(alpha.minpoly, precision=precision)
    # M >= 1 for primitive integer polynomials, so the enclosure may be
    # clamped before taking the log
    lo = max(Fraction(1), measure.lower)
    clamped = RealBall.from_endpoints(lo, max(lo, measure.upper), measure.prec)
    return clamped.log() / alpha.degree


def height_rational(p: int, q: int = 1, precision: int = 53) -> RealBall:
    """log max(|p|, |q|) after reduction; ZeroDenominator when q = 0."""
    if q == 0:
        raise ZeroDenominator("height of p/0")
    x = Fraction(p, q)
    m = max(abs(x.numerator), abs(x.denominator))
    return RealBall(m, max(precision, 53)).log()


def canonical_integers(entries: Sequence) -> tuple[int, ...]:
    """Coprime integer representative with positive first nonzero entry."""
    fracs = [Fraction(e) for e in entries]
    if all(f == 0 for f in fracs):
        raise ZeroVector("all coordinates vanish")
    den = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * den) for f in fracs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        g = -g
    return tuple(v // g for v in ints)


class ProjectivePoint:
    """Tuple of rationals up to scaling, stored with its canonical coprime
    integer representative (positive first nonzero entry)."""

    __slots__ = ("entries", "canonical")

    def __init__(self, entries: Sequence):
        fracs = tuple(_parse_rational(e) for e in entries)
        if not fracs:
            raise ZeroVector("empty coordinate tuple")
        canon = canonical_integers(fracs)
        object.__setattr__(self, "entries", fracs)
        object.__setattr__(self, "canonical", canon)

    def __setattr__(self, name, value):
        raise AttributeError("ProjectivePoint is immutable")

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def max_abs(self) -> int:
        return max(abs(v) for v in self.canonical)

    def height(self, precision: int = 53) -> RealBall:
        return RealBall(self.max_abs(), max(precision, 53)).log()

    def __repr__(self):
        return "ProjectivePoint(" + " : ".join(str(v) for v in self.canonical) + ")"


def _parse_rational(e) -> Fraction:
    if isinstance(e, str):
        return Fraction(e.strip())
    if isinstance(e, (int, Fraction)):
        return Fraction(e)
    if isinstance(e, float):
        return Fraction(e)
    raise TypeError(f"cannot read {e!r} as an exact rational")


def projective_height_rational(point: ProjectivePoint, precision: int = 53) -> RealBall:
    """log of the sup-norm of the canonical integer representative."""
    if not isinstance(point, ProjectivePoint):
        point = ProjectivePoint(point)
    return point.height(precision)


@dataclass(frozen=True)
class SubadditivityReport:
    """Outcome of the height inequality h(concat) <= h(p1) + h(p2)."""

    lhs: RealBall
    rhs: RealBall
    lhs_max: int
    rhs_product: int
    passed: bool
    tolerance: float


def height_subadditivity_check(
    p1: ProjectivePoint, p2: ProjectivePoint, precision: int = 53, tolerance: float = 0.0
) -> SubadditivityReport:
    """Concatenate two leading-1 points and compare heights.

    (1:u_1:...:u_N) + (1:v_1:...:v_M) -> (1:u_1:...:u_N:v_1:...:v_M); the
    inequality h(concat) <= h(p1) + h(p2) is decided exactly on the canonical
    integer representatives (max |concat| <= max|p1| * max|p2|) and reported
    with balls as well."""
    u = _affine(p1)
    v = _affine(p2)
    concat = ProjectivePoint([Fraction(1), *u, *v])
    lhs_max = concat.max_abs()
    rhs_product = _normalized(p1).max_abs() * _normalized(p2).max_abs()
    lhs = concat.height(precision)
    rhs = _normalized(p1).height(precision) + _normalized(p2).height(precision)
    passed = lhs_max <= rhs_product and bool(
        lhs.lower <= rhs.upper + Fraction(tolerance)
    )
    return SubadditivityReport(lhs, rhs, lhs_max, rhs_product, passed, tolerance)


def _affine(p: ProjectivePoint) -> tuple[Fraction, ...]:
    lead = p.entries[0]
    if lead == 0:
        raise DomainError("point must have a nonzero leading coordinate")
    return tuple(e / lead for e in p.entries[1:])


def _normalized(p: ProjectivePoint) -> ProjectivePoint:
    return ProjectivePoint([Fraction(1), *_affine(p)])
