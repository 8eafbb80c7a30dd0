"""Certified complex root isolation for integer polynomials.

Strategy: numerical seeds (Durand-Kerner via mpmath.polyroots) are upgraded
to rigorous enclosures with the residual bound

    min_i |z - rho_i|  <=  n * |f(z)| / |f'(z)|      (f squarefree, degree n)

which follows from f'(z)/f(z) = sum 1/(z - rho_i).  Evaluating |f(z)| from
above and |f'(z)| from below in ball arithmetic makes the disk around each
seed a certified container of at least one root; n pairwise disjoint disks
for n roots then contain exactly one root each.  Failure at the working
precision triggers doubling up to a cap.

Multiplicities come from an exact squarefree (Yun) decomposition, so the
enclosures always carry the true multiplicity of the root they isolate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .balls import ComplexBall, RealBall, _mp_prec, sqrt_upper, to_fraction
from .errors import RootIsolationFailure
from .intpoly import IntPolynomial

DEGREE_CAP = 64
MAX_PREC_DEFAULT = 1 << 16


@dataclass(frozen=True)
class RootEnclosure:
    """One isolated root: rectangle certified to contain exactly one root of
    the (squarefree part of the) polynomial, with its multiplicity in the
    original polynomial."""

    ball: ComplexBall
    multiplicity: int

    def abs_ball(self) -> RealBall:
        return abs(self.ball)


def isolate_roots(
    f: IntPolynomial,
    precision: int = 53,
    max_prec: int = MAX_PREC_DEFAULT,
    degree_cap: int = DEGREE_CAP,
) -> list[RootEnclosure]:
    """All complex roots of f as certified enclosures with multiplicities.

    Enclosure quality: each rectangle fits in a disk of radius
    <= 2^-precision * max(1, |root|).
    """
    if f.degree > degree_cap:
        raise RootIsolationFailure(
            f"degree {f.degree} exceeds the isolation cap {degree_cap}"
        )
    out: list[RootEnclosure] = []
    for g, mult in f.squarefree_decomposition():
        for ball in _isolate_squarefree(g, precision, max_prec):
            out.append(RootEnclosure(ball, mult))
    return out


def _isolate_squarefree(g: IntPolynomial, precision: int, max_prec: int) -> list[ComplexBall]:
    n = g.degree
    if n == 0:
        return []
    if n == 1:
        c0, c1 = g.coeffs
        root = Fraction(-c0, c1)
        b = RealBall(root, max(precision + 8, 64))
        return [ComplexBall(b, RealBall(0, b.prec))]
    work = max(64, precision + 16)
    while work <= max_prec:
        balls = _try_isolate(g, n, work, precision)
        if balls is not None:
            return balls
        work *= 2
    raise RootIsolationFailure(
        f"no certified isolation of {g.to_string()!r} within {max_prec} bits"
    )


def _try_isolate(g: IntPolynomial, n: int, work: int, precision: int):
    try:
        with _mp_prec(work):
            seeds = mp.polyroots(
                [mpmath.mpf(c) for c in reversed(g.coeffs)],
                maxsteps=50 + 10 * n,
                extraprec=work // 2,
            )
    except (mp.NoConvergence, ZeroDivisionError):
        return None
    if len(seeds) != n:
        return None
    dcoeffs = g.derivative_coeffs()
    disks: list[tuple[Fraction, Fraction, Fraction]] = []  # (re, im, radius)
    for z in seeds:
        # keep the seed's full precision: no mpc() round trip
        if isinstance(z, mpmath.mpf):
            zre, zim = z, mpmath.mpf(0)
        else:
            zre, zim = z.real, z.imag
        zb = ComplexBall(RealBall(zre, work), RealBall(zim, work))
        fz = g.eval_ball(zb)
        fpz = _eval_raw(dcoeffs, zb)
        fz_hi = fz.max_abs_upper()
        fp_lo = fpz.min_abs_lower()
        if fp_lo == 0:
            return None
        radius = n * fz_hi / fp_lo
        zr, zi = to_fraction(zre), to_fraction(zim)
        if radius > _target_radius(zr, zi, precision):
            return None
        disks.append((zr, zi, radius))
    # pairwise disjointness: exact rational comparison of squared distances
    for i in range(n):
        for j in range(i + 1, n):
            dx = disks[i][0] - disks[j][0]
            dy = disks[i][1] - disks[j][1]
            rr = disks[i][2] + disks[j][2]
            if dx * dx + dy * dy <= rr * rr:
                return None
    prec_out = max(precision + 8, 64)
    return [
        ComplexBall(
            RealBall.from_endpoints(zr - r, zr + r, prec_out),
            RealBall.from_endpoints(zi - r, zi + r, prec_out),
        )
        for (zr, zi, r) in disks
    ]


def _target_radius(zr: Fraction, zi: Fraction, precision: int) -> Fraction:
    cap = Fraction(1, 2 ** precision)
    return cap * max(Fraction(1), sqrt_upper(zr * zr + zi * zi))


def _eval_raw(coeffs, z):
    acc = z * 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def refine_enclosure(
    f: IntPolynomial, enclosure: RootEnclosure, precision: int, max_prec: int = MAX_PREC_DEFAULT
) -> RootEnclosure:
    """Tighter enclosure of the same root (intersection certifies identity)."""
    fresh = isolate_roots(f, precision, max_prec)
    best = None
    for cand in fresh:
        if cand.ball.distance_lower(enclosure.ball) == 0:
            if best is not None:
                raise RootIsolationFailure("enclosure does not isolate a single root")
            best = cand
    if best is None:
        raise RootIsolationFailure("no refined root intersects the enclosure")
    return RootEnclosure(
        ComplexBall(
            best.ball.re.intersect(enclosure.ball.re),
            best.ball.im.intersect(enclosure.ball.im),
        ),
        best.multiplicity,
    )
