"""Certified real and complex enclosures on top of mpmath interval arithmetic.

A RealBall is a closed interval [lo, hi] tagged with the working precision
that produced it.  Endpoints are binary floats stored exactly; every
arithmetic operation rounds outward at the result's working precision, so the
inclusion property holds: the result interval contains the exact image of
every point of the inputs.  A ComplexBall is an axis-aligned rectangle made
of two RealBalls.

Exactness guarantees used throughout the package:
  * construction from int / mpf stores the value with zero width; Fractions
    and decimal strings are enclosed with outward rounding;
  * endpoints convert losslessly to Fraction, so certified comparisons reduce
    to exact rational comparisons.

Comparisons come in certified form: lt/gt/le/ge return True or False only
when the intervals decide the question and None when the answer is not
determined at this width.  Callers that need a decision bump precision and
retry (see search.certify).
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from fractions import Fraction

import mpmath
from mpmath import iv, mp
from mpmath.libmp import from_rational, to_rational

DEFAULT_PREC = 64

_NONFINITE = None  # populated below


@contextmanager
def _iv_prec(bits):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


@contextmanager
def _mp_prec(bits):
    old = mp.prec
    mp.prec = bits
    try:
        yield
    finally:
        mp.prec = old


def _nonfinite():
    global _NONFINITE
    if _NONFINITE is None:
        _NONFINITE = (mpmath.libmp.finf, mpmath.libmp.fninf, mpmath.libmp.fnan)
    return _NONFINITE


def _raw_to_fraction(raw) -> Fraction:
    if raw in _nonfinite():
        raise OverflowError("endpoint is not finite")
    p, q = to_rational(raw)
    return Fraction(p, q)


def to_fraction(x) -> Fraction:
    """Exact conversion of int/float/Fraction/mpf to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, mpmath.mpf):
        return _raw_to_fraction(x._mpf_)
    raise TypeError(f"no exact rational value for {type(x).__name__}")


def fraction_to_mpf(x: Fraction, bits: int, rounding: str) -> mpmath.mpf:
    """Fraction -> mpf at `bits` bits with rounding 'f' (down), 'c' (up), 'n'."""
    # make_mpf wraps the raw value without re-rounding at the ambient precision
    return mp.make_mpf(from_rational(x.numerator, x.denominator, bits, rounding))


_SQRT_SCALE = 1 << 64


def sqrt_lower(x: Fraction) -> Fraction:
    """Certified lower bound for sqrt(x), tight to ~2^-64 relative."""
    if x < 0:
        raise ValueError("negative operand")
    if x == 0:
        return Fraction(0)
    n = x.numerator * x.denominator * _SQRT_SCALE * _SQRT_SCALE
    return Fraction(math.isqrt(n), x.denominator * _SQRT_SCALE)


def sqrt_upper(x: Fraction) -> Fraction:
    if x < 0:
        raise ValueError("negative operand")
    if x == 0:
        return Fraction(0)
    n = x.numerator * x.denominator * _SQRT_SCALE * _SQRT_SCALE
    s = math.isqrt(n)
    if s * s < n:
        s += 1
    return Fraction(s, x.denominator * _SQRT_SCALE)


def hypot_upper(a: Fraction, b: Fraction) -> Fraction:
    return sqrt_upper(a * a + b * b)


def hypot_lower(a: Fraction, b: Fraction) -> Fraction:
    return sqrt_lower(a * a + b * b)


class RealBall:
    """Interval enclosure of a real number with a working precision tag."""

    __slots__ = ("_v", "prec")

    def __init__(self, value, prec: int = DEFAULT_PREC):
        if isinstance(value, RealBall):
            self._v = value._v
            self.prec = max(prec, value.prec)
            return
        if isinstance(value, Fraction):
            self._v = _iv_from_fractions(value, value, prec)
            self.prec = prec
            return
        with _iv_prec(prec):
            self._v = iv.mpf(value)
        self.prec = prec

    # -- construction ----------------------------------------------------------

    @classmethod
    def from_iv(cls, v, prec: int) -> "RealBall":
        b = object.__new__(cls)
        b._v = v
        b.prec = prec
        return b

    @classmethod
    def from_endpoints(cls, lo, hi, prec: int = DEFAULT_PREC) -> "RealBall":
        """Enclosure [lo, hi] with outward rounding of non-dyadic endpoints."""
        lo = to_fraction(lo)
        hi = to_fraction(hi)
        if lo > hi:
            raise ValueError("endpoints out of order")
        return cls.from_iv(_iv_from_fractions(lo, hi, prec), prec)

    # -- exact endpoint access ---------------------------------------------------

    @property
    def lower(self) -> Fraction:
        lo, _ = self._v._mpi_
        return _raw_to_fraction(lo)

    @property
    def upper(self) -> Fraction:
        _, hi = self._v._mpi_
        return _raw_to_fraction(hi)

    @property
    def is_finite(self) -> bool:
        lo, hi = self._v._mpi_
        bad = _nonfinite()
        return lo not in bad and hi not in bad

    @property
    def mid(self) -> Fraction:
        return (self.lower + self.upper) / 2

    @property
    def rad(self) -> Fraction:
        return (self.upper - self.lower) / 2

    @property
    def is_exact(self) -> bool:
        lo, hi = self._v._mpi_
        return lo == hi

    def relative_radius(self) -> Fraction:
        m = abs(self.mid)
        if m == 0:
            return Fraction(0) if self.rad == 0 else Fraction(10) ** 30
        return self.rad / m

    def mid_float(self) -> float:
        return float(self.mid)

    def rad_float(self) -> float:
        return float(self.rad)

    def mid_mpf(self, bits: int | None = None) -> mpmath.mpf:
        return fraction_to_mpf(self.mid, bits or self.prec, "n")

    # -- arithmetic ---------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RealBall):
            return other
        if isinstance(other, (int, float, mpmath.mpf, Fraction)):
            return RealBall(other, self.prec)
        return NotImplemented

    def _binop(self, other, op):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        prec = max(self.prec, o.prec)
        with _iv_prec(prec):
            return RealBall.from_iv(op(self._v, o._v), prec)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.contains_zero():
            raise ZeroDivisionError("division by an interval containing zero")
        return self._binop(o, lambda a, b: a / b)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __neg__(self):
        return RealBall.from_iv(-self._v, self.prec)

    def __abs__(self):
        with _iv_prec(self.prec):
            return RealBall.from_iv(abs(self._v), self.prec)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** (-k))
        with _iv_prec(self.prec):
            return RealBall.from_iv(self._v ** k, self.prec)

    # -- elementary functions -------------------------------------------------------

    def log(self) -> "RealBall":
        if not self.is_positive():
            from .errors import DomainError

            raise DomainError("log needs a ball with positive lower endpoint")
        with _iv_prec(self.prec):
            return RealBall.from_iv(iv.log(self._v), self.prec)

    def exp(self) -> "RealBall":
        with _iv_prec(self.prec):
            return RealBall.from_iv(iv.exp(self._v), self.prec)

    def sqrt(self) -> "RealBall":
        if self.lower < 0:
            from .errors import DomainError

            raise DomainError("sqrt needs a nonnegative ball")
        with _iv_prec(self.prec):
            return RealBall.from_iv(iv.sqrt(self._v), self.prec)

    def pow_fraction(self, e) -> "RealBall":
        """x^(p/q): exact repeated squaring for q = 1, else exp((p/q) log x)."""
        e = Fraction(e)
        if e.denominator == 1:
            return self ** e.numerator
        if not self.is_positive():
            from .errors import DomainError

            raise DomainError("rational power needs a positive base")
        prec = self.prec
        with _iv_prec(prec):
            ee = iv.mpf(e.numerator) / iv.mpf(e.denominator)
            return RealBall.from_iv(iv.exp(ee * iv.log(self._v)), prec)

    def max1(self) -> "RealBall":
        """Enclosure of max(1, x), exact casework on the endpoints."""
        lo, hi = self.lower, self.upper
        if lo >= 1:
            return self
        if hi <= 1:
            return RealBall(1, self.prec)
        return RealBall.from_endpoints(Fraction(1), hi, self.prec)

    def intersect(self, other: "RealBall") -> "RealBall":
        lo = max(self.lower, other.lower)
        hi = min(self.upper, other.upper)
        if lo > hi:
            from .errors import DomainError

            raise DomainError("empty intersection")
        return RealBall.from_endpoints(lo, hi, max(self.prec, other.prec))

    # -- predicates and certified comparisons ------------------------------------------

    def contains_zero(self) -> bool:
        return self.lower <= 0 <= self.upper

    def is_positive(self) -> bool:
        return self.lower > 0

    def is_negative(self) -> bool:
        return self.upper < 0

    def contains(self, x) -> bool:
        if isinstance(x, RealBall):
            return self.lower <= x.lower and x.upper <= self.upper
        x = to_fraction(x)
        return self.lower <= x <= self.upper

    def overlaps(self, other: "RealBall") -> bool:
        return not (self.upper < other.lower or other.upper < self.lower)

    def _cmp_bounds(self, other):
        if isinstance(other, RealBall):
            return other.lower, other.upper
        x = to_fraction(other)
        return x, x

    def lt(self, other):
        lo, hi = self._cmp_bounds(other)
        if self.upper < lo:
            return True
        if self.lower >= hi:
            return False
        return None

    def gt(self, other):
        lo, hi = self._cmp_bounds(other)
        if self.lower > hi:
            return True
        if self.upper <= lo:
            return False
        return None

    def le(self, other):
        lo, hi = self._cmp_bounds(other)
        if self.upper <= lo:
            return True
        if self.lower > hi:
            return False
        return None

    def ge(self, other):
        lo, hi = self._cmp_bounds(other)
        if self.lower >= hi:
            return True
        if self.upper < lo:
            return False
        return None

    # -- misc ------------------------------------------------------------------------

    def at_prec(self, bits: int) -> "RealBall":
        """Same enclosure, re-tagged; endpoints are kept exactly."""
        return RealBall.from_iv(self._v, bits)

    def __reduce__(self):
        lo, hi = self._v._mpi_
        return (_unpickle_ball, (tuple(lo), tuple(hi), self.prec))

    def nstr(self, digits: int = 12) -> str:
        if not self.is_finite:
            return str(self._v)
        m = mpmath.nstr(fraction_to_mpf(self.mid, max(self.prec, 64), "n"), digits)
        r = mpmath.nstr(fraction_to_mpf(self.rad, 64, "c"), 3) if self.rad else "0"
        return f"{m} +/- {r}"

    def __repr__(self):
        return f"RealBall({self.nstr()} @{self.prec}b)"


def _iv_from_fractions(lo: Fraction, hi: Fraction, prec: int):
    guard = prec + 8
    lo_m = mp.make_mpf(from_rational(lo.numerator, lo.denominator, guard, "f"))
    hi_m = mp.make_mpf(from_rational(hi.numerator, hi.denominator, guard, "c"))
    with _iv_prec(guard):
        return iv.mpf([lo_m, hi_m])


def _unpickle_ball(lo_raw, hi_raw, prec):
    # rebuild at enough bits that neither endpoint re-rounds
    bad = _nonfinite()
    bits = max(
        prec,
        lo_raw[3] if lo_raw not in bad else 0,
        hi_raw[3] if hi_raw not in bad else 0,
    ) + 8
    with _iv_prec(bits):
        v = iv.mpf([mp.make_mpf(lo_raw), mp.make_mpf(hi_raw)])
    return RealBall.from_iv(v, prec)


class ComplexBall:
    """Axis-aligned rectangle enclosure re + i*im of a complex number."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None, prec: int = DEFAULT_PREC):
        if im is None:
            if isinstance(re, ComplexBall):
                self.re, self.im = re.re, re.im
                return
            if isinstance(re, (complex, mpmath.mpc)):
                self.re = RealBall(re.real, prec)
                self.im = RealBall(re.imag, prec)
                return
            self.re = RealBall(re, prec)
            self.im = RealBall(0, prec)
            return
        self.re = re if isinstance(re, RealBall) else RealBall(re, prec)
        self.im = im if isinstance(im, RealBall) else RealBall(im, prec)

    @property
    def prec(self) -> int:
        return max(self.re.prec, self.im.prec)

    @classmethod
    def from_mid_rad(cls, z, r, prec: int = DEFAULT_PREC) -> "ComplexBall":
        """Rectangle covering the disk |w - z| <= r."""
        r = to_fraction(r) if not isinstance(r, RealBall) else r.upper
        if r < 0:
            raise ValueError("negative radius")
        zr = to_fraction(z.real)
        zi = to_fraction(z.imag)
        return cls(
            RealBall.from_endpoints(zr - r, zr + r, prec),
            RealBall.from_endpoints(zi - r, zi + r, prec),
        )

    def _coerce(self, other):
        if isinstance(other, ComplexBall):
            return other
        if isinstance(other, (int, float, Fraction, mpmath.mpf, complex, mpmath.mpc)):
            return ComplexBall(other, prec=self.prec)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ComplexBall(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ComplexBall(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ComplexBall(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = o.abs_squared()
        if d.contains_zero():
            raise ZeroDivisionError("division by a rectangle containing zero")
        num = self * o.conjugate()
        return ComplexBall(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __neg__(self):
        return ComplexBall(-self.re, -self.im)

    def conjugate(self) -> "ComplexBall":
        return ComplexBall(self.re, -self.im)

    def abs_squared(self) -> RealBall:
        return self.re ** 2 + self.im ** 2

    def __abs__(self) -> RealBall:
        return self.abs_squared().sqrt()

    def contains(self, z) -> bool:
        if isinstance(z, ComplexBall):
            return self.re.contains(z.re) and self.im.contains(z.im)
        if isinstance(z, (complex, mpmath.mpc)):
            return self.re.contains(to_fraction(z.real)) and self.im.contains(
                to_fraction(z.imag)
            )
        return self.re.contains(to_fraction(z)) and self.im.contains(Fraction(0))

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    @property
    def is_exact(self) -> bool:
        return self.re.is_exact and self.im.is_exact

    def mid_mpc(self, bits: int | None = None) -> mpmath.mpc:
        b = bits or self.prec
        with _mp_prec(b):
            return mpmath.mpc(
                fraction_to_mpf(self.re.mid, b, "n"),
                fraction_to_mpf(self.im.mid, b, "n"),
            )

    def rad_upper(self) -> Fraction:
        """Radius of a disk centred at the midpoint covering the rectangle."""
        return hypot_upper(self.re.rad, self.im.rad)

    def distance_lower(self, other: "ComplexBall") -> Fraction:
        """Certified lower bound for |self - other| (0 when rectangles meet)."""
        dre = _interval_gap(self.re.lower, self.re.upper, other.re.lower, other.re.upper)
        dim = _interval_gap(self.im.lower, self.im.upper, other.im.lower, other.im.upper)
        return hypot_lower(dre, dim)

    def min_abs_lower(self) -> Fraction:
        """Certified lower bound for min |z| over the rectangle."""
        zero = Fraction(0)
        dre = _interval_gap(self.re.lower, self.re.upper, zero, zero)
        dim = _interval_gap(self.im.lower, self.im.upper, zero, zero)
        return hypot_lower(dre, dim)

    def max_abs_upper(self) -> Fraction:
        """Certified upper bound for max |z| over the rectangle."""
        mre = max(abs(self.re.lower), abs(self.re.upper))
        mim = max(abs(self.im.lower), abs(self.im.upper))
        return hypot_upper(mre, mim)

    def log(self) -> "ComplexBall":
        """Principal-branch log enclosure.

        Exact negative reals get the branch value (log|x|, pi).  Any other
        rectangle must avoid the cut (-inf, 0]; then the enclosure is a
        Lipschitz disk around log(z0) for the rounded midpoint z0:
        |log z - log z0| <= |z - z0| / min|zeta| along the segment, which
        stays inside the convex hull of the rectangle and z0.  The only
        uncertified ingredient is mpmath's log at the single point z0, padded
        by a generous multiple of its ulp.
        """
        from .errors import DomainError

        prec = self.prec
        delta = self.min_abs_lower()
        if delta == 0:
            raise DomainError("log of a rectangle touching zero")
        if self.im.is_exact and self.im.mid == 0 and self.re.upper < 0:
            mag = abs(self.re).log()
            with _iv_prec(prec):
                pi_ball = RealBall.from_iv(+iv.pi, prec)
            return ComplexBall(mag, pi_ball)
        if self.re.lower <= 0 and self.im.contains_zero():
            raise DomainError("rectangle straddles the branch cut of log")
        work = prec + 24
        z0 = self.mid_mpc(work)
        zr = to_fraction(z0.real)
        zi = to_fraction(z0.imag)
        off_re = abs(self.re.mid - zr)
        off_im = abs(self.im.mid - zi)
        reach = hypot_upper(self.re.rad + off_re, self.im.rad + off_im)
        delta_eff = delta - hypot_upper(off_re, off_im)
        if delta_eff <= 0:
            raise DomainError("rectangle too wide relative to its distance from zero")
        with _mp_prec(work):
            w = mpmath.log(z0)
        wr = to_fraction(w.real)
        wi = to_fraction(w.imag)
        ulp_pad = (abs(wr) + abs(wi) + 1) / (Fraction(2) ** (work - 8))
        slack = reach / delta_eff + ulp_pad
        return ComplexBall(
            RealBall.from_endpoints(wr - slack, wr + slack, prec),
            RealBall.from_endpoints(wi - slack, wi + slack, prec),
        )

    def nstr(self, digits: int = 12) -> str:
        return f"({self.re.nstr(digits)}) + ({self.im.nstr(digits)})j"

    def __repr__(self):
        return f"ComplexBall({self.nstr()})"


def _interval_gap(alo, ahi, blo, bhi) -> Fraction:
    """Distance between two closed intervals (0 if they intersect)."""
    if ahi < blo:
        return blo - ahi
    if bhi < alo:
        return alo - bhi
    return Fraction(0)
