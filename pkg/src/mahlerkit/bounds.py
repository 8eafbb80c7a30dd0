"""Explicit transcendence lower bounds and the exponent algebra behind them.

Every evaluator works in log space: the returned object carries a certified
enclosure of log(bound) and exponentiates on demand, so values at the
exp(-10^6) scale never underflow.  Exponents theta and kappa stay exact
rationals; powers with fractional exponents go through ball arithmetic with
precision doubling.

Unspecified "there exists a constant" values are explicit inputs and the
results are labeled conjectural or parametric accordingly.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

from .balls import RealBall
from .errors import (
    DegenerateExponent,
    DomainError,
    HypothesisViolation,
    MissingConstant,
    PrecisionBudgetExceeded,
)

DEFAULT_PRECISION = 64
DEFAULT_PRECISION_CAP = 1 << 20
# refinement target for fractional powers: relative radius below 2^-20
_REL_TARGET = Fraction(1, 1 << 20)

Real = Union[int, float, str, Fraction]


def as_fraction(x, name: str = "value") -> Fraction:
    """Exact rational from int, Fraction, float (exact binary), or 'p/q' text."""
    if isinstance(x, bool):
        raise DomainError(f"{name} must be a number, got bool")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (float, str)):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainError(f"cannot read {name} = {x!r} as a rational") from exc
    raise DomainError(f"{name} must be rational-like, got {type(x).__name__}")


def _positive(x, name: str) -> Fraction:
    v = as_fraction(x, name)
    if v <= 0:
        raise DomainError(f"{name} must be positive, got {v}")
    return v


def _positive_int(x, name: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or x < 1:
        raise DomainError(f"{name} must be a positive integer, got {x!r}")
    return x


def log_ball(x: Fraction, prec: int) -> RealBall:
    # log 1 = 0 exactly; everything else through the certified log
    if x == 1:
        return RealBall(0, prec)
    return RealBall(x, prec).log()


def _refined(make: Callable[[int], RealBall], precision: int,
             precision_cap: int) -> RealBall:
    work = max(DEFAULT_PRECISION, precision)
    while True:
        ball = make(work)
        if ball.is_exact or ball.relative_radius() <= _REL_TARGET:
            return ball
        if work >= precision_cap:
            raise PrecisionBudgetExceeded(
                f"no enclosure with relative radius <= 2^-20 within {precision_cap} bits"
            )
        work *= 2


# ---------------------------------------------------------------------------
# context and reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundContext:
    """Shared parameter bag for the bound evaluators.

    m, n, r are the linear-form shape (n defaults to 1 when a formula has no
    second block), D the field degree, h / h1 / h2 the height parameters a
    formula consumes, and constants the user-supplied named constants.
    """

    m: int = 1
    n: int = 1
    r: int = 1
    D: int = 1
    h: Optional[Real] = None
    h1: Optional[Real] = None
    h2: Optional[Real] = None
    constants: Mapping[str, Real] = field(default_factory=dict)

    def __post_init__(self):
        _positive_int(self.m, "m")
        _positive_int(self.n, "n")
        _positive_int(self.r, "r")
        _positive_int(self.D, "D")
        if self.r > min(self.m, self.n):
            raise DomainError(f"r = {self.r} exceeds min(m, n) = {min(self.m, self.n)}")
        for nm in ("h", "h1", "h2"):
            v = getattr(self, nm)
            if v is not None:
                object.__setattr__(self, nm, _positive(v, nm))
        object.__setattr__(
            self,
            "constants",
            {k: as_fraction(v, f"constant {k}") for k, v in dict(self.constants).items()},
        )

    def need(self, name: str) -> Fraction:
        v = getattr(self, name)
        if v is None:
            raise DomainError(f"this formula needs {name}")
        return v

    def constant(self, name: str) -> Fraction:
        try:
            return self.constants[name]
        except KeyError:
            raise MissingConstant(
                f"constant {name!r} is not specified; supply it explicitly"
            ) from None


@dataclass(frozen=True)
class HypothesisRow:
    name: str
    required: object
    supplied: object
    passed: bool


@dataclass(frozen=True)
class HypothesisReport:
    rows: tuple

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def failing(self):
        return [row for row in self.rows if not row.passed]

    def to_rows(self):
        def show(v):
            return v.nstr() if isinstance(v, RealBall) else str(v)

        return [
            {
                "name": r.name,
                "required": show(r.required),
                "supplied": show(r.supplied),
                "pass": r.passed,
            }
            for r in self.rows
        ]


@dataclass(frozen=True)
class BoundValue:
    """A lower bound, held as a certified enclosure of its natural log."""

    formula: str
    inputs: dict
    log_value: RealBall
    branch: Optional[str] = None
    conjectural: bool = False
    hypothesis_report: Optional[HypothesisReport] = None

    @property
    def value(self) -> RealBall:
        return self.log_value.exp()

    def __repr__(self):
        tag = " conjectural" if self.conjectural else ""
        return f"BoundValue(log={self.log_value.nstr()},{tag} {self.formula})"


# ---------------------------------------------------------------------------
# exponent algebra
# ---------------------------------------------------------------------------


def theta(m: int, n: int, r: int) -> Fraction:
    """r(m+n)/(mn), exact.  Values >= 1 signal the degenerate regime."""
    _positive_int(m, "m")
    _positive_int(n, "n")
    _positive_int(r, "r")
    return Fraction(r * (m + n), m * n)


def kappa(m: int, n: int, r: int) -> Fraction:
    """mn/(mn - r(m+n)), exact; defined only when mn > r(m+n)."""
    _positive_int(m, "m")
    _positive_int(n, "n")
    _positive_int(r, "r")
    gap = m * n - r * (m + n)
    if gap <= 0:
        raise DegenerateExponent(
            f"kappa undefined: mn = {m * n} <= r(m+n) = {r * (m + n)}"
        )
    return Fraction(m * n, gap)


def phi1_high_branch(Dh1: Fraction, Dh2: Fraction, one_minus_theta: Fraction) -> bool:
    # Dh1 >= Dh2^(1-theta), decided exactly: both sides positive, so compare
    # Dh1^q against Dh2^p for 1-theta = p/q with q > 0 (p may be <= 0)
    p = one_minus_theta.numerator
    q = one_minus_theta.denominator
    return Dh1 ** q >= Dh2 ** p


def phi1(ctx: BoundContext, precision: int = DEFAULT_PRECISION,
         precision_cap: int = DEFAULT_PRECISION_CAP):
    """Piecewise height aggregate for the two-block bound.

    Returns (ball, branch) where branch is "high" for Dh1*(Dh2)^theta (fires
    when Dh1 >= (Dh2)^(1-theta), decided exactly) and "low" for
    (Dh1)^(1/(1-theta)) otherwise.
    """
    th = theta(ctx.m, ctx.n, ctx.r)
    Dh1 = ctx.D * ctx.need("h1")
    Dh2 = ctx.D * ctx.need("h2")
    if phi1_high_branch(Dh1, Dh2, 1 - th):
        ball = _refined(
            lambda p: RealBall(Dh1, p) * RealBall(Dh2, p).pow_fraction(th),
            precision, precision_cap,
        )
        return ball, "high"
    if th >= 1:
        raise DegenerateExponent(
            f"theta = {th} >= 1: the low branch exponent 1/(1-theta) is undefined"
        )
    expo = 1 / (1 - th)
    ball = _refined(
        lambda p: RealBall(Dh1, p).pow_fraction(expo), precision, precision_cap
    )
    return ball, "low"


def phi2(ctx: BoundContext, precision: int = DEFAULT_PRECISION,
         precision_cap: int = DEFAULT_PRECISION_CAP) -> RealBall:
    """(Dh)^kappa as a certified ball."""
    ka = kappa(ctx.m, ctx.n, ctx.r)
    Dh = ctx.D * ctx.need("h")
    return _refined(lambda p: RealBall(Dh, p).pow_fraction(ka),
                    precision, precision_cap)


# ---------------------------------------------------------------------------
# certified comparisons for hypothesis rows
# ---------------------------------------------------------------------------


def _ge_certified(supplied: Fraction, required, precision: int,
                  precision_cap: int):
    """supplied >= required, certified.  `required` is a Fraction, a RealBall,
    or a maker prec -> RealBall (refined until the comparison resolves)."""
    if isinstance(required, Fraction):
        return supplied >= required, required
    if isinstance(required, RealBall):
        return supplied >= required.upper, required
    work = max(DEFAULT_PRECISION, precision)
    while True:
        ball = required(work)
        if supplied >= ball.upper:
            return True, ball
        if supplied < ball.lower:
            return False, ball
        if work >= precision_cap:
            raise PrecisionBudgetExceeded(
                f"comparison against {ball.nstr()} undecided within {precision_cap} bits"
            )
        work *= 2


def _report(rows) -> HypothesisReport:
    return HypothesisReport(tuple(HypothesisRow(*row) for row in rows))


# ---------------------------------------------------------------------------
# the bound evaluators
# ---------------------------------------------------------------------------


def bound_mahler_log(a: int, exponent: Real = 40,
                     precision: int = DEFAULT_PRECISION,
                     precision_cap: int = DEFAULT_PRECISION_CAP) -> BoundValue:
    """Lower bound a^(-exponent * log log a) for the distance from log a to
    the nearest integer.  Needs a >= 3 so log log a > 0."""
    if not isinstance(a, int) or isinstance(a, bool) or a <= 2:
        raise DomainError(f"a must be an integer >= 3, got {a!r}")
    e = as_fraction(exponent, "exponent")
    if e < 0:
        raise DomainError(f"exponent must be nonnegative, got {e}")

    def make(p):
        la = RealBall(a, p).log()
        return -(RealBall(e, p) * la.log() * la)

    log_value = _refined(make, precision, precision_cap) if e else RealBall(0, precision)
    return BoundValue(
        formula="a^(-exponent*log(log(a)))",
        inputs={"a": a, "exponent": e},
        log_value=log_value,
    )


def bound_mahler_exp(b: int, exponent: Real = 40,
                     precision: int = DEFAULT_PRECISION,
                     precision_cap: int = DEFAULT_PRECISION_CAP) -> BoundValue:
    """Lower bound b^(-exponent * b) for the distance from e^b to the nearest
    integer, b >= 2."""
    if not isinstance(b, int) or isinstance(b, bool) or b < 2:
        raise DomainError(f"b must be an integer >= 2, got {b!r}")
    e = as_fraction(exponent, "exponent")
    if e < 0:
        raise DomainError(f"exponent must be nonnegative, got {e}")

    def make(p):
        return -(RealBall(e * b, p) * RealBall(b, p).log())

    log_value = _refined(make, precision, precision_cap) if e else RealBall(0, precision)
    return BoundValue(
        formula="b^(-exponent*b)",
        inputs={"b": b, "exponent": e},
        log_value=log_value,
    )


_NW_COEFF = 2 * 10 ** 6


def validate_nw(ctx: BoundContext, h_alpha, lambda_abs, h_beta,
                precision: int = DEFAULT_PRECISION,
                precision_cap: int = DEFAULT_PRECISION_CAP) -> HypothesisReport:
    """Row-by-row check of the admissibility list for the two-height bound:
    h1 against the alpha data, h2 against the beta data and the log floors."""
    D = ctx.D
    h1 = ctx.need("h1")
    h2 = ctx.need("h2")
    rows = []

    def row(name, supplied, required):
        ok, shown = _ge_certified(supplied, required, precision, precision_cap)
        rows.append((name, shown, supplied, ok))

    row("h1 >= h(alpha)", h1, h_alpha if isinstance(h_alpha, RealBall) else as_fraction(h_alpha, "h_alpha"))
    lam = lambda_abs if isinstance(lambda_abs, RealBall) else as_fraction(lambda_abs, "lambda_abs")
    row("h1 >= |lambda|/D", h1, lam / D)
    row("h1 >= 1/D", h1, Fraction(1, D))
    row("h2 >= h(beta)", h2, h_beta if isinstance(h_beta, RealBall) else as_fraction(h_beta, "h_beta"))
    row("h2 >= log(D*h1)", h2, lambda p: log_ball(D * h1, p))
    row("h2 >= log(D)", h2, lambda p: log_ball(Fraction(D), p))
    row("h2 >= 1", h2, Fraction(1))
    return _report(rows)


def bound_nw(ctx: BoundContext, precision: int = DEFAULT_PRECISION,
             precision_cap: int = DEFAULT_PRECISION_CAP,
             h_alpha=None, lambda_abs=None, h_beta=None) -> BoundValue:
    """exp(-2*10^6 * D^3 * h1 * h2 * (log D + 1)).

    When alpha/beta data is supplied the hypothesis list is validated first
    and a failing list raises HypothesisViolation carrying the report.
    """
    D = ctx.D
    h1 = ctx.need("h1")
    h2 = ctx.need("h2")
    report = None
    if h_alpha is not None or lambda_abs is not None or h_beta is not None:
        if h_alpha is None or lambda_abs is None or h_beta is None:
            raise DomainError("validation needs all of h_alpha, lambda_abs, h_beta")
        report = validate_nw(ctx, h_alpha, lambda_abs, h_beta, precision, precision_cap)
        if not report.passed:
            bad = ", ".join(r.name for r in report.failing())
            raise HypothesisViolation(f"hypothesis rows failed: {bad}", report=report)

    def make(p):
        return -(RealBall(_NW_COEFF * D ** 3 * h1 * h2, p) * (log_ball(Fraction(D), p) + 1))

    return BoundValue(
        formula="exp(-2*10^6 * D^3 * h1 * h2 * (log(D) + 1))",
        inputs={"D": D, "h1": h1, "h2": h2},
        log_value=_refined(make, precision, precision_cap),
        hypothesis_report=report,
    )


def bound_feldman(m: int, D: int, h: Real, c: Real,
                  precision: int = DEFAULT_PRECISION,
                  precision_cap: int = DEFAULT_PRECISION_CAP) -> BoundValue:
    """exp(-c * D^(2+1/m) * (h + log D + 1) / (log D + 1)), parametric in c."""
    _positive_int(m, "m")
    _positive_int(D, "D")
    hv = as_fraction(h, "h")
    if hv < 0:
        raise DomainError(f"h must be nonnegative, got {hv}")
    cv = _positive(c, "c")
    expo = 2 + Fraction(1, m)

    def make(p):
        logD = log_ball(Fraction(D), p)
        power = RealBall(D, p).pow_fraction(expo)
        return -(RealBall(cv, p) * power * (logD + (hv + 1)) / (logD + 1))

    return BoundValue(
        formula="exp(-c * D^(2+1/m) * (h + log(D) + 1) / (log(D) + 1))",
        inputs={"m": m, "D": D, "h": hv, "c": cv},
        log_value=_refined(make, precision, precision_cap),
        conjectural=True,
    )


def bound_rw(m: int, D: int, h1: Real, h2: Real, c: Real,
             precision: int = DEFAULT_PRECISION,
             precision_cap: int = DEFAULT_PRECISION_CAP) -> BoundValue:
    """exp(-c * D^(2+1/m) * h1 * h2 * (log h1 + log h2 + 2 log D + 1)^(1/m)).

    The interior log sum must be positive; a certified nonpositive interior
    is a DomainError.
    """
    _positive_int(m, "m")
    _positive_int(D, "D")
    h1v = _positive(h1, "h1")
    h2v = _positive(h2, "h2")
    cv = _positive(c, "c")

    def interior(p):
        return log_ball(h1v, p) + log_ball(h2v, p) + 2 * log_ball(Fraction(D), p) + 1

    # certify the sign first, refining past any straddle
    work = max(DEFAULT_PRECISION, precision)
    while True:
        inner = interior(work)
        if inner.is_positive():
            break
        if not inner.contains_zero():
            raise DomainError(
                f"log h1 + log h2 + 2 log D + 1 <= 0 (enclosure {inner.nstr()})"
            )
        if work >= precision_cap:
            raise PrecisionBudgetExceeded(
                f"interior sign undecided within {precision_cap} bits"
            )
        work *= 2

    expo = 2 + Fraction(1, m)
    root = Fraction(1, m)

    def make(p):
        return -(
            RealBall(cv * h1v * h2v, p)
            * RealBall(D, p).pow_fraction(expo)
            * interior(p).pow_fraction(root)
        )

    return BoundValue(
        formula="exp(-c * D^(2+1/m) * h1 * h2 * (log(h1)+log(h2)+2*log(D)+1)^(1/m))",
        inputs={"m": m, "D": D, "h1": h1v, "h2": h2v, "c": cv},
        log_value=_refined(make, precision, precision_cap),
        conjectural=True,
    )


def bound_conjecture(which: int, ctx: BoundContext,
                     precision: int = DEFAULT_PRECISION,
                     precision_cap: int = DEFAULT_PRECISION_CAP,
                     h_alpha=None, h_beta=None, lambda_abs=None) -> BoundValue:
    """The three conjectural strengths:

      0: exp(-c0 * D^2 * h)       (single-log case; optional hypothesis list)
      1: exp(-c1 * m * D^2 * h)
      2: exp(-c2 * m * D^(1+1/m) * h)
    """
    if which not in (0, 1, 2):
        raise DomainError(f"which must be 0, 1 or 2, got {which!r}")
    h = ctx.need("h")
    D, m = ctx.D, ctx.m
    cname = f"c{which}"
    cv = ctx.constant(cname)
    if cv <= 0:
        raise DomainError(f"{cname} must be positive, got {cv}")

    report = None
    if which == 0 and any(x is not None for x in (h_alpha, h_beta, lambda_abs)):
        if h_alpha is None or h_beta is None or lambda_abs is None:
            raise DomainError("validation needs all of h_alpha, h_beta, lambda_abs")
        rows = []

        def row(name, supplied, required):
            ok, shown = _ge_certified(supplied, required, precision, precision_cap)
            rows.append((name, shown, supplied, ok))

        row("h >= h(alpha)", h, h_alpha if isinstance(h_alpha, RealBall) else as_fraction(h_alpha, "h_alpha"))
        row("h >= h(beta)", h, h_beta if isinstance(h_beta, RealBall) else as_fraction(h_beta, "h_beta"))
        lam = lambda_abs if isinstance(lambda_abs, RealBall) else as_fraction(lambda_abs, "lambda_abs")
        row("h >= |lambda|/D", h, lam / D)
        row("h >= 1/D", h, Fraction(1, D))
        report = _report(rows)
        if not report.passed:
            bad = ", ".join(r.name for r in report.failing())
            raise HypothesisViolation(f"hypothesis rows failed: {bad}", report=report)

    if which == 0:
        coeff, formula = cv * D * D * h, "exp(-c0 * D^2 * h)"
        inputs = {"D": D, "h": h, "c0": cv}
    elif which == 1:
        coeff, formula = cv * m * D * D * h, "exp(-c1 * m * D^2 * h)"
        inputs = {"m": m, "D": D, "h": h, "c1": cv}
    else:
        inputs = {"m": m, "D": D, "h": h, "c2": cv}
        formula = "exp(-c2 * m * D^(1+1/m) * h)"
        expo = 1 + Fraction(1, m)
        log_value = _refined(
            lambda p: -(RealBall(cv * m * h, p) * RealBall(D, p).pow_fraction(expo)),
            precision, precision_cap,
        )
        return BoundValue(formula=formula, inputs=inputs, log_value=log_value,
                          conjectural=True, hypothesis_report=report)

    return BoundValue(
        formula=formula,
        inputs=inputs,
        log_value=RealBall(-coeff, max(DEFAULT_PRECISION, precision)),
        conjectural=True,
        hypothesis_report=report,
    )


def liouville_linear_form(m: int, D: int, S: int, h1: Real,
                          precision: int = DEFAULT_PRECISION,
                          precision_cap: int = DEFAULT_PRECISION_CAP) -> BoundValue:
    """Elementary fallback bound 2^(-D) * exp(-m*D*S*h1) for a nonzero
    integer combination s1 l1 + ... + sm lm with |s_i| <= S."""
    _positive_int(m, "m")
    _positive_int(D, "D")
    _positive_int(S, "S")
    h1v = as_fraction(h1, "h1")
    if h1v < 0:
        raise DomainError(f"h1 must be nonnegative, got {h1v}")

    def make(p):
        return -(RealBall(D, p) * RealBall(2, p).log()) - RealBall(m * D * S * h1v, p)

    return BoundValue(
        formula="2^(-D) * exp(-m*D*S*h1)",
        inputs={"m": m, "D": D, "S": S, "h1": h1v},
        log_value=_refined(make, precision, precision_cap),
    )
