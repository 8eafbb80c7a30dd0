"""Command-line front end wiring every library capability to one executable.

Output discipline: exact rationals print as p/q strings, certified balls as
midpoint/radius pairs, and any bound whose log-value sits below -10^6 stays
in log space.  Exit codes: 0 success, 1 usage or input errors, 2 a stated
hypothesis list failed, 3 a certified comparison hit the precision cap.
Tabular subcommands (scan-log, scan-exp, mahler-seq, probe, cf) default to
CSV, everything else to JSON; JSON documents validate against the schemas
shipped under mahlerkit/schemas/.
"""

import argparse
import csv
import json
import math
import re
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from importlib import resources
from typing import Callable, Iterable, Optional

from .algnum import (
    AlgebraicNumber,
    ProjectivePoint,
    mahler_measure_integral,
    mahler_measure_roots,
    weil_height,
)
from .balls import RealBall
from .bounds import (
    BoundContext,
    BoundValue,
    bound_conjecture,
    bound_feldman,
    bound_mahler_exp,
    bound_mahler_log,
    bound_nw,
    bound_rw,
    liouville_linear_form,
    phi1,
    phi2,
)
from .errors import (
    DomainError,
    HypothesisViolation,
    MahlerkitError,
    PrecisionBudgetExceeded,
    RationalDetected,
)
from .intpoly import IntPolynomial
from .matrixlab import (
    DEFAULT_BOX_BUDGET,
    LogMatrix,
    RationalMatrix,
    audit_theorem1_params,
    audit_theorem1_sweep,
    audit_theorem2_params,
    lemma1_bound,
    lemma2_factor,
    lemma3_count,
    lic_check_box,
    make_lic_matrix,
)
from .search import (
    convergents,
    mahler_problem_probe,
    mahler_sequence,
    scan_exp,
    scan_log,
    write_csv,
)

DEFAULT_PRECISION = 64
DEFAULT_PRECISION_CAP = 1 << 20
LOG_SPACE_CUTOFF = -(10 ** 6)


# ---------------------------------------------------------------------------
# config and serialization helpers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation: the chosen subcommand plus the shared knobs."""

    subcommand: str
    inputs: tuple
    out: Optional[str]
    fmt: Optional[str]
    precision: int
    precision_cap: int
    jobs: int
    budget: int

    def __post_init__(self):
        for name in ("precision", "precision_cap", "jobs", "budget"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise DomainError(f"--{name.replace('_', '-')} must be a positive integer")
        if self.precision_cap < self.precision:
            raise DomainError("--precision-cap must be at least --precision")


def _frac(s, name: str = "value") -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot read {name} {s!r} as p/q") from exc


def _float_up(x: Fraction) -> float:
    # never understate a radius when rounding it to a float
    f = float(x)
    if Fraction(f) < x:
        f = math.nextafter(f, math.inf)
    return f


def _ball(b: RealBall) -> dict:
    return {"mid": b.mid_float(), "rad": _float_up(b.rad)}


def _in_json(v):
    if isinstance(v, bool) or isinstance(v, int):
        return int(v)
    return str(v)


def _hyp_json(report):
    if report is None:
        return None
    return {"pass": report.passed, "rows": report.to_rows()}


def load_schema(name: str) -> dict:
    """Schema document for one output family, by file stem."""
    ref = resources.files("mahlerkit.schemas").joinpath(f"{name}.schema.json")
    return json.loads(ref.read_text())


# ---------------------------------------------------------------------------
# outputs
# ---------------------------------------------------------------------------


@dataclass
class Output:
    schema: str
    payload: Callable[[], dict]
    columns: Optional[tuple] = None
    rows: Optional[Callable[[], Iterable[tuple]]] = None
    stream: Optional[Iterable] = None      # ScanRecord iterator, CSV fast path
    plot: bool = False
    default_format: str = "json"


def _emit(out: Output, cfg: RunConfig) -> None:
    fmt = cfg.fmt or out.default_format
    if out.plot and fmt != "csv":
        raise DomainError("--plot-data emits plain columns; drop --format json")
    own = cfg.out is not None
    fh = open(cfg.out, "w", newline="") if own else sys.stdout
    try:
        if fmt == "json":
            json.dump(out.payload(), fh, indent=2)
            fh.write("\n")
        elif out.stream is not None:
            write_csv(out.stream, fh, plot=out.plot)
        elif out.columns is not None:
            writer = csv.writer(fh)
            writer.writerow(out.columns)
            for row in out.rows():
                writer.writerow(row)
        else:
            raise DomainError(
                f"{cfg.subcommand} emits JSON only; drop --format csv"
            )
        fh.flush()
    finally:
        if own:
            fh.close()


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_height(cfg: RunConfig, ns) -> Output:
    if (ns.value is None) == (ns.poly is None):
        raise DomainError("give either a rational VALUE or --poly")
    if ns.value is not None:
        x = _frac(ns.value)
        alpha = AlgebraicNumber.from_rational(x, precision=cfg.precision)
        label = str(x)
    else:
        poly = IntPolynomial.from_string(ns.poly)
        alpha = AlgebraicNumber.root_of(poly, which=ns.which, precision=cfg.precision)
        label = f"root {ns.which} of {poly.to_string()}"
    h = weil_height(alpha, precision=cfg.precision)
    doc = {"input": label, "degree": alpha.degree, "height": _ball(h)}
    return Output("height", lambda: doc)


def _cmd_measure(cfg: RunConfig, ns) -> Output:
    poly = IntPolynomial.from_string(ns.poly)
    by_roots = by_integral = None
    if ns.method in ("roots", "both"):
        by_roots = mahler_measure_roots(poly, precision=cfg.precision)
    if ns.method in ("integral", "both"):
        by_integral = mahler_measure_integral(poly, precision=cfg.precision)
    consistent = None
    if by_roots is not None and by_integral is not None:
        consistent = not (by_roots.upper < by_integral.lower
                          or by_integral.upper < by_roots.lower)
    doc = {
        "polynomial": poly.to_string(),
        "degree": poly.degree,
        "roots": _ball(by_roots) if by_roots is not None else None,
        "integral": _ball(by_integral) if by_integral is not None else None,
        "consistent": consistent,
    }
    return Output("measure", lambda: doc)


def _cmd_proj(cfg: RunConfig, ns) -> Output:
    point = ProjectivePoint([_frac(c, "coordinate") for c in ns.coords])
    doc = {
        "point": [str(c) for c in point.entries],
        "canonical": [int(v) for v in point.canonical],
        "height": _ball(point.height(cfg.precision)),
    }
    return Output("proj_height", lambda: doc)


def _bound_doc(bv: BoundValue) -> dict:
    log_space = bv.log_value.upper < LOG_SPACE_CUTOFF
    doc = {
        "formula": bv.formula,
        "inputs": {k: _in_json(v) for k, v in bv.inputs.items()},
        "log_value": _ball(bv.log_value),
        "log_space": log_space,
        "branch": bv.branch,
        "conjectural": bv.conjectural,
        "hypothesis": _hyp_json(bv.hypothesis_report),
    }
    if not log_space:
        doc["value"] = _ball(bv.value)
    return doc


def _opt_frac(v, name):
    return None if v is None else _frac(v, name)


def _cmd_bound(cfg: RunConfig, ns) -> Output:
    p, cap = cfg.precision, cfg.precision_cap
    fam = ns.family
    if fam == "mahler-log":
        bv = bound_mahler_log(ns.a, _frac(ns.exponent, "exponent"), p, cap)
    elif fam == "mahler-exp":
        bv = bound_mahler_exp(ns.b, _frac(ns.exponent, "exponent"), p, cap)
    elif fam == "nw":
        ctx = BoundContext(D=ns.D, h1=_frac(ns.h1, "h1"), h2=_frac(ns.h2, "h2"))
        bv = bound_nw(ctx, p, cap,
                      h_alpha=_opt_frac(ns.h_alpha, "h-alpha"),
                      lambda_abs=_opt_frac(ns.lambda_abs, "lambda-abs"),
                      h_beta=_opt_frac(ns.h_beta, "h-beta"))
    elif fam == "feldman":
        bv = bound_feldman(ns.m, ns.D, _frac(ns.h, "h"), _frac(ns.c, "c"), p, cap)
    elif fam == "rw":
        bv = bound_rw(ns.m, ns.D, _frac(ns.h1, "h1"), _frac(ns.h2, "h2"),
                      _frac(ns.c, "c"), p, cap)
    elif fam in ("conj0", "conj1", "conj2"):
        which = int(fam[-1])
        ctx = BoundContext(m=ns.m, D=ns.D, h=_frac(ns.h, "h"),
                           constants={f"c{which}": _frac(ns.c, "c")})
        kw = {}
        if which == 0:
            kw = dict(h_alpha=_opt_frac(ns.h_alpha, "h-alpha"),
                      h_beta=_opt_frac(ns.h_beta, "h-beta"),
                      lambda_abs=_opt_frac(ns.lambda_abs, "lambda-abs"))
        bv = bound_conjecture(which, ctx, p, cap, **kw)
    elif fam == "liouville":
        bv = liouville_linear_form(ns.m, ns.D, ns.S, _frac(ns.h1, "h1"), p, cap)
    elif fam == "lemma1":
        if (ns.B is None) == (ns.logB is None):
            raise DomainError("give exactly one of --B, --logB")
        v = lemma1_bound(ns.n, ns.D, B=_opt_frac(ns.B, "B"),
                         logB=_opt_frac(ns.logB, "logB"), precision=p)
        bv = BoundValue(
            formula="n^(-n*D) * B^(-n*(n+1)*D)",
            inputs={"n": ns.n, "D": ns.D,
                    **({"B": _frac(ns.B, "B")} if ns.B is not None
                       else {"logB": _frac(ns.logB, "logB")})},
            log_value=v.log(),
        )
    elif fam == "phi1":
        ctx = BoundContext(m=ns.m, n=ns.n, r=ns.r, D=ns.D,
                           h1=_frac(ns.h1, "h1"), h2=_frac(ns.h2, "h2"))
        ball, branch = phi1(ctx, p, cap)
        doc = {
            "formula": "Dh1*(Dh2)^theta if Dh1 >= (Dh2)^(1-theta) else (Dh1)^(1/(1-theta))",
            "inputs": {k: _in_json(getattr(ctx, k)) for k in ("m", "n", "r", "D", "h1", "h2")},
            "value": _ball(ball),
            "branch": branch,
        }
        return Output("aggregate", lambda: doc)
    elif fam == "phi2":
        ctx = BoundContext(m=ns.m, n=ns.n, r=ns.r, D=ns.D, h=_frac(ns.h, "h"))
        ball = phi2(ctx, p, cap)
        doc = {
            "formula": "(D*h)^kappa",
            "inputs": {k: _in_json(getattr(ctx, k)) for k in ("m", "n", "r", "D", "h")},
            "value": _ball(ball),
            "branch": None,
        }
        return Output("aggregate", lambda: doc)
    else:                                   # pragma: no cover - argparse guards
        raise DomainError(f"unknown bound family {fam!r}")
    doc = _bound_doc(bv)
    return Output("bound", lambda: doc)


def _read_matrix(path: str) -> RationalMatrix:
    with open(path) as fh:
        return RationalMatrix.from_csv(fh.read())


def _cmd_lemma2(cfg: RunConfig, ns) -> Output:
    cert = lemma2_factor(_read_matrix(ns.infile), ns.r)
    doc = cert.to_json()
    return Output("certificate", lambda: doc)


def _log_matrix(cfg: RunConfig, ns) -> LogMatrix:
    if ns.infile is not None:
        if ns.m is not None or ns.n is not None:
            raise DomainError("give either --in or --m/--n, not both")
        return LogMatrix(_read_matrix(ns.infile).entries)
    if ns.m is None or ns.n is None:
        raise DomainError("give --m and --n, or --in with a matrix CSV")
    return make_lic_matrix(ns.m, ns.n)


def _cmd_lic(cfg: RunConfig, ns) -> Output:
    L = _log_matrix(cfg, ns)
    res = lic_check_box(L, ns.T, ns.S, budget=cfg.budget, jobs=cfg.jobs)
    doc = {
        "shape": list(L.shape),
        "box": list(res.box),
        "pass": res.passed,
        "witness": [list(res.witness[0]), list(res.witness[1])] if res.witness else None,
        "pairs_checked": res.pairs_checked,
        "method": res.method,
    }
    return Output("lic", lambda: doc)


def _cmd_count(cfg: RunConfig, ns) -> Output:
    L = _log_matrix(cfg, ns)
    t = tuple(int(v) for v in ns.t.split(","))
    count = lemma3_count(L, t, ns.S, budget=cfg.budget)
    floor = (2 * ns.S + 1) ** (L.shape[1] - 1)
    doc = {
        "shape": list(L.shape),
        "t": list(t),
        "S": ns.S,
        "count": count,
        "floor": floor,
        "floor_pass": count >= floor,
    }
    return Output("count", lambda: doc)


def _params_json(params) -> dict:
    def show(v):
        if v is None or isinstance(v, int):
            return v
        if isinstance(v, Fraction):
            return str(v)
        if isinstance(v, RealBall):
            return _ball(v)
        return str(v)

    return {f.name: show(getattr(params, f.name)) for f in fields(params)}


def _audit_doc(theorem: int, report) -> dict:
    return {
        "theorem": theorem,
        "params": _params_json(report.params),
        "rows": report.to_rows(),
        "pass": report.passed,
    }


def _cmd_audit1(cfg: RunConfig, ns) -> Output:
    h1, h2 = _frac(ns.h1, "h1"), _frac(ns.h2, "h2")
    if ns.sweep:
        res = audit_theorem1_sweep(ns.m, ns.n, ns.r, ns.D, h1, h2,
                                   precision=cfg.precision)
        doc = {
            "theorem": 1,
            "first_passing": res.first_passing,
            "sweep": [
                {"c0": c0, "pass": rep.passed,
                 "failing": [row.name for row in rep.failing()]}
                for c0, rep in res.reports
            ],
        }
        return Output("sweep", lambda: doc)
    if ns.c0 is None:
        raise DomainError("give --c0 or --sweep")
    rep = audit_theorem1_params(ns.m, ns.n, ns.r, ns.D, h1, h2, ns.c0,
                                precision=cfg.precision,
                                precision_cap=cfg.precision_cap)
    doc = _audit_doc(1, rep)
    return Output("audit", lambda: doc)


def _cmd_audit2(cfg: RunConfig, ns) -> Output:
    rep = audit_theorem2_params(ns.m, ns.n, ns.r, ns.D, _frac(ns.h, "h"), ns.c0,
                                precision=cfg.precision,
                                precision_cap=cfg.precision_cap)
    doc = _audit_doc(2, rep)
    return Output("audit", lambda: doc)


def _record_json(r) -> dict:
    if r.error is not None:
        return {"key": r.key, "error": r.error, "precision": r.precision_used}
    return {
        "key": r.key,
        "midpoint": r.value.mid_float(),
        "radius": _float_up(r.value.rad),
        "nearest": r.nearest,
        "distance": _ball(r.distance),
        "exponent": _ball(r.exponent) if r.exponent is not None else None,
        "flag": r.flagged,
        "precision": r.precision_used,
    }


def _scan_output(kind: str, ref: Fraction, records) -> Output:
    def payload():
        return {"kind": kind, "exponent_ref": str(ref),
                "records": [_record_json(r) for r in records]}

    return Output("scan", payload, stream=records, default_format="csv")


def _cmd_scan_log(cfg: RunConfig, ns) -> Output:
    ref = _frac(ns.exponent_ref, "exponent-ref")
    records = scan_log(ns.lo, ns.hi, exponent_ref=ref,
                       precision=cfg.precision, precision_cap=cfg.precision_cap,
                       jobs=cfg.jobs)
    out = _scan_output("scan-log", ref, records)
    out.plot = ns.plot_data
    return out


def _cmd_scan_exp(cfg: RunConfig, ns) -> Output:
    ref = _frac(ns.exponent_ref, "exponent-ref")
    records = scan_exp(ns.lo, ns.hi, exponent_ref=ref,
                       precision=cfg.precision, precision_cap=cfg.precision_cap,
                       jobs=cfg.jobs)
    out = _scan_output("scan-exp", ref, records)
    out.plot = ns.plot_data
    return out


SEQ_COLUMNS = ("b", "a", "gap", "gap_radius", "threshold", "pass", "precision")


def _cmd_seq(cfg: RunConfig, ns) -> Output:
    rows = mahler_sequence(ns.bmax, precision=cfg.precision,
                           precision_cap=cfg.precision_cap)

    def payload():
        return {"rows": [
            {"b": r.b, "a": r.a, "gap": _ball(r.gap),
             "threshold": str(r.threshold), "pass": r.passed,
             "precision": r.precision_used}
            for r in rows
        ]}

    def csv_rows():
        for r in rows:
            yield (r.b, r.a, r.gap.mid_float(), _float_up(r.gap.rad),
                   str(r.threshold), "1" if r.passed else "0", r.precision_used)

    return Output("seq", payload, columns=SEQ_COLUMNS, rows=csv_rows,
                  default_format="csv")


PROBE_COLUMNS = ("b", "a", "gap", "threshold", "ratio", "holds", "precision")


def _cmd_probe(cfg: RunConfig, ns) -> Output:
    c = _frac(ns.c, "c")
    rows = mahler_problem_probe(ns.bmax, c, precision=cfg.precision,
                                precision_cap=cfg.precision_cap)

    def payload():
        return {"c": str(c), "rows": [
            {"b": r.b, "a": r.a, "gap": _ball(r.gap),
             "threshold": _ball(r.threshold), "holds": r.holds,
             "ratio": _ball(r.ratio), "precision": r.precision_used}
            for r in rows
        ]}

    def csv_rows():
        for r in rows:
            yield (r.b, r.a, r.gap.mid_float(), r.threshold.mid_float(),
                   r.ratio.mid_float(), "1" if r.holds else "0",
                   r.precision_used)

    return Output("probe", payload, columns=PROBE_COLUMNS, rows=csv_rows,
                  default_format="csv")


_CF_CALL = re.compile(r"(log|exp|sqrt)\(([^)]+)\)\Z")


def _cf_maker(expr: str):
    """(label, maker, exact) for the cf target: a rational, or log/exp/sqrt
    of one.  `exact` is the Fraction itself for the plain rational case so the
    expansion can run exactly instead of through an enclosure."""
    s = expr.strip()
    m = _CF_CALL.fullmatch(s)
    if m is None:
        x = _frac(s)
        return str(x), (lambda bits: RealBall(x, bits)), x
    fn, arg = m.group(1), _frac(m.group(2), "argument")
    if fn == "log" and arg <= 0:
        raise DomainError(f"log needs a positive argument, got {arg}")
    if fn == "sqrt" and arg < 0:
        raise DomainError(f"sqrt needs a nonnegative argument, got {arg}")
    make = {
        "log": lambda bits: RealBall(arg, bits).log(),
        "exp": lambda bits: RealBall(arg, bits).exp(),
        "sqrt": lambda bits: RealBall(arg, bits).sqrt(),
    }[fn]
    return f"{fn}({arg})", make, None


CF_COLUMNS = ("k", "quotient", "p", "q")


def _finite_convergents(qs):
    p0, q0, p1, q1 = 1, 0, qs[0], 1
    out = [(p1, q1)]
    for a in qs[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def _cmd_cf(cfg: RunConfig, ns) -> Output:
    label, make, exact = _cf_maker(ns.value)
    try:
        if exact is not None:
            cl = convergents(exact, ns.count)
            qs = list(cl.quotients)
            pairs = [list(pq) for pq in cl.convergents]
            doc = {"value": label, "rational": True, "quotients": qs,
                   "convergents": pairs, "enclosure": None, "precision": None}
        else:
            cl = convergents(make(cfg.precision), ns.count, refine=make,
                             precision_cap=cfg.precision_cap)
            qs = list(cl.quotients)
            pairs = [list(pq) for pq in cl.convergents]
            doc = {"value": label, "rational": False, "quotients": qs,
                   "convergents": pairs, "enclosure": _ball(cl.value),
                   "precision": cl.precision_used}
    except RationalDetected as exc:
        qs = list(exc.prefix)
        pairs = [list(pq) for pq in _finite_convergents(qs)]
        doc = {"value": label, "rational": True, "quotients": qs,
               "convergents": pairs, "enclosure": None, "precision": None}

    def csv_rows():
        for k, (a, (pk, qk)) in enumerate(zip(qs, pairs)):
            yield (k, a, pk, qk)

    return Output("cf", lambda: doc, columns=CF_COLUMNS, rows=csv_rows,
                  default_format="csv")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _UsageExit(Exception):
    def __init__(self, code: int):
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract wants 1
    def exit(self, status=0, message=None):
        if message:
            self._print_message(message, sys.stderr)
        raise _UsageExit(0 if status == 0 else 1)


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                   help="working precision in bits")
    c.add_argument("--precision-cap", type=int, default=DEFAULT_PRECISION_CAP,
                   help="adaptive refinement stops here")
    c.add_argument("--jobs", type=int, default=1, help="worker processes")
    c.add_argument("--budget", type=int, default=DEFAULT_BOX_BUDGET,
                   help="enumeration budget for box searches")
    c.add_argument("--format", choices=("json", "csv"), default=None,
                   help="output format (default: json, csv for tabular commands)")
    c.add_argument("--out", default=None, help="output file (default: stdout)")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = [_common()]
    top = _Parser(prog="mahlerkit", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("height", parents=common,
                       help="Weil height of a rational or an algebraic number")
    p.add_argument("value", nargs="?", help="rational p/q")
    p.add_argument("--poly", help="integer polynomial, e.g. 'x^3-x-1'")
    p.add_argument("--which", type=int, default=0, help="root index (sorted)")
    p.set_defaults(handler=_cmd_height)

    p = sub.add_parser("mahler-measure", parents=common,
                       help="Mahler measure by roots and by circle integral")
    p.add_argument("--poly", required=True)
    p.add_argument("--method", choices=("roots", "integral", "both"),
                   default="both")
    p.set_defaults(handler=_cmd_measure)

    p = sub.add_parser("proj-height", parents=common,
                       help="projective height of a rational point")
    p.add_argument("coords", nargs="+", metavar="COORD")
    p.set_defaults(handler=_cmd_proj)

    # shared flags live on the family leaves only, so nothing set between
    # "bound" and the family name can be clobbered by a leaf default
    b = sub.add_parser("bound", help="evaluate one of the lower-bound formulas")
    fam = b.add_subparsers(dest="family", required=True, metavar="FAMILY")

    q = fam.add_parser("mahler-log", parents=common)
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--exponent", default="40")
    q = fam.add_parser("mahler-exp", parents=common)
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--exponent", default="40")

    q = fam.add_parser("nw", parents=common)
    q.add_argument("--D", type=int, required=True)
    q.add_argument("--h1", required=True)
    q.add_argument("--h2", required=True)
    q.add_argument("--h-alpha", dest="h_alpha")
    q.add_argument("--lambda-abs", dest="lambda_abs")
    q.add_argument("--h-beta", dest="h_beta")

    q = fam.add_parser("feldman", parents=common)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--D", type=int, required=True)
    q.add_argument("--h", required=True)
    q.add_argument("--c", required=True)

    q = fam.add_parser("rw", parents=common)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--D", type=int, required=True)
    q.add_argument("--h1", required=True)
    q.add_argument("--h2", required=True)
    q.add_argument("--c", required=True)

    for which in (0, 1, 2):
        q = fam.add_parser(f"conj{which}", parents=common)
        q.add_argument("--m", type=int, default=1)
        q.add_argument("--D", type=int, required=True)
        q.add_argument("--h", required=True)
        q.add_argument("--c", required=True, help=f"the constant c{which}")
        if which == 0:
            q.add_argument("--h-alpha", dest="h_alpha")
            q.add_argument("--h-beta", dest="h_beta")
            q.add_argument("--lambda-abs", dest="lambda_abs")

    q = fam.add_parser("liouville", parents=common)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--D", type=int, required=True)
    q.add_argument("--S", type=int, required=True)
    q.add_argument("--h1", required=True)

    q = fam.add_parser("lemma1", parents=common)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--D", type=int, required=True)
    q.add_argument("--B", default=None)
    q.add_argument("--logB", default=None)

    q = fam.add_parser("phi1", parents=common)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--D", type=int, required=True)
    q.add_argument("--h1", required=True)
    q.add_argument("--h2", required=True)

    q = fam.add_parser("phi2", parents=common)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--D", type=int, required=True)
    q.add_argument("--h", required=True)

    b.set_defaults(handler=_cmd_bound)

    p = sub.add_parser("lemma2", parents=common,
                       help="rank factorization certificate for a rational matrix")
    p.add_argument("--in", dest="infile", required=True, metavar="B.csv")
    p.add_argument("--r", type=int, required=True, help="declared exact rank")
    p.set_defaults(handler=_cmd_lemma2)

    p = sub.add_parser("lic-check", parents=common,
                       help="box check of the log independence condition")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--in", dest="infile", metavar="L.csv",
                   help="positive rationals whose logs form the matrix")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--S", type=int, required=True)
    p.set_defaults(handler=_cmd_lic)

    p = sub.add_parser("lemma3-count", parents=common,
                       help="distinct power products over an s-box")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--in", dest="infile", metavar="L.csv")
    p.add_argument("--t", required=True, help="comma-separated integers")
    p.add_argument("--S", type=int, required=True)
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("audit-t1", parents=common,
                       help="two-height proof-parameter audit")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--h1", required=True)
    p.add_argument("--h2", required=True)
    p.add_argument("--c0", type=int)
    p.add_argument("--sweep", action="store_true",
                   help="sweep c0 over powers of two up to 2^10")
    p.set_defaults(handler=_cmd_audit1)

    p = sub.add_parser("audit-t2", parents=common,
                       help="single-height proof-parameter audit")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--c0", type=int, required=True)
    p.set_defaults(handler=_cmd_audit2)

    for name, handler, lo_min in (("scan-log", _cmd_scan_log, 3),
                                  ("scan-exp", _cmd_scan_exp, 2)):
        p = sub.add_parser(name, parents=common,
                           help=f"certified nearest-integer scan (keys >= {lo_min})")
        p.add_argument("--from", dest="lo", type=int, required=True)
        p.add_argument("--to", dest="hi", type=int, required=True)
        p.add_argument("--exponent-ref", default="40",
                       help="flag records whose exponent certifies above this")
        p.add_argument("--plot-data", action="store_true",
                       help="two plain columns: key and exponent midpoint")
        p.set_defaults(handler=handler)

    p = sub.add_parser("mahler-seq", parents=common,
                       help="rows b, round(e^b) with the certified gap bound")
    p.add_argument("--bmax", type=int, required=True)
    p.set_defaults(handler=_cmd_seq)

    p = sub.add_parser("probe", parents=common,
                       help="gap against a^(-c) for b = 2..bmax")
    p.add_argument("--bmax", type=int, required=True)
    p.add_argument("--c", required=True)
    p.set_defaults(handler=_cmd_probe)

    p = sub.add_parser("cf", parents=common,
                       help="certified continued fraction prefix")
    p.add_argument("--value", required=True,
                   help="p/q, or log(p/q), exp(p/q), sqrt(p/q)")
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(handler=_cmd_cf)

    return top


def _config(ns) -> RunConfig:
    inputs = tuple(p for p in [getattr(ns, "infile", None)] if p)
    return RunConfig(
        subcommand=ns.command,
        inputs=inputs,
        out=ns.out,
        fmt=ns.format,
        precision=ns.precision,
        precision_cap=ns.precision_cap,
        jobs=ns.jobs,
        budget=ns.budget,
    )


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
    except _UsageExit as exc:
        return exc.code
    try:
        cfg = _config(ns)
        _emit(ns.handler(cfg, ns), cfg)
    except HypothesisViolation as exc:
        print(f"mahlerkit: hypothesis violation: {exc}", file=sys.stderr)
        if exc.report is not None:
            for row in exc.report.to_rows():
                mark = "ok" if row["pass"] else "FAIL"
                print(f"  [{mark}] {row['name']}: supplied {row['supplied']}, "
                      f"required {row['required']}", file=sys.stderr)
        return 2
    except PrecisionBudgetExceeded as exc:
        print(f"mahlerkit: precision budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (MahlerkitError, OSError, ValueError) as exc:
        print(f"mahlerkit: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":                  # pragma: no cover
    sys.exit(main())
