# A tour of the lower-bound formulas, all evaluated in log space.
#
# Every bound comes back as a BoundValue: the formula string, the inputs it
# consumed, and a certified enclosure of the natural log of the bound.  The
# log is the primary carrier because the interesting values sit far below
# anything a float can hold.

from fractions import Fraction

from mahlerkit.bounds import (
    BoundContext,
    bound_conjecture,
    bound_feldman,
    bound_mahler_log,
    bound_nw,
    bound_rw,
    liouville_linear_form,
    phi1,
    phi2,
    theta,
    kappa,
)
from mahlerkit.errors import HypothesisViolation

# The two-height bound at the simplest admissible point.  log D + 1 = 1 at
# D = 1, so the log-value is exactly -2 * 10^6.
bv = bound_nw(BoundContext(D=1, h1=1, h2=1))
print(bv.formula)
print("  log value:", bv.log_value.nstr())

# The same call with measured data validates the hypothesis list first and
# refuses to produce a number from inadmissible inputs.
try:
    bound_nw(BoundContext(D=1, h1=1, h2=1),
             h_alpha=Fraction(3), lambda_abs=1, h_beta=1)
except HypothesisViolation as exc:
    print("  rejected:", exc)

# Nearest-integer distance bounds for log a and e^b, exponent 40.
print()
for a in (3, 20, 10 ** 6):
    print(f"log ||log {a}|| >=", bound_mahler_log(a).log_value.nstr())

# The conjectural family, strongest to weakest, at one context.
print()
ctx = BoundContext(m=2, D=3, h=5, constants={"c0": 1, "c1": 1, "c2": 1})
for which in (0, 1, 2):
    bv = bound_conjecture(which, ctx)
    print(f"conjecture {which}: log >= {bv.log_value.nstr()}   ({bv.formula})")

print()
print("feldman  :", bound_feldman(m=2, D=3, h=5, c=1).log_value.nstr())
print("rw       :", bound_rw(m=2, D=3, h1=5, h2=5, c=1).log_value.nstr())
print("liouville:", liouville_linear_form(m=2, D=3, S=10, h1=5).log_value.nstr())

# The exponent algebra behind the two-block bounds: theta and kappa are exact
# rationals, and the height aggregate phi1 switches branch on an exact
# comparison, never on a float.
print()
m, n, r = 2, 3, 1
print(f"theta({m},{n},{r}) = {theta(m, n, r)}, kappa = {kappa(m, n, r)}")
for h1 in (Fraction(100), Fraction(1, 2)):
    ball, branch = phi1(BoundContext(m=m, n=n, r=r, D=1, h1=h1, h2=100))
    print(f"phi1 at h1={h1}: {ball.nstr()}  ({branch} branch)")
print("phi2 at h=2:", phi2(BoundContext(m=m, n=n, r=r, D=1, h=2)).nstr())
