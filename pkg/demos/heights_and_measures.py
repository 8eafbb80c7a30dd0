# Mahler measures two ways, then heights built on top of them.
#
# The roots route is a certified enclosure (isolate every root, multiply the
# max(1, |root|) factors); the circle-integral route is an independent
# numerical estimate.  They must agree, and watching both on the same
# polynomial is the quickest sanity check the package offers.

from fractions import Fraction

from mahlerkit.algnum import (
    AlgebraicNumber,
    ProjectivePoint,
    mahler_measure_integral,
    mahler_measure_roots,
    weil_height,
)
from mahlerkit.errors import QuadratureDivergence
from mahlerkit.intpoly import IntPolynomial

polys = [
    "x^2-x-1",          # golden ratio: measure = (1+sqrt 5)/2
    "x^3-x-1",          # smallest Pisot number, measure ~ 1.3247
    "2x^2-1",
    "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1",   # Lehmer's polynomial, ~ 1.17628
]

print("polynomial                                roots route        integral route")
for s in polys:
    f = IntPolynomial.from_string(s)
    by_roots = mahler_measure_roots(f, precision=64)
    try:
        integral = f"{mahler_measure_integral(f, precision=30).mid_float():.12f}"
    except QuadratureDivergence:
        # eight of Lehmer's ten roots sit on the unit circle itself, so the
        # circle integrand has near-singularities and node doubling stalls;
        # the certified roots route is untroubled
        integral = "diverges (roots on the circle)"
    print(f"{s:<40}  {by_roots.mid_float():<17.12f}  {integral}")

# Heights: for a rational p/q the height is log max(|p|, |q|) exactly; for an
# algebraic number it is (1/degree) log(measure of the minimal polynomial).
print()
print("h(22/7)      =", weil_height(Fraction(22, 7)).nstr())
print("h(sqrt 2)    =", weil_height(AlgebraicNumber.root_of(
    IntPolynomial.from_string("x^2-2"))).nstr())
print("h(plastic)   =", weil_height(AlgebraicNumber.root_of(
    IntPolynomial.from_string("x^3-x-1"))).nstr())

# Projective points scale away: (1/2 : 3 : 0) and (1 : 6 : 0) are the same
# point with the same height.
p = ProjectivePoint([Fraction(1, 2), 3, 0])
q = ProjectivePoint([1, 6, 0])
print()
print("canonical rep of (1/2 : 3 : 0):", p.canonical, " height", p.height().nstr())
print("same point?", p == q)
