# Scans over the nearest-integer distances ||log a|| and ||e^b||, the rounded
# exponential sequence, and a continued fraction, all certified.
#
# Writes scan_log.dat (two columns: a, exponent c(a)) next to this script so
# the distribution can be plotted with anything that reads plain columns.

import os.path
from fractions import Fraction

from mahlerkit.balls import RealBall
from mahlerkit.search import (
    convergents,
    mahler_problem_probe,
    mahler_sequence,
    scan_log,
    write_csv,
)

# ||log a|| never vanishes, and the exponent c(a) with ||log a|| = a^(-c ln ln a)
# stays small: a = 3 gives the largest value anyone has seen.
print("a    nearest  ||log a||        c(a)")
for rec in scan_log(3, 21):
    print(f"{rec.key:<4} {rec.nearest:<8} {rec.distance.mid_float():<15.10f} "
          f"{rec.exponent.mid_float():8.4f}")

out = os.path.join(os.path.dirname(__file__), "scan_log.dat")
n = write_csv(scan_log(3, 2000), out, plot=True)
print(f"\nwrote {n} rows of (a, c(a)) plot data to {out}")

# Round e^b to the nearest integer a: the gap |log a - b| < 1/a certifies an
# infinite increasing sequence with small fractional parts of log a.
print()
print("b    a = round(e^b)   |log a - b|     threshold 1/a")
for row in mahler_sequence(8):
    print(f"{row.b:<4} {row.a:<15} {row.gap.mid_float():<15.12f} {row.threshold}")

# Whether |e^b - a| can dip below a^(-c) is open; the probe just reports the
# certified side of the comparison for each b.
print()
for c in (Fraction(1), Fraction(1, 2)):
    rows = mahler_problem_probe(12, c)
    holds = sum(r.holds for r in rows)
    print(f"c = {c}: gap >= a^(-c) holds for {holds} of {len(rows)} rows")

# Continued fraction of log 2, with every convergent validated against the
# classical |x - p/q| < 1/(q q') inequality on the certified enclosure.
print()
cl = convergents(RealBall(2, 128).log(), 8, refine=lambda b: RealBall(2, b).log())
print("log 2 =", cl.quotients)
print("convergents:", " ".join(f"{p}/{q}" for p, q in cl.convergents))
