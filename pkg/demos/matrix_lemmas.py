# The three matrix-shaped lemmas: rank factorization with height control,
# distance from a full-rank rational matrix to anything of smaller rank, and
# counting distinct power products over an integer box.

from fractions import Fraction

from mahlerkit.matrixlab import (
    LogMatrix,
    RationalMatrix,
    audit_theorem1_sweep,
    lemma1_bound,
    lemma1_check,
    lemma2_factor,
    lemma3_count,
    lic_check_box,
    make_lic_matrix,
    rational_rank,
)

# Factor a rank-1 matrix as B' B'' and check the height budget of each factor.
B = RationalMatrix([["1", "2"], ["2", "4"]])
cert = lemma2_factor(B, rational_rank(B))
print("B = B' B'' exact:", cert.verify())
for row in cert.height_rows:
    print(f"  {row.name}: {row.height_int} <= {row.allowed_int}  ({row.passed})")

# How far must a full-rank matrix stay from every lower-rank one?  The bound
# depends only on the shape, the degree parameter, and the entry heights.
print()
print("rank-distance floor for n=2, D=1, B=4:", lemma1_bound(2, 1, B=4).nstr())
full = RationalMatrix([[2, 0], [0, 3]])
collapsed = RationalMatrix([[2, 0], [0, 0]])   # rank 1 by construction
rep = lemma1_check(full, collapsed, declared_rank_L=1)
print(f"entrywise distance {rep.distance_lower} vs bound {rep.bound.nstr()}:",
      "pass" if rep.passed else "FAIL")

# A matrix of logs of distinct primes never lets the bilinear form vanish on
# a nonzero pair; the exponent-rank shortcut certifies the whole box at once.
print()
L = make_lic_matrix(2, 2)
res = lic_check_box(L, T=10, S=10)
print(f"prime 2x2 box T=S=10: pass={res.passed} via {res.method}, "
      f"pairs checked {res.pairs_checked}")

# With a multiplicative relation planted (4 = 2^2), a witness appears.
bad = lic_check_box(LogMatrix([[2, 4]]), T=2, S=2)
print(f"planted relation [[2,4]]: pass={bad.passed}, witness={bad.witness}")

# Distinct products of prime powers over |s_j| <= S: the count is exact and
# never falls under (2S+1)^(n-1).
print()
for S in (1, 2, 3):
    c = lemma3_count(make_lic_matrix(2, 2), t=(1, 0), S=S)
    print(f"S={S}: {c} distinct products (floor {(2 * S + 1) ** 1})")

# The proof-parameter audit: sweep the leading constant and watch which
# inequality blocks.  The counting row fails at every c0 (its two sides keep
# a fixed ratio), which is exactly what the report shows.
print()
res = audit_theorem1_sweep(2, 3, 1, 1, 10, 10, c0_values=[2, 16, 256])
for c0, repc in res.reports:
    bad_rows = [row.name for row in repc.failing()]
    print(f"c0={c0}: pass={repc.passed} failing={bad_rows}")
