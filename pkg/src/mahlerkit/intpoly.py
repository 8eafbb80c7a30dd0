"""Primitive integer polynomials in one variable.

Canonical form: trailing zero coefficients stripped, content (gcd of all
coefficients) divided out, leading coefficient positive.  The constant term
comes first everywhere, matching the dense list form used by the CLI.

The string form is "c0 + c1*x + c2*x^2 + ..." with conventional sign
handling; parse(print(f)) == f.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

_TERM_RE = re.compile(r"^(?P<coeff>\d+)?\*?(?P<var>[xX])?(?:\^(?P<exp>\d+))?$")


class IntPolynomial:
    """Integer polynomial in canonical primitive form."""

    __slots__ = ("coeffs",)

    def __init__(self, coefficients: Iterable[int]):
        cs = [int(c) for c in coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise ValueError("the zero polynomial has no canonical form here")
        content = 0
        for c in cs:
            content = math.gcd(content, c)
        if cs[-1] < 0:
            content = -content
        object.__setattr__(self, "coeffs", tuple(c // content for c in cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPolynomial is immutable")

    # -- basic accessors ---------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self) -> int:
        return self.coeffs[-1]

    @property
    def constant_term(self) -> int:
        return self.coeffs[0]

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # -- evaluation ----------------------------------------------------------------

    def __call__(self, x):
        """Exact evaluation at int/Fraction."""
        acc = Fraction(0) if isinstance(x, Fraction) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_ball(self, z):
        """Horner evaluation on a RealBall or ComplexBall."""
        acc = z * 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    # -- calculus-free structure -----------------------------------------------------

    def derivative_coeffs(self) -> tuple[int, ...]:
        """Raw derivative coefficients (not content-normalized)."""
        return tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1)

    def reciprocal(self) -> "IntPolynomial":
        """x^deg * f(1/x)."""
        return IntPolynomial(tuple(reversed(self.coeffs)))

    # -- string and list forms ----------------------------------------------------------

    @classmethod
    def from_list(cls, cs: Sequence[int]) -> "IntPolynomial":
        return cls(cs)

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    @classmethod
    def from_string(cls, s: str) -> "IntPolynomial":
        text = "".join(s.split())
        if not text:
            raise ValueError("empty polynomial string")
        terms = re.findall(r"[+-]?[^+-]+", text)
        if "".join(terms) != text:
            raise ValueError(f"cannot parse {s!r}")
        out: dict[int, int] = {}
        for term in terms:
            t = term.lstrip("+")
            neg = t.startswith("-")
            if neg:
                t = t[1:]
            m = _TERM_RE.match(t)
            if not m or (m.group("coeff") is None and m.group("var") is None):
                raise ValueError(f"cannot parse term {term!r}")
            if m.group("var") is None and m.group("exp") is not None:
                raise ValueError(f"cannot parse term {term!r}")
            coeff = int(m.group("coeff")) if m.group("coeff") is not None else 1
            exp = 0
            if m.group("var") is not None:
                exp = int(m.group("exp")) if m.group("exp") is not None else 1
            out[exp] = out.get(exp, 0) + (-coeff if neg else coeff)
        cs = [0] * (max(out) + 1)
        for e, c in out.items():
            cs[e] = c
        return cls(cs)

    def to_string(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0 and self.degree > 0:
                continue
            if k == 0:
                body = str(abs(c))
            elif k == 1:
                body = "x" if abs(c) == 1 else f"{abs(c)}*x"
            else:
                body = f"x^{k}" if abs(c) == 1 else f"{abs(c)}*x^{k}"
            if not parts:
                parts.append(body if c >= 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c >= 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"IntPolynomial({self.to_string()})"

    # -- factor structure ------------------------------------------------------------------

    def squarefree_decomposition(self) -> list[tuple["IntPolynomial", int]]:
        """Yun decomposition: [(g_i, i)] with f = prod g_i^i, g_i squarefree,
        pairwise coprime, in canonical primitive form."""
        if self.degree == 0:
            return []
        f = [Fraction(c) for c in self.coeffs]
        fp = _pderiv(f)
        a = _pgcd(f, fp)
        if _pdeg(a) == 0:
            return [(self, 1)]
        out: list[tuple[IntPolynomial, int]] = []
        b = _pdivexact(f, a)
        c = _psub(_pdivexact(fp, a), _pderiv(b))
        i = 1
        while _pdeg(b) > 0:
            d = _pgcd(b, c)
            if _pdeg(d) > 0:
                out.append((_primitive(d), i))
            b = _pdivexact(b, d)
            c = _psub(_pdivexact(c, d), _pderiv(b))
            i += 1
        return out

    def is_squarefree(self) -> bool:
        f = [Fraction(c) for c in self.coeffs]
        return _pdeg(_pgcd(f, _pderiv(f))) == 0

    def rational_roots(self) -> list[Fraction]:
        """All rational roots, found exactly via the rational root theorem."""
        roots = []
        a0, lc = self.coeffs[0], self.coeffs[-1]
        if a0 == 0:
            roots.append(Fraction(0))
            shifted = list(self.coeffs)
            while shifted and shifted[0] == 0:
                shifted.pop(0)
            if not shifted:
                return roots
            return roots + IntPolynomial(shifted).rational_roots()
        for p in _divisors(abs(a0)):
            for q in _divisors(abs(lc)):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if self(cand) == 0 and cand not in roots:
                        roots.append(cand)
        return sorted(roots)

    def is_irreducible(self):
        """True/False for degree <= 3 (exact); None (= unknown) above."""
        d = self.degree
        if d == 0:
            return False
        if d == 1:
            return True
        if d <= 3:
            # content-free degree 2/3 polynomials are reducible iff they
            # have a rational (hence linear) factor
            return not self.rational_roots()
        return None


# -- Fraction-coefficient polynomial helpers (dense lists, constant first) --------


def _pdeg(p: list[Fraction]) -> int:
    return len(p) - 1


def _ptrim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _pderiv(p: list[Fraction]) -> list[Fraction]:
    if len(p) == 1:
        return [Fraction(0)]
    return [k * c for k, c in enumerate(p)][1:]


def _psub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _ptrim(out)


def _pdivmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while _pdeg(a) >= _pdeg(b) and any(c != 0 for c in a):
        k = _pdeg(a) - _pdeg(b)
        f = a[-1] * inv
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        a = _ptrim(a)
        if all(c == 0 for c in a):
            a = [Fraction(0)]
            break
    return _ptrim(q), a


def _pdivexact(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    q, r = _pdivmod(a, b)
    if any(c != 0 for c in r):
        raise ArithmeticError("division was not exact")
    return q


def _pgcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while any(c != 0 for c in b):
        _, r = _pdivmod(a, b)
        a, b = b, r
    if all(c == 0 for c in a):
        return [Fraction(1)]
    # monic normalization
    lead = a[-1]
    return [c / lead for c in a]


def _primitive(p: list[Fraction]) -> IntPolynomial:
    den = math.lcm(*(c.denominator for c in p))
    return IntPolynomial([int(c * den) for c in p])


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)
