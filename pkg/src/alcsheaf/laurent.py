"""Laurent polynomials in v with integer coefficients: graded rank bookkeeping.

A graded free module ⊕_i S[l_i] is recorded as the Laurent polynomial
Σ_i v^(-l_i).  Sign convention: a free generator sitting in degree d
contributes v^d, so S[-2] (generator in degree 2) contributes v^2 and
S[1] (generator in degree -1) contributes v^-1.
"""

from __future__ import annotations

import re


class RankSeries:
    """Laurent polynomial in v; for certified ranks all coefficients are >= 0."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for e, c in dict(coeffs).items():
                if c != 0:
                    self.coeffs[e] = c

    @classmethod
    def from_degrees(cls, degrees):
        """Series of a free module with generators in the listed degrees."""
        r = cls()
        for d in degrees:
            r.coeffs[d] = r.coeffs.get(d, 0) + 1
        return r

    @classmethod
    def v(cls, exponent=1, coeff=1):
        return cls({exponent: coeff})

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def zero(cls):
        return cls()

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return RankSeries(out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) - c
        return RankSeries(out)

    def __mul__(self, other):
        if isinstance(other, int):
            return RankSeries({e: c * other for e, c in self.coeffs.items()})
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return RankSeries(out)

    __rmul__ = __mul__

    def shift(self, l: int):
        """Series of M[l]; a generator of degree d moves to degree d - l."""
        return RankSeries({e - l: c for e, c in self.coeffs.items()})

    def bar(self):
        """v -> 1/v."""
        return RankSeries({-e: c for e, c in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, RankSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def nonnegative(self):
        return all(c >= 0 for c in self.coeffs.values())

    def total(self) -> int:
        """Value at v = 1: the ungraded rank."""
        return sum(self.coeffs.values())

    def max_degree(self):
        return max(self.coeffs) if self.coeffs else None

    def min_degree(self):
        return min(self.coeffs) if self.coeffs else None

    def degrees(self):
        """Sorted multiset of generator degrees (requires coeffs >= 0)."""
        out = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if c < 0:
                raise ValueError("negative coefficient has no degree multiset")
            out.extend([e] * c)
        return out

    def dim_in_degree(self, d: int, nvars: int) -> int:
        """Dimension of the degree-d slice of ⊕ S[l_i] for S in nvars variables.

        S is graded with generators in degree 2, so dim S_m for even m >= 0
        is the number of monomials of exponent total m/2.
        """
        total = 0
        for e, c in self.coeffs.items():
            m = d - e
            if m < 0 or m % 2:
                continue
            total += c * _n_monomials(nvars, m // 2)
        return total

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                term = str(c)
            else:
                ve = "v" if e == 1 else f"v^{e}"
                if c == 1:
                    term = ve
                elif c == -1:
                    term = "-" + ve
                else:
                    term = f"{c}{ve}"
            parts.append(term)
        s = "+".join(parts)
        return s.replace("+-", "-")

    __repr__ = __str__


_TERM_RE = re.compile(r"^([+-]?\d*)(?:(v)(?:\^(-?\d+))?)?$")


def parse_series(text: str) -> RankSeries:
    """Inverse of str(RankSeries), e.g. '1+2v^2+v^-2' or 'v^6'."""
    text = text.strip().replace(" ", "")
    if text in ("0", ""):
        return RankSeries()
    text = text.replace("-", "+-")
    coeffs = {}
    for term in text.split("+"):
        if not term:
            continue
        m = _TERM_RE.match(term)
        if not m:
            raise ValueError(f"bad Laurent term: {term!r}")
        cs, vs, es = m.groups()
        coeff = int(cs) if cs not in ("", "+", "-") else (-1 if cs == "-" else 1)
        if vs is None:
            exp = 0
        else:
            exp = int(es) if es is not None else 1
        coeffs[exp] = coeffs.get(exp, 0) + coeff
    return RankSeries(coeffs)


def _n_monomials(nvars: int, total: int) -> int:
    # C(total + nvars - 1, nvars - 1)
    num, den = 1, 1
    for i in range(nvars - 1):
        num *= total + 1 + i
        den *= i + 1
    return num // den
