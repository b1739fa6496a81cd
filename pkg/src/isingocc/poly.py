"""Sparse bivariate polynomials with exact rational coefficients.

Monomials are keyed ``(i, j)`` for ``x**i * y**j``.  Throughout the package
``x`` is the edge activity ``B`` and ``y`` is the field ``lam`` (or the slope
``t = lam / B`` after :meth:`Poly.wedge`).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

__all__ = ["Poly"]


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], int | Fraction] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[mono] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly, (self.terms,))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> "Poly":
        return cls({(i, j): c})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> tuple[int, int]:
        if not self.terms:
            return (0, 0)
        return (max(i for i, _ in self.terms), max(j for _, j in self.terms))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = [f"{c}*B^{i}*L^{j}" for (i, j), c in sorted(self.terms.items())]
        return "Poly(" + " + ".join(parts) + ")"

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly({m: c * other for m, c in self.terms.items()})
        other = self._lift(other)
        out: dict[tuple[int, int], int | Fraction] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __call__(self, x, y):
        """Evaluate at scalars (Fractions or Intervals); Horner in ``y`` then ``x``."""
        if not self.terms:
            return Fraction(0)
        by_i: dict[int, dict[int, int | Fraction]] = {}
        for (i, j), c in self.terms.items():
            by_i.setdefault(i, {})[j] = c
        acc = None
        for i in range(max(by_i), -1, -1):
            row = by_i.get(i)
            val = _horner(row, y) if row else Fraction(0)
            acc = val if acc is None else acc * x + val
        return acc

    def wedge(self) -> "Poly":
        """Substitute ``lam = t * B``: ``B^i lam^j -> B^(i+j) t^j``."""
        return Poly({(i + j, j): c for (i, j), c in self.terms.items()})

    def monomial_content(self) -> tuple[int, int]:
        """Largest ``(a, b)`` with ``x^a y^b`` dividing every term."""
        if not self.terms:
            return (0, 0)
        return (min(i for i, _ in self.terms), min(j for _, j in self.terms))

    def divide_monomial(self, a: int, b: int) -> "Poly":
        out = {}
        for (i, j), c in self.terms.items():
            if i < a or j < b:
                raise ValueError("monomial does not divide polynomial")
            out[(i - a, j - b)] = c
        return Poly(out)

    def divide_root_x(self, a) -> tuple[int, "Poly"]:
        """``(r, q)`` with ``self = (x - a)^r q`` and ``q(a, y)`` not identically zero."""
        a = Fraction(a)
        p = self
        r = 0
        while not p.is_zero():
            rows: dict[int, dict[int, int | Fraction]] = {}
            for (i, j), c in p.terms.items():
                rows.setdefault(j, {})[i] = c
            quotient: dict[tuple[int, int], int | Fraction] = {}
            for j, row in rows.items():
                acc: int | Fraction = 0
                for i in range(max(row), 0, -1):
                    acc = acc * a + row.get(i, 0)
                    quotient[(i - 1, j)] = acc
                if acc * a + row.get(0, 0) != 0:
                    return r, p
            p = Poly(quotient)
            r += 1
        return r, p

    def shift(self, x0: Fraction, y0: Fraction) -> "Poly":
        """``p(x0 + x, y0 + y)`` as a polynomial in ``(x, y)``."""
        from math import comb

        out: dict[tuple[int, int], Fraction] = {}
        xp: dict[int, list[Fraction]] = {}
        yp: dict[int, list[Fraction]] = {}

        def expand(cache, base, k):
            if k not in cache:
                cache[k] = [comb(k, r) * base ** (k - r) for r in range(k + 1)]
            return cache[k]

        for (i, j), c in self.terms.items():
            ex = expand(xp, x0, i)
            ey = expand(yp, y0, j)
            for r, a in enumerate(ex):
                if not a:
                    continue
                ca = c * a
                for s, b in enumerate(ey):
                    if b:
                        key = (r, s)
                        out[key] = out.get(key, 0) + ca * b
        return Poly(out)


def _horner(row, y):
    acc = None
    for j in range(max(row), -1, -1):
        c = row.get(j, 0)
        acc = Fraction(c) if acc is None else acc * y + c
    return acc
