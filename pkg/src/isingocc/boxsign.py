"""Rigorous sign certificates for integer polynomials on dyadic sub-boxes.

A polynomial ``f(x, y)`` and a root box ``[x0, x1] x [y0, y1]`` are turned
once into an integer polynomial ``P(U, V)`` on the unit square (positive
scaling only, so signs are preserved).  A cell is the dyadic square
``U in [m/2^k, (m+1)/2^k]``, ``V in [n/2^l, (n+1)/2^l]``.

Two bounds are used, both exact:

* monotone enclosure: on ``U, V >= 0`` every monomial is nondecreasing, so
  positive terms are bounded below at the lower corner and negative terms at
  the upper corner;
* shifted domination: Taylor-shift the cell to ``[0, 1]^2`` and charge each
  negative term to positive terms that dominate it componentwise (on the unit
  square ``u^i v^j <= u^a v^b`` whenever ``a <= i`` and ``b <= j``).

The second one succeeds near points where the polynomial vanishes but all of
its lowest-order terms share a sign, which the first never does.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .poly import Poly

__all__ = ["Cell", "BoxPoly"]


@dataclass(frozen=True, order=True)
class Cell:
    k: int
    m: int
    l: int
    n: int

    def split(self, along_u: bool) -> tuple["Cell", "Cell"]:
        if along_u:
            return (
                Cell(self.k + 1, 2 * self.m, self.l, self.n),
                Cell(self.k + 1, 2 * self.m + 1, self.l, self.n),
            )
        return (
            Cell(self.k, self.m, self.l + 1, 2 * self.n),
            Cell(self.k, self.m, self.l + 1, 2 * self.n + 1),
        )

    def unit_bounds(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """``(U0, U1, V0, V1)`` in unit-square coordinates."""
        su, sv = 1 << self.k, 1 << self.l
        return (
            Fraction(self.m, su),
            Fraction(self.m + 1, su),
            Fraction(self.n, sv),
            Fraction(self.n + 1, sv),
        )


def _taylor_shift(a: list[int], s: int) -> None:
    """In place: coefficients of ``a(x + s)``."""
    if s == 0:
        return
    d = len(a) - 1
    for i in range(d):
        for j in range(d - 1, i - 1, -1):
            a[j] += s * a[j + 1]


class BoxPoly:
    """``f`` pulled back to the unit square of a root box, with integer coefficients."""

    __slots__ = ("du", "dv", "coeffs", "terms", "zero")

    def __init__(self, f: Poly, xbox, ybox):
        x0, x1 = (Fraction(v) for v in xbox)
        y0, y1 = (Fraction(v) for v in ybox)
        wx, wy = x1 - x0, y1 - y0
        if wx <= 0 or wy <= 0:
            raise ValueError("root box must have positive width")
        g = f.shift(x0, y0)
        scaled = {(i, j): Fraction(c) * wx**i * wy**j for (i, j), c in g.terms.items()}
        den = 1
        for c in scaled.values():
            den = lcm(den, c.denominator)
        ints = {key: int(c * den) for key, c in scaled.items() if c}
        self.zero = not ints
        self.du = max((i for i, _ in ints), default=0)
        self.dv = max((j for _, j in ints), default=0)
        self.coeffs = [[0] * (self.dv + 1) for _ in range(self.du + 1)]
        for (i, j), c in ints.items():
            self.coeffs[i][j] = c
        self.terms = sorted(ints.items())

    # -- bounds ----------------------------------------------------------------

    def _scales(self, cell: Cell):
        du, dv, k, l = self.du, self.dv, cell.k, cell.l
        su = [1 << (k * (du - i)) for i in range(du + 1)]
        sv = [1 << (l * (dv - j)) for j in range(dv + 1)]
        return su, sv

    def monotone_lower(self, cell: Cell, sign: int = 1) -> int:
        """Lower bound of ``sign * P`` on the cell, scaled by ``2^(k du + l dv)``."""
        su, sv = self._scales(cell)
        m, n = cell.m, cell.n
        a0 = [m**i * su[i] for i in range(self.du + 1)]
        a1 = [(m + 1) ** i * su[i] for i in range(self.du + 1)]
        b0 = [n**j * sv[j] for j in range(self.dv + 1)]
        b1 = [(n + 1) ** j * sv[j] for j in range(self.dv + 1)]
        total = 0
        for (i, j), c in self.terms:
            c *= sign
            total += c * (a0[i] * b0[j] if c > 0 else a1[i] * b1[j])
        return total

    def sign_at_center(self, cell: Cell) -> int:
        """Exact sign of ``P`` at the cell's center."""
        if self.zero:
            return 0
        k, l = cell.k + 1, cell.l + 1
        u, v = 2 * cell.m + 1, 2 * cell.n + 1
        total = sum(
            c * u**i * (1 << (k * (self.du - i))) * v**j * (1 << (l * (self.dv - j)))
            for (i, j), c in self.terms
        )
        return (total > 0) - (total < 0)

    def shifted(self, cell: Cell) -> list[list[int]]:
        """Integer coefficients of ``2^(k du + l dv) P((m+u)/2^k, (n+v)/2^l)``."""
        su, sv = self._scales(cell)
        q = [[c * su[i] * sv[j] for j, c in enumerate(row)] for i, row in enumerate(self.coeffs)]
        if cell.m:
            for j in range(self.dv + 1):
                col = [q[i][j] for i in range(self.du + 1)]
                _taylor_shift(col, cell.m)
                for i in range(self.du + 1):
                    q[i][j] = col[i]
        if cell.n:
            for row in q:
                _taylor_shift(row, cell.n)
        return q

    def _corners(self, cell: Cell, open_axes):
        """Unit-square expansions about each usable corner, with the matching excluded axes.

        The lower-left corner is always tried; the others only on cells that
        touch the root box's upper edges, where degenerate corners live.
        """
        q = self.shifted(cell)
        yield q, open_axes
        top_u = cell.m == (1 << cell.k) - 1
        top_v = cell.n == (1 << cell.l) - 1
        if top_u:
            yield _reflect(q, True), (False, open_axes[1])
        if top_v:
            yield _reflect(q, False), (open_axes[0], False)
        if top_u and top_v:
            yield _reflect(_reflect(q, True), False), (False, False)

    def nonneg(self, cell: Cell, sign: int = 1, strict: bool = False, open_axes=(False, False)) -> bool:
        """Certify ``sign * P >= 0`` on the closed cell.

        With ``strict`` the certificate must also show ``sign * P > 0`` at every
        cell point off the excluded axes: ``open_axes[0]`` means points with
        ``U = 0`` on the cell's lower edge are excluded, likewise ``open_axes[1]``
        for ``V = 0``.
        """
        if self.zero:
            return not strict
        lo = self.monotone_lower(cell, sign)
        if lo > 0 or (lo == 0 and not strict):
            return True
        return any(self._dominated(q, sign, strict, axes) for q, axes in self._corners(cell, open_axes))

    def sign_on(self, cell: Cell, open_axes=(False, False)) -> int:
        """+1 or -1 if the cell certifiably has that strict sign (off excluded axes), else 0."""
        if self.zero:
            return 0
        for sign in (1, -1):
            if self.monotone_lower(cell, sign) > 0:
                return sign
        for q, axes in self._corners(cell, open_axes):
            pareto = _pareto_signs(q)
            if len(pareto) == 1:
                sign = pareto.pop()
                if self._dominated(q, sign, True, axes):
                    return sign
        return 0

    @staticmethod
    def _dominated(q, sign: int, strict: bool, open_axes) -> bool:
        pos: list[tuple[int, int, int]] = []
        neg: list[tuple[int, int, int]] = []
        for i, row in enumerate(q):
            for j, c in enumerate(row):
                c *= sign
                if c > 0:
                    pos.append((i, j, c))
                elif c < 0:
                    neg.append((i, j, -c))
        budget = {(i, j): c for i, j, c in pos}
        # fewest dominators first; pay from the nearest dominators first
        plans = []
        for i, j, c in neg:
            dom = [(a, b) for a, b, _ in pos if a <= i and b <= j]
            if not dom:
                return False
            dom.sort(key=lambda ab: -(ab[0] + ab[1]))
            plans.append((len(dom), i, j, c, dom))
        plans.sort()
        for _, i, j, need, dom in plans:
            for key in dom:
                have = budget[key]
                if not have:
                    continue
                take = min(have, need)
                budget[key] = have - take
                need -= take
                if not need:
                    break
            if need:
                return False
        if not strict:
            return True
        for (a, b), left in budget.items():
            if left and (a == 0 or open_axes[0]) and (b == 0 or open_axes[1]):
                return True
        return False


def _reflect(q: list[list[int]], along_u: bool) -> list[list[int]]:
    """Coefficients of ``Q(1 - u, v)`` (or ``Q(u, 1 - v)``)."""
    if along_u:
        cols = [[row[j] for row in q] for j in range(len(q[0]))]
        for col in cols:
            _taylor_shift(col, 1)
            for i in range(1, len(col), 2):
                col[i] = -col[i]
        return [[cols[j][i] for j in range(len(cols))] for i in range(len(q))]
    out = []
    for row in q:
        row = list(row)
        _taylor_shift(row, 1)
        for j in range(1, len(row), 2):
            row[j] = -row[j]
        out.append(row)
    return out


def _pareto_signs(q) -> set[int]:
    """Signs of the componentwise-minimal nonzero terms."""
    nz = [(i, j, c) for i, row in enumerate(q) for j, c in enumerate(row) if c]
    out = set()
    best_j = None
    # scan by increasing i; a term is minimal iff its j beats every smaller i
    for i, j, c in sorted(nz):
        if best_j is None or j < best_j:
            out.add(1 if c > 0 else -1)
            best_j = j
    return out

