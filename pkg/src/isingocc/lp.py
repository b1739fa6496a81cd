"""Occupancy linear programs and an exact rational two-phase simplex (Bland's rule)."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .localviews import LocalView, enumerate_views, view_stats
from .numerics import as_fraction

__all__ = [
    "Sense",
    "Program",
    "Solution",
    "InfeasibleError",
    "UnboundedError",
    "build_program",
    "solve_exact",
    "support_of",
    "solve_occupancy",
    "solve_linear_system",
    "DEFAULT_J",
]

DEFAULT_J = (0, 1)


class Sense(enum.Enum):
    MIN = "min"
    MAX = "max"

    @classmethod
    def parse(cls, value) -> "Sense":
        if isinstance(value, Sense):
            return value
        return cls(str(value).lower())


class InfeasibleError(ValueError):
    """No nonnegative solution; ``certificate`` is a vector ``w`` with ``w.A <= 0`` and ``w.b > 0``."""

    def __init__(self, message: str, certificate: Sequence[Fraction]):
        super().__init__(message)
        self.certificate = list(certificate)


class UnboundedError(ValueError):
    pass


@dataclass(frozen=True)
class Program:
    sense: Sense
    columns: tuple[LocalView, ...]
    objective: tuple[Fraction, ...]
    rows: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]
    row_labels: tuple[str, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)

    def column(self, i: int) -> tuple[Fraction, ...]:
        return tuple(row[i] for row in self.rows)


@dataclass(frozen=True)
class Solution:
    program: Program
    value: Fraction
    primal: tuple[Fraction, ...]
    dual: dict[str, Fraction]
    basis: tuple[int, ...]
    support: tuple[int, ...] = field(default=())

    def dual_vector(self) -> tuple[Fraction, ...]:
        return tuple(self.dual[label] for label in self.program.row_labels)

    def reduced_costs(self) -> tuple[Fraction, ...]:
        """Dual slacks ``c_L - y.A_L`` (>= 0 for MIN, <= 0 for MAX at optimum)."""
        y = self.dual_vector()
        p = self.program
        return tuple(
            p.objective[i] - sum((yi * a for yi, a in zip(y, p.column(i))), Fraction(0))
            for i in range(len(p.columns))
        )

    def dual_value(self) -> Fraction:
        return sum((yi * bi for yi, bi in zip(self.dual_vector(), self.program.rhs)), Fraction(0))


def build_program(
    views: Sequence[LocalView] | None = None,
    J: Iterable[int] = DEFAULT_J,
    B=Fraction(1, 5),
    lam=Fraction(1, 10),
    sense=Sense.MIN,
) -> Program:
    """Occupancy program over ``views``: one normalization row plus one row per ``j`` in ``J``."""
    if views is None:
        views = enumerate_views()
    J = tuple(sorted(set(J)))
    if any(j not in range(4) for j in J):
        raise ValueError(f"constraint indices must lie in 0..3, got {J}")
    B, lam = as_fraction(B), as_fraction(lam)
    if B <= 0:
        raise ValueError("B must be positive")
    stats = [view_stats(v, B, lam) for v in views]
    rows = [tuple(Fraction(1) for _ in views)]
    rows += [tuple(s.constraint(j) for s in stats) for j in J]
    return Program(
        sense=Sense.parse(sense),
        columns=tuple(views),
        objective=tuple(s.alpha for s in stats),
        rows=tuple(rows),
        rhs=(Fraction(1),) + (Fraction(0),) * len(J),
        row_labels=("p",) + tuple(str(j) for j in J),
    )


class _Tableau:
    """Dense tableau ``[A | b]`` with basis bookkeeping; pivots are exact."""

    def __init__(self, rows, rhs, basis):
        self.t = [list(r) + [b] for r, b in zip(rows, rhs)]
        self.basis = list(basis)

    def pivot(self, r: int, c: int) -> None:
        t = self.t
        pr = t[r]
        inv = 1 / pr[c]
        t[r] = pr = [v * inv for v in pr]
        for i, row in enumerate(t):
            if i != r and row[c]:
                f = row[c]
                t[i] = [a - f * b for a, b in zip(row, pr)]
        self.basis[r] = c

    def run(self, cost: Sequence[Fraction], allowed: Sequence[bool]) -> None:
        """Minimize ``cost.x`` from the current basic feasible solution (Bland's rule)."""
        while True:
            cb = [cost[b] for b in self.basis]
            entering = None
            ncols = len(self.t[0]) - 1 if self.t else 0
            for j in range(ncols):
                if not allowed[j] or j in self.basis:
                    continue
                rc = cost[j] - sum((c * row[j] for c, row in zip(cb, self.t) if c), Fraction(0))
                if rc < 0:
                    entering = j
                    break
            if entering is None:
                return
            best = None
            for i, row in enumerate(self.t):
                if row[entering] > 0:
                    ratio = row[-1] / row[entering]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise UnboundedError("objective unbounded")
            self.pivot(best[1], entering)


def solve_linear_system(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Exact Gauss-Jordan solve of a square nonsingular system."""
    n = len(matrix)
    a = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def solve_exact(program: Program) -> Solution:
    """Optimal basic solution with exact primal, dual and basis."""
    m, n = program.shape
    rows = [list(r) for r in program.rows]
    rhs = list(program.rhs)
    flipped = [r < 0 for r in rhs]
    for i in range(m):
        if flipped[i]:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    # phase 1: artificial columns n..n+m-1
    art_rows = [row + [Fraction(int(i == k)) for k in range(m)] for i, row in enumerate(rows)]
    tab = _Tableau(art_rows, rhs, range(n, n + m))
    phase1_cost = [Fraction(0)] * n + [Fraction(1)] * m
    tab.run(phase1_cost, [True] * (n + m))
    infeas = sum((tab.t[i][-1] for i, b in enumerate(tab.basis) if b >= n), Fraction(0))
    if infeas > 0:
        cb = [phase1_cost[b] for b in tab.basis]
        basis_rows = [[art_rows[i][b] for b in tab.basis] for i in range(m)]
        w = solve_linear_system(list(map(list, zip(*basis_rows))), cb)
        w = [-v if f else v for v, f in zip(w, flipped)]
        raise InfeasibleError("occupancy program is infeasible", w)
    # drive zero-level artificials out; rows that cannot be cleared are redundant
    redundant = []
    for r in range(m):
        if tab.basis[r] < n:
            continue
        c = next((j for j in range(n) if tab.t[r][j] != 0), None)
        if c is None:
            redundant.append(r)
        else:
            tab.pivot(r, c)
    keep = [r for r in range(m) if r not in redundant]
    tab.t = [tab.t[r] for r in keep]
    tab.basis = [tab.basis[r] for r in keep]
    sign = 1 if program.sense is Sense.MIN else -1
    cost = [sign * c for c in program.objective] + [Fraction(0)] * m
    tab.run(cost, [True] * n + [False] * m)

    primal = [Fraction(0)] * n
    for row, b in zip(tab.t, tab.basis):
        primal[b] = row[-1]
    basis = tuple(tab.basis)
    # y solves y.A_B = c_B on the non-redundant rows
    kept_rows = [program.rows[r] for r in keep]
    bt = [[kept_rows[i][b] for i in range(len(keep))] for b in basis]
    y_kept = solve_linear_system(bt, [program.objective[b] for b in basis])
    dual = {label: Fraction(0) for label in program.row_labels}
    for r, val in zip(keep, y_kept):
        dual[program.row_labels[r]] = val
    value = sum((c * x for c, x in zip(program.objective, primal)), Fraction(0))
    support = tuple(i for i, x in enumerate(primal) if x > 0)
    return Solution(program, value, tuple(primal), dual, tuple(sorted(basis)), support)


def support_of(solution: Solution) -> list[LocalView]:
    return [solution.program.columns[i] for i in solution.support]


def solve_occupancy(B, lam, sense=Sense.MIN, J=DEFAULT_J, exclude_triangle=False) -> Solution:
    """Convenience wrapper for the full or triangle-free view set."""
    views = enumerate_views()
    if exclude_triangle:
        views = views[1:]
    return solve_exact(build_program(views, J, B, lam, sense))
