"""Depth-2 local views of cubic graphs and their conditional Ising statistics.

A view is stored in reduced form: the edge structure among the root's three
neighbors plus, for every neighbor ``v``, the number ``p_v`` of its boundary
neighbors (distance 2 from the root) carrying spin ``+``.  With the boundary
spins fixed, the conditional measure on the root and its neighbors depends
only on this data.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Sequence

import numpy as np

from .graphs import Graph
from .ising import DegenerateMeasureError, MAX_VERTICES, GraphSizeError
from .numerics import DomainError, Interval, Scalar, as_fraction
from .poly import Poly

__all__ = [
    "Structure",
    "LocalView",
    "ViewPolys",
    "ViewStats",
    "enumerate_views",
    "view_polys",
    "view_stats",
    "triangle_view",
    "k33_views",
    "views_without_triangle",
    "empirical_distribution",
    "distribution_support",
]


class Structure(enum.IntEnum):
    TRIANGLE = 0
    PATH = 1
    ONE_EDGE = 2
    EMPTY = 3


# neighbor positions 0, 1, 2: edges among them and boundary capacity per position
_EDGES = {
    Structure.TRIANGLE: ((0, 1), (1, 2), (0, 2)),
    Structure.PATH: ((0, 1), (1, 2)),
    Structure.ONE_EDGE: ((0, 1),),
    Structure.EMPTY: (),
}
_CAPACITY = {
    Structure.TRIANGLE: (0, 0, 0),
    Structure.PATH: (1, 0, 1),
    Structure.ONE_EDGE: (1, 1, 2),
    Structure.EMPTY: (2, 2, 2),
}


def _canonical_counts(structure: Structure, counts: Sequence[int]) -> tuple[int, int, int]:
    a, b, c = counts
    if structure is Structure.PATH:
        return (min(a, c), b, max(a, c))
    if structure is Structure.ONE_EDGE:
        return (min(a, b), max(a, b), c)
    if structure is Structure.EMPTY:
        return tuple(sorted(counts))  # type: ignore[return-value]
    return (a, b, c)


@dataclass(frozen=True, order=True)
class LocalView:
    """Reduced depth-2 view: neighbor structure and per-neighbor boundary plus counts."""

    structure: Structure
    plus_counts: tuple[int, int, int]

    def __post_init__(self):
        caps = _CAPACITY[self.structure]
        if len(self.plus_counts) != 3 or any(not 0 <= p <= c for p, c in zip(self.plus_counts, caps)):
            raise ValueError(f"plus counts {self.plus_counts} do not fit {self.structure.name}")
        if _canonical_counts(self.structure, self.plus_counts) != tuple(self.plus_counts):
            raise ValueError(f"plus counts {self.plus_counts} not in canonical order")

    @property
    def capacities(self) -> tuple[int, int, int]:
        return _CAPACITY[self.structure]

    @property
    def neighbor_edges(self) -> tuple[tuple[int, int], ...]:
        return _EDGES[self.structure]

    @property
    def label(self) -> str:
        if self.structure is Structure.TRIANGLE:
            return "TRIANGLE"
        return f"{self.structure.name}({','.join(map(str, self.plus_counts))})"

    def __str__(self):
        return self.label


@lru_cache(maxsize=None)
def _all_views() -> tuple[LocalView, ...]:
    views = [LocalView(Structure.TRIANGLE, (0, 0, 0))]
    for a, c in combinations_with_replacement(range(2), 2):
        views.append(LocalView(Structure.PATH, (a, 0, c)))
    for (a, b), c in product(combinations_with_replacement(range(2), 2), range(3)):
        views.append(LocalView(Structure.ONE_EDGE, (a, b, c)))
    for trip in combinations_with_replacement(range(3), 3):
        views.append(LocalView(Structure.EMPTY, trip))
    return tuple(sorted(views))


def enumerate_views(delta: int = 3) -> list[LocalView]:
    """All 23 depth-2 views for cubic graphs, ordered by (structure, plus counts)."""
    if delta != 3:
        raise DomainError("only delta=3 local views are supported")
    return list(_all_views())


def triangle_view() -> LocalView:
    return _all_views()[0]


def k33_views() -> list[LocalView]:
    """The three views that occur in K_{3,3}: all neighbors see the same boundary."""
    return [LocalView(Structure.EMPTY, (p, p, p)) for p in range(3)]


def views_without_triangle() -> list[LocalView]:
    return list(_all_views()[1:])


@dataclass(frozen=True)
class ViewPolys:
    """Integer polynomials in ``(B, lam)`` sharing the denominator ``z``.

    ``alpha = alpha_num / z``, ``gamma_u[j] = gu_num[j] / z`` and
    ``gamma_n[j] = gn3_num[j] / (3 z)``.
    """

    z: Poly
    alpha_num: Poly
    gu_num: tuple[Poly, ...]
    gn3_num: tuple[Poly, ...]

    def constraint_num(self, j: int) -> Poly:
        """Numerator of ``gamma_u[j] - gamma_n[j]`` over ``3 z``."""
        return self.gu_num[j] * 3 - self.gn3_num[j]


@lru_cache(maxsize=None)
def view_polys(view: LocalView) -> ViewPolys:
    caps = view.capacities
    p = view.plus_counts
    edges = view.neighbor_edges
    nbr_adj = [[w for e in edges for w in e if v in e and w != v] for v in range(3)]
    z: dict = {}
    alpha: dict = {}
    gu = [dict() for _ in range(4)]
    gn3 = [dict() for _ in range(4)]

    def bump(acc, mono, c=1):
        acc[mono] = acc.get(mono, 0) + c

    for su, *sn in product((0, 1), repeat=4):
        plus = su + sum(sn)
        mono = sum(1 for s in sn if s == su)
        mono += sum(1 for a, b in edges if sn[a] == sn[b])
        mono += sum(p[v] if sn[v] else caps[v] - p[v] for v in range(3))
        key = (mono, plus)
        bump(z, key)
        if su:
            bump(alpha, key)
        bump(gu[sum(sn)], key)
        for v in range(3):
            deg_plus = su + sum(sn[w] for w in nbr_adj[v]) + p[v]
            bump(gn3[deg_plus], key)
    return ViewPolys(
        Poly(z),
        Poly(alpha),
        tuple(Poly(d) for d in gu),
        tuple(Poly(d) for d in gn3),
    )


@dataclass(frozen=True)
class ViewStats:
    alpha: Scalar
    gamma_u: tuple[Scalar, ...]
    gamma_n: tuple[Scalar, ...]

    def constraint(self, j: int) -> Scalar:
        return self.gamma_u[j] - self.gamma_n[j]


def _ratio(num: Poly, den: Poly, B, lam, scale=1):
    if isinstance(B, Interval) or isinstance(lam, Interval):
        B, lam = Interval._coerce(B), Interval._coerce(lam)
        # nonnegative coefficients: both polynomials are monotone on the box
        n_lo, n_hi = num(B.lo, lam.lo), num(B.hi, lam.hi)
        d_lo, d_hi = den(B.lo, lam.lo) * scale, den(B.hi, lam.hi) * scale
        if d_lo <= 0:
            raise DegenerateMeasureError("conditional partition function not bounded away from 0")
        lo, hi = n_lo / d_hi, n_hi / d_lo
        return Interval(max(lo, Fraction(0)), min(hi, Fraction(1)))
    d = den(B, lam) * scale
    if d == 0:
        raise DegenerateMeasureError("conditional partition function vanishes")
    return num(B, lam) / d


def view_stats(view: LocalView, B, lam) -> ViewStats:
    """Conditional statistics of ``view`` at a rational point or over an interval box."""
    if not isinstance(B, Interval):
        B = as_fraction(B)
    if not isinstance(lam, Interval):
        lam = as_fraction(lam)
    b_lo = B.lo if isinstance(B, Interval) else B
    l_lo = lam.lo if isinstance(lam, Interval) else lam
    if b_lo < 0 or l_lo < 0:
        raise DomainError("B and lam must be nonnegative")
    vp = view_polys(view)
    alpha = _ratio(vp.alpha_num, vp.z, B, lam)
    gamma_u = tuple(_ratio(vp.gu_num[j], vp.z, B, lam) for j in range(4))
    gamma_n = tuple(_ratio(vp.gn3_num[j], vp.z, B, lam, 3) for j in range(4))
    return ViewStats(alpha, gamma_u, gamma_n)


# -- empirical distribution ---------------------------------------------------------


def _view_index_table() -> dict[tuple[Structure, tuple[int, int, int]], int]:
    return {(v.structure, v.plus_counts): i for i, v in enumerate(_all_views())}


def _neighbor_layout(g: Graph, u: int):
    """Structure of N(u), neighbors in positional order, and their outer neighbors."""
    nbrs = sorted(g.adj[u])
    inner = {v: [w for w in nbrs if w != v and g.has_edge(v, w)] for v in nbrs}
    n_edges = sum(len(x) for x in inner.values()) // 2
    structure = {3: Structure.TRIANGLE, 2: Structure.PATH, 1: Structure.ONE_EDGE, 0: Structure.EMPTY}[n_edges]
    if structure is Structure.PATH:
        mid = next(v for v in nbrs if len(inner[v]) == 2)
        ends = [v for v in nbrs if v != mid]
        order = [ends[0], mid, ends[1]]
    elif structure is Structure.ONE_EDGE:
        lone = next(v for v in nbrs if not inner[v])
        order = [v for v in nbrs if v != lone] + [lone]
    else:
        order = nbrs
    closed = set(nbrs) | {u}
    outer = [[w for w in g.adj[v] if w not in closed] for v in order]
    return structure, order, outer


def empirical_distribution(g: Graph, B, lam) -> list[Fraction]:
    """Distribution of the random local view of ``g`` under its Ising measure.

    Entry ``i`` is the probability that a uniform root together with an
    Ising sample produces view ``enumerate_views()[i]``.
    """
    if not g.is_cubic():
        raise DomainError("empirical distribution needs a 3-regular graph")
    if g.n > MAX_VERTICES:
        raise GraphSizeError(f"enumeration limited to n <= {MAX_VERTICES}")
    B, lam = as_fraction(B), as_fraction(lam)
    table = _empirical_count_table(g)
    Bp = [Fraction(1)]
    for _ in range(g.m):
        Bp.append(Bp[-1] * B)
    lp = [Fraction(1)]
    for _ in range(g.n):
        lp.append(lp[-1] * lam)
    weights = [
        sum((c * Bp[m] * lp[k] for (k, m), c in cells.items()), Fraction(0)) for cells in table
    ]
    total = sum(weights, Fraction(0))
    if total == 0:
        raise DegenerateMeasureError("Z_G vanishes")
    return [w / total for w in weights]


@lru_cache(maxsize=None)
def _empirical_count_table(g: Graph) -> tuple[dict[tuple[int, int], int], ...]:
    """Per view: counts of (root, assignment) pairs by (plus spins, mono edges)."""
    index = _view_index_table()
    sigma = np.arange(1 << g.n, dtype=np.int64)
    bits = (sigma[:, None] >> np.arange(g.n)) & 1
    plus = bits.sum(axis=1)
    mono = np.zeros(len(sigma), dtype=np.int64)
    for a, b in g.edges:
        mono += bits[:, a] == bits[:, b]
    width = g.m + 1
    km = plus * width + mono
    nviews = len(index)
    acc = np.zeros(nviews * (g.n + 1) * width, dtype=np.int64)
    for u in range(g.n):
        structure, order, outer = _neighbor_layout(g, u)
        pc = [bits[:, o].sum(axis=1) if o else np.zeros(len(sigma), dtype=np.int64) for o in outer]
        code = pc[0] * 9 + pc[1] * 3 + pc[2]
        lookup = np.full(27, -1, dtype=np.int64)
        for a, b, c in product(range(3), repeat=3):
            caps = _CAPACITY[structure]
            if a > caps[0] or b > caps[1] or c > caps[2]:
                continue
            lookup[a * 9 + b * 3 + c] = index[(structure, _canonical_counts(structure, (a, b, c)))]
        view_id = lookup[code]
        assert (view_id >= 0).all()
        acc += np.bincount(view_id * ((g.n + 1) * width) + km, minlength=len(acc))
    acc = acc.reshape(nviews, g.n + 1, width)
    out = []
    for i in range(nviews):
        ks, ms = np.nonzero(acc[i])
        out.append({(int(k), int(m)): int(acc[i, k, m]) for k, m in zip(ks, ms)})
    return tuple(out)


def distribution_support(x: Sequence[Fraction]) -> list[int]:
    return [i for i, v in enumerate(x) if v > 0]
