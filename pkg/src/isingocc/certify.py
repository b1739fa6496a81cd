"""Dual certificates built from tight triples, checked pointwise and over regions.

Pointwise checks are exact.  Region checks work with the slack of every view
as a rational function of ``(B, lam)``: its sign is the sign of an integer
polynomial numerator times the sign of the tight-system determinant, because
every other factor is a partition function.  In slope coordinates
``lam = t B`` both are certified on dyadic boxes by :mod:`isingocc.boxsign`.
"""

from __future__ import annotations

import enum
import json
import random
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence

from .boxsign import BoxPoly, Cell
from .graphs import named_graph
from .ising import occupancy_fraction, occupancy_polynomials
from .localviews import (
    LocalView,
    Structure,
    enumerate_views,
    view_polys,
    view_stats,
    views_without_triangle,
)
from .lp import DEFAULT_J, Sense, solve_exact, build_program
from .numerics import (
    Interval,
    IntervalDivisionError,
    as_fraction,
    format_rational,
    parse_rational,
)
from .poly import Poly

__all__ = [
    "Certificate",
    "Region",
    "Recipe",
    "SingularSystemError",
    "parse_view",
    "dual_from_triple",
    "check_point",
    "slacks_feasible",
    "discover_triple",
    "load_regions",
    "region",
    "random_points",
    "certify_point",
    "slack_numerators",
    "slope_range",
    "Status",
    "VerifyReport",
    "verify_region",
    "DEFAULT_MIN_WIDTH",
    "DEFAULT_MAX_BOXES",
]


class SingularSystemError(ZeroDivisionError):
    """The tight-triple system is singular (or its determinant enclosure contains 0)."""


def parse_view(label: str) -> LocalView:
    """Inverse of :attr:`LocalView.label`, e.g. ``"ONE_EDGE(0,0,1)"``."""
    label = label.strip()
    if label == "TRIANGLE":
        return LocalView(Structure.TRIANGLE, (0, 0, 0))
    name, _, rest = label.partition("(")
    counts = tuple(int(x) for x in rest.rstrip(")").split(","))
    return LocalView(Structure[name], counts)  # type: ignore[arg-type]


@dataclass(frozen=True)
class Certificate:
    """Dual point ``(y_p, y_j)`` from three tight constraints.

    ``yp_solved`` is the value from the square system; ``yp`` is what the
    checks use (the candidate graph's occupancy fraction after the override).
    """

    sense: Sense
    triple: tuple[LocalView, ...]
    candidate: str
    J: tuple[int, ...]
    yp_solved: object
    y: dict
    yp: object

    def slack(self, view: LocalView, B, lam):
        s = view_stats(view, B, lam)
        total = self.yp
        for j in self.J:
            total = total + s.constraint(j) * self.y[j]
        return s.alpha - total


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _cramer3(rows, rhs):
    det = _det3(rows)
    if isinstance(det, Interval):
        if det.contains_zero():
            raise SingularSystemError(f"determinant enclosure {det} contains 0")
    elif det == 0:
        raise SingularSystemError("tight-triple system is singular")
    out = []
    for c in range(3):
        m = [[rhs[i] if k == c else rows[i][k] for k in range(3)] for i in range(3)]
        try:
            out.append(_det3(m) / det)
        except IntervalDivisionError as exc:  # pragma: no cover - guarded above
            raise SingularSystemError(str(exc)) from exc
    return out


def _candidate_alpha(candidate: str, B, lam):
    g = named_graph(candidate)
    if isinstance(B, Interval) or isinstance(lam, Interval):
        num, den = occupancy_polynomials(g)
        B, lam = Interval._coerce(B), Interval._coerce(lam)
        # numerator and denominator have nonnegative coefficients
        lo = num(B.lo, lam.lo) / den(B.hi, lam.hi)
        hi = num(B.hi, lam.hi) / den(B.lo, lam.lo)
        return Interval(max(lo, Fraction(0)), min(hi, Fraction(1)))
    return occupancy_fraction(g, B, lam)


def dual_from_triple(
    triple: Sequence[LocalView],
    B,
    lam,
    J: Sequence[int] = DEFAULT_J,
    sense=Sense.MIN,
    candidate: str = "K4",
) -> Certificate:
    """Solve the three tight dual constraints for ``(y_p, y_{J[0]}, y_{J[1]})``.

    Works over rationals or over an interval box (Cramer's rule with a
    determinant enclosure that must exclude 0).
    """
    J = tuple(J)
    if len(J) != 2 or len(triple) != 3:
        raise ValueError("a certificate needs |J| = 2 and exactly three tight views")
    if not isinstance(B, Interval):
        B = as_fraction(B)
    if not isinstance(lam, Interval):
        lam = as_fraction(lam)
    rows, rhs = [], []
    for v in triple:
        s = view_stats(v, B, lam)
        rows.append([Fraction(1)] + [s.constraint(j) for j in J])
        rhs.append(s.alpha)
    yp, y0, y1 = _cramer3(rows, rhs)
    return Certificate(
        sense=Sense.parse(sense),
        triple=tuple(triple),
        candidate=candidate,
        J=J,
        yp_solved=yp,
        y={J[0]: y0, J[1]: y1},
        yp=_candidate_alpha(candidate, B, lam),
    )


def check_point(cert: Certificate, views: Sequence[LocalView], B, lam) -> list:
    """Per-view slack ``alpha_L - y_p - sum_j (gamma_u(j) - gamma_n(j)) y_j``.

    ``y_p`` is the candidate's occupancy fraction.  MIN certificates need
    every slack >= 0, MAX certificates every slack <= 0.
    """
    return [cert.slack(v, B, lam) for v in views]


def slacks_feasible(slacks: Sequence, sense: Sense) -> bool:
    if sense is Sense.MIN:
        return all((s.lo if isinstance(s, Interval) else s) >= 0 for s in slacks)
    return all((s.hi if isinstance(s, Interval) else s) <= 0 for s in slacks)


def discover_triple(B, lam, sense=Sense.MIN, J=DEFAULT_J) -> tuple[LocalView, ...]:
    """Basis of the exact LP optimum: three tight dual constraints at ``(B, lam)``."""
    sense = Sense.parse(sense)
    views = views_without_triangle() if sense is Sense.MIN else enumerate_views()
    sol = solve_exact(build_program(views, J, B, lam, sense))
    if len(sol.basis) != 3:
        raise SingularSystemError("optimal basis does not have three columns")
    return tuple(views[i] for i in sol.basis)


# -- regions ---------------------------------------------------------------------


@dataclass(frozen=True)
class Recipe:
    """How to certify a region: sense, candidate graph and one or more tight triples.

    A point (or box) is covered when the certificate from any one triple is
    feasible there.
    """

    sense: Sense
    triples: tuple[tuple[LocalView, ...], ...]
    candidate: str
    J: tuple[int, ...] = DEFAULT_J

    def __post_init__(self):
        if not self.triples or any(len(t) != 3 for t in self.triples):
            raise ValueError("a recipe needs at least one triple of three views")

    def views(self) -> list[LocalView]:
        return views_without_triangle() if self.sense is Sense.MIN else enumerate_views()


@dataclass(frozen=True)
class Region:
    """``box`` in ``(B, lam)`` intersected with ``g(B, lam) >= 0`` for every constraint."""

    name: str
    box: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    constraints: tuple[Poly, ...]
    sample: tuple[Fraction, Fraction]
    recipe: Optional[Recipe] = None
    description: str = ""

    def contains(self, B, lam) -> bool:
        B, lam = as_fraction(B), as_fraction(lam)
        (b0, b1), (l0, l1) = self.box
        if not (b0 <= B <= b1 and l0 <= lam <= l1):
            return False
        return all(g(B, lam) >= 0 for g in self.constraints)

    def with_recipe(self, recipe: Recipe) -> "Region":
        return replace(self, recipe=recipe)


def _parse_poly(spec) -> Poly:
    """A list of ``[i, j, "p/q"]`` entries meaning ``sum c B^i lam^j``."""
    terms: dict = {}
    for i, j, c in spec:
        key = (int(i), int(j))
        terms[key] = terms.get(key, 0) + parse_rational(str(c))
    return Poly(terms)


def _region_from_json(d: dict) -> Region:
    box = tuple((parse_rational(lo), parse_rational(hi)) for lo, hi in d["box"])
    recipe = None
    if "recipe" in d:
        r = d["recipe"]
        recipe = Recipe(
            sense=Sense.parse(r["sense"]),
            triples=tuple(tuple(parse_view(x) for x in t["views"]) for t in r["triples"]),
            candidate=r["candidate"],
            J=tuple(r.get("J", DEFAULT_J)),
        )
    return Region(
        name=d["name"],
        box=box,  # type: ignore[arg-type]
        constraints=tuple(_parse_poly(c) for c in d.get("constraints", [])),
        sample=tuple(parse_rational(x) for x in d["sample"]),  # type: ignore[arg-type]
        recipe=recipe,
        description=d.get("description", ""),
    )


@lru_cache(maxsize=None)
def _catalog(path: Optional[str]) -> dict[str, Region]:
    if path is None:
        text = resources.files("isingocc").joinpath("data/regions.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    regions = [_region_from_json(d) for d in data["regions"]]
    for r in regions:
        if not r.contains(*r.sample):
            raise ValueError(f"region {r.name} does not contain its sample point")
    return {r.name: r for r in regions}


def load_regions(path: Optional[str] = None) -> dict[str, Region]:
    return dict(_catalog(path))


def region(name: str) -> Region:
    cat = _catalog(None)
    try:
        return cat[name]
    except KeyError:
        raise KeyError(f"unknown region {name!r}; known: {', '.join(cat)}") from None


def random_points(reg: Region, count: int, rng: random.Random, denominator: int = 10**4):
    """Rational points of the region with ``B, lam > 0`` by rejection sampling."""
    (b0, b1), (l0, l1) = reg.box
    t0, t1 = slope_range(reg)
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 1000 * count:
            raise RuntimeError(f"could not sample region {reg.name}")
        B = b0 + (b1 - b0) * Fraction(rng.randint(0, denominator), denominator)
        t = t0 + (t1 - t0) * Fraction(rng.randint(0, denominator), denominator)
        lam = t * B
        if B > 0 and lam > 0 and reg.contains(B, lam):
            out.append((B, lam))
    return out


def certify_point(recipe: Recipe, B, lam) -> Optional[tuple[LocalView, ...]]:
    """First triple of the recipe whose exact certificate is feasible at ``(B, lam)``."""
    views = recipe.views()
    for triple in recipe.triples:
        try:
            cert = dual_from_triple(triple, B, lam, recipe.J, recipe.sense, recipe.candidate)
        except SingularSystemError:
            continue
        if slacks_feasible(check_point(cert, views, B, lam), recipe.sense):
            return triple
    return None


# -- slack polynomials -------------------------------------------------------------


def slack_numerators(
    triple: Sequence[LocalView], candidate: str, views: Sequence[LocalView], J=DEFAULT_J
) -> tuple[Poly, dict[LocalView, Poly]]:
    """``(D, {L: N_L})`` with ``slack_L = N_L / (3 Z_L n Z_cand D)``.

    ``D`` is the determinant of the tight system with rows scaled by ``3 Z_T``;
    all partition functions are positive for ``B, lam > 0``.
    """
    J = tuple(J)
    rows, rhs = [], []
    for v in triple:
        vp = view_polys(v)
        rows.append([vp.z * 3] + [vp.constraint_num(j) for j in J])
        rhs.append(vp.alpha_num * 3)
    det = _det3(rows)
    minors = []
    for c in (1, 2):
        m = [[rhs[i] if k == c else rows[i][k] for k in range(3)] for i in range(3)]
        minors.append(_det3(m))
    a_num, a_den = occupancy_polynomials(named_graph(candidate))
    out = {}
    for v in views:
        vp = view_polys(v)
        dual_part = vp.constraint_num(J[0]) * minors[0] + vp.constraint_num(J[1]) * minors[1]
        out[v] = vp.alpha_num * a_den * det * 3 - a_num * vp.z * det * 3 - a_den * dual_part
    return det, out


def _slope_reduce(g: Poly) -> Poly:
    """``g(B, tB)`` divided by its monomial content (positive for ``B, t > 0``)."""
    w = g.wedge()
    if w.is_zero():
        return w
    return w.divide_monomial(*w.monomial_content())


def _slack_reduce(g: Poly) -> Poly:
    """:func:`_slope_reduce` and then every factor ``1 - B`` removed.

    ``1 - B >= 0`` on the parameter square and the slacks vanish identically
    at ``B = 1``, where all spins decouple.
    """
    w = _slope_reduce(g)
    if w.is_zero():
        return w
    r, q = w.divide_root_x(1)
    return q * (-1) ** r


def slope_range(reg: Region) -> tuple[Fraction, Fraction]:
    """Enclosure ``[t_lo, t_hi]`` of ``lam / B`` over the region.

    Derived from the box and from constraints of the form ``a(B) + b lam >= 0``
    with constant ``b``.
    """
    (b0, b1), (l0, l1) = reg.box
    Bi = Interval(b0, b1)
    lows, highs = [Fraction(0)], []
    if b0 > 0:
        highs.append(l1 / b0)
    if b1 > 0:
        lows.append(l0 / b1)
    for g in reg.constraints:
        if any(j > 1 for _, j in g.terms) or any(j == 1 and i > 0 for i, j in g.terms):
            continue
        b = g.terms.get((0, 1), 0)
        if not b:
            continue
        a = Poly({k: c for k, c in g.terms.items() if k[1] == 0})
        # lam >= -a/b (b > 0) or lam <= a/(-b) (b < 0); divide by B
        ratio = None
        content = a.monomial_content()[0] if not a.is_zero() else 1
        if a.is_zero():
            ratio = Interval(0)
        elif content >= 1:
            ratio = a.divide_monomial(1, 0)(Bi, Bi)
            ratio = Interval._coerce(ratio)
        elif b0 > 0:
            ratio = Interval._coerce(a(Bi, Bi)) / Bi
        if ratio is None:
            continue
        bound = ratio * (-1 / Fraction(b))
        if b < 0:
            highs.append(bound.hi)
        else:
            lows.append(bound.lo)
    if not highs:
        raise ValueError(f"region {reg.name} has no finite bound on lam/B")
    t0, t1 = max(lows), min(highs)
    if t0 >= t1:
        raise ValueError(f"region {reg.name} has empty slope range")
    return t0, t1


# -- region verification -----------------------------------------------------------


class Status(enum.Enum):
    VERIFIED = "VERIFIED"
    FAILED = "FAILED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class VerifyReport:
    region: str
    status: Status
    boxes_processed: int = 0
    boxes_certified: int = 0
    boxes_discarded: int = 0
    max_depth_reached: bool = False
    failure_witness: Optional[dict] = None
    triple_usage: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def summary(self) -> str:
        line = (
            f"{self.region}: {self.status.value} boxes={self.boxes_processed} "
            f"certified={self.boxes_certified} discarded={self.boxes_discarded}"
        )
        if self.failure_witness:
            line += f" witness={self.failure_witness}"
        return line

    def to_json(self) -> dict:
        return {
            "region": self.region,
            "status": self.status.value,
            "boxes_processed": self.boxes_processed,
            "boxes_certified": self.boxes_certified,
            "boxes_discarded": self.boxes_discarded,
            "max_depth_reached": self.max_depth_reached,
            "failure_witness": self.failure_witness,
            "triple_usage": self.triple_usage,
            "elapsed_seconds": round(self.elapsed, 3),
        }


DEFAULT_MIN_WIDTH = Fraction(1, 2**20)
DEFAULT_MAX_BOXES = 10**6


class _TripleCheck:
    def __init__(self, triple, recipe: Recipe, xbox, ybox):
        det, nums = slack_numerators(triple, recipe.candidate, recipe.views(), recipe.J)
        self.triple = triple
        self.det = BoxPoly(_slack_reduce(det), xbox, ybox)
        self.nums = [BoxPoly(_slack_reduce(n), xbox, ybox) for n in nums.values() if not n.is_zero()]
        self.sense_sign = 1 if recipe.sense is Sense.MIN else -1

    def certifies(self, cell: Cell, open_axes) -> bool:
        if self.det.zero:
            return False
        sd = self.det.sign_on(cell, open_axes)
        if not sd:
            return False
        sign = sd * self.sense_sign
        for idx, bp in enumerate(self.nums):
            if not bp.nonneg(cell, sign):
                # the same view usually fails again in the children
                self.nums.insert(0, self.nums.pop(idx))
                return False
        return True

    def violated_at_center(self, cell: Cell) -> bool:
        """Exact screen: some slack has the wrong strict sign at the cell center."""
        sd = self.det.sign_at_center(cell)
        if not sd:
            return True
        sign = sd * self.sense_sign
        return any(bp.sign_at_center(cell) * sign < 0 for bp in self.nums)


class _Verifier:
    """Per-process state: boxed polynomials for the region constraints and each triple."""

    def __init__(self, reg: Region, recipe: Recipe):
        self.region = reg
        self.recipe = recipe
        (b0, b1), (l0, l1) = reg.box
        t0, t1 = slope_range(reg)
        self.xbox, self.ybox = (b0, b1), (t0, t1)
        self.root_open = (b0 == 0, t0 == 0)
        gs = list(reg.constraints)
        if l0 > 0:
            gs.append(Poly({(0, 1): 1, (0, 0): -l0}))
        gs.append(Poly({(0, 0): l1, (0, 1): -1}))
        reduced = [_slope_reduce(g) for g in gs]
        self.constraints = [BoxPoly(g, self.xbox, self.ybox) for g in reduced if not g.is_zero()]
        self.checks = [_TripleCheck(t, recipe, self.xbox, self.ybox) for t in recipe.triples]

    def widths(self, cell: Cell) -> tuple[Fraction, Fraction]:
        (b0, b1), (t0, t1) = self.xbox, self.ybox
        return (b1 - b0) / (1 << cell.k), (t1 - t0) / (1 << cell.l)

    def midpoint(self, cell: Cell) -> tuple[Fraction, Fraction]:
        (b0, b1), (t0, t1) = self.xbox, self.ybox
        u0, u1, v0, v1 = cell.unit_bounds()
        B = b0 + (b1 - b0) * (u0 + u1) / 2
        t = t0 + (t1 - t0) * (v0 + v1) / 2
        return B, t * B

    def process(self, cell: Cell):
        """``("out", None)``, ``("ok", triple index)`` or ``("open", witness or None)``."""
        axes = (self.root_open[0] and cell.m == 0, self.root_open[1] and cell.n == 0)
        for g in self.constraints:
            if g.nonneg(cell, -1, strict=True, open_axes=axes):
                return ("out", None)
        for idx, chk in enumerate(self.checks):
            if chk.certifies(cell, axes):
                return ("ok", idx)
        if not all(chk.violated_at_center(cell) for chk in self.checks):
            return ("open", None)
        B, lam = self.midpoint(cell)
        if B > 0 and lam > 0 and self.region.contains(B, lam):
            # confirm through the independent exact pipeline
            if certify_point(self.recipe, B, lam) is None:
                return ("open", {"B": format_rational(B), "lam": format_rational(lam)})
        return ("open", None)


_WORKER: Optional[_Verifier] = None


def _worker_init(reg: Region, recipe: Recipe) -> None:
    global _WORKER
    _WORKER = _Verifier(reg, recipe)


def _worker_process(cell: Cell):
    assert _WORKER is not None
    return _WORKER.process(cell)


def verify_region(
    reg: Region,
    recipe: Optional[Recipe] = None,
    min_width=DEFAULT_MIN_WIDTH,
    max_boxes: int = DEFAULT_MAX_BOXES,
    jobs: int = 1,
) -> VerifyReport:
    """Branch-and-prune over the region in ``(B, t = lam/B)`` coordinates.

    Boxes certifiably outside the region are discarded; a box passes when, for
    one of the recipe's triples, the determinant has a certified strict sign
    and every slack numerator a certified sign of the right kind.  Other boxes
    are split along their wider side.  ``FAILED`` carries a rational region
    point where no triple gives a feasible exact certificate; ``INCONCLUSIVE``
    means a box reached ``min_width`` or the box budget ran out.

    Points with ``B = 0`` or ``lam = 0`` are limits and are not certified.
    """
    recipe = recipe or reg.recipe
    if recipe is None:
        raise ValueError(f"region {reg.name} has no certificate recipe")
    min_width = as_fraction(min_width)
    started = time.perf_counter()
    report = VerifyReport(region=reg.name, status=Status.VERIFIED)
    sb, sl = reg.sample
    if sb > 0 and sl > 0 and certify_point(recipe, sb, sl) is None:
        report.status = Status.FAILED
        report.failure_witness = {"B": format_rational(sb), "lam": format_rational(sl)}
        report.elapsed = time.perf_counter() - started
        return report
    usage = [0] * len(recipe.triples)
    local = _Verifier(reg, recipe)
    pool = None
    if jobs > 1:
        import multiprocessing

        pool = multiprocessing.get_context("fork").Pool(jobs, _worker_init, (reg, recipe))
    try:
        level = [Cell(0, 0, 0, 0)]
        while level:
            if report.boxes_processed + len(level) > max_boxes:
                report.status = Status.INCONCLUSIVE
                break
            if pool is not None and len(level) >= 4 * jobs:
                results = pool.map(_worker_process, level, chunksize=max(1, len(level) // (4 * jobs)))
            else:
                results = [local.process(c) for c in level]
            report.boxes_processed += len(level)
            nxt = []
            for cell, (kind, info) in zip(level, results):
                if kind == "out":
                    report.boxes_discarded += 1
                elif kind == "ok":
                    report.boxes_certified += 1
                    usage[info] += 1
                elif info is not None:
                    report.status = Status.FAILED
                    report.failure_witness = info
                else:
                    wb, wt = local.widths(cell)
                    if max(wb, wt) <= min_width:
                        report.max_depth_reached = True
                        if report.status is Status.VERIFIED:
                            report.status = Status.INCONCLUSIVE
                            report.failure_witness = _cell_box(local, cell)
                    else:
                        nxt.extend(cell.split(wb >= wt))
            if report.status is not Status.VERIFIED:
                break
            level = nxt
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    report.triple_usage = {
        " ".join(v.label for v in t): n for t, n in zip(recipe.triples, usage)
    }
    report.elapsed = time.perf_counter() - started
    return report


def _cell_box(ver: _Verifier, cell: Cell) -> dict:
    (b0, b1), (t0, t1) = ver.xbox, ver.ybox
    u0, u1, v0, v1 = cell.unit_bounds()
    return {
        "B": [format_rational(b0 + (b1 - b0) * u0), format_rational(b0 + (b1 - b0) * u1)],
        "t": [format_rational(t0 + (t1 - t0) * v0), format_rational(t0 + (t1 - t0) * v1)],
    }
