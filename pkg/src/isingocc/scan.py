"""Grid scans for occupancy-fraction minimizers and the critical-curve containment check."""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .certify import Region
from .graphs import Graph, canonical_graph6, canonical_key, graph_name
from .ising import magnetization_coefficients
from .numerics import Interval, as_fraction, format_rational, lambda_c

__all__ = [
    "CatalogEntry",
    "ScanRecord",
    "catalog_entries",
    "unit_grid",
    "scan_grid",
    "write_scan_csv",
    "CurvePoint",
    "region_lambda_interval",
    "curve_containment",
]


@dataclass(frozen=True)
class CatalogEntry:
    graph: Graph
    key: bytes
    graph6: str
    name: Optional[str]

    @property
    def label(self) -> str:
        return self.name or self.graph6


def catalog_entries(graphs: Iterable[Graph]) -> list[CatalogEntry]:
    """Entries sorted by canonical key; isomorphic duplicates collapse."""
    seen: dict[bytes, CatalogEntry] = {}
    for g in graphs:
        if not g.is_cubic():
            raise ValueError("scan catalogs must contain cubic graphs")
        key = canonical_key(g)
        if key not in seen:
            seen[key] = CatalogEntry(g, key, canonical_graph6(g), graph_name(g))
    return [seen[k] for k in sorted(seen)]


def unit_grid(size: int) -> list[Fraction]:
    """``{i/size : 0 < i < size}``."""
    if size < 2:
        raise ValueError("grid size must be at least 2")
    return [Fraction(i, size) for i in range(1, size)]


@dataclass(frozen=True)
class ScanRecord:
    B: Fraction
    lam: Fraction
    argmin: CatalogEntry
    argmin_value: Fraction
    argmax: CatalogEntry
    argmax_value: Fraction
    values: Optional[dict] = field(default=None, compare=False)


def _row_values(entries: Sequence[CatalogEntry], B: Fraction, lams: Sequence[Fraction]):
    coeffs = [magnetization_coefficients(e.graph, B) for e in entries]
    rows = []
    for lam in lams:
        vals = []
        for e, cs in zip(entries, coeffs):
            z = Fraction(0)
            moment = Fraction(0)
            p = Fraction(1)
            for k, c in enumerate(cs):
                if c:
                    z += c * p
                    moment += k * c * p
                p *= lam
            vals.append(moment / (e.graph.n * z))
        rows.append(vals)
    return rows


def _scan_row(args):
    entries, B, lams, keep = args
    out = []
    for lam, vals in zip(lams, _row_values(entries, B, lams)):
        # entries are sorted by key, so the first extremum wins ties
        imin = min(range(len(vals)), key=lambda i: vals[i])
        imax = max(range(len(vals)), key=lambda i: (vals[i], -i))
        out.append(
            ScanRecord(
                B=B,
                lam=lam,
                argmin=entries[imin],
                argmin_value=vals[imin],
                argmax=entries[imax],
                argmax_value=vals[imax],
                values={e.label: v for e, v in zip(entries, vals)} if keep else None,
            )
        )
    return out


def scan_grid(
    catalog: Iterable[Graph],
    B_grid: Sequence,
    lam_grid: Sequence,
    keep_values: bool = False,
    jobs: int = 1,
) -> list[ScanRecord]:
    """Exact argmin/argmax of the occupancy fraction at every grid point.

    Ties go to the smallest canonical key.  Records are ordered by ``(B, lam)``.
    """
    entries = catalog_entries(catalog)
    if not entries:
        raise ValueError("empty catalog")
    for e in entries:
        if e.graph.n > 14:
            raise ValueError("scan catalogs are limited to n <= 14")
    Bs = sorted(as_fraction(b) for b in B_grid)
    lams = sorted(as_fraction(x) for x in lam_grid)
    if any(b <= 0 for b in Bs) or any(x <= 0 for x in lams):
        raise ValueError("scan grids must be positive")
    tasks = [(entries, B, lams, keep_values) for B in Bs]
    if jobs > 1 and len(Bs) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(_scan_row, tasks))
    else:
        rows = [_scan_row(t) for t in tasks]
    return [r for row in rows for r in row]


CSV_COLUMNS = [
    "B",
    "lam",
    "argmin_key",
    "argmin_name",
    "argmin_value_num",
    "argmin_value_den",
    "argmax_key",
    "argmax_name",
    "argmax_value_num",
    "argmax_value_den",
]


def write_scan_csv(records: Sequence[ScanRecord], fh) -> None:
    w = csv.writer(fh)
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(
            [
                format_rational(r.B),
                format_rational(r.lam),
                r.argmin.graph6,
                r.argmin.name or "",
                r.argmin_value.numerator,
                r.argmin_value.denominator,
                r.argmax.graph6,
                r.argmax.name or "",
                r.argmax_value.numerator,
                r.argmax_value.denominator,
            ]
        )


# -- critical curve ----------------------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    B: Fraction
    enclosure: Interval
    contained: bool
    regions: tuple[str, ...]


def region_lambda_interval(reg: Region, B) -> Optional[Interval]:
    """Exact closed set ``{lam : (B, lam) in reg}`` (an interval), or ``None`` if empty.

    Requires every constraint to be affine in ``lam``.
    """
    B = as_fraction(B)
    (b0, b1), (l0, l1) = reg.box
    if not b0 <= B <= b1:
        return None
    lo, hi = l0, l1
    for g in reg.constraints:
        a = Fraction(0)
        b = Fraction(0)
        for (i, j), c in g.terms.items():
            if j == 0:
                a += c * B**i
            elif j == 1:
                b += c * B**i
            else:
                raise ValueError(f"constraint of region {reg.name} is not affine in lam")
        if b > 0:
            lo = max(lo, -a / b)
        elif b < 0:
            hi = min(hi, a / -b)
        elif a < 0:
            return None
    if lo > hi:
        return None
    return Interval(lo, hi)


def _covered(target: Interval, pieces: list[tuple[Interval, str]]) -> Optional[tuple[str, ...]]:
    """Names of regions whose closed pieces cover ``target``, or ``None``."""
    pos = target.lo
    used = []
    pieces = sorted(pieces, key=lambda p: p[0].lo)
    while True:
        best = None
        for iv, name in pieces:
            if iv.lo <= pos and (best is None or iv.hi > best[0].hi):
                best = (iv, name)
        if best is None or best[0].hi < pos:
            return None
        used.append(best[1])
        if best[0].hi >= target.hi:
            return tuple(used)
        if best[0].hi == pos:
            return None
        pos = best[0].hi


def curve_containment(
    B_samples: Sequence,
    regions: Sequence[Region],
    eps=Fraction(1, 10**9),
    delta: int = 3,
    eps_floor=Fraction(1, 10**30),
) -> list[CurvePoint]:
    """Check ``{B} x enclosure(lambda_c(delta, B))`` against the union of regions.

    An enclosure that is not covered is refined (eps / 1000) down to
    ``eps_floor`` before the point is reported as not contained.
    """
    out = []
    for B in B_samples:
        B = as_fraction(B)
        pieces = []
        for reg in regions:
            iv = region_lambda_interval(reg, B)
            if iv is not None:
                pieces.append((iv, reg.name))
        e = as_fraction(eps)
        while True:
            enc = lambda_c(delta, B, e)
            names = _covered(enc, pieces)
            if names is not None or e <= eps_floor:
                break
            e /= 1000
        out.append(CurvePoint(B, enc, names is not None, names or ()))
    return out
