"""Acceptance checks: one test per criterion, each reported as a PASS/FAIL line."""

from __future__ import annotations

import csv
import os
import random
from fractions import Fraction as F
from pathlib import Path

import mpmath

from isingocc.certify import Status, certify_point, load_regions, random_points, verify_region
from isingocc.graphs import canonical_key, cubic_catalog, generate_cubic, named_graph, read_graph6_file
from isingocc.ising import (
    free_energy,
    free_energy_leq,
    magnetization_coefficients,
    occupancy_fraction,
    partition_function,
)
from isingocc.localviews import (
    distribution_support,
    empirical_distribution,
    enumerate_views,
    k33_views,
    view_stats,
    views_without_triangle,
)
from isingocc.lp import Sense, build_program, solve_exact, solve_linear_system
from isingocc.numerics import lambda_c
from isingocc.scan import CSV_COLUMNS, curve_containment, scan_grid, unit_grid, write_scan_csv

CORPUS = Path(__file__).parent / "data" / "cubic_connected_n4_12.g6"
REGIONS = load_regions()
JOBS = max(1, min(8, os.cpu_count() or 1))

MIN_POINTS = {
    "Rmin1": (F(4, 5), F(1, 2)),
    "Rmin2": (F(1, 5), F(1, 10)),
    "Rmin3": (F(3, 10), F(1, 5)),
    "Rmin4": (F(7, 10), F(3, 10)),
    "Rmin5": (F(4, 5), F(11, 20)),
    "Rmin6": (F(7, 20), F(9, 25)),
    "Rmin7": (F(1, 2), F(51, 100)),
    "Rmin8": (F(3, 10), F(17, 50)),
}
MAX_POINTS = {
    "Rmax1": (F(1, 10), F(1, 50)),
    "Rmax2": (F(3, 10), F(1, 10)),
    "Rmax3": (F(3, 5), F(1, 4)),
}


def sweep_points(count=5, seed=2024, den=97):
    rng = random.Random(seed)
    return [(F(rng.randint(1, den - 1), den), F(rng.randint(1, den - 1), den)) for _ in range(count)]


def assert_lp_optimal(sol):
    p = sol.program
    for row, b in zip(p.rows, p.rhs):
        assert sum(a * x for a, x in zip(row, sol.primal)) == b
    rc = sol.reduced_costs()
    assert all((r >= 0) if p.sense is Sense.MIN else (r <= 0) for r in rc)
    assert all(r * x == 0 for r, x in zip(rc, sol.primal))
    assert sol.value == sol.dual_value()


def test_criterion_01_view_counts(criterion):
    with criterion(1, "local view counts", 1.0) as c:
        views = enumerate_views(3)
        assert len(views) == 23
        assert len(views_without_triangle()) == 22
        assert len(k33_views()) == 3
        c.detail = "23 views, 22 without the triangle, 3 in K33"


def test_criterion_02_exact_identities(criterion):
    with criterion(2, "exact identities on connected cubic graphs n <= 10", 120.0) as c:
        graphs = cubic_catalog(10)
        corpus = read_graph6_file(CORPUS)
        for n in (4, 6, 8, 10):
            ours = {canonical_key(g) for g in generate_cubic(n)}
            assert ours == {canonical_key(g) for g in corpus if g.n == n}
        assert len(graphs) == 27
        views = enumerate_views()
        pts = sweep_points()
        for B, lam in pts:
            stats = [view_stats(v, B, lam) for v in views]
            for g in graphs:
                x = empirical_distribution(g, B, lam)
                alpha = occupancy_fraction(g, B, lam)
                assert sum(xi * s.alpha for xi, s in zip(x, stats)) == alpha
                for j in range(4):
                    assert sum(xi * s.constraint(j) for xi, s in zip(x, stats)) == 0
                cs = magnetization_coefficients(g, B)
                assert cs == cs[::-1]
                assert partition_function(g, B, lam) == lam**g.n * partition_function(g, B, 1 / lam)
            # unions stay within the 16-vertex enumeration limit
            for g, h in [(g, h) for g in graphs for h in graphs[:3]]:
                u = g.disjoint_union(h)
                assert partition_function(u, B, lam) == partition_function(g, B, lam) * partition_function(h, B, lam)
                assert u.n * occupancy_fraction(u, B, lam) == g.n * occupancy_fraction(g, B, lam) + h.n * occupancy_fraction(h, B, lam)
        c.detail = f"27 graphs (corpus agrees), {len(pts)} points"


def test_criterion_03_lp_sandwich(criterion):
    with criterion(3, "LP sandwich with exact duality", 120.0) as c:
        graphs = cubic_catalog(10)
        solves = 0
        for B, lam in sweep_points():
            lo = solve_exact(build_program(enumerate_views(), (0, 1), B, lam, Sense.MIN))
            hi = solve_exact(build_program(enumerate_views(), (0, 1), B, lam, Sense.MAX))
            for sol in (lo, hi):
                assert_lp_optimal(sol)
                solves += 1
            for g in graphs:
                assert lo.value <= occupancy_fraction(g, B, lam) <= hi.value
        c.detail = f"{solves} solves, 27 graphs each"


def test_criterion_04_k4_lower_bound_at_points(criterion):
    with criterion(4, "K4 lower bound at region sample points", 60.0) as c:
        k4 = named_graph("K4")
        for name, (B, lam) in MIN_POINTS.items():
            reg = REGIONS[name]
            assert reg.contains(B, lam), name
            sol = solve_exact(build_program(views_without_triangle(), (0, 1), B, lam, Sense.MIN))
            assert_lp_optimal(sol)
            alpha = occupancy_fraction(k4, B, lam)
            assert sol.value >= alpha, name
            assert certify_point(reg.recipe, B, lam) is not None, name
        c.detail = "8 regions: LP optimum >= alpha_K4 and a feasible certificate"


def test_criterion_05_k33_upper_bound_at_points(criterion):
    with criterion(5, "K33 upper bound at region sample points", 60.0) as c:
        k33 = named_graph("K33")
        views = enumerate_views()
        kv = k33_views()
        for name, (B, lam) in MAX_POINTS.items():
            assert REGIONS[name].contains(B, lam), name
            sol = solve_exact(build_program(views, (0, 1), B, lam, Sense.MAX))
            assert_lp_optimal(sol)
            assert sol.value == occupancy_fraction(k33, B, lam), name
            assert {views[i] for i in sol.support} <= set(kv)
            stats = [view_stats(v, B, lam) for v in kv]
            rows = [[F(1)] * 3] + [[s.constraint(j) for s in stats] for j in (0, 1)]
            x = solve_linear_system(rows, [F(1), F(0), F(0)])  # raises if not unique
            emp = empirical_distribution(k33, B, lam)
            assert x == [emp[views.index(v)] for v in kv]
            assert distribution_support(emp) == sorted(views.index(v) for v in kv)
        c.detail = "3 regions: optimum = alpha_K33, unique restricted solution"


def test_criterion_06_region_verification(criterion):
    with criterion(6, "region verification and soundness spot check", 1800.0) as c:
        statuses = {}
        for name in sorted(REGIONS):
            rep = verify_region(REGIONS[name], jobs=JOBS)
            statuses[name] = rep.status
        assert statuses["Rmax1"] is Status.VERIFIED and statuses["Rmin2"] is Status.VERIFIED
        bad = [n for n, s in statuses.items() if s is not Status.VERIFIED]
        assert not bad, f"not verified: {bad}"
        k4, k33 = named_graph("K4"), named_graph("K33")
        rng = random.Random(6)
        checked = 0
        for name, reg in sorted(REGIONS.items()):
            for B, lam in random_points(reg, 100, rng):
                assert certify_point(reg.recipe, B, lam) is not None, (name, B, lam)
                checked += 1
            # exact LP comparison on a subset
            for B, lam in random_points(reg, 10, rng):
                if reg.recipe.sense is Sense.MIN:
                    sol = solve_exact(build_program(views_without_triangle(), (0, 1), B, lam, Sense.MIN))
                    assert sol.value >= occupancy_fraction(k4, B, lam)
                else:
                    sol = solve_exact(build_program(enumerate_views(), (0, 1), B, lam, Sense.MAX))
                    assert sol.value == occupancy_fraction(k33, B, lam)
        c.detail = f"all {len(statuses)} regions VERIFIED; {checked} random points certified"


def test_criterion_07_failure_beyond_range(criterion):
    with criterion(7, "LP bound drops below K4 on the critical curve at B = 8/25", 60.0) as c:
        B = F(8, 25)
        enc = lambda_c(3, B)
        lam = enc.mid
        assert enc.width <= F(1, 10**9) and enc.contains(lam)
        sol = solve_exact(build_program(views_without_triangle(), (0, 1), B, lam, Sense.MIN))
        alpha = occupancy_fraction(named_graph("K4"), B, lam)
        assert sol.value < alpha
        c.detail = f"gap {float(alpha - sol.value):.3e}"


def test_criterion_08_curve_containment(criterion):
    with criterion(8, "critical curve inside the K4 regions for B <= 31/100", 60.0) as c:
        regs = [r for n, r in REGIONS.items() if n.startswith("Rmin")]
        pts = curve_containment([F(i, 100) for i in range(1, 32)], regs, F(1, 10**9))
        missing = [p.B for p in pts if not p.contained]
        assert not missing, f"not contained at {missing}"
        used = sorted({n for p in pts for n in p.regions})
        c.detail = f"31 samples, regions used: {','.join(used)}"


def test_criterion_09_minimizer_landscape(criterion, tmp_path):
    with criterion(9, "grid scan finds Petersen and Goose minimizers", 900.0) as c:
        catalog = cubic_catalog(12) + [named_graph("Goose")]
        grid = unit_grid(51)
        assert len(grid) == 50
        recs = scan_grid(catalog, grid, grid, keep_values=True, jobs=JOBS)
        assert len(recs) == 2500
        pet_below = [r for r in recs if r.values["Petersen"] < r.values["K4"]]
        goose_below = [
            r for r in recs if r.values["Goose"] < r.values["K4"] and r.values["Goose"] < r.values["Petersen"]
        ]
        assert pet_below and goose_below
        out = tmp_path / "scan.csv"
        with out.open("w", newline="") as fh:
            write_scan_csv(recs, fh)
        rows = list(csv.reader(out.open()))
        assert rows[0] == CSV_COLUMNS and len(rows) == 2501
        g = goose_below[0]
        c.detail = f"Petersen < K4 at {len(pet_below)} points, Goose < both at {len(goose_below)} (e.g. B={g.B}, lam={g.lam})"


def test_criterion_10_free_energy(criterion):
    with criterion(10, "free energy minimized by K4 and the integral relation", 300.0) as c:
        k4 = named_graph("K4")
        catalog = cubic_catalog(12)
        for B, lam in MIN_POINTS.values():
            for g in catalog:
                assert free_energy_leq(k4, g, B, lam)
        worst = 0.0
        for B, lam in MIN_POINTS.values():
            for name in ("K4", "K33", "Petersen", "Goose"):
                worst = max(worst, integral_gap(named_graph(name), B, lam))
        assert worst < 1e-6
        c.detail = f"{len(catalog)} graphs at 8 points; max integral gap {worst:.1e}"


def integral_gap(g, B, lam) -> float:
    """``|F(lam) - F(lam/1000) - int alpha(l)/l dl|`` with the integral done numerically."""
    cs = [mpmath.mpf(c.numerator) / c.denominator for c in magnetization_coefficients(g, B)]

    def alpha_at(s):
        ell = mpmath.exp(s)
        z = mpmath.fsum(c * ell**k for k, c in enumerate(cs))
        return mpmath.fsum(k * c * ell**k for k, c in enumerate(cs)) / (g.n * z)

    lo = lam / 1000
    with mpmath.workdps(30):
        # substitute l = e^s so that dl / l = ds
        a = mpmath.log(mpmath.mpf(lo.numerator) / lo.denominator)
        b = mpmath.log(mpmath.mpf(lam.numerator) / lam.denominator)
        val = mpmath.quad(alpha_at, [a, b])
    lhs = free_energy(g, B, lam) - free_energy(g, B, lo)
    return abs(lhs - float(val))
