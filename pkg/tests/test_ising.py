from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import unit_rationals
from isingocc.graphs import Graph, cubic_catalog, named_graph
from isingocc.ising import (
    DegenerateMeasureError,
    GraphSizeError,
    compare_free_energy,
    free_energy,
    free_energy_leq,
    magnetization_coefficients,
    occupancy_by_enumeration,
    occupancy_fraction,
    occupancy_polynomials,
    partition_function,
    partition_polynomial,
    spin_count_table,
)

CUBIC_8 = cubic_catalog(8)


def brute_force(g: Graph, B: Fraction, lam: Fraction):
    """Straight sum over spin tuples: ``(Z, expected number of plus spins)``."""
    z = Fraction(0)
    plus = Fraction(0)
    for s in itertools.product((0, 1), repeat=g.n):
        w = B ** sum(s[u] == s[v] for u, v in g.edges) * lam ** sum(s)
        z += w
        plus += sum(s) * w
    return z, plus


@given(unit_rationals(), unit_rationals(), st.sampled_from(CUBIC_8))
def test_matches_brute_force(B, lam, g):
    z, plus = brute_force(g, B, lam)
    assert partition_function(g, B, lam) == z
    assert occupancy_fraction(g, B, lam) == plus / (g.n * z)
    average = sum(occupancy_by_enumeration(g, B, lam, v) for v in range(g.n)) / g.n
    assert average == plus / (g.n * z)


def test_hand_computed_values():
    edge = Graph(2, [(0, 1)])
    B, lam = Fraction(1, 3), Fraction(2, 5)
    z = B * (1 + lam**2) + 2 * lam
    assert partition_function(edge, B, lam) == z
    assert occupancy_fraction(edge, B, lam) == (2 * B * lam**2 + 2 * lam) / (2 * z)
    k4 = named_graph("K4")
    # B = 1 decouples the spins
    assert partition_function(k4, 1, lam) == (1 + lam) ** 4
    assert occupancy_fraction(k4, 1, lam) == lam / (1 + lam)
    # lam = 1: every K4 assignment with two plus spins has two monochromatic edges
    assert magnetization_coefficients(k4, B) == [B**6, 4 * B**3, 6 * B**2, 4 * B**3, B**6]


@given(unit_rationals(), st.sampled_from(CUBIC_8))
def test_coefficient_palindrome(B, g):
    c = magnetization_coefficients(g, B)
    assert c == c[::-1]


@given(unit_rationals(), unit_rationals(), st.sampled_from(CUBIC_8))
def test_functional_equation(B, lam, g):
    assert partition_function(g, B, lam) == lam**g.n * partition_function(g, B, 1 / lam)
    assert occupancy_fraction(g, B, lam) + occupancy_fraction(g, B, 1 / lam) == 1


@given(unit_rationals(), unit_rationals(), st.sampled_from(CUBIC_8), st.sampled_from(CUBIC_8))
def test_disjoint_union(B, lam, g, h):
    u = g.disjoint_union(h)
    assert partition_function(u, B, lam) == partition_function(g, B, lam) * partition_function(h, B, lam)
    expected = (g.n * occupancy_fraction(g, B, lam) + h.n * occupancy_fraction(h, B, lam)) / u.n
    assert occupancy_fraction(u, B, lam) == expected


def test_polynomials_agree_with_evaluation():
    g = named_graph("Petersen")
    B, lam = Fraction(2, 7), Fraction(3, 11)
    assert partition_polynomial(g)(B, lam) == partition_function(g, B, lam)
    num, den = occupancy_polynomials(g)
    assert num(B, lam) / den(B, lam) == occupancy_fraction(g, B, lam)
    assert sum(map(sum, spin_count_table(g))) == 2**g.n


def test_free_energy_comparison_is_exact_and_consistent():
    k4, pet = named_graph("K4"), named_graph("Petersen")
    B, lam = Fraction(1, 5), Fraction(1, 10)
    sign = compare_free_energy(k4, pet, B, lam)
    diff = free_energy(k4, B, lam) - free_energy(pet, B, lam)
    assert sign == (diff > 0) - (diff < 0)
    assert compare_free_energy(k4, k4, B, lam) == 0
    assert free_energy_leq(k4, k4.disjoint_union(k4), B, lam)
    assert math.isclose(free_energy(k4, 1, 1), math.log(2))


def test_errors():
    with pytest.raises(GraphSizeError):
        spin_count_table(Graph(17))
    with pytest.raises(DegenerateMeasureError):
        occupancy_fraction(Graph(2, [(0, 1)]), 0, 0)
    with pytest.raises(ValueError):
        partition_function(named_graph("K4"), Fraction(1, 2), -1)
