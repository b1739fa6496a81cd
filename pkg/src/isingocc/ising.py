"""Exact antiferromagnetic Ising quantities on small graphs by full enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .graphs import Graph
from .numerics import DomainError, as_fraction
from .poly import Poly

__all__ = [
    "MAX_VERTICES",
    "GraphSizeError",
    "DegenerateMeasureError",
    "SpinAssignment",
    "spin_count_table",
    "magnetization_coefficients",
    "partition_function",
    "occupancy_fraction",
    "occupancy_by_enumeration",
    "partition_polynomial",
    "occupancy_polynomials",
    "compare_free_energy",
    "free_energy_leq",
    "free_energy",
]

MAX_VERTICES = 16


class GraphSizeError(ValueError):
    """Graph too large for 2^n enumeration."""


class DegenerateMeasureError(ZeroDivisionError):
    """The partition function vanishes, so the Ising measure is undefined."""


@dataclass(frozen=True)
class SpinAssignment:
    """Spins as a tuple of booleans, ``True`` meaning ``+``."""

    spins: tuple[bool, ...]

    @classmethod
    def from_bits(cls, n: int, bits: int) -> "SpinAssignment":
        return cls(tuple(bool((bits >> v) & 1) for v in range(n)))

    def mono_edges(self, g: Graph) -> int:
        return sum(1 for u, v in g.edges if self.spins[u] == self.spins[v])

    @property
    def plus_count(self) -> int:
        return sum(self.spins)

    @property
    def magnetization(self) -> int:
        return 2 * self.plus_count - len(self.spins)


def _check_size(g: Graph) -> None:
    if g.n > MAX_VERTICES:
        raise GraphSizeError(f"enumeration limited to n <= {MAX_VERTICES}, got n={g.n}")


def _spin_arrays(g: Graph):
    sigma = np.arange(1 << g.n, dtype=np.int64)
    bits = (sigma[:, None] >> np.arange(g.n)) & 1
    plus = bits.sum(axis=1)
    mono = np.zeros(len(sigma), dtype=np.int64)
    for u, v in g.edges:
        mono += bits[:, u] == bits[:, v]
    return bits, plus, mono


@lru_cache(maxsize=None)
def spin_count_table(g: Graph) -> tuple[tuple[int, ...], ...]:
    """``table[k][m]``: number of assignments with ``k`` plus spins and ``m`` monochromatic edges."""
    _check_size(g)
    _, plus, mono = _spin_arrays(g)
    width = g.m + 1
    counts = np.bincount(plus * width + mono, minlength=(g.n + 1) * width)
    counts = counts.reshape(g.n + 1, width)
    return tuple(tuple(int(c) for c in row) for row in counts)


def _powers(x: Fraction, top: int) -> list[Fraction]:
    out = [Fraction(1)]
    for _ in range(top):
        out.append(out[-1] * x)
    return out


def magnetization_coefficients(g: Graph, B) -> list[Fraction]:
    """``c_k(G, B)`` for ``k = 0..n``: total weight of assignments with ``k`` plus spins."""
    B = as_fraction(B)
    if B < 0:
        raise DomainError("B must be nonnegative")
    table = spin_count_table(g)
    Bp = _powers(B, g.m)
    return [sum((c * Bp[m] for m, c in enumerate(row) if c), Fraction(0)) for row in table]


def _z_and_moment(g: Graph, B: Fraction, lam: Fraction) -> tuple[Fraction, Fraction]:
    coeffs = magnetization_coefficients(g, B)
    lp = _powers(lam, g.n)
    z = sum((c * lp[k] for k, c in enumerate(coeffs)), Fraction(0))
    moment = sum((k * c * lp[k] for k, c in enumerate(coeffs)), Fraction(0))
    return z, moment


def partition_function(g: Graph, B, lam) -> Fraction:
    B, lam = as_fraction(B), as_fraction(lam)
    if lam < 0:
        raise DomainError("lam must be nonnegative")
    return _z_and_moment(g, B, lam)[0]


def occupancy_fraction(g: Graph, B, lam) -> Fraction:
    """Expected fraction of plus spins, ``(sum k c_k lam^k) / (n Z)``."""
    B, lam = as_fraction(B), as_fraction(lam)
    if lam < 0:
        raise DomainError("lam must be nonnegative")
    z, moment = _z_and_moment(g, B, lam)
    if z == 0:
        raise DegenerateMeasureError(f"Z_G vanishes at B={B}, lam={lam}")
    return moment / (g.n * z)


def occupancy_by_enumeration(g: Graph, B, lam, vertex: int = 0) -> Fraction:
    """``Pr[sigma_vertex = +]`` summed assignment by assignment (independent oracle)."""
    B, lam = as_fraction(B), as_fraction(lam)
    _check_size(g)
    z = Fraction(0)
    hit = Fraction(0)
    for bits in range(1 << g.n):
        s = SpinAssignment.from_bits(g.n, bits)
        w = B ** s.mono_edges(g) * lam ** s.plus_count
        z += w
        if s.spins[vertex]:
            hit += w
    if z == 0:
        raise DegenerateMeasureError("Z_G vanishes")
    return hit / z


def partition_polynomial(g: Graph) -> Poly:
    """``Z_G`` as an integer polynomial in ``(B, lam)``."""
    table = spin_count_table(g)
    return Poly({(m, k): c for k, row in enumerate(table) for m, c in enumerate(row) if c})


def occupancy_polynomials(g: Graph) -> tuple[Poly, Poly]:
    """``(numerator, denominator)`` with ``alpha_G = numerator / denominator``."""
    table = spin_count_table(g)
    num = Poly({(m, k): k * c for k, row in enumerate(table) for m, c in enumerate(row) if c})
    return num, partition_polynomial(g) * g.n


def compare_free_energy(g1: Graph, g2: Graph, B, lam) -> int:
    """Sign of ``F_{g1} - F_{g2}`` via ``Z1^{n2}`` versus ``Z2^{n1}``."""
    z1 = partition_function(g1, B, lam)
    z2 = partition_function(g2, B, lam)
    if z1 <= 0 or z2 <= 0:
        raise DegenerateMeasureError("free energy needs positive partition functions")
    a = z1 ** g2.n
    b = z2 ** g1.n
    return (a > b) - (a < b)


def free_energy_leq(g1: Graph, g2: Graph, B, lam) -> bool:
    return compare_free_energy(g1, g2, B, lam) <= 0


def free_energy(g: Graph, B, lam) -> float:
    """Floating ``log(Z) / n``; display and numerical checks only."""
    z = partition_function(g, B, lam)
    if z <= 0:
        raise DegenerateMeasureError("Z_G vanishes")
    return (math.log(z.numerator) - math.log(z.denominator)) / g.n
