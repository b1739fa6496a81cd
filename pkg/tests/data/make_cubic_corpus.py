"""Regenerate ``cubic_connected_n4_12.g6`` without using :mod:`isingocc`.

Every connected cubic graph on at most 14 vertices has a perfect matching, and
removing one leaves a 2-factor (a disjoint union of cycles).  So the graphs are
obtained by laying a cycle partition on ``0..n-1`` and adding every perfect
matching that avoids its edges; networkx removes isomorphic duplicates.

Usage: ``python tests/data/make_cubic_corpus.py`` (a few minutes for n = 12).
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import networkx as nx
import numpy as np

N_MAX = 12


def cycle_partitions(n: int, smallest: int = 3):
    if n == 0:
        yield []
        return
    for part in range(smallest, n + 1):
        for rest in cycle_partitions(n - part, part):
            yield [part] + rest


def perfect_matchings(vertices: list[int]):
    if not vertices:
        yield []
        return
    a = vertices[0]
    for i in range(1, len(vertices)):
        b = vertices[i]
        rest = vertices[1:i] + vertices[i + 1 :]
        for m in perfect_matchings(rest):
            yield [(a, b)] + m


def invariant_hash(g: nx.Graph) -> str:
    # colour refinement alone cannot split regular graphs; seed it with closed-walk counts
    a = nx.to_numpy_array(g, nodelist=sorted(g), dtype=int)
    walks = [np.diag(np.linalg.matrix_power(a, k)) for k in range(3, 8)]
    for v in g:
        g.nodes[v]["w"] = ",".join(str(int(w[v])) for w in walks)
    return nx.weisfeiler_lehman_graph_hash(g, node_attr="w", iterations=3)


def connected_cubic(n: int) -> list[nx.Graph]:
    buckets: dict[str, list[nx.Graph]] = defaultdict(list)
    for parts in cycle_partitions(n):
        base = nx.Graph()
        start = 0
        for p in parts:
            cyc = list(range(start, start + p))
            nx.add_cycle(base, cyc)
            start += p
        for m in perfect_matchings(list(range(n))):
            if any(base.has_edge(a, b) for a, b in m):
                continue
            g = base.copy()
            g.add_edges_from(m)
            if not nx.is_connected(g):
                continue
            h = invariant_hash(g)
            if not any(nx.is_isomorphic(g, o) for o in buckets[h]):
                buckets[h].append(g)
    return [g for group in buckets.values() for g in group]


def main() -> None:
    out = Path(__file__).with_name(f"cubic_connected_n4_{N_MAX}.g6")
    lines = []
    for n in range(4, N_MAX + 1, 2):
        graphs = connected_cubic(n)
        print(n, len(graphs), flush=True)
        lines += sorted(nx.to_graph6_bytes(g, header=False).decode().strip() for g in graphs)
    out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
