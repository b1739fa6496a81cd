"""Small simple graphs: graph6 codec, canonical labeling, cubic generation, catalog."""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

__all__ = [
    "Graph",
    "Graph6Error",
    "decode_graph6",
    "encode_graph6",
    "read_graph6_file",
    "write_graph6_file",
    "canonical_key",
    "canonical_relabeling",
    "canonical_form",
    "canonical_graph6",
    "graph_name",
    "generate_cubic",
    "cubic_catalog",
    "named_graph",
    "NAMED_GRAPHS",
    "closed_ball",
]


class Graph6Error(ValueError):
    """Malformed graph6 input; ``offset`` is the index of the offending character."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "_edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("negative vertex count")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", tuple(frozenset(s) for s in nbrs))
        es = tuple(sorted((u, v) for u in range(n) for v in nbrs[u] if u < v))
        object.__setattr__(self, "_edges", es)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __reduce__(self):
        return (Graph, (self.n, self._edges))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def m(self) -> int:
        return len(self._edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def is_regular(self, d: Optional[int] = None) -> bool:
        degs = {len(a) for a in self.adj}
        if not degs:
            return True
        return len(degs) == 1 and (d is None or d in degs)

    def is_cubic(self) -> bool:
        return self.n > 0 and self.is_regular(3)

    def distances_from(self, s: int) -> list[Optional[int]]:
        dist: list[Optional[int]] = [None] * self.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in self.adj[v]:
                if dist[w] is None:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def is_connected(self) -> bool:
        return self.n == 0 or all(d is not None for d in self.distances_from(0))

    def girth(self) -> Optional[int]:
        best = None
        for s in range(self.n):
            dist = [-1] * self.n
            parent = [-1] * self.n
            dist[s] = 0
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for w in self.adj[v]:
                    if dist[w] < 0:
                        dist[w] = dist[v] + 1
                        parent[w] = v
                        queue.append(w)
                    elif parent[v] != w:
                        cyc = dist[v] + dist[w] + 1
                        if best is None or cyc < best:
                            best = cyc
        return best

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self._edges))

    def disjoint_union(self, other: "Graph") -> "Graph":
        k = self.n
        return Graph(k + other.n, list(self._edges) + [(u + k, v + k) for u, v in other.edges])

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        return Graph(
            len(vertices),
            ((index[u], index[v]) for u, v in self._edges if u in index and v in index),
        )

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __hash__(self):
        return hash((self.n, self._edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


# -- graph6 --------------------------------------------------------------------

_HEADER = ">>graph6<<"


def encode_graph6(g: Graph) -> str:
    if g.n > 62:
        raise ValueError(f"graph6 short format supports n <= 62, got n={g.n}")
    bits = [1 if g.has_edge(i, j) else 0 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k : k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def decode_graph6(text: str) -> Graph:
    s = text.strip()
    base = 0
    if s.startswith(_HEADER):
        base = len(_HEADER)
        s = s[base:]
    if not s:
        raise Graph6Error("empty graph6 string", base)
    for i, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"invalid graph6 character {ch!r}", base + i)
    if s[0] == "~":
        raise Graph6Error("only the short graph6 format (n <= 62) is supported", base)
    n = ord(s[0]) - 63
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    if len(s) - 1 != nchars:
        off = base + min(len(s), 1 + nchars)
        raise Graph6Error(f"expected {nchars} data characters for n={n}, got {len(s) - 1}", off)
    bits = []
    for ch in s[1:]:
        val = ord(ch) - 63
        bits.extend((val >> (5 - t)) & 1 for t in range(6))
    if any(bits[nbits:]):
        raise Graph6Error("nonzero padding bits", base + len(s) - 1)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph(n, edges)


def read_graph6_file(path) -> list[Graph]:
    graphs = []
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line == _HEADER:
                continue
            try:
                graphs.append(decode_graph6(line))
            except Graph6Error as exc:
                raise Graph6Error(f"{path}:{lineno}: {exc}", exc.offset) from exc
    return graphs


def write_graph6_file(path, graphs: Iterable[Graph]) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for g in graphs:
            fh.write(encode_graph6(g) + "\n")


# -- canonical labeling ----------------------------------------------------------


def _refine(adj, cells: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Coarsest equitable refinement; cell order depends only on invariants."""
    while True:
        cell_of = {}
        for idx, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = idx
        new_cells: list[tuple[int, ...]] = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                sig = tuple(sorted(cell_of[w] for w in adj[v]))
                groups.setdefault(sig, []).append(v)
            for sig in sorted(groups):
                new_cells.append(tuple(groups[sig]))
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def _leaf_code(g: Graph, order: Sequence[int]) -> int:
    pos = {v: i for i, v in enumerate(order)}
    n = g.n
    code = 0
    for u, v in g.edges:
        a, b = pos[u], pos[v]
        if a > b:
            a, b = b, a
        # rank pairs so that earlier pairs are more significant
        code |= 1 << (n * n - 1 - (a * n + b))
    return code


def canonical_relabeling(g: Graph, root: Optional[int] = None) -> list[int]:
    """Vertex order (canonical position -> vertex) maximizing the adjacency code.

    Individualization-refinement with exhaustive branching on the first
    non-singleton cell.  Leaves with equal codes reveal automorphisms; a
    sibling in the orbit of an explored sibling (under automorphisms fixing
    the current individualized vertices) is skipped.
    """
    if g.n == 0:
        return []
    if root is not None:
        if not 0 <= root < g.n:
            raise ValueError(f"root {root} out of range")
        rest = tuple(v for v in range(g.n) if v != root)
        cells = [(root,)] + ([rest] if rest else [])
        fixed0: tuple[int, ...] = (root,)
    else:
        cells = [tuple(range(g.n))]
        fixed0 = ()
    best_code = -1
    best_order: list[int] = []
    automorphisms: list[dict[int, int]] = []

    def search(cells, fixed):
        nonlocal best_code, best_order
        cells = _refine(g.adj, cells)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            order = [c[0] for c in cells]
            code = _leaf_code(g, order)
            if code > best_code:
                best_code, best_order = code, order
            elif code == best_code:
                gamma = {a: b for a, b in zip(best_order, order) if a != b}
                if gamma:
                    automorphisms.append(gamma)
            return
        cell = cells[target]
        explored: list[int] = []
        for v in cell:
            if explored and _same_orbit(v, explored, fixed):
                continue
            rest = tuple(w for w in cell if w != v)
            search(cells[:target] + [(v,), rest] + cells[target + 1 :], fixed + (v,))
            explored.append(v)

    def _same_orbit(v, explored, fixed):
        parent: dict[int, int] = {}

        def find(x):
            while parent.get(x, x) != x:
                x = parent[x]
            return x

        for gamma in automorphisms:
            if any(gamma.get(f, f) != f for f in fixed):
                continue
            for a, b in gamma.items():
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
        rv = find(v)
        return any(find(w) == rv for w in explored)

    search(cells, fixed0)
    return best_order


def canonical_key(g: Graph, root: Optional[int] = None) -> bytes:
    """Isomorphism-class key; with ``root``, the class under root-fixing maps."""
    order = canonical_relabeling(g, root)
    code = _leaf_code(g, order) if g.n else 0
    nbytes = (g.n * g.n + 7) // 8
    flag = 1 if root is not None else 0
    return bytes([g.n & 0xFF, flag]) + code.to_bytes(nbytes, "big")


def canonical_form(g: Graph) -> Graph:
    """Representative of the isomorphism class: vertex ``order[i]`` becomes ``i``."""
    order = canonical_relabeling(g)
    perm = [0] * g.n
    for pos, v in enumerate(order):
        perm[v] = pos
    return g.relabel(perm)


def canonical_graph6(g: Graph) -> str:
    return encode_graph6(canonical_form(g))


# -- cubic generation ------------------------------------------------------------


def _partial_key(edges: frozenset, touched: int, n: int) -> bytes:
    return bytes([n]) + canonical_key(Graph(touched, edges))


def _children(edges: frozenset, touched: int, n: int) -> Iterator[tuple[frozenset, int]]:
    deg = [0] * touched
    adj = [set() for _ in range(touched)]
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
        adj[u].add(v)
        adj[v].add(u)
    open_vs = [v for v in range(touched) if deg[v] < 3]
    fresh = n - touched
    if not open_vs:
        return
    # saturate the open vertex closest to degree 3; fewest branches
    v = max(open_vs, key=lambda w: (deg[w], -w))
    need = 3 - deg[v]
    candidates = [w for w in open_vs if w != v and w not in adj[v]]
    for k in range(0, need + 1):
        n_fresh = need - k
        if n_fresh > fresh:
            continue
        for chosen in combinations(candidates, k):
            new_edges = set(edges)
            for w in chosen:
                new_edges.add((min(v, w), v if v > w else w))
            for i in range(n_fresh):
                new_edges.add((v, touched + i))
            yield frozenset(new_edges), touched + n_fresh


def generate_cubic(n: int) -> list[Graph]:
    """One representative per isomorphism class of connected cubic graphs on ``n`` vertices.

    Edges are added one open vertex at a time (the partial graph stays
    connected); partial graphs are deduplicated by canonical key, so every
    isomorphism class of partial graph is expanded once.  Output is sorted by
    canonical key.
    """
    if n % 2 or not 4 <= n <= 14:
        raise ValueError(f"n must be even with 4 <= n <= 14, got {n}")
    seen: set[bytes] = set()
    found: dict[bytes, Graph] = {}
    stack = [(frozenset(), 1)]
    while stack:
        edges, touched = stack.pop()
        deg = [0] * touched
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        if all(d == 3 for d in deg):
            if touched == n:
                g = Graph(n, edges)
                found.setdefault(canonical_key(g), g)
            continue
        for child, t in _children(edges, touched, n):
            key = _partial_key(child, t, n)
            if key in seen:
                continue
            seen.add(key)
            stack.append((child, t))
    return [found[k] for k in sorted(found)]


def cubic_catalog(n_max: int = 12, n_min: int = 4) -> list[Graph]:
    out: list[Graph] = []
    for n in range(n_min + (n_min % 2), n_max + 1, 2):
        out.extend(generate_cubic(n))
    return out


# -- named graphs ------------------------------------------------------------------

GOOSE_GRAPH6 = "I}GOOSE@W"


def _petersen() -> Graph:
    pairs = list(combinations(range(5), 2))
    edges = [
        (i, j)
        for i, j in combinations(range(len(pairs)), 2)
        if not set(pairs[i]) & set(pairs[j])
    ]
    return Graph(10, edges)


NAMED_GRAPHS = {
    "K4": lambda: Graph(4, combinations(range(4), 2)),
    "K33": lambda: Graph(6, [(i, j) for i in range(3) for j in range(3, 6)]),
    "Petersen": _petersen,
    "Goose": lambda: decode_graph6(GOOSE_GRAPH6),
    "Prism": lambda: Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]),
}


def named_graph(name: str) -> Graph:
    try:
        return NAMED_GRAPHS[name]()
    except KeyError:
        raise KeyError(f"unknown graph {name!r}; known: {', '.join(NAMED_GRAPHS)}") from None


@lru_cache(maxsize=1)
def _names_by_key() -> dict[bytes, str]:
    return {canonical_key(f()): name for name, f in NAMED_GRAPHS.items()}


def graph_name(g: Graph) -> Optional[str]:
    """Catalog name of ``g`` up to isomorphism, if it has one."""
    return _names_by_key().get(canonical_key(g))


def closed_ball(g: Graph, u: int, radius: int) -> tuple[Graph, tuple[int, ...], int]:
    """Induced subgraph on vertices within ``radius`` of ``u``.

    Returns ``(ball, to_original, root)`` where ``to_original[i]`` is the
    vertex of ``g`` behind ball vertex ``i`` and ``root`` is ``u``'s index.
    """
    if radius not in (1, 2):
        raise ValueError("radius must be 1 or 2")
    dist = g.distances_from(u)
    verts = sorted((v for v in range(g.n) if dist[v] is not None and dist[v] <= radius),
                   key=lambda v: (dist[v], v))
    return g.induced(verts), tuple(verts), 0
