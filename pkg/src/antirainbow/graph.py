"""Simple undirected graphs with exact, deterministic primitives.

Vertices are contiguous 0-based indices. A graph obtained from another one
(induced subgraph, clique component) carries ``labels`` mapping its local
indices back to the *root* input graph, so traces and colourings can always
be reported in original labels.

Adjacency is kept as per-vertex bitmasks (arbitrary-precision ints), which
makes clique enumeration and common-neighbourhood queries cheap at the
graph sizes this library works with.
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import ParseError

Edge = tuple[int, int]


def sort_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("n", "edges", "adj", "labels", "_clique_cache")

    def __init__(self, n: int, edges: Iterable[Edge], labels: Sequence[int] | None = None):
        if n < 0:
            raise ParseError("vertex count must be non-negative")
        canon = set()
        for u, v in edges:
            if u == v:
                raise ParseError(f"loop edge {u} {v}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"edge endpoint out of range: {u} {v} (n={n})")
            canon.add(sort_edge(u, v))
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(sorted(canon))
        adj = [0] * n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.adj: tuple[int, ...] = tuple(adj)
        self.labels: tuple[int, ...] = tuple(labels) if labels is not None else tuple(range(n))
        if len(self.labels) != n:
            raise ParseError("labels length must equal vertex count")
        self._clique_cache: dict[int, tuple[tuple[int, ...], ...]] = {}

    # -- basic queries -------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbours(self, v: int) -> list[int]:
        return bits_to_list(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def root_edge(self, u: int, v: int) -> Edge:
        """Edge (u, v) expressed in root labels."""
        return sort_edge(self.labels[u], self.labels[v])

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"

    # -- derived graphs ------------------------------------------------

    def induced_subgraph(self, vertices: Iterable[int]) -> Graph:
        verts = sorted(set(vertices))
        index = {v: i for i, v in enumerate(verts)}
        edges = [
            (index[u], index[v])
            for u, v in self.edges
            if u in index and v in index
        ]
        return Graph(len(verts), edges, labels=[self.labels[v] for v in verts])

    def without_edges(self, drop: Iterable[Edge]) -> Graph:
        """Same vertex set, with the given (local) edges removed."""
        gone = {sort_edge(u, v) for u, v in drop}
        return Graph(self.n, [e for e in self.edges if e not in gone], labels=self.labels)

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = 1
        stack = [0]
        while stack:
            v = stack.pop()
            fresh = self.adj[v] & ~seen
            seen |= fresh
            stack.extend(bits_to_list(fresh))
        return seen == (1 << self.n) - 1

    # -- cliques ---------------------------------------------------------

    def cliques(self, k: int) -> tuple[tuple[int, ...], ...]:
        """All k-vertex complete subgraphs, cached, in sorted lexicographic order."""
        if k not in self._clique_cache:
            self._clique_cache[k] = tuple(enumerate_cliques(self, k))
        return self._clique_cache[k]


def bits_to_list(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


# -- parsing and serialization -------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse edge-list text: lines "u v", optional header "n=<count>".

    The vertex count is the header value if given, else max endpoint + 1.
    Blank lines and lines starting with '#' are skipped.
    """
    n_declared = None
    edges: list[Edge] = []
    max_endpoint = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("n="):
            try:
                n_declared = int(line[2:])
            except ValueError:
                raise ParseError(f"line {lineno}: bad header {line!r}")
            if n_declared < 0:
                raise ParseError(f"line {lineno}: negative vertex count")
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer endpoint in {line!r}")
        if u < 0 or v < 0:
            raise ParseError(f"line {lineno}: negative endpoint in {line!r}")
        if u == v:
            raise ParseError(f"line {lineno}: loop edge {u} {v}")
        edges.append((u, v))
        max_endpoint = max(max_endpoint, u, v)
    n = n_declared if n_declared is not None else max_endpoint + 1
    if max_endpoint >= n:
        raise ParseError(f"endpoint {max_endpoint} >= declared n={n}")
    return Graph(n, edges)


def to_edge_list(g: Graph) -> str:
    lines = [f"n={g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def to_json_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [[u, v] for u, v in g.edges]}


def from_json_dict(d: dict) -> Graph:
    try:
        return Graph(int(d["n"]), [(int(u), int(v)) for u, v in d["edges"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad graph JSON: {exc}")


def loads(text: str) -> Graph:
    """Parse either JSON ({"n": ..., "edges": ...}) or edge-list text."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return from_json_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON: {exc}")
    return parse_graph(text)


# -- clique enumeration ----------------------------------------------------


def enumerate_cliques(g: Graph, k: int) -> list[tuple[int, ...]]:
    """Vertex sets of size k inducing complete subgraphs, sorted lexicographically.

    Plain ordered extension: each clique is built in increasing vertex order,
    restricting candidates to common neighbours above the last vertex, so the
    output is canonical without a sort.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return [(v,) for v in range(g.n)]
    out: list[tuple[int, ...]] = []
    adj = g.adj

    def extend(prefix: list[int], cand: int) -> None:
        if len(prefix) == k:
            out.append(tuple(prefix))
            return
        # not enough candidates left to finish
        if cand.bit_count() < k - len(prefix):
            return
        m = cand
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            prefix.append(v)
            higher = ~((1 << (v + 1)) - 1)
            extend(prefix, cand & adj[v] & higher)
            prefix.pop()

    extend([], (1 << g.n) - 1)
    return out


@lru_cache(maxsize=None)
def complete_graph(k: int) -> Graph:
    return Graph(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def edges_within(g: Graph, mask: int) -> int:
    """Number of edges of g with both endpoints in the vertex bitmask."""
    tot = 0
    m = mask
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m ^= low
        tot += (g.adj[v] & mask).bit_count()
    return tot // 2


def vertex_cover_by_cliques(g: Graph, k: int) -> tuple[set[int], set[Edge]]:
    """Vertices and edges of g contained in at least one k-clique."""
    verts: set[int] = set()
    edges: set[Edge] = set()
    for cl in g.cliques(k):
        verts.update(cl)
        for i, u in enumerate(cl):
            for v in cl[i + 1:]:
                edges.add((u, v))
    return verts, edges
