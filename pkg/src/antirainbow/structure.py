"""Clique-component decomposition and the structural peel machinery.

The peel removes the closed "private" neighbourhood R(v) of a minimum-degree
vertex v, classifies the shape of K(v) (X_l / Y_l / U_1), and records exact
edge and badness deltas at every step.  Every delta is checked against its
closed form at construction time; a mismatch raises ProofInvariantError.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .density import max_density_witness
from .errors import ClassificationError, DensityError, DomainError, ProofInvariantError
from .graph import Graph, mask_of, vertex_cover_by_cliques


def badness(g: Graph, k: int) -> int:
    """2e - (k+1)v + 2k; zero on K_k, negative below it, < 2k when m < (k+1)/2."""
    return 2 * g.num_edges - (k + 1) * g.n + 2 * k


def min_degree_vertex(g: Graph) -> int:
    """A vertex of minimum degree; ties broken by smallest index."""
    if g.n == 0:
        raise DomainError("empty graph has no vertices")
    return min(range(g.n), key=lambda v: (g.degree(v), v))


def min_degree_vertices(g: Graph) -> list[int]:
    degs = [g.degree(v) for v in range(g.n)]
    lo = min(degs)
    return [v for v, d in enumerate(degs) if d == lo]


def kk_components(g: Graph, k: int) -> list[Graph]:
    """K_k-components of g.

    Strips vertices and edges in no K_k, then unions the connected classes of
    the auxiliary graph on k-cliques (cliques adjacent when they share an
    edge, i.e. >= 2 vertices).  Each component is returned as the union
    subgraph of its cliques, labelled back into g.
    """
    if k < 4:
        raise DomainError("kk_components requires k >= 4")
    cliques = g.cliques(k)
    if not cliques:
        return []
    masks = [mask_of(cl) for cl in cliques]
    parent = list(range(len(cliques)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(len(cliques)):
        for j in range(i + 1, len(cliques)):
            if (masks[i] & masks[j]).bit_count() >= 2:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri

    groups: dict[int, list[int]] = {}
    for i in range(len(cliques)):
        groups.setdefault(find(i), []).append(i)

    comps = []
    for idxs in groups.values():
        verts = sorted(set(v for i in idxs for v in cliques[i]))
        index = {v: j for j, v in enumerate(verts)}
        edges = set()
        for i in idxs:
            cl = cliques[i]
            for a in range(len(cl)):
                for b in range(a + 1, len(cl)):
                    edges.add((index[cl[a]], index[cl[b]]))
        comps.append(Graph(len(verts), edges, labels=[g.labels[v] for v in verts]))
    comps.sort(key=lambda c: c.labels)
    return comps


@dataclass(frozen=True)
class NeighbourhoodSplit:
    """K(v) = {v} + N(v) split into R(v) (all of whose K_k's pass through v)
    and S(v) = K(v) - R(v).  Vertex sets are local indices of the host graph."""

    v: int
    K: tuple[int, ...]
    R: tuple[int, ...]
    S: tuple[int, ...]
    k: int


def split_neighbourhood(g: Graph, v: int, k: int) -> NeighbourhoodSplit:
    """Compute the K/R/S split at v.

    Requires every vertex and edge of g to lie in a K_k; v should have
    minimum degree (checked).  Fact: v(R(v)) <= k-1 is asserted.
    """
    verts_cov, edges_cov = vertex_cover_by_cliques(g, k)
    if len(verts_cov) != g.n or len(edges_cov) != g.num_edges:
        missing_v = sorted(set(range(g.n)) - verts_cov)
        missing_e = sorted(set(g.edges) - edges_cov)
        raise DomainError(
            f"not every vertex/edge lies in a K_{k}: vertices {missing_v}, edges {missing_e}"
        )
    if g.degree(v) != min(g.degree(u) for u in range(g.n)):
        raise DomainError(f"vertex {v} does not have minimum degree")

    in_cliques: dict[int, list[int]] = {u: [] for u in range(g.n)}
    for i, cl in enumerate(g.cliques(k)):
        for u in cl:
            in_cliques[u].append(i)
    cliques = g.cliques(k)

    K = sorted([v] + g.neighbours(v))
    R = [v]
    for w in g.neighbours(v):
        if all(v in cliques[i] for i in in_cliques[w]):
            R.append(w)
    R.sort()
    S = sorted(set(K) - set(R))
    if len(R) > k - 1:
        raise ProofInvariantError(
            f"v(R(v)) = {len(R)} > k-1 = {k - 1}; input violates peel preconditions",
            context={"v": v, "R": R},
        )
    return NeighbourhoodSplit(v=v, K=tuple(K), R=tuple(R), S=tuple(S), k=k)


@dataclass(frozen=True)
class KvConfig:
    """Configuration of K(v): X(l), Y(l) or U(1)."""

    kind: str  # "X" | "Y" | "U"
    ell: int

    def __str__(self) -> str:
        return f"{self.kind}{self.ell}"


def _is_complete(g: Graph, verts) -> bool:
    verts = list(verts)
    mask = mask_of(verts)
    return all(
        (g.adj[u] & mask).bit_count() == len(verts) - 1 for u in verts
    )


def _missing_edges(g: Graph, verts) -> list[tuple[int, int]]:
    verts = sorted(verts)
    return [
        (verts[i], verts[j])
        for i in range(len(verts))
        for j in range(i + 1, len(verts))
        if not g.has_edge(verts[i], verts[j])
    ]


def classify_kv(split: NeighbourhoodSplit, g: Graph) -> KvConfig:
    """Match K(v) against the three possible configurations, verifying every
    isomorphism-type invariant; raises ClassificationError otherwise."""
    k = split.k
    K, R, S = split.K, split.R, split.S
    ell = len(R)
    if not _is_complete(g, R):
        raise ClassificationError(f"R(v) is not complete: missing {_missing_edges(g, R)}")

    if len(K) == k:
        if not _is_complete(g, K):
            raise ClassificationError(f"K(v) has {len(K)} = k vertices but is not K_{k}")
        if not 1 <= ell <= k - 2:
            raise ClassificationError(f"X-configuration with l = {ell} outside [1, {k - 2}]")
        if len(S) != k - ell or not _is_complete(g, S):
            raise ClassificationError("X-configuration: S(v) is not the complement clique")
        return KvConfig("X", ell)

    if len(K) == k + 1:
        missing = _missing_edges(g, K)
        if not missing:
            if ell != 1:
                raise ClassificationError(f"K(v) = K_{k + 1} but R(v) has {ell} > 1 vertices")
            if len(S) != k or not _is_complete(g, S):
                raise ClassificationError("U-configuration: S(v) is not a K_k")
            return KvConfig("U", 1)
        if len(missing) == 1:
            x, y = missing[0]
            if not 1 <= ell <= k - 2:
                raise ClassificationError(f"Y-configuration with l = {ell} outside [1, {k - 2}]")
            if x not in S or y not in S:
                raise ClassificationError(
                    f"Y-configuration: missing edge {x}-{y} not inside S(v)"
                )
            if len(S) != k - ell + 1:
                raise ClassificationError("Y-configuration: |S(v)| != k - l + 1")
            return KvConfig("Y", ell)
        raise ClassificationError(
            f"K(v) on {len(K)} vertices misses {len(missing)} edges; no configuration matches"
        )

    raise ClassificationError(
        f"K(v) has {len(K)} vertices (d(v) = {len(K) - 1}); expected k or k+1"
    )


def edge_delta_formula(config: KvConfig, k: int) -> int:
    """e(G) - e(G_v*) per configuration."""
    ell = config.ell
    if config.kind == "U":
        return k
    if config.kind == "X":
        return ell * (ell - 1) // 2 + ell * (k - ell)
    return ell * (ell - 1) // 2 + ell * (k - ell + 1)


def badness_delta_formula(config: KvConfig, k: int) -> int:
    """b(G) - b(G_v*) per configuration."""
    ell = config.ell
    if config.kind == "U":
        return k - 1
    if config.kind == "X":
        return (k - ell - 2) * ell
    return (k - ell) * ell


def reduce_step(g: Graph, split: NeighbourhoodSplit, k: int) -> tuple[Graph, Graph]:
    """(G_v*, G_v): induced graph without R(v), and the same graph with edges
    in no K_k removed.  Both share the vertex set (and labels)."""
    keep = [u for u in range(g.n) if u not in set(split.R)]
    g_star = g.induced_subgraph(keep)
    _, covered = vertex_cover_by_cliques(g_star, k)
    stripped = [e for e in g_star.edges if e not in covered]
    g_v = g_star.without_edges(stripped)
    return g_star, g_v


@dataclass
class PeelStep:
    """One peel of R(v), with the exact ledger entries."""

    v_label: int
    config: KvConfig
    edge_delta: int
    extra_edges: int  # e(G_v* \ G_v)
    b_delta: int  # b(G) - b(G_v*)
    split: NeighbourhoodSplit


@dataclass
class PeelNode:
    """A node of the peel trace: either a residue K_k (no step) or a step
    followed by one child per K_k-component of G_v."""

    graph: Graph
    step: PeelStep | None = None
    g_star: Graph | None = None
    g_v: Graph | None = None
    children: list["PeelNode"] = field(default_factory=list)

    @property
    def is_base(self) -> bool:
        return self.step is None

    def walk(self):
        """Pre-order iteration over nodes."""
        yield self
        for child in self.children:
            yield from child.walk()

    def steps(self) -> list[PeelStep]:
        return [node.step for node in self.walk() if node.step is not None]

    def all_x_top(self, k: int) -> bool:
        """True when every step of the trace is X(k-2) (the stage-preserving
        shape, which is what the stronger induction hypothesis requires)."""
        return all(
            s.config.kind == "X" and s.config.ell == k - 2 for s in self.steps()
        )

    def to_json_dict(self) -> dict:
        if self.is_base:
            return {"type": "base", "clique": [self.graph.labels[v] for v in range(self.graph.n)]}
        s = self.step
        return {
            "type": "step",
            "v": s.v_label,
            "config": str(s.config),
            "edgeDelta": s.edge_delta,
            "extraEdges": s.extra_edges,
            "bDelta": s.b_delta,
            "children": [c.to_json_dict() for c in self.children],
        }


class PeelTrace:
    """Ordered record of the peel induction over a single K_k-component."""

    def __init__(self, root: PeelNode, k: int):
        self.root = root
        self.k = k

    def steps(self) -> list[PeelStep]:
        return self.root.steps()

    def residues(self) -> list[Graph]:
        return [n.graph for n in self.root.walk() if n.is_base]

    def to_json(self) -> str:
        return json.dumps(
            {
                "k": self.k,
                "steps": [
                    {
                        "v": s.v_label,
                        "config": str(s.config),
                        "edgeDelta": s.edge_delta,
                        "extraEdges": s.extra_edges,
                        "bDelta": s.b_delta,
                    }
                    for s in self.steps()
                ],
                "tree": self.root.to_json_dict(),
            },
            indent=2,
        )


def check_density_precondition(g: Graph, k: int, threshold: Fraction | None = None) -> None:
    """Raise DensityError (with the witness in root labels) unless m(g) < threshold."""
    bound = threshold if threshold is not None else Fraction(k + 1, 2)
    m, witness = max_density_witness(g)
    if m >= bound:
        raise DensityError(
            f"m(G) = {m} >= {bound}: density precondition fails",
            witness=sorted(g.labels[v] for v in witness),
            density=m,
        )


def peel_trace(
    g: Graph,
    k: int,
    *,
    check_density: bool = True,
    allowed_kinds: tuple[str, ...] = ("X", "Y", "U"),
    density_threshold: Fraction | None = None,
) -> PeelTrace:
    """Peel a single K_k-component down to K_k residues.

    Among minimum-degree vertices (ascending index) the peel prefers one
    whose reduction leaves a single K_k-component; the proof guarantees such
    a choice exists whenever the badness is small, and taking it whenever
    possible keeps traces in the simple inductive case.  If no choice avoids
    a split, the smallest-index vertex is used and the trace branches.
    """
    if k < 4:
        raise DomainError("peel requires k >= 4")
    if check_density:
        check_density_precondition(g, k, density_threshold)
    comps = kk_components(g, k)
    if len(comps) != 1 or comps[0].n != g.n or comps[0].num_edges != g.num_edges:
        raise DomainError("input is not a single K_k-component")
    return PeelTrace(_peel_node(g, k, allowed_kinds), k)


def _peel_node(g: Graph, k: int, allowed_kinds: tuple[str, ...]) -> PeelNode:
    if g.n < k:
        raise ProofInvariantError(
            f"residue has {g.n} < k = {k} vertices", context={"labels": g.labels}
        )
    if g.n == k:
        if not _is_complete(g, range(g.n)):
            raise ProofInvariantError(
                "residue with k vertices is not a K_k (Fact 8 violated)",
                context={"labels": g.labels, "missing": _missing_edges(g, range(g.n))},
            )
        return PeelNode(graph=g)

    chosen = None
    for v in min_degree_vertices(g):
        split = split_neighbourhood(g, v, k)
        config = classify_kv(split, g)
        g_star, g_v = reduce_step(g, split, k)
        comps = kk_components(g_v, k)
        if not comps:
            raise ProofInvariantError(
                "G_v has no K_k-component", context={"v": g.labels[v]}
            )
        if chosen is None:
            chosen = (v, split, config, g_star, g_v, comps)
        if len(comps) == 1:
            chosen = (v, split, config, g_star, g_v, comps)
            break
    v, split, config, g_star, g_v, comps = chosen

    if config.kind not in allowed_kinds:
        raise ClassificationError(
            f"configuration {config} not allowed here (allowed: {allowed_kinds})"
        )
    e_delta = g.num_edges - g_star.num_edges
    extra = g_star.num_edges - g_v.num_edges
    b_delta = badness(g, k) - badness(g_star, k)
    if e_delta != edge_delta_formula(config, k):
        raise ProofInvariantError(
            f"edge delta {e_delta} != closed form {edge_delta_formula(config, k)} for {config}",
            context={"v": g.labels[v]},
        )
    if b_delta != badness_delta_formula(config, k):
        raise ProofInvariantError(
            f"badness delta {b_delta} != closed form {badness_delta_formula(config, k)} for {config}",
            context={"v": g.labels[v]},
        )
    step = PeelStep(
        v_label=g.labels[v],
        config=config,
        edge_delta=e_delta,
        extra_edges=extra,
        b_delta=b_delta,
        split=split,
    )
    children = [_peel_node(c, k, allowed_kinds) for c in comps]
    return PeelNode(graph=g, step=step, g_star=g_star, g_v=g_v, children=children)
