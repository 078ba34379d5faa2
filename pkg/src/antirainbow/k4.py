"""The K_4 specialization: its own badness ledger, the witness J, and the
colouring procedure for K_4-components below density 15/7.

The peel only ever sees X_1, X_2 and U_1 (Y_1 and Y_2 are rejected with a
diagnostic), U_1 occurs exactly when the component is a K_5, and the
colouring maintains triangle invariants graded by the ledger: below 6 at
most one coloured edge per K_3, below 12 at most two.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .colouring import NEW, Colouring, _apply_candidate, _edge_sets
from .errors import ClassificationError, ProofInvariantError
from .graph import Edge, Graph, sort_edge
from .structure import (
    PeelNode,
    PeelTrace,
    kk_components,
    peel_trace,
)

K4_DENSITY_BOUND = Fraction(15, 7)
K4_DELTAS = {"X1": 6, "X2": 5, "U1": 13}


def badness_k4(g: Graph) -> int:
    """7e - 15v + 18; zero on K_4 and < 18 exactly when every count stays
    below the 15/7 density ceiling."""
    return 7 * g.num_edges - 15 * g.n + 18


def witness_j() -> Graph:
    """K_{3,4} plus a triangle on the 3-side: the minimal graph forcing a
    rainbow K_4 in every proper colouring; max density exactly 15/7."""
    tri = [(0, 1), (0, 2), (1, 2)]
    bip = [(a, t) for a in (0, 1, 2) for t in (3, 4, 5, 6)]
    return Graph(7, tri + bip)


@dataclass
class K4Ledger:
    """b_{K4} value plus the per-peel delta entries (after subtracting
    7 * e(G_v* \\ G_v) each delta is exactly 6, 5 or 13)."""

    value: int
    deltas: list[dict] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({"value": self.value, "deltas": self.deltas}, indent=2)


def peel_trace_k4(g: Graph) -> PeelTrace:
    """Peel a K_4-component with m < 15/7; only X_1, X_2, U_1 allowed."""
    try:
        trace = peel_trace(
            g,
            4,
            allowed_kinds=("X", "U"),
            density_threshold=K4_DENSITY_BOUND,
        )
    except ClassificationError as exc:
        raise ClassificationError(
            f"k=4 peel hit a configuration outside {{X1, X2, U1}}: {exc}. "
            "Y_1 can only occur as a standalone K_5^- shape and Y_2 is too "
            "dense; both are rejected."
        )
    _verify_k4_ledger(trace)
    return trace


def _verify_k4_ledger(trace: PeelTrace) -> None:
    for node in trace.root.walk():
        if node.is_base:
            continue
        step = node.step
        name = str(step.config)
        if name not in K4_DELTAS:
            raise ClassificationError(f"configuration {name} is not a k=4 shape")
        delta = (
            badness_k4(node.graph)
            - badness_k4(node.g_v)
            - 7 * step.extra_edges
        )
        if delta != K4_DELTAS[name]:
            raise ProofInvariantError(
                f"k4 ledger delta {delta} != {K4_DELTAS[name]} for {name} at "
                f"v={step.v_label}"
            )
        if name == "U1" and (node.graph.n != 5 or node.graph.num_edges != 10):
            raise ProofInvariantError(
                "U_1 for k=4 must occur exactly on a K_5",
                context={"labels": node.graph.labels},
            )
        if name != "X1" and len(node.children) != 1:
            raise ProofInvariantError(
                f"{name} split G_v into {len(node.children)} components; only "
                "X_1 may split"
            )
        if len(node.children) > 2:
            raise ProofInvariantError(
                "X_1 split into more than two K_4-components",
                context={"v": step.v_label},
            )


def k4_ledger(g: Graph) -> K4Ledger:
    trace = peel_trace_k4(g)
    deltas = [
        {
            "v": s.v_label,
            "config": str(s.config),
            "delta": K4_DELTAS[str(s.config)],
            "extraEdges": s.extra_edges,
        }
        for s in trace.steps()
    ]
    return K4Ledger(value=badness_k4(g), deltas=deltas)


def component_vertex_bound_check(g: Graph) -> int:
    """v(g) for a valid K_4-component with m < 15/7, asserted <= 10."""
    peel_trace_k4(g)  # validates the component and its density
    if g.n > 10:
        raise ProofInvariantError(
            f"K_4-component with m < 15/7 on {g.n} > 10 vertices: "
            "counterexample to the structural bound",
            context={"labels": g.labels},
        )
    return g.n


# -- colouring ---------------------------------------------------------------


def _triangle_cap(b: int) -> int | None:
    if b < 6:
        return 1
    if b < 12:
        return 2
    return None


def _verify_k4(g: Graph, assignment: dict[Edge, int]) -> bool:
    """Every K_4 non-rainbow plus the triangle invariant for b_{K4}(g)."""
    local = {}
    for u, v in g.edges:
        c = assignment.get(g.root_edge(u, v))
        if c is not None:
            local[(u, v)] = c
    for cl in g.cliques(4):
        cols = [
            local[sort_edge(a, b)]
            for a, b in combinations(cl, 2)
            if sort_edge(a, b) in local
        ]
        if len(cols) == len(set(cols)):
            return False
    cap = _triangle_cap(badness_k4(g))
    if cap is not None:
        for tri in g.cliques(3):
            n_col = sum(
                1 for a, b in combinations(tri, 2) if sort_edge(a, b) in local
            )
            if n_col > cap:
                return False
    return True


def _k5_rotational(g: Graph) -> dict[Edge, int]:
    """The 5-colour near-matching colouring of K_5: colour i repeats on the
    two edges avoiding vertex i, so every K_4 has a monochromatic pair."""
    out: dict[Edge, int] = {}
    for i in range(5):
        a = ((i + 1) % 5, (i + 4) % 5)
        b = ((i + 2) % 5, (i + 3) % 5)
        out[g.root_edge(*a)] = i + 1
        out[g.root_edge(*b)] = i + 1
    return out


def _candidates_k4(g: Graph, split, config, base: dict[Edge, int]):
    r_edges, rs_edges, v_edges, s_edges = _edge_sets(g, split)
    coloured_s = [(e, base[e]) for e in s_edges if e in base]
    open_s = [e for e in s_edges if e not in base]
    cands = []
    if config.ell == 2:  # X_2: repeat the shared-edge colour, else a new pair
        for e, c in coloured_s:
            for e1 in r_edges:
                cands.append([(e1, c)])
        for e1, e2 in combinations(r_edges + rs_edges, 2):
            if not set(e1) & set(e2):
                cands.append([(e1, NEW), (e2, NEW)])
        for e1 in r_edges + rs_edges:
            for e2 in open_s:
                if not set(e1) & set(e2):
                    cands.append([(e1, NEW), (e2, NEW)])
    else:  # X_1: one edge on the shared triangle plus a spoke
        for e, c in coloured_s:
            for f in v_edges:
                if not set(e) & set(f):
                    cands.append([(f, c)])
        for e in open_s:
            for f in v_edges:
                if not set(e) & set(f):
                    cands.append([(e, NEW), (f, NEW)])
    return cands


def _search_step_k4(g: Graph, split, config, base, constraint):
    next_colour = max(base.values(), default=0) + 1
    constraint = constraint or {}
    avoid = {e for e, mode in constraint.items() if mode == "uncoloured"}
    must = [e for e, mode in constraint.items() if mode == "coloured" and e not in base]
    for cand in _candidates_k4(g, split, config, base):
        coloured_edges = [e for e, _ in cand]
        if avoid & set(coloured_edges):
            continue
        if any(ce not in coloured_edges for ce in must):
            continue
        attempt = _apply_candidate(base, cand, next_colour)
        if attempt is not None and _verify_k4(g, attempt):
            return attempt
    return None


def _colour_node_k4(node: PeelNode, constraint=None) -> dict[Edge, int]:
    if constraint and not node.all_x_top(4):
        raise ProofInvariantError(
            "designated-edge constraint on a k=4 component that is not an "
            "X_2 chain",
            context={"constraint": constraint},
        )
    g = node.graph
    constraint = constraint or {}
    if node.is_base:
        must = [e for e, mode in constraint.items() if mode == "coloured"]
        avoid = {e for e, mode in constraint.items() if mode == "uncoloured"}
        for e1, e2 in combinations(g.edges, 2):
            r1, r2 = g.root_edge(*e1), g.root_edge(*e2)
            if set(e1) & set(e2) or avoid & {r1, r2}:
                continue
            if any(ce not in (r1, r2) for ce in must):
                continue
            assignment = {r1: 1, r2: 1}
            if _verify_k4(g, assignment):
                return assignment
        raise ProofInvariantError(
            "no K_4 base pair satisfies the constraint", context={"labels": g.labels}
        )

    step = node.step
    if str(step.config) == "U1":
        assignment = _k5_rotational(g)
        if not _verify_k4(g, assignment):
            raise ProofInvariantError("K_5 rotational colouring failed verification")
        return assignment

    def finish(children_assignments):
        merged: dict[Edge, int] = {}
        offset = 0
        for sub in children_assignments:
            top = 0
            for e, c in sub.items():
                merged[e] = c + offset
                top = max(top, c)
            offset += top
        here = {e: m for e, m in constraint.items() if m == "uncoloured"}
        here.update(
            {e: m for e, m in constraint.items() if m == "coloured" and e not in merged}
        )
        found = _search_step_k4(g, step.split, step.config, merged, here or None)
        return found

    def child_constraint(child):
        if not constraint:
            return None
        child_edges = {child.graph.root_edge(u, v) for u, v in child.graph.edges}
        sub = {e: m for e, m in constraint.items() if e in child_edges}
        return sub or None

    subs = [_colour_node_k4(c, child_constraint(c)) for c in node.children]
    found = finish(subs)
    if found is None and len(node.children) > 1:
        # make the intersecting edges uncoloured via the X_2-chain designated
        # edge mechanism (otherwise b_{K4}(G_v) > 5 and the triangle
        # invariant is already loose enough)
        _, _, _, s_edges = _edge_sets(g, step.split)
        retry = []
        for child in node.children:
            child_edges = {child.graph.root_edge(u, v) for u, v in child.graph.edges}
            shared = [e for e in s_edges if e in child_edges]
            extra = {e: "uncoloured" for e in shared}
            merged_constraint = dict(child_constraint(child) or {})
            merged_constraint.update(extra)
            if extra and child.all_x_top(4):
                retry.append(_colour_node_k4(child, merged_constraint or None))
            else:
                retry.append(_colour_node_k4(child, child_constraint(child)))
        found = finish(retry)
    if found is None:
        raise ProofInvariantError(
            f"k=4 step {step.config} at v={step.v_label} has no verifiable "
            "extension",
            context={"b": badness_k4(g), "labels": g.labels},
        )
    for e, mode in constraint.items():
        ok = (e in found) if mode == "coloured" else (e not in found)
        if not ok:
            raise ProofInvariantError(
                f"k=4 designated-edge constraint {mode} on {e} not satisfied"
            )
    return found


def anti_rainbow_colouring_k4(g: Graph) -> Colouring:
    """Proper partial colouring of a K_4-component (m < 15/7) making every
    K_4 non-rainbow, maintaining the graded triangle invariants."""
    trace = peel_trace_k4(g)
    assignment = _colour_node_k4(trace.root)
    colouring = Colouring(assignment).canonical()
    if not _verify_k4(g, colouring.assignment):
        raise ProofInvariantError("final k=4 verification failed")
    return colouring


def colour_graph_k4(g: Graph) -> tuple[Colouring, list[K4Ledger]]:
    """Strip edges/vertices in no K_4, colour each K_4-component with a
    disjoint palette, union the results."""
    comps = kk_components(g, 4)
    merged: dict[Edge, int] = {}
    ledgers = []
    offset = 0
    for comp in comps:
        ledgers.append(k4_ledger(comp))
        colouring = anti_rainbow_colouring_k4(comp)
        for e, c in colouring.assignment.items():
            merged[e] = c + offset
        offset += colouring.max_colour()
    return Colouring(merged).canonical(), ledgers
