"""The staged inductive colouring engine for k >= 5.

The construction follows the peel trace in reverse: the residue K_k gets two
disjoint same-coloured edges, and every peel step extends the colouring of
G_v* to G by colouring a handful of edges in K(v).  Edge choices inside each
case are a deterministic candidate search: the case analysis supplies a small
ordered family of candidate assignments, each candidate is verified with
``check_stage``, and the first one meeting the promised stage is kept.  A
case with no verifiable candidate raises ProofInvariantError with full
context; on valid inputs that must never happen, so such a failure is a
finding, not a fallback.

Stages P0..P4 grade what the partial colouring guarantees beyond "every K_k
is non-rainbow": P0 pins colour multiplicities, per-clique coloured counts
and 4-vertex coloured counts; P1..P3 relax the 4-vertex count; P4 keeps only
the non-rainbow property.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import IntEnum
from itertools import combinations

from .errors import DomainError, ProofInvariantError
from .graph import Edge, Graph, mask_of, sort_edge
from .structure import (
    KvConfig,
    NeighbourhoodSplit,
    PeelNode,
    PeelStep,
    badness,
    classify_kv,
    kk_components,
    peel_trace,
)


class Stage(IntEnum):
    P0 = 0
    P1 = 1
    P2 = 2
    P3 = 3
    P4 = 4

    def __str__(self) -> str:
        return f"P{int(self)}"


def stage_bound(b: int, k: int) -> Stage:
    """Strongest stage the staging lemma guarantees at badness b."""
    if not 0 <= b < 2 * k:
        raise DomainError(f"badness {b} outside [0, {2 * k})")
    if b < k - 3:
        return Stage.P0
    if b < k - 1:
        return Stage.P1
    if b < k + 1:
        return Stage.P2
    if b < 2 * k - 2:
        return Stage.P3
    return Stage.P4


# how many stages each configuration may advance over G_v*
ADVANCE = {"X_top": 0, "X": 1, "Y": 2, "U": 2}


def advance_allowance(config: KvConfig, k: int) -> int:
    if config.kind == "X" and config.ell == k - 2:
        return ADVANCE["X_top"]
    return ADVANCE[config.kind]


class Colouring:
    """Partial proper edge-colouring; keys are edges in the label space of the
    graph it belongs to, values are positive colour ids."""

    __slots__ = ("assignment",)

    def __init__(self, assignment: dict[Edge, int] | None = None):
        self.assignment: dict[Edge, int] = dict(assignment or {})

    def colour_of(self, g: Graph, u: int, v: int) -> int | None:
        return self.assignment.get(g.root_edge(u, v))

    def canonical(self) -> "Colouring":
        """Dense colour ids from 1, in order of first use over sorted edges."""
        remap: dict[int, int] = {}
        out: dict[Edge, int] = {}
        for e in sorted(self.assignment):
            c = self.assignment[e]
            if c not in remap:
                remap[c] = len(remap) + 1
            out[e] = remap[c]
        return Colouring(out)

    def max_colour(self) -> int:
        return max(self.assignment.values(), default=0)

    def is_proper_on(self, g: Graph) -> bool:
        seen: dict[tuple[int, int], bool] = {}
        for u, v in g.edges:
            c = self.colour_of(g, u, v)
            if c is None:
                continue
            for w in (u, v):
                key = (g.labels[w], c)
                if key in seen:
                    return False
                seen[key] = True
        return True

    def to_json(self) -> str:
        return json.dumps(
            {"edges": [[u, v, c] for (u, v), c in sorted(self.assignment.items())]}
        )

    @staticmethod
    def from_json(text: str) -> "Colouring":
        d = json.loads(text)
        return Colouring({sort_edge(int(u), int(v)): int(c) for u, v, c in d["edges"]})

    def __eq__(self, other) -> bool:
        return isinstance(other, Colouring) and self.assignment == other.assignment

    def __len__(self) -> int:
        return len(self.assignment)


def _local_assignment(g: Graph, c: Colouring) -> dict[Edge, int]:
    out = {}
    for u, v in g.edges:
        col = c.assignment.get(g.root_edge(u, v))
        if col is not None:
            out[(u, v)] = col
    return out


def check_stage(g: Graph, c: Colouring, k: int) -> Stage | None:
    """Smallest stage whose conditions the colouring satisfies on g, or None
    if some K_k is rainbow.  Raises DomainError on an improper colouring."""
    if not c.is_proper_on(g):
        raise DomainError("colouring is not proper")
    local = _local_assignment(g, c)
    cliques = g.cliques(k)

    for cl in cliques:
        cols = [
            local[sort_edge(a, b)]
            for a, b in combinations(cl, 2)
            if sort_edge(a, b) in local
        ]
        if len(cols) == len(set(cols)):
            return None  # rainbow under completion semantics

    max4 = _max_coloured_on_four(g, local)

    p0 = max4 <= 3
    if p0:
        counts = Counter(local.values())
        p0 = all(v == 2 for v in counts.values())
    if p0:
        for cl in cliques:
            ncol = sum(
                1 for a, b in combinations(cl, 2) if sort_edge(a, b) in local
            )
            if ncol != 2:
                p0 = False
                break
    if p0:
        masks = [mask_of(cl) for cl in cliques]
        for i in range(len(masks)):
            for j in range(i + 1, len(masks)):
                if (masks[i] & masks[j]).bit_count() > 2:
                    p0 = False
                    break
            if not p0:
                break
    if p0:
        return Stage.P0
    if max4 <= 3:
        return Stage.P1
    if max4 <= 5:
        return Stage(max4 - 2)
    return Stage.P4


def _max_coloured_on_four(g: Graph, local: dict[Edge, int]) -> int:
    """Max number of coloured edges spanned by any 4 vertices.

    Any 4-set spanning >= 4 coloured edges contains two disjoint coloured
    edges, so scanning unions of disjoint coloured pairs is exact above 3;
    below 4 the exact value never changes a stage decision, so 3 is reported
    whenever no disjoint pair beats it.
    """
    if len(local) < 2:
        return len(local)
    edges = sorted(local)
    best = min(3, len(local))
    for i in range(len(edges)):
        a, b = edges[i]
        for j in range(i + 1, len(edges)):
            u, v = edges[j]
            if u == a or u == b or v == a or v == b:
                continue
            quad = (a, b, u, v)
            cnt = sum(
                1 for x, y in combinations(sorted(quad), 2) if (x, y) in local
            )
            if cnt > best:
                best = cnt
    return best


@dataclass
class StepAudit:
    """Per-peel-step record of the colouring extension."""

    v_label: int
    config: str
    j_star: int
    promised: int
    achieved: int


@dataclass
class ComponentLedger:
    """Multi-component bookkeeping at one peel step."""

    v_label: int
    pairs: list[tuple[int, int]]  # (b(G_i), |b(G_{i,S(v)})|)
    b_sum: int
    j_min: int

    def to_json_dict(self) -> dict:
        return {
            "v": self.v_label,
            "components": [{"b": b, "bS": bs} for b, bs in self.pairs],
            "bSum": self.b_sum,
            "jMin": self.j_min,
        }


@dataclass
class StageReport:
    stage: Stage
    badness: int
    steps: list[StepAudit] = field(default_factory=list)
    component_ledger: list[ComponentLedger] = field(default_factory=list)

    @property
    def jmin(self) -> int | None:
        return self.component_ledger[0].j_min if self.component_ledger else None

    def to_json(self) -> str:
        return json.dumps(
            {
                "stage": str(self.stage),
                "badness": self.badness,
                "jmin": self.jmin,
                "steps": [
                    {
                        "v": s.v_label,
                        "config": s.config,
                        "jStar": s.j_star,
                        "promised": s.promised,
                        "achieved": s.achieved,
                    }
                    for s in self.steps
                ],
                "componentLedger": [cl.to_json_dict() for cl in self.component_ledger],
            },
            indent=2,
        )


# -- candidate machinery ----------------------------------------------------

NEW = -1  # sentinel colour id: assign a fresh colour


def _apply_candidate(
    base: dict[Edge, int], cand: list[tuple[Edge, int]], next_colour: int
) -> dict[Edge, int] | None:
    """Apply (root_edge, colour|NEW) assignments; None if improper or clobbering."""
    out = dict(base)
    fresh: dict[int, int] = {}
    incident: dict[tuple[int, int], int] = {}
    for (u, v), c in out.items():
        incident[(u, c)] = incident.get((u, c), 0) + 1
        incident[(v, c)] = incident.get((v, c), 0) + 1
    for e, c in cand:
        if e in out:
            return None
        if c == NEW:
            c = next_colour
        elif c < NEW:
            # second/third fresh colour in one candidate: NEW - i
            c = next_colour + (NEW - c)
        if incident.get((e[0], c)) or incident.get((e[1], c)):
            return None
        out[e] = c
        incident[(e[0], c)] = 1
        incident[(e[1], c)] = 1
    return out


def _edge_sets(g: Graph, split: NeighbourhoodSplit):
    """Root-keyed edge lists inside K(v): R-internal, R-S, v-S, S-internal."""
    R, S = set(split.R), set(split.S)
    r_edges, rs_edges, v_edges, s_edges = [], [], [], []
    for a, b in combinations(sorted(split.K), 2):
        if not g.has_edge(a, b):
            continue
        e = g.root_edge(a, b)
        if a in R and b in R:
            r_edges.append(e)
            if split.v in (a, b):
                v_edges.append(e)
        elif a in S and b in S:
            s_edges.append(e)
        else:
            rs_edges.append(e)
            if split.v in (a, b):
                v_edges.append(e)
    return r_edges, rs_edges, v_edges, s_edges


def _disjoint(e: Edge, f: Edge) -> bool:
    return not (set(e) & set(f))


def _candidates(
    g: Graph,
    split: NeighbourhoodSplit,
    config: KvConfig,
    base: dict[Edge, int],
    k: int,
) -> list[list[tuple[Edge, int]]]:
    """Ordered candidate assignments for one peel step, per the case analysis."""
    r_edges, rs_edges, v_edges, s_edges = _edge_sets(g, split)
    coloured_s = [(e, base[e]) for e in s_edges if e in base]
    open_s = [e for e in s_edges if e not in base]
    cands: list[list[tuple[Edge, int]]] = []

    if config.kind == "X" and config.ell == k - 2:
        # two disjoint new-coloured edges touching R(v); preferred shape is
        # one inside R(v) and one leaving it, but when designated-edge
        # constraints block the R(v) edges a pair of R-S edges works too
        for e1 in r_edges:
            for e2 in rs_edges + r_edges:
                if e1 != e2 and _disjoint(e1, e2):
                    cands.append([(e1, NEW), (e2, NEW)])
        for e1, e2 in combinations(rs_edges, 2):
            if _disjoint(e1, e2):
                cands.append([(e1, NEW), (e2, NEW)])
        return cands

    if config.kind == "X" and config.ell >= 2:
        for e, c in coloured_s:
            for e1 in r_edges:
                cands.append([(e1, c)])
        touching_r = r_edges + rs_edges
        for e1, e2 in combinations(touching_r, 2):
            if _disjoint(e1, e2):
                cands.append([(e1, NEW), (e2, NEW)])
        return cands

    if config.kind == "X":  # X_1, R(v) = {v}
        cands.append([])  # no-op: S(v) may already repeat a colour inside K(v)
        for e, c in coloured_s:
            for f in v_edges:
                if _disjoint(e, f):
                    cands.append([(f, c)])
        for e in open_s:
            for f in v_edges:
                if _disjoint(e, f):
                    cands.append([(e, NEW), (f, NEW)])
        # reuse a colour already present in S(v) on another S(v) edge
        seen_cols = sorted({c for _, c in coloured_s})
        for c in seen_cols:
            for e in open_s:
                cands.append([(e, c)])
        return cands

    if config.kind == "U":
        s_sorted = sorted(split.S)
        for e1, e2 in combinations(open_s, 2):
            if not _disjoint(e1, e2):
                continue
            used = set(e1) | set(e2)
            for f in v_edges:
                if not (set(f) & used):
                    cands.append([(e1, NEW), (e2, NEW), (f, NEW)])
        return cands

    # Y configurations: K(v) = K_{k+1} minus one edge xy inside S(v)
    xy = _missing_pair(g, split)
    x_l, y_l = xy
    x, y = g.root_edge(*xy)

    def in_both(e: Edge) -> bool:
        return x not in e and y not in e

    if config.ell >= 2:
        touching_r = [e for e in r_edges + rs_edges if in_both(e)]
        for e1, e2 in combinations(touching_r, 2):
            if _disjoint(e1, e2):
                cands.append([(e1, NEW), (e2, NEW)])
        return cands

    # Y_1: R(v) = {v}, S(v) = K_k minus xy
    core = [s for s in split.S if s not in (x_l, y_l)]
    # (a) uncoloured core edge + spoke to the third core vertex
    for p, q, r in combinations(sorted(core), 3):
        for a, b, cvert in ((p, q, r), (p, r, q), (q, r, p)):
            e = g.root_edge(a, b)
            if e in base:
                continue
            f = g.root_edge(split.v, cvert)
            cands.append([(e, NEW), (f, NEW)])
    # (b) three disjoint uncoloured edges of K(v), two in each K_k
    kv_open = [
        g.root_edge(a, b)
        for a, b in combinations(sorted(split.K), 2)
        if g.has_edge(a, b) and g.root_edge(a, b) not in base
    ]
    for e1, e2, e3 in combinations(kv_open, 3):
        if _disjoint(e1, e2) and _disjoint(e1, e3) and _disjoint(e2, e3):
            in_a = sum(1 for e in (e1, e2, e3) if x not in e)
            in_b = sum(1 for e in (e1, e2, e3) if y not in e)
            if in_a >= 2 and in_b >= 2:
                cands.append([(e1, NEW), (e2, NEW), (e3, NEW)])
    # (c) one pair per K_k with two fresh colours
    v_open = [f for f in v_edges if f not in base]
    v_root = g.labels[split.v]
    pairs_a = [
        (e, f)
        for e in kv_open
        if x not in e and v_root not in e
        for f in v_open
        if x not in f and _disjoint(e, f)
    ]
    pairs_b = [
        (e, f)
        for e in kv_open
        if y not in e and v_root not in e
        for f in v_open
        if y not in f and _disjoint(e, f)
    ]
    for (e, f) in pairs_a:
        for (e2, f2) in pairs_b:
            if f == f2:
                continue
            cands.append([(e, NEW), (f, NEW), (e2, NEW - 1), (f2, NEW - 1)])
    # (d) reuse colours of S(v) edges on spokes (multi-component repairs)
    reuse = []
    for e, c in coloured_s:
        for f in v_edges:
            if _disjoint(e, f):
                reuse.append((f, c))
    for fc in reuse:
        cands.append([fc])
    for fc1, fc2 in combinations(reuse, 2):
        if fc1[0] != fc2[0] and fc1[1] != fc2[1]:
            cands.append([fc1, fc2])
    return cands


def _missing_pair(g: Graph, split: NeighbourhoodSplit) -> tuple[int, int]:
    miss = [
        (a, b)
        for a, b in combinations(sorted(split.K), 2)
        if not g.has_edge(a, b)
    ]
    if len(miss) != 1:
        raise ProofInvariantError(
            f"Y configuration expected exactly one missing edge in K(v), found {miss}"
        )
    return miss[0]


# -- the engine -------------------------------------------------------------


@dataclass
class _NodeResult:
    assignment: dict[Edge, int]
    stage: Stage
    steps: list[StepAudit]
    ledger: list[ComponentLedger]


def _colour_base(node: PeelNode, k: int, constraint) -> _NodeResult:
    g = node.graph
    constraint = constraint or {}
    must = [e for e, mode in constraint.items() if mode == "coloured"]
    avoid = {e for e, mode in constraint.items() if mode == "uncoloured"}
    pairs = [
        (g.root_edge(*e1), g.root_edge(*e2))
        for e1, e2 in combinations(g.edges, 2)
        if _disjoint(e1, e2)
    ]
    for e1, e2 in pairs:
        if avoid & {e1, e2}:
            continue
        if any(ce not in (e1, e2) for ce in must):
            continue
        assignment = {e1: 1, e2: 1}
        if check_stage(g, Colouring(assignment), k) == Stage.P0:
            return _NodeResult(assignment, Stage.P0, [], [])
    raise ProofInvariantError(
        "no base-case pair satisfies the designated-edge constraint",
        context={"labels": g.labels, "constraint": constraint},
    )


def _search_step(
    g: Graph,
    k: int,
    split: NeighbourhoodSplit,
    config: KvConfig,
    base: dict[Edge, int],
    target: int,
    constraint,
) -> tuple[dict[Edge, int], Stage] | None:
    """Try candidates in order; return the first assignment whose verified
    stage is <= target (preferring the best stage among all candidates)."""
    next_colour = max(base.values(), default=0) + 1
    constraint = constraint or {}
    avoid = {e for e, mode in constraint.items() if mode == "uncoloured"}
    must = [e for e, mode in constraint.items() if mode == "coloured" and e not in base]
    best: tuple[int, dict[Edge, int]] | None = None
    for cand in _candidates(g, split, config, base, k):
        coloured_edges = [e for e, _ in cand]
        if avoid & set(coloured_edges):
            continue
        if any(ce not in coloured_edges for ce in must):
            continue
        attempt = _apply_candidate(base, cand, next_colour)
        if attempt is None:
            continue
        stage = check_stage(g, Colouring(attempt), k)
        if stage is None:
            continue
        if best is None or stage < best[0]:
            best = (int(stage), attempt)
            if stage == 0:
                break
    if best is not None and best[0] <= target:
        return best[1], Stage(best[0])
    return None


def _colour_node(node: PeelNode, k: int, constraint=None) -> _NodeResult:
    if constraint and not node.all_x_top(k):
        raise ProofInvariantError(
            "designated-edge constraint on a component whose peel history is "
            "not all X(k-2)",
            context={"constraint": constraint, "labels": node.graph.labels},
        )
    if node.is_base:
        return _colour_base(node, k, constraint)
    if len(node.children) == 1:
        return _colour_single(node, k, constraint)
    return _colour_multi(node, k, constraint)


def _child_constraint(child: PeelNode, constraint):
    if not constraint:
        return None
    child_edges = {child.graph.root_edge(u, v) for u, v in child.graph.edges}
    sub = {e: mode for e, mode in constraint.items() if e in child_edges}
    return sub or None


def _colour_single(node: PeelNode, k: int, constraint) -> _NodeResult:
    g, step = node.graph, node.step
    child = node.children[0]
    constraint = constraint or {}
    is_x_top = step.config.kind == "X" and step.config.ell == k - 2

    down = dict(_child_constraint(child, constraint) or {})
    if is_x_top and child.all_x_top(k):
        # stronger induction hypothesis: keep the single shared S(v)-edge of
        # an X(k-2) step uncoloured so K(v) ends with exactly two coloured
        # edges and P0 carries over
        _, _, _, s_edges = _edge_sets(g, step.split)
        for e in s_edges:
            if constraint.get(e) != "coloured":
                down[e] = "uncoloured"

    sub = _colour_node(child, k, down or None)
    jv = int(sub.stage)
    if jv >= 1:
        j_star = jv
    elif step.extra_edges > 0:
        j_star = 1
    elif is_x_top and not child.all_x_top(k):
        # P0 child outside the stronger hypothesis: stage preservation is
        # not guaranteed, budget one stage (b >= k-3 makes P1 admissible)
        j_star = 1
    else:
        j_star = 0
    promised = min(j_star + advance_allowance(step.config, k), 4)

    here = {e: m for e, m in constraint.items() if m == "uncoloured"}
    here.update(
        {e: m for e, m in constraint.items() if m == "coloured" and e not in sub.assignment}
    )
    found = _search_step(
        g, k, step.split, step.config, sub.assignment, promised, here or None
    )
    if found is None:
        raise ProofInvariantError(
            f"no colouring candidate reaches stage P{promised} for {step.config} "
            f"at v={step.v_label}",
            context={"b": badness(g, k), "labels": g.labels, "jStar": j_star},
        )
    assignment, achieved = found
    for e, mode in constraint.items():
        ok = (e in assignment) if mode == "coloured" else (e not in assignment)
        if not ok:
            raise ProofInvariantError(
                f"designated-edge constraint {mode} on {e} not satisfied",
                context={"v": step.v_label},
            )
    audit = sub.steps + [
        StepAudit(step.v_label, str(step.config), j_star, promised, int(achieved))
    ]
    return _NodeResult(assignment, achieved, audit, sub.ledger)


def _component_s_subgraph(g: Graph, split: NeighbourhoodSplit, child: Graph) -> Graph:
    s_labels = {g.labels[s] for s in split.S}
    shared = [v for v in range(g.n) if g.labels[v] in (s_labels & set(child.labels))]
    return g.induced_subgraph(shared)


def _jmin_of(b_sum: int, k: int) -> int:
    if b_sum < k - 3:
        return 0
    if b_sum < k - 1:
        return 1
    if b_sum < k:
        return 2
    if b_sum < 2 * k - 2:
        return 3
    # b_sum in [2k-2, 2k): the staging lemma only requires P4 here, and
    # non-rainbow is the sole remaining obligation
    return 4


def _s_region_stage_ok(g: Graph, split: NeighbourhoodSplit, assignment, target: int) -> bool:
    s_graph = g.induced_subgraph(split.S)
    local = _local_assignment(s_graph, Colouring(assignment))
    if target == 0:
        return not local
    return _max_coloured_on_four(s_graph, local) <= target + 2


def _colour_multi(node: PeelNode, k: int, constraint) -> _NodeResult:
    g, step = node.graph, node.step
    split, config = step.split, step.config
    if config.kind == "U" or (config.kind == "X" and config.ell == k - 2):
        raise ProofInvariantError(
            f"{config} cannot split G_v into multiple components",
            context={"v": step.v_label},
        )
    if constraint is not None:
        raise ProofInvariantError(
            "designated-edge constraint reached a multi-component step",
            context={"constraint": constraint},
        )

    children = node.children
    subs = [_colour_node(c, k) for c in children]

    pairs: list[tuple[int, int]] = []
    s_edge_of: list[Edge | None] = []
    s_labels = {g.labels[s] for s in split.S}
    for child in children:
        b_i = badness(child.graph, k)
        s_sub = _component_s_subgraph(g, split, child.graph)
        b_is = badness(s_sub, k)
        if b_is > 0:
            raise ProofInvariantError(
                "b(G_{i,S(v)}) > 0: component S-intersection too dense",
                context={"v": step.v_label, "component": child.graph.labels},
            )
        if s_sub.num_edges == 0:
            raise ProofInvariantError(
                "component shares no edge with S(v)",
                context={"v": step.v_label, "component": child.graph.labels},
            )
        if s_sub.num_edges > 1 and -b_is < k - 3:
            raise ProofInvariantError(
                "multi-edge S-intersection with |b| < k-3 contradicts the ledger",
                context={"v": step.v_label},
            )
        pairs.append((b_i, -b_is))
        if s_sub.num_edges == 1:
            u, w = s_sub.edges[0]
            s_edge_of.append(s_sub.root_edge(u, w))
        else:
            s_edge_of.append(None)

    b_sum = sum(b + bs for b, bs in pairs)
    if b_sum >= 2 * k:
        raise ProofInvariantError(
            f"b_sum = {b_sum} >= 2k contradicts b(G) < 2k", context={"v": step.v_label}
        )
    j_min = _jmin_of(b_sum, k)
    target = j_min
    if config.kind == "Y":
        # two K_k's in K(v) share more than one edge, so P0 is structurally out
        target = max(target, 1)
    if config.kind == "X" and config.ell == 1 and j_min == 0:
        raise ProofInvariantError(
            "X(1) multi-component step with j_min = 0: the peel should have "
            "found a single-component vertex choice",
            context={"v": step.v_label, "b": badness(g, k)},
        )

    ledger_entry = ComponentLedger(step.v_label, pairs, b_sum, j_min)

    def combine(chosen: list[_NodeResult]) -> dict[Edge, int]:
        merged: dict[Edge, int] = {}
        offset = 0
        for sub in chosen:
            top = 0
            for e, c in sub.assignment.items():
                merged[e] = c + offset
                top = max(top, c)
            offset += top
        return merged

    def attempt(chosen: list[_NodeResult]):
        base = combine(chosen)
        if not _s_region_stage_ok(g, split, base, target):
            return None
        return _search_step(g, k, split, config, base, target, None)

    plans: list[list[_NodeResult]] = [subs]
    # stronger induction hypothesis: re-colour P0 chain components so their
    # single S(v)-edge is uncoloured
    recoloured = []
    changed = False
    for child, sub, s_edge in zip(children, subs, s_edge_of):
        if (
            sub.stage == Stage.P0
            and s_edge is not None
            and s_edge in sub.assignment
            and child.all_x_top(k)
        ):
            recoloured.append(_colour_node(child, k, {s_edge: "uncoloured"}))
            changed = True
        else:
            recoloured.append(sub)
    if changed:
        plans.append(recoloured)
    # and the dual: force one component's S(v)-edge to be coloured
    for i, (child, sub, s_edge) in enumerate(zip(children, subs, s_edge_of)):
        if (
            sub.stage == Stage.P0
            and s_edge is not None
            and s_edge not in sub.assignment
            and child.all_x_top(k)
        ):
            forced = list(recoloured if changed else subs)
            forced[i] = _colour_node(child, k, {s_edge: "coloured"})
            plans.append(forced)

    for plan in plans:
        found = attempt(plan)
        if found is not None:
            assignment, achieved = found
            steps = [s for sub in plan for s in sub.steps]
            steps.append(
                StepAudit(step.v_label, str(step.config), target, target, int(achieved))
            )
            ledger = [l for sub in plan for l in sub.ledger] + [ledger_entry]
            return _NodeResult(assignment, achieved, steps, ledger)
    raise ProofInvariantError(
        f"multi-component step at v={step.v_label} ({config}, j_min={j_min}) "
        "has no verifiable extension",
        context={"b_sum": b_sum, "pairs": pairs},
    )


# -- public operations -------------------------------------------------------


def anti_rainbow_colouring(g: Graph, k: int) -> tuple[Colouring, StageReport]:
    """Colour a single K_k-component (k >= 5) so no K_k is rainbow.

    The achieved stage is verified to respect stage_bound(b(G), k); every
    internal inconsistency raises ProofInvariantError rather than widening
    the search.
    """
    if k < 5:
        raise DomainError("anti_rainbow_colouring requires k >= 5 (k = 4 has its own route)")
    trace = peel_trace(g, k)
    result = _colour_node(trace.root, k)
    b = badness(g, k)
    colouring = Colouring(result.assignment).canonical()
    verified = check_stage(g, colouring, k)
    if verified is None or verified > result.stage:
        raise ProofInvariantError(
            "final verification disagrees with construction stage",
            context={"constructed": int(result.stage), "verified": verified},
        )
    if result.stage > stage_bound(b, k):
        raise ProofInvariantError(
            f"achieved stage {result.stage} exceeds stage_bound({b}, {k})",
            context={"b": b},
        )
    report = StageReport(
        stage=result.stage,
        badness=b,
        steps=result.steps,
        component_ledger=result.ledger,
    )
    return colouring, report


def extend_colouring(
    g_star: Graph,
    c_star: Colouring,
    split: NeighbourhoodSplit,
    config: KvConfig,
    k: int,
) -> tuple[Colouring, Stage]:
    """Extend a colouring of G_v* to G = G_v* + R(v).

    Convention: split.S are indices into g_star; split.R are the appended
    vertices g_star.n .. g_star.n+l-1 with split.v = g_star.n.  The host
    graph is reconstructed (R(v) complete, R(v) joined to all of S(v)) and
    the per-configuration candidate search runs on it.
    """
    if g_star.labels != tuple(range(g_star.n)):
        raise DomainError("extend_colouring expects g_star with identity labels")
    ell = len(split.R)
    expected_r = tuple(range(g_star.n, g_star.n + ell))
    if tuple(sorted(split.R)) != expected_r or split.v != g_star.n:
        raise DomainError(
            "extend_colouring expects R(v) to be the appended vertices "
            f"{expected_r} with v = {g_star.n}"
        )
    if any(not 0 <= s < g_star.n for s in split.S):
        raise DomainError("split.S must be vertices of g_star")
    host_edges = list(g_star.edges)
    for i, a in enumerate(split.R):
        for b in split.R[i + 1:]:
            host_edges.append((a, b))
        for s in split.S:
            host_edges.append((min(a, s), max(a, s)))
    host = Graph(g_star.n + ell, host_edges)
    observed = classify_kv(split, host)
    if observed != config:
        raise DomainError(f"split classifies as {observed}, not {config}")

    j_star = check_stage(g_star, c_star, k)
    if j_star is None:
        raise DomainError("c_star leaves a rainbow K_k in g_star")
    promised = min(int(j_star) + advance_allowance(config, k), 4)
    base = dict(c_star.assignment)
    found = _search_step(host, k, split, config, base, promised, None)
    if found is None:
        raise ProofInvariantError(
            f"no admissible edge set for {config} from stage {j_star}",
            context={"promised": promised},
        )
    assignment, achieved = found
    return Colouring(assignment), achieved


def combine_components(
    g: Graph,
    split: NeighbourhoodSplit,
    components: list[tuple[Graph, Colouring, Stage]],
    k: int,
) -> tuple[Colouring, StageReport]:
    """Combine >= 2 component colourings across S(v) and extend to G.

    Component graphs must carry labels into g.  When the stronger induction
    hypothesis is needed (a P0 chain component whose S(v)-edge must switch
    between coloured and uncoloured), the component is re-coloured from its
    own peel trace.
    """
    if len(components) < 2:
        raise DomainError("combine_components needs at least two components")
    config = classify_kv(split, g)
    if config.kind == "U" or (config.kind == "X" and config.ell == k - 2):
        raise DomainError(f"configuration {config} cannot occur with multiple components")

    children = [peel_trace(comp_graph, k).root for comp_graph, _, _ in components]
    host_node = PeelNode(
        graph=g,
        step=PeelStep(
            v_label=g.labels[split.v],
            config=config,
            edge_delta=0,
            extra_edges=0,
            b_delta=0,
            split=split,
        ),
        children=children,
    )
    result = _colour_multi(host_node, k, None)
    report = StageReport(
        stage=result.stage,
        badness=badness(g, k),
        steps=result.steps,
        component_ledger=result.ledger,
    )
    return Colouring(result.assignment).canonical(), report


def colour_graph(g: Graph, k: int) -> tuple[Colouring, list[StageReport]]:
    """Colour every K_k-component of g with a disjoint palette.

    Vertices and edges in no K_k stay uncoloured (they are harmless under
    completion semantics).  Raises DensityError naming the first component
    whose exact density breaks the precondition.
    """
    if k < 5:
        raise DomainError("colour_graph requires k >= 5 (k = 4 is handled by the k4 module)")
    comps = kk_components(g, k)
    merged: dict[Edge, int] = {}
    reports = []
    offset = 0
    for comp in comps:
        colouring, report = anti_rainbow_colouring(comp, k)
        for e, c in colouring.assignment.items():
            merged[e] = c + offset
        offset += colouring.max_colour()
        reports.append(report)
    return Colouring(merged).canonical(), reports
