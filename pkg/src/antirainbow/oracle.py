"""Independent brute-force verification.

``find_rainbow_clique`` is the soundness oracle run against every engine
colouring.  ``forced_rainbow`` / ``brute_force_no_rainbow_colouring``
exhaustively search total proper edge-colourings with canonical colour
introduction (a new colour id may only be max-used + 1), so each colouring
is visited exactly once up to colour renaming.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from itertools import combinations

from .colouring import Colouring
from .errors import DomainError, GuardExceededError
from .graph import Edge, Graph, sort_edge

DEFAULT_EDGE_GUARD = 24
DEFAULT_TIME_BUDGET = 60.0


def complete_colouring(g: Graph, c: Colouring) -> Colouring:
    """Total proper colouring: every uncoloured edge gets a fresh colour."""
    if not c.is_proper_on(g):
        raise DomainError("colouring is not proper")
    out = dict(c.assignment)
    nxt = c.max_colour() + 1
    for u, v in g.edges:
        e = g.root_edge(u, v)
        if e not in out:
            out[e] = nxt
            nxt += 1
    return Colouring(out)


@dataclass(frozen=True)
class RainbowWitness:
    clique: tuple[int, ...]
    colours: tuple[int, ...]

    def to_json(self) -> str:
        return json.dumps({"clique": list(self.clique), "colours": list(self.colours)})


def find_rainbow_clique(g: Graph, c: Colouring, k: int) -> RainbowWitness | None:
    """First k-clique (canonical order) whose completed colours are pairwise
    distinct, or None.  Uncoloured edges count as pairwise-distinct fresh."""
    total = complete_colouring(g, c)
    for cl in g.cliques(k):
        cols = [total.colour_of(g, a, b) for a, b in combinations(cl, 2)]
        if len(cols) == len(set(cols)):
            return RainbowWitness(
                clique=tuple(g.labels[v] for v in cl), colours=tuple(cols)
            )
    return None


def _search_no_rainbow(
    g: Graph,
    k: int,
    edge_guard: int,
    time_budget: float,
    count_only: bool = False,
) -> tuple[dict[Edge, int] | None, int]:
    """Backtracking search for a total proper colouring with no rainbow K_k.

    Returns (assignment or None, number of complete colourings counted when
    count_only).  Edges are ordered most-constrained-first (by the number of
    k-cliques containing them, descending); colour ids are canonical.
    """
    if g.num_edges > edge_guard:
        raise GuardExceededError(
            f"edge guard: {g.num_edges} > {edge_guard} edges (raise the guard explicitly)"
        )
    deadline = time.monotonic() + time_budget
    cliques = g.cliques(k)
    clique_edges = [
        [sort_edge(a, b) for a, b in combinations(cl, 2)] for cl in cliques
    ]
    in_cliques: dict[Edge, list[int]] = {e: [] for e in g.edges}
    for i, edges in enumerate(clique_edges):
        for e in edges:
            in_cliques[e].append(i)
    order = sorted(g.edges, key=lambda e: (-len(in_cliques[e]), e))
    pos = {e: i for i, e in enumerate(order)}
    m = len(order)
    colour: dict[Edge, int] = {}
    count = 0

    def clique_ok(ci: int) -> bool | None:
        """True: repeat present. False: fully coloured rainbow. None: open."""
        cols = []
        open_edges = 0
        for e in clique_edges[ci]:
            c = colour.get(e)
            if c is None:
                open_edges += 1
            else:
                cols.append(c)
        if len(cols) != len(set(cols)):
            return True
        return None if open_edges else False

    def all_safe() -> bool:
        return all(clique_ok(i) is True for i in range(len(cliques)))

    result: dict[Edge, int] | None = None

    def backtrack(idx: int, max_used: int) -> bool:
        nonlocal count, result
        if time.monotonic() > deadline:
            raise GuardExceededError(
                f"time budget ({time_budget:.0f}s) exceeded in colouring search"
            )
        if idx == m:
            count += 1
            if not count_only:
                result = dict(colour)
                return True
            return False
        if not count_only and all_safe():
            # every clique already repeats; finish with fresh singles
            nxt = max_used + 1
            for e in order[idx:]:
                colour[e] = nxt
                nxt += 1
            result = dict(colour)
            return True
        e = order[idx]
        u, v = e
        banned = {
            colour[f]
            for f in g.edges
            if f in colour and (u in f or v in f)
        }
        for c in range(1, min(max_used + 1, m) + 1):
            if c in banned:
                continue
            colour[e] = c
            ok = True
            for ci in in_cliques[e]:
                if clique_ok(ci) is False:
                    ok = False
                    break
            if ok and backtrack(idx + 1, max(max_used, c)):
                return True
            del colour[e]
        return False

    found = backtrack(0, 0)
    if count_only:
        return None, count
    return (result if found else None), count


def forced_rainbow(
    g: Graph,
    k: int,
    edge_guard: int = DEFAULT_EDGE_GUARD,
    time_budget: float = DEFAULT_TIME_BUDGET,
) -> bool:
    """True iff no total proper edge-colouring of g avoids a rainbow K_k."""
    assignment, _ = _search_no_rainbow(g, k, edge_guard, time_budget)
    return assignment is None


def brute_force_no_rainbow_colouring(
    g: Graph,
    k: int,
    edge_guard: int = DEFAULT_EDGE_GUARD,
    time_budget: float = DEFAULT_TIME_BUDGET,
) -> Colouring | None:
    """A total proper colouring with no rainbow K_k, or None if none exists."""
    assignment, _ = _search_no_rainbow(g, k, edge_guard, time_budget)
    if assignment is None:
        return None
    c = Colouring(assignment).canonical()
    if find_rainbow_clique(g, c, k) is not None:
        raise AssertionError("search returned a colouring with a rainbow clique")
    return c


def count_proper_colourings(g: Graph, edge_guard: int = 12, time_budget: float = 60.0) -> int:
    """Number of total proper edge-colourings up to colour renaming.

    Canonicalization self-test hook: cross-checked against a direct
    partition-into-matchings count in the test suite.
    """
    _, count = _search_no_rainbow(
        g, k=g.n + 1, edge_guard=edge_guard, time_budget=time_budget, count_only=True
    )
    return count
