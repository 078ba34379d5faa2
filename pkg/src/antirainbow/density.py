"""Exact density functionals.

All comparisons are exact rationals (``fractions.Fraction``); floating point
never touches a density decision.  The production ``max_density`` runs a
Dinkelbach iteration over Goldberg's min-cut construction (integer-capacity
max-flow via scipy), so it scales past the exhaustive-scan range; the scan
(``max_density_scan``) is kept as the independent oracle and is cross-checked
against the flow route in the test suite for every small corpus graph.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .errors import DomainError
from .graph import Graph, edges_within

Rational = Fraction


def max_density(g: Graph) -> Fraction:
    """Exact max over non-empty subgraphs J of e(J)/v(J). 0 for edgeless graphs."""
    return max_density_witness(g)[0]


def max_density_witness(g: Graph) -> tuple[Fraction, list[int]]:
    """Exact maximum density together with a vertex set achieving it."""
    if g.n < 1:
        raise DomainError("max_density needs at least one vertex")
    if g.num_edges == 0:
        return Fraction(0), [0]
    best = Fraction(g.num_edges, g.n)
    witness = list(range(g.n))
    while True:
        improved = _denser_than(g, best)
        if improved is None:
            return best, witness
        witness = improved
        e = edges_within(g, _mask(improved))
        nxt = Fraction(e, len(improved))
        if nxt <= best:  # flow said strictly denser; disagreement is a bug
            raise AssertionError("density improvement step did not improve")
        best = nxt


def max_density_scan(g: Graph) -> Fraction:
    """Independent oracle: exhaustive max of e(S)/|S| over induced subsets.

    Dropping edges at a fixed vertex set never raises e/v, so induced
    subgraphs suffice. Exponential in v; intended for v <= ~20.
    """
    if g.n < 1:
        raise DomainError("max_density needs at least one vertex")
    if g.n > 24:
        raise DomainError(f"exhaustive density scan guard: v={g.n} > 24")
    best = Fraction(0)
    for mask in range(1, 1 << g.n):
        e = edges_within(g, mask)
        if e:
            d = Fraction(e, mask.bit_count())
            if d > best:
                best = d
    return best


def max_2_density(g: Graph) -> Fraction:
    """Exact max over subgraphs J with v(J) >= 3 of (e(J)-1)/(v(J)-2)."""
    if g.n < 3:
        raise DomainError("max_2_density needs at least three vertices")
    if g.n <= 18:
        return _max_2_density_scan(g)
    return _max_2_density_flow(g)


def _max_2_density_scan(g: Graph) -> Fraction:
    best = None
    for mask in range(1, 1 << g.n):
        v = mask.bit_count()
        if v < 3:
            continue
        d = Fraction(edges_within(g, mask) - 1, v - 2)
        if best is None or d > best:
            best = d
    return best


def _max_2_density_flow(g: Graph) -> Fraction:
    # (e-1)/(v-2) > p/q  <=>  q*e - p*v > q - 2p on sets forced to contain an
    # anchor edge; two-vertex sets sit exactly on the boundary, so anchoring
    # on each edge in turn covers every candidate with v >= 3.
    if g.num_edges == 0:
        return Fraction(-1, g.n - 2)
    best = Fraction(g.num_edges - 1, g.n - 2)
    for anchor in g.edges:
        while True:
            witness = _denser_than(g, best, anchor=anchor, two_density=True)
            if witness is None:
                break
            e = edges_within(g, _mask(witness))
            best = Fraction(e - 1, len(witness) - 2)
    return best


def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _denser_than(
    g: Graph,
    bound: Fraction,
    anchor: tuple[int, int] | None = None,
    two_density: bool = False,
) -> list[int] | None:
    """Goldberg test: a vertex set beating the bound, or None.

    Plain mode: S non-empty with e(S)/|S| > bound.
    two_density mode (with anchor): S containing the anchor edge, |S| >= 3,
    with (e(S)-1)/(|S|-2) > bound.
    """
    p, q = bound.numerator, bound.denominator
    if p < 0:
        p, q = 0, 1  # a non-empty set with an edge always beats negatives
    n, m = g.n, g.num_edges
    src, snk = n, n + 1
    rows, cols, caps = [], [], []

    def arc(a: int, b: int, c: int) -> None:
        rows.append(a)
        cols.append(b)
        caps.append(c)

    big = 4 * m * q * (n + 1) + 4 * p * (n + 1) + 4
    for v in range(n):
        arc(src, v, big if anchor is not None and v in anchor else m * q)
        # m*q + 2p - q*deg(v) >= 0 because deg <= m
        arc(v, snk, m * q + 2 * p - q * g.degree(v))
    for u, v in g.edges:
        arc(u, v, q)
        arc(v, u, q)

    graph = csr_matrix((np.array(caps, dtype=np.int64), (rows, cols)), shape=(n + 2, n + 2))
    res = maximum_flow(graph, src, snk)

    # source side of the min cut via residual reachability
    flow = res.flow
    residual = graph - flow
    reach = _residual_reachable(residual, src, n + 2)
    S = [v for v in range(n) if reach[v]]
    if not S:
        return None
    e = edges_within(g, _mask(S))
    if two_density:
        ok = len(S) >= 3 and q * e - p * len(S) > q - 2 * p
    else:
        ok = q * e > p * len(S)
    return S if ok else None


def _residual_reachable(residual, src: int, size: int) -> list[bool]:
    indptr, indices, data = residual.indptr, residual.indices, residual.data
    seen = [False] * size
    seen[src] = True
    stack = [src]
    while stack:
        v = stack.pop()
        for idx in range(indptr[v], indptr[v + 1]):
            w = indices[idx]
            if data[idx] > 0 and not seen[w]:
                seen[w] = True
                stack.append(w)
    return seen


def density_of(g: Graph, vertices) -> Fraction:
    verts = list(vertices)
    return Fraction(edges_within(g, _mask(verts)), len(verts))
