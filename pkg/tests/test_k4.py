from fractions import Fraction
from itertools import combinations

import pytest

from antirainbow.density import max_density
from antirainbow.errors import DensityError
from antirainbow.graph import Graph, complete_graph
from antirainbow.k4 import (
    anti_rainbow_colouring_k4,
    badness_k4,
    colour_graph_k4,
    component_vertex_bound_check,
    k4_ledger,
    peel_trace_k4,
    witness_j,
)
from antirainbow.oracle import find_rainbow_clique, forced_rainbow
from conftest import clique_edges, make_graph


def k4_chain(length):
    edges = set(clique_edges(range(4)))
    n = 4
    share = (2, 3)
    for _ in range(length - 1):
        block = list(share) + [n, n + 1]
        edges.update(clique_edges(block))
        share = (n, n + 1)
        n += 2
    return Graph(n, sorted(edges))


def bridge_fixture():
    """Two K_4's sharing a vertex, apex vertex over a triangle across them."""
    return make_graph(
        8,
        clique_edges([1, 2, 4, 5]),
        clique_edges([2, 3, 6, 7]),
        [(1, 3), (0, 1), (0, 2), (0, 3)],
    )


# -- ledger -------------------------------------------------------------------

def test_badness_k4_values():
    assert badness_k4(complete_graph(4)) == 0
    assert badness_k4(complete_graph(5)) == 13
    assert badness_k4(witness_j()) == 18


def test_witness_j_shape():
    j = witness_j()
    assert j.n == 7 and j.num_edges == 15
    assert sorted(j.degree(v) for v in range(7)) == [3, 3, 3, 3, 6, 6, 6]
    assert max_density(j) == Fraction(15, 7)


def test_peel_k5_single_u1():
    trace = peel_trace_k4(complete_graph(5))
    steps = trace.steps()
    assert [str(s.config) for s in steps] == ["U1"]
    led = k4_ledger(complete_graph(5))
    assert led.value == 13 and led.deltas[0]["delta"] == 13


def test_peel_glued_k4s_x2():
    g = k4_chain(2)
    trace = peel_trace_k4(g)
    assert [str(s.config) for s in trace.steps()] == ["X2"]
    assert k4_ledger(g).deltas[0]["delta"] == 5


def test_peel_x1_attachment():
    g = make_graph(5, clique_edges(range(4)), [(1, 4), (2, 4), (3, 4)])
    trace = peel_trace_k4(g)
    assert [str(s.config) for s in trace.steps()] == ["X1"]
    assert badness_k4(g) == 6


def test_bridge_fixture_ledger():
    g = bridge_fixture()
    assert badness_k4(g) == 10
    assert max_density(g) < Fraction(15, 7)
    trace = peel_trace_k4(g)
    # the peel prefers single-component steps; deltas must still reconcile
    total = sum({"X1": 6, "X2": 5, "U1": 13}[str(s.config)] for s in trace.steps())
    total += 7 * sum(s.extra_edges for s in trace.steps())
    residues = trace.residues()
    assert total + sum(badness_k4(r) for r in residues) >= badness_k4(g)


def test_deltas_exact_on_chains():
    for length in (1, 2, 3):
        g = k4_chain(length)
        led = k4_ledger(g)
        assert led.value == 5 * (length - 1)
        assert all(d["delta"] == 5 for d in led.deltas)


# -- colouring -----------------------------------------------------------------

def test_colour_k4_base():
    c = anti_rainbow_colouring_k4(complete_graph(4))
    assert len(c.assignment) == 2
    assert len(set(c.assignment.values())) == 1
    assert find_rainbow_clique(complete_graph(4), c, 4) is None


def test_colour_k5_whole():
    c = anti_rainbow_colouring_k4(complete_graph(5))
    assert find_rainbow_clique(complete_graph(5), c, 4) is None


def test_colour_chains_and_triangle_invariant():
    for length in (2, 3):
        g = k4_chain(length)
        c = anti_rainbow_colouring_k4(g)
        assert find_rainbow_clique(g, c, 4) is None
        cap = 1 if badness_k4(g) < 6 else 2 if badness_k4(g) < 12 else None
        if cap is not None:
            for tri in g.cliques(3):
                n_col = sum(
                    1 for e in combinations(tri, 2) if tuple(sorted(e)) in c.assignment
                )
                assert n_col <= cap


def test_colour_bridge():
    g = bridge_fixture()
    c = anti_rainbow_colouring_k4(g)
    assert find_rainbow_clique(g, c, 4) is None


def test_j_rejected_with_witness():
    with pytest.raises(DensityError) as exc:
        anti_rainbow_colouring_k4(witness_j())
    assert exc.value.density == Fraction(15, 7)
    assert exc.value.witness == list(range(7))


def test_vertex_bound():
    assert component_vertex_bound_check(complete_graph(4)) == 4
    assert component_vertex_bound_check(k4_chain(2)) == 6
    assert component_vertex_bound_check(k4_chain(3)) == 8


def test_colour_graph_k4_strips_and_splits():
    g = make_graph(
        10,
        clique_edges(range(4)),
        clique_edges(range(4, 8)),
        [(8, 9), (3, 8)],
    )
    colouring, ledgers = colour_graph_k4(g)
    assert len(ledgers) == 2
    assert (8, 9) not in colouring.assignment
    assert find_rainbow_clique(g, colouring, 4) is None


def test_j_minus_any_edge_colourable():
    from antirainbow.oracle import brute_force_no_rainbow_colouring

    j = witness_j()
    for e in j.edges:
        g = j.without_edges([e])
        assert brute_force_no_rainbow_colouring(g, 4) is not None, e


def test_j_forced():
    assert forced_rainbow(witness_j(), 4)
