import math
from fractions import Fraction

import pytest

from antirainbow.density import max_density
from antirainbow.errors import DomainError, GuardExceededError
from antirainbow.experiments import (
    census_nonempty,
    corpus,
    dense_subgraph_census,
    gnp,
    threshold_scan,
)
from antirainbow.graph import Graph, complete_graph, edges_within, mask_of
from antirainbow.k4 import witness_j
from antirainbow.structure import badness, kk_components

from conftest import clique_edges, make_graph


# -- gnp -----------------------------------------------------------------------

def test_gnp_extremes():
    assert gnp(5, 0.0, 1).num_edges == 0
    assert gnp(5, 1.0, 1).num_edges == 10


def test_gnp_deterministic():
    assert gnp(40, 0.3, 9).edges == gnp(40, 0.3, 9).edges
    assert gnp(40, 0.3, 9).edges != gnp(40, 0.3, 10).edges


def test_gnp_binomial_concentration():
    n, p, trials = 100, 0.5, 100
    mean = math.comb(n, 2) * p
    sigma = math.sqrt(math.comb(n, 2) * p * (1 - p))
    for seed in range(trials):
        e = gnp(n, p, seed).num_edges
        assert abs(e - mean) <= 5 * sigma


def test_gnp_coupling_monotone():
    from antirainbow.experiments import _uniforms
    from itertools import combinations

    pairs = list(combinations(range(25), 2))
    u = _uniforms(len(pairs), 3, 0)
    last = None
    for p in (0.5, 0.4, 0.3, 0.2):
        edges = {e for e, x in zip(pairs, u) if x < p}
        if last is not None:
            assert edges <= last
        last = edges


# -- corpus ----------------------------------------------------------------------

def test_corpus_chain_badness_zero():
    for cg in corpus("clique-chain", 5, {"count": 6, "min_length": 1, "max_length": 5}, 4):
        assert badness(cg.graph, 5) == 0
        assert max_density(cg.graph) < Fraction(3)


def test_corpus_chain_fixed_length():
    cg = corpus("clique-chain", 5, {"count": 1, "length": 3, "random_shape": False}, 0)[0]
    assert cg.graph.n == 11 and badness(cg.graph, 5) == 0


def test_corpus_fixture_kind():
    fixtures = corpus("figure1-fixtures", 5, None, 0)
    assert [cg.recipe["config"] for cg in fixtures] == [
        "X1", "X2", "X3", "Y1", "Y2", "Y3", "U1",
    ]


def test_corpus_gluing_respects_budget():
    for cg in corpus("gluing-mix", 5, {"count": 12, "max_ops": 3}, 7):
        assert 0 <= badness(cg.graph, 5) < 10
        assert max_density(cg.graph) < Fraction(3)


def test_corpus_gluing_u1_badness():
    # a mix containing exactly one U_1 op lands at b = k-1; hunt one down
    found = False
    for seed in range(40):
        for cg in corpus("gluing-mix", 5, {"count": 4, "max_ops": 1}, seed):
            if badness(cg.graph, 5) == 4 and cg.graph.n == 6:
                found = True
    assert found


def test_corpus_random_sparse_components_ok():
    for cg in corpus("random-sparse", 5, {"count": 6}, 3):
        for comp in kk_components(cg.graph, 5):
            assert max_density(comp) < Fraction(3)


def test_corpus_recipes_regenerate():
    batch = corpus("gluing-mix", 4, {"count": 5, "max_ops": 3}, 13)
    again = corpus("gluing-mix", 4, {"count": 5, "max_ops": 3}, 13)
    for a, b in zip(batch, again):
        assert a.graph == b.graph and a.recipe == b.recipe


def test_corpus_unknown_kind():
    with pytest.raises(DomainError):
        corpus("nope", 5, None, 0)


# -- census ----------------------------------------------------------------------

def test_census_k4_empty():
    assert dense_subgraph_census(complete_graph(4), 12, Fraction(15, 7)) == []


def test_census_j_full_set():
    assert dense_subgraph_census(witness_j(), 12, Fraction(15, 7)) == [tuple(range(7))]


def test_census_vmax_guard():
    with pytest.raises(GuardExceededError):
        dense_subgraph_census(witness_j(), 13, Fraction(15, 7))


def test_census_k6_and_supersets():
    # K_6 has density 15/6 >= 15/7; one pendant vertex with 3 edges also counts
    g = make_graph(7, clique_edges(range(6)), [(0, 6), (1, 6), (2, 6)])
    sets = dense_subgraph_census(g, 12, Fraction(15, 7))
    assert tuple(range(6)) in sets
    assert tuple(range(7)) in sets  # 18 edges on 7 vertices: 18/7 >= 15/7


def test_census_soundness_reverified():
    g = gnp(16, 0.5, 5)
    sets = dense_subgraph_census(g, 12, Fraction(15, 7))
    for s in sets:
        e = edges_within(g, mask_of(s))
        assert Fraction(e, len(s)) >= Fraction(15, 7)


def test_census_large_graph_planted():
    j = witness_j()
    edges = list(j.edges) + [(i, i + 1) for i in range(7, 24)]
    g = Graph(25, edges)
    assert dense_subgraph_census(g, 12, Fraction(15, 7)) == [tuple(range(7))]
    assert census_nonempty(g, 12, Fraction(15, 7))


def test_census_nonempty_agrees_with_exhaustive():
    for seed in range(30):
        g = gnp(14, 0.42, seed)
        full = dense_subgraph_census(g, 12, Fraction(15, 7))
        assert census_nonempty(g, 12, Fraction(15, 7)) == (len(full) > 0)


# -- threshold scan ----------------------------------------------------------------

def test_scan_deterministic():
    rows1 = threshold_scan(4, 25, [0.4, 0.6], trials=12, seed=5)
    rows2 = threshold_scan(4, 25, [0.4, 0.6], trials=12, seed=5)
    assert [r.to_csv() for r in rows1] == [r.to_csv() for r in rows2]


def test_scan_rates_monotone_under_coupling():
    rows = threshold_scan(4, 40, [0.35, 0.45, 0.55, 0.65], trials=15, seed=8)
    rates = [r.rate_j for r in rows]
    assert all(a >= b for a, b in zip(rates, rates[1:]))


def test_scan_k5_drops_j_column():
    rows = threshold_scan(5, 20, [0.4], trials=5, seed=1)
    assert rows[0].rate_j is None and rows[0].rate_census is None


def test_scan_census_guarded_above_nmax():
    rows = threshold_scan(4, 25, [0.5], trials=5, seed=2, census_nmax=20)
    assert rows[0].rate_census is None


def test_scan_guard():
    with pytest.raises(GuardExceededError):
        threshold_scan(4, 1000, [0.5], trials=100000, seed=0)


def test_scan_csv_schema():
    from antirainbow.experiments import ScanRow

    assert ScanRow.CSV_HEADER == "n,c,p,trials,rate_j,rate_colourable,rate_census,seed"
    rows = threshold_scan(4, 20, [0.5], trials=4, seed=3)
    line = rows[0].to_csv()
    assert len(line.split(",")) == 8
