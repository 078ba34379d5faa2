"""Backend equivalence: the jitted kernels and the pure-Python fallbacks
must agree decision-for-decision."""

import itertools

import numpy as np

from antirainbow import _kernels_python as pyimpl
from antirainbow.graph import Graph
from antirainbow.k4 import witness_j
from antirainbow.kernels import backend_name, dense_set_search, has_j_anchor


def random_graph(rng, n_max=18):
    n = int(rng.integers(4, n_max))
    p = float(rng.uniform(0.1, 0.8))
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph(n, edges)


def test_backends_agree_on_census_decision():
    rng = np.random.default_rng(17)
    for _ in range(120):
        g = random_graph(rng)
        fast, status = dense_set_search(g, 12, 15, 7)
        assert status == 0
        slow, _, st2 = pyimpl.kernel_search(list(g.adj), g.n, 12, 15, 7, 3, 10**8)
        assert st2 in (0, 1)
        assert (fast is not None) == (st2 == 1)


def test_backends_agree_on_j_anchor():
    rng = np.random.default_rng(23)
    for _ in range(120):
        g = random_graph(rng)
        assert has_j_anchor(g) == pyimpl.j_anchor_present(list(g.adj), g.n, 4)


def test_j_anchor_on_witness():
    assert has_j_anchor(witness_j())
    missing_one = witness_j().without_edges([(2, 6)])
    assert not has_j_anchor(missing_one)


def test_dense_set_is_dense():
    from antirainbow.graph import bits_to_list, edges_within

    g = witness_j()
    mask, status = dense_set_search(g, 12, 15, 7)
    assert status == 0 and mask is not None
    assert 7 * len(bits_to_list(mask)) <= 7 * 12
    assert 7 * edges_within(g, mask) >= 15 * mask.bit_count()


def test_backend_name_reports():
    assert backend_name() in ("numba", "python")
