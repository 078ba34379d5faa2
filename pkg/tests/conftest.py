from itertools import combinations

import pytest

from antirainbow.graph import Graph


def clique_edges(verts):
    return [(min(a, b), max(a, b)) for a, b in combinations(verts, 2)]


def make_graph(n, *edge_groups):
    edges = set()
    for grp in edge_groups:
        edges.update((min(a, b), max(a, b)) for a, b in grp)
    return Graph(n, edges)


def straight_chain(k, length):
    """length K_k blocks glued along disjoint edges (all X(k-2) peels)."""
    edges = set(clique_edges(range(k)))
    n = k
    share = (0, 1)
    for _ in range(length - 1):
        block = list(share) + list(range(n, n + k - 2))
        edges.update(clique_edges(block))
        share = (n + k - 4, n + k - 3)
        n += k - 2
    return Graph(n, sorted(edges))


def two_k5_shared_edge():
    return make_graph(8, clique_edges(range(5)), clique_edges([0, 1, 5, 6, 7]))


def two_k5_shared_vertex():
    return make_graph(9, clique_edges(range(5)), clique_edges([4, 5, 6, 7, 8]))


def k6_hub():
    """X_1 hub: K_5 at v=0 whose opposite K_4 hosts two K_6 components."""
    return make_graph(
        13,
        clique_edges(range(5)),  # 0 + {1,2,3,4}
        clique_edges([1, 2, 5, 6, 7, 8]),
        clique_edges([3, 4, 9, 10, 11, 12]),
    )


def chain_hub():
    """X_1 hub whose two components are single K_5 blocks (b_sum = 0)."""
    return make_graph(
        11,
        clique_edges(range(5)),
        clique_edges([1, 2, 5, 6, 7]),
        clique_edges([3, 4, 8, 9, 10]),
    )


@pytest.fixture
def witness_j_graph():
    from antirainbow.k4 import witness_j

    return witness_j()
