"""Random graph sampling, corpus generation, the dense-subgraph census and
threshold scans.

All randomness flows through counter-based Philox streams derived from
(seed, stream-index), so every experiment is reproducible bit-for-bit and
trials are independent whether run sequentially or not.  Graphs across an
exponent grid share their underlying uniforms, giving the monotone coupling
the scan's monotonicity checks rely on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .colouring import colour_graph
from .density import max_density
from .errors import AntiRainbowError, DomainError, GuardExceededError
from .graph import Graph, bits_to_list, edges_within
from .k4 import K4_DENSITY_BOUND, colour_graph_k4
from .kernels import dense_set_search, has_j_anchor
from .structure import kk_components

# -- sampling ----------------------------------------------------------------


def _uniforms(count: int, seed: int, stream: int = 0) -> np.ndarray:
    bitgen = np.random.Philox(seed=np.random.SeedSequence(entropy=(seed, stream)))
    return np.random.Generator(bitgen).random(count)


def gnp(n: int, p: float, seed: int, stream: int = 0) -> Graph:
    """G(n, p): each pair independently an edge with probability p,
    deterministic given (seed, stream)."""
    if n < 0 or not 0 <= p <= 1:
        raise DomainError("gnp needs n >= 0 and p in [0, 1]")
    pairs = list(combinations(range(n), 2))
    u = _uniforms(len(pairs), seed, stream)
    return Graph(n, [e for e, x in zip(pairs, u) if x < p])


# -- corpus ------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusGraph:
    graph: Graph
    recipe: dict

    def to_json(self) -> str:
        from .graph import to_json_dict

        return json.dumps({"recipe": self.recipe, "graph": to_json_dict(self.graph)})


def _clique(edges: set, verts: list[int]) -> None:
    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            edges.add((min(a, b), max(a, b)))


def _chain_graph(k: int, length: int, rng: np.random.Generator | None) -> Graph:
    """length K_k blocks glued along edges, all-X(k-2) shape; random
    attachment edges when rng is given, a straight chain otherwise."""
    edges: set = set()
    _clique(edges, list(range(k)))
    n = k
    for _ in range(length - 1):
        if rng is None:
            pool = sorted(edges)
            share = pool[-1]
        else:
            pool = sorted(edges)
            share = pool[int(rng.integers(len(pool)))]
        block = [share[0], share[1]] + list(range(n, n + k - 2))
        _clique(edges, block)
        n += k - 2
    return Graph(n, edges)


def figure1_fixtures(k: int) -> list[CorpusGraph]:
    """The embedded K(v)-configuration fixtures: X_1..X_{k-2}, Y_1..Y_{k-2}
    and U_1, each built so v = 0 has minimum degree and S(v)-vertices lie in
    further K_k's.  Embeddings that cannot meet the density precondition
    (Y_l needs badness (k-3) + l(k-l) for the shared covering clique, which
    overflows 2k for middle l once k >= 6) are dropped; at k = 5 all seven
    configurations survive."""
    out = []
    for ell in range(1, k - 1):
        # X_ell: K(v) = K_k on {v, r..} + S; second clique = S + ell fresh
        edges: set = set()
        kv = list(range(k))  # v = 0, R = 0..ell-1, S = ell..k-1
        _clique(edges, kv)
        s_part = list(range(ell, k))
        _clique(edges, s_part + list(range(k, k + ell)))
        out.append(
            CorpusGraph(Graph(k + ell, edges), {"kind": "figure1", "k": k, "config": f"X{ell}"})
        )
    for ell in range(1, k - 1):
        # Y_ell: K(v) = K_{k+1} minus one S-edge; both K_k's of a shared
        # U-clique cover every S-vertex
        if (k - 3) + ell * (k - ell) >= 2 * k:
            continue
        edges = set()
        kv = list(range(k + 1))  # v = 0, R = 0..ell-1, S = ell..k
        _clique(edges, kv)
        x, y = ell, ell + 1
        edges.discard((x, y))
        s_part = [s for s in range(ell, k + 1)]
        u_part = list(range(k + 1, k + 1 + ell))
        _clique(edges, [s for s in s_part if s != x] + u_part)
        _clique(edges, [s for s in s_part if s != y] + u_part)
        out.append(
            CorpusGraph(Graph(k + 1 + ell, edges), {"kind": "figure1", "k": k, "config": f"Y{ell}"})
        )
    edges = set()
    _clique(edges, list(range(k + 1)))
    out.append(CorpusGraph(Graph(k + 1, edges), {"kind": "figure1", "k": k, "config": "U1"}))
    return out


def _find_induced_kminus(g_edges: set, n: int, size: int, rng) -> list[int] | None:
    """An induced K_size minus one edge: a non-adjacent pair plus size-2
    common neighbours forming a clique."""
    adj = [set() for _ in range(n)]
    for a, b in g_edges:
        adj[a].add(b)
        adj[b].add(a)
    pairs = [(x, y) for x in range(n) for y in range(x + 1, n) if y not in adj[x]]
    order = rng.permutation(len(pairs)) if len(pairs) else []
    for idx in order:
        x, y = pairs[int(idx)]
        common = sorted(adj[x] & adj[y])
        for sub in combinations(common, size - 2):
            if all(b in adj[a] for a, b in combinations(sub, 2)):
                return [x, y] + list(sub)
    return None


def _gluing_mix_graph(k: int, max_ops: int, rng: np.random.Generator) -> Graph | None:
    """Random attach sequence (X_l / Y_l / U_1 reverse-peels) respecting the
    badness budget; returns None when the draw is unusable."""
    b_budget = 2 * k - 1
    edges: set = set()
    _clique(edges, list(range(k)))
    n = k
    b = 0
    n_ops = int(rng.integers(0, max_ops + 1))
    for _ in range(n_ops):
        ops = []
        for ell in range(1, k - 1):
            ops.append(("X", ell, (k - ell - 2) * ell))
        for ell in range(1, k - 1):
            ops.append(("Y", ell, (k - ell) * ell))
        ops.append(("U", 1, k - 1))
        ops = [op for op in ops if b + op[2] < b_budget + 1]
        if not ops:
            break
        kind, ell, delta = ops[int(rng.integers(len(ops)))]
        if kind == "X":
            cliques = _k_cliques_of(edges, n, k)
            if not cliques:
                break
            host = cliques[int(rng.integers(len(cliques)))]
            s_set = sorted(rng.choice(host, size=k - ell, replace=False).tolist())
            new = list(range(n, n + ell))
            _clique(edges, s_set + new)
            n += ell
            b += delta
        elif kind == "U":
            cliques = _k_cliques_of(edges, n, k)
            if not cliques:
                break
            host = list(cliques[int(rng.integers(len(cliques)))])
            _clique(edges, host + [n])
            n += 1
            b += delta
        else:
            s_set = _find_induced_kminus(edges, n, k - ell + 1, rng)
            if s_set is None:
                continue
            new = list(range(n, n + ell))
            x, y = s_set[0], s_set[1]
            _clique(edges, s_set + new)
            edges.discard((min(x, y), max(x, y)))
            n += ell
            b += delta
    return Graph(n, edges)


def _k_cliques_of(edges: set, n: int, k: int) -> list[tuple[int, ...]]:
    return list(Graph(n, edges).cliques(k))


def _k4_mix_graph(max_ops: int, rng: np.random.Generator) -> Graph:
    """K_4-component mix: K_5 standalone, X_2 trees, X_1 attachments and the
    two-component X_1 bridge, inside the b_{K4} < 18 budget."""
    if rng.random() < 0.08:
        edges: set = set()
        _clique(edges, list(range(5)))
        return Graph(5, edges)
    if rng.random() < 0.12:
        # bridge: two K_4's sharing a vertex, apex over a triangle
        edges = set()
        _clique(edges, [1, 2, 4, 5])
        _clique(edges, [2, 3, 6, 7])
        edges.add((1, 3))
        edges.update([(0, 1), (0, 2), (0, 3)])
        return Graph(8, edges)
    edges = set()
    _clique(edges, list(range(4)))
    n, b = 4, 0
    for _ in range(int(rng.integers(0, max_ops + 1))):
        ops = [("X2", 5), ("X1", 6)]
        ops = [op for op in ops if b + op[1] < 18]
        if not ops:
            break
        kind, delta = ops[int(rng.integers(len(ops)))]
        cliques = _k_cliques_of(edges, n, 4)
        host = list(cliques[int(rng.integers(len(cliques)))])
        if kind == "X2":
            pair = sorted(rng.choice(host, size=2, replace=False).tolist())
            _clique(edges, pair + [n, n + 1])
            n += 2
        else:
            tri = sorted(rng.choice(host, size=3, replace=False).tolist())
            _clique(edges, tri + [n])
            n += 1
        b += delta
    return Graph(n, edges)


def corpus(kind: str, k: int, params: dict | None, seed: int) -> list[CorpusGraph]:
    """Deterministic test-input factory.

    Kinds: clique-chain, figure1-fixtures, random-sparse, gluing-mix.
    Every returned graph satisfies the declared preconditions (for the
    constructive kinds the exact density is verified and violating draws are
    rejected), and its recipe regenerates it exactly.
    """
    params = dict(params or {})
    bound = K4_DENSITY_BOUND if k == 4 else Fraction(k + 1, 2)
    if kind == "figure1-fixtures":
        return figure1_fixtures(k)

    count = int(params.get("count", 1))
    out: list[CorpusGraph] = []
    rng = np.random.Generator(np.random.Philox(seed=np.random.SeedSequence(entropy=(seed, 1))))
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 50 * count + 200:
            raise DomainError(f"corpus kind {kind}: parameters appear unsatisfiable")
        idx = len(out)
        if kind == "clique-chain":
            length = int(params.get("length", 0)) or int(
                rng.integers(params.get("min_length", 1), params.get("max_length", 6) + 1)
            )
            g = _chain_graph(k, length, rng if params.get("random_shape", True) else None)
        elif kind == "gluing-mix":
            if k == 4:
                g = _k4_mix_graph(int(params.get("max_ops", 3)), rng)
            else:
                g = _gluing_mix_graph(k, int(params.get("max_ops", 4)), rng)
                if g is None:
                    continue
        elif kind == "random-sparse":
            n = int(rng.integers(params.get("n_min", 8), params.get("n_max", 16) + 1))
            p = float(rng.uniform(params.get("p_min", 0.2), params.get("p_max", 0.55)))
            g = gnp(n, p, seed, stream=1000 + attempts)
            comps = kk_components(g, k)
            if any(max_density(c) >= bound for c in comps):
                continue
        else:
            raise DomainError(f"unknown corpus kind {kind!r}")
        if kind in ("clique-chain", "gluing-mix"):
            if max_density(g) >= bound:
                continue
        out.append(
            CorpusGraph(g, {"kind": kind, "k": k, "params": params, "seed": seed, "index": idx})
        )
    return out


# -- census ------------------------------------------------------------------

CENSUS_VMAX_GUARD = 12


def dense_subgraph_census(
    g: Graph,
    vmax: int,
    threshold: Fraction,
    node_budget: int = 5 * 10**8,
) -> list[tuple[int, ...]]:
    """All vertex sets S with |S| <= vmax and e(S)/|S| >= threshold, sorted.

    Small graphs are enumerated outright (monotone certificate bound);
    larger ones first decide emptiness through the kernel search (any dense
    set peels to a min-degree kernel) and only enumerate when a witness
    exists.  Sets are reported in the graph's labels.
    """
    if vmax > CENSUS_VMAX_GUARD:
        raise GuardExceededError(f"census guard: vmax = {vmax} > {CENSUS_VMAX_GUARD}")
    p, q = threshold.numerator, threshold.denominator
    if g.n <= 18:
        found = _census_exhaustive(g, vmax, p, q)
    else:
        mask, status = dense_set_search(g, vmax, p, q, node_budget)
        if status == 2:
            raise GuardExceededError("census node budget exceeded")
        if mask is None:
            found = []
        else:
            found = _census_from_kernels(g, vmax, p, q, node_budget)
    sets = sorted(tuple(sorted(g.labels[v] for v in bits_to_list(m))) for m in found)
    for m in found:  # re-verify post hoc: census soundness is an invariant
        e = edges_within(g, m)
        assert q * e >= p * m.bit_count()
    return sets


def census_nonempty(g: Graph, vmax: int, threshold: Fraction, node_budget: int = 5 * 10**8) -> bool:
    if vmax > CENSUS_VMAX_GUARD:
        raise GuardExceededError(f"census guard: vmax = {vmax} > {CENSUS_VMAX_GUARD}")
    mask, status = dense_set_search(g, vmax, threshold.numerator, threshold.denominator, node_budget)
    if status == 2:
        raise GuardExceededError("census node budget exceeded")
    return mask is not None


def _census_exhaustive(g: Graph, vmax: int, p: int, q: int) -> list[int]:
    out = []
    n = g.n

    def achievable(e: int, s: int) -> bool:
        for r in range(0, vmax - s + 1):
            if q * (e + r * s + r * (r - 1) // 2) >= p * (s + r):
                return True
        return False

    def extend(mask: int, e: int, last: int) -> None:
        s = mask.bit_count()
        if s and q * e >= p * s:
            out.append(mask)
        if s >= vmax:
            return
        for v in range(last + 1, n):
            e2 = e + (g.adj[v] & mask).bit_count()
            if achievable(e2, s + 1):
                extend(mask | (1 << v), e2, v)

    extend(0, 0, -1)
    return out


def _census_from_kernels(g: Graph, vmax: int, p: int, q: int, node_budget: int) -> list[int]:
    mindeg = p // q + 1
    kernels = _all_kernels(g, vmax, p, q, mindeg, node_budget)
    found: set[int] = set()
    budget = [node_budget]
    for t_mask in kernels:
        _extend_kernel(g, t_mask, vmax, p, q, found, budget)
    return sorted(found)


def _all_kernels(g: Graph, vmax: int, p: int, q: int, mindeg: int, node_budget: int) -> list[int]:
    """All connected sets with min internal degree >= mindeg and q*e >= p*|S|."""
    kernels = []
    nodes = 0
    full = (1 << g.n) - 1
    adj = g.adj
    excluded_roots = 0
    for root in range(g.n):
        stack = [(1 << root, excluded_roots)]
        excluded_roots |= 1 << root
        while stack:
            S, X = stack.pop()
            nodes += 1
            if nodes > node_budget:
                raise GuardExceededError("census kernel enumeration budget exceeded")
            sz = S.bit_count()
            A = full & ~X & ~S
            e2 = 0
            prune = False
            ok = True
            for v in bits_to_list(S):
                din = (adj[v] & S).bit_count()
                e2 += din
                if din < mindeg:
                    ok = False
                    if din + (adj[v] & A).bit_count() < mindeg:
                        prune = True
                        break
            if prune:
                continue
            if ok and sz >= 3 and q * (e2 // 2) >= p * sz:
                kernels.append(S)
            if sz >= vmax:
                continue
            F = 0
            for v in bits_to_list(S):
                F |= adj[v]
            F &= A
            xc = X
            for v in bits_to_list(F):
                stack.append((S | (1 << v), xc))
                xc |= 1 << v
    return kernels


def _extend_kernel(g: Graph, t_mask: int, vmax: int, p: int, q: int, found: set, budget: list) -> None:
    adj = g.adj
    e0 = edges_within(g, t_mask)

    def extend(mask: int, e: int, last: int) -> None:
        budget[0] -= 1
        if budget[0] < 0:
            raise GuardExceededError("census extension budget exceeded")
        s = mask.bit_count()
        if q * e >= p * s:
            found.add(mask)
        if s >= vmax:
            return
        for v in range(last + 1, g.n):
            if (mask >> v) & 1:
                continue
            e2 = e + (adj[v] & mask).bit_count()
            # optimistic marginal: remaining vertices each add at most s+r-1 edges
            r_room = vmax - s - 1
            best = e2
            ok = q * e2 >= p * (s + 1)
            for r in range(1, r_room + 1):
                best += s + r
                if q * best >= p * (s + 1 + r):
                    ok = True
                    break
            if ok:
                extend(mask | (1 << v), e2, v)

    extend(t_mask, e0, -1)


# -- threshold scan -----------------------------------------------------------


@dataclass
class ScanRow:
    n: int
    c: float
    p: float
    trials: int
    rate_j: float | None
    rate_colourable: float
    rate_census: float | None
    seed: int

    CSV_HEADER = "n,c,p,trials,rate_j,rate_colourable,rate_census,seed"

    def to_csv(self) -> str:
        def fmt(x):
            return "" if x is None else f"{x:.6g}"

        return (
            f"{self.n},{self.c:.6g},{self.p:.8g},{self.trials},"
            f"{fmt(self.rate_j)},{self.rate_colourable:.6g},{fmt(self.rate_census)},{self.seed}"
        )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "c": self.c,
            "p": self.p,
            "trials": self.trials,
            "rate_j_subgraph": self.rate_j,
            "rate_colourable": self.rate_colourable,
            "rate_dense_census_nonempty": self.rate_census,
            "seed": self.seed,
        }


def _colourable(g: Graph, k: int) -> bool:
    try:
        if k == 4:
            comps = kk_components(g, 4)
            if any(max_density(c) >= K4_DENSITY_BOUND for c in comps):
                return False
            colour_graph_k4(g)
        else:
            comps = kk_components(g, k)
            if any(max_density(c) >= Fraction(k + 1, 2) for c in comps):
                return False
            colour_graph(g, k)
        return True
    except AntiRainbowError:
        return False


def threshold_scan(
    k: int,
    n: int,
    exponents: list[float],
    trials: int,
    seed: int,
    census_nmax: int = 40,
    max_work: int = 10**7,
) -> list[ScanRow]:
    """Monte Carlo scan over p = n^-c.

    Per exponent: the rate of J-subgraph presence (k = 4 only), the rate
    that every K_k-component passes the density precondition and the
    colouring succeeds, and (k = 4, n <= census_nmax: the exact search is
    too expensive beyond that) the census non-emptiness rate.  Graphs share
    uniforms across the exponent grid, so presence indicators are coupled
    monotonically in p.
    """
    if k < 4:
        raise DomainError("threshold_scan needs k >= 4")
    if n * trials > max_work:
        raise GuardExceededError(f"scan guard: n * trials = {n * trials} > {max_work}")
    pairs = list(combinations(range(n), 2))
    ps = [float(n ** -c) for c in exponents]
    j_hits = [0] * len(exponents)
    col_hits = [0] * len(exponents)
    census_hits = [0] * len(exponents)
    with_census = k == 4 and n <= census_nmax
    for t in range(trials):
        u = _uniforms(len(pairs), seed, stream=t)
        for ci, p in enumerate(ps):
            g = Graph(n, [e for e, x in zip(pairs, u) if x < p])
            if k == 4 and has_j_anchor(g):
                j_hits[ci] += 1
            if _colourable(g, k):
                col_hits[ci] += 1
            if with_census and census_nonempty(g, 12, K4_DENSITY_BOUND):
                census_hits[ci] += 1
    rows = []
    for ci, (c, p) in enumerate(zip(exponents, ps)):
        rows.append(
            ScanRow(
                n=n,
                c=float(c),
                p=p,
                trials=trials,
                rate_j=(j_hits[ci] / trials) if k == 4 else None,
                rate_colourable=col_hits[ci] / trials,
                rate_census=(census_hits[ci] / trials) if with_census else None,
                seed=seed,
            )
        )
    return rows
