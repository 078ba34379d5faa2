"""Pure Python/numpy fallbacks for the jitted kernels.

Same algorithms over arbitrary-precision int bitsets (no 128-vertex limit).
Selected via ANTIRAINBOW_BACKEND=python, or automatically when numba is
unavailable.  Results are bit-identical to the jitted versions.
"""

from __future__ import annotations


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def kernel_search(adj: list[int], n: int, vmax: int, p: int, q: int, mindeg: int, node_budget: int):
    """See _kernels_numba.kernel_search; returns (mask, nodes, status)."""
    nodes = 0
    deg = [a.bit_count() for a in adj]
    roots = sorted(range(n), key=lambda v: (-deg[v], v))
    # match numba's argsort(-deg) tie-break (stable ascending index)
    full = (1 << n) - 1
    stack: list[tuple[int, int]] = []
    excluded_roots = 0
    for root in roots:
        stack.append((1 << root, excluded_roots))
        excluded_roots |= 1 << root
        while stack:
            S, X = stack.pop()
            nodes += 1
            if nodes > node_budget:
                return 0, nodes, 2
            sz = S.bit_count()
            A = full & ~X & ~S
            e2 = 0
            defct = 0
            D = 0
            ok_kernel = True
            prune = False
            for v in _bits(S):
                din = (adj[v] & S).bit_count()
                e2 += din
                if din < mindeg:
                    ok_kernel = False
                    defct += mindeg - din
                    D |= 1 << v
                    if din + (adj[v] & A).bit_count() < mindeg:
                        prune = True
                        break
            if prune:
                continue
            e = e2 // 2
            if ok_kernel and sz >= 3 and q * e >= p * sz:
                return S, nodes, 1
            r_max = vmax - sz
            if r_max <= 0:
                continue
            SA = S | A
            dds = []
            caps = []
            for v in _bits(A):
                dds.append((adj[v] & D).bit_count())
                caps.append(min((adj[v] & SA).bit_count(), sz + r_max - 1))
            if defct > 0:
                got = sum(sorted(dds, reverse=True)[:r_max])
                if got < defct:
                    continue
            feasible = False
            acc = 0
            for rr, cp in enumerate(sorted(caps, reverse=True)[:r_max], start=1):
                acc += cp
                if q * (e + acc) >= p * (sz + rr):
                    feasible = True
                    break
            if not feasible:
                continue
            F = 0
            for v in _bits(S):
                F |= adj[v]
            F &= A
            cand = sorted(_bits(F), key=lambda v: ((adj[v] & S).bit_count(), -v))
            # exploration order: descending cross-degree (ties by index as in
            # the jitted version's reversed stable argsort)
            expl = [cand[len(cand) - 1 - i] for i in range(len(cand))]
            xc = X
            frames = []
            for v in expl:
                frames.append((S | (1 << v), xc))
                xc |= 1 << v
            stack.extend(reversed(frames))
    return 0, nodes, 0


def j_anchor_present(adj: list[int], n: int, need: int) -> bool:
    for u in range(n):
        au = adj[u]
        for v in _bits(au):
            if v <= u:
                continue
            common = au & adj[v]
            for t in _bits(common):
                if t <= v:
                    continue
                if (common & adj[t]).bit_count() >= need:
                    return True
    return False
