"""Numba-jitted hot kernels: dense-set search for the census and J-anchor
detection for threshold scans.

Graphs are encoded as two uint64 bitset words per vertex (n <= 128).  The
census kernel enumerates connected vertex sets with minimum internal degree
mindeg, pruned by deficiency-repair and density-potential bounds; by the
peeling argument a set S with q*e(S) >= p*|S| exists iff such a "kernel"
set exists, so this decides census non-emptiness exactly.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

U0 = np.uint64(0)
U1 = np.uint64(1)


@njit(cache=True, inline="always")
def _pc(x):
    x = uint64(x)
    c = 0
    while x:
        x &= x - U1
        c += 1
    return c


@njit(cache=True, inline="always")
def _lowbit_index(mm):
    v = 0
    t = mm
    while t > U1:
        t >>= U1
        v += 1
    return v


@njit(cache=True)
def kernel_search(adj0, adj1, n, vmax, p, q, mindeg, node_budget):
    """Find a connected S with |S| <= vmax, min internal degree >= mindeg and
    q*e(S) >= p*|S|.  Returns (word0, word1, nodes, status); status is
    0 = none, 1 = found, 2 = budget exceeded."""
    cap = 262144
    st_s0 = np.empty(cap, dtype=np.uint64)
    st_s1 = np.empty(cap, dtype=np.uint64)
    st_x0 = np.empty(cap, dtype=np.uint64)
    st_x1 = np.empty(cap, dtype=np.uint64)
    cand = np.empty(n, dtype=np.int64)
    candkey = np.empty(n, dtype=np.int64)
    hist = np.empty(64, dtype=np.int64)
    caphist = np.empty(160, dtype=np.int64)
    nodes = 0

    deg = np.empty(n, dtype=np.int64)
    for v in range(n):
        deg[v] = _pc(adj0[v]) + _pc(adj1[v])
    roots = np.argsort(-deg)

    mask0 = ~U0 if n >= 64 else (U1 << uint64(n)) - U1
    mask1 = U0
    if n > 64:
        mask1 = ~U0 if n >= 128 else (U1 << uint64(n - 64)) - U1

    for ri in range(n):
        root = roots[ri]
        if root < 64:
            s0, s1 = U1 << uint64(root), U0
        else:
            s0, s1 = U0, U1 << uint64(root - 64)
        x0 = U0
        x1 = U0
        for rj in range(ri):
            r2 = roots[rj]
            if r2 < 64:
                x0 |= U1 << uint64(r2)
            else:
                x1 |= U1 << uint64(r2 - 64)
        st_s0[0], st_s1[0], st_x0[0], st_x1[0] = s0, s1, x0, x1
        top = 1
        while top > 0:
            top -= 1
            S0, S1 = st_s0[top], st_s1[top]
            X0, X1 = st_x0[top], st_x1[top]
            nodes += 1
            if nodes > node_budget:
                return U0, U0, nodes, 2
            sz = _pc(S0) + _pc(S1)
            A0 = mask0 & ~X0 & ~S0
            A1 = mask1 & ~X1 & ~S1

            # one pass over S: edges, deficiency, hopeless-vertex prune
            e2 = 0
            defct = 0
            D0 = U0
            D1 = U0
            ok_kernel = True
            prune = False
            for w in range(2):
                m = S0 if w == 0 else S1
                base = 0 if w == 0 else 64
                while m:
                    mm = m & (~m + U1)
                    v = base + _lowbit_index(mm)
                    m &= m - U1
                    din = _pc(adj0[v] & S0) + _pc(adj1[v] & S1)
                    e2 += din
                    if din < mindeg:
                        ok_kernel = False
                        defct += mindeg - din
                        if w == 0:
                            D0 |= mm
                        else:
                            D1 |= mm
                        if din + _pc(adj0[v] & A0) + _pc(adj1[v] & A1) < mindeg:
                            prune = True
                            break
                if prune:
                    break
            if prune:
                continue
            e = e2 // 2
            if ok_kernel and sz >= 3 and q * e >= p * sz:
                return S0, S1, nodes, 1
            r_max = vmax - sz
            if r_max <= 0:
                continue

            # deficiency-repair and density-potential bounds over available pool
            for i in range(64):
                hist[i] = 0
            for i in range(160):
                caphist[i] = 0
            SA0 = S0 | A0
            SA1 = S1 | A1
            for w in range(2):
                m = A0 if w == 0 else A1
                base = 0 if w == 0 else 64
                while m:
                    mm = m & (~m + U1)
                    v = base + _lowbit_index(mm)
                    m &= m - U1
                    dd = _pc(adj0[v] & D0) + _pc(adj1[v] & D1)
                    hist[dd] += 1
                    cp = _pc(adj0[v] & SA0) + _pc(adj1[v] & SA1)
                    if cp > sz + r_max - 1:
                        cp = sz + r_max - 1
                    caphist[cp] += 1
            if defct > 0:
                got = 0
                left = r_max
                for val in range(63, 0, -1):
                    c = hist[val]
                    if c > left:
                        c = left
                    got += c * val
                    left -= c
                    if left == 0:
                        break
                if got < defct:
                    continue
            feasible = False
            acc = 0
            rr = 1
            val = 159
            cnt_at = caphist[val]
            while rr <= r_max:
                while val > 0 and cnt_at == 0:
                    val -= 1
                    cnt_at = caphist[val]
                if cnt_at == 0:
                    break
                acc += val
                cnt_at -= 1
                if q * (e + acc) >= p * (sz + rr):
                    feasible = True
                    break
                rr += 1
            if not feasible:
                continue

            # frontier, ordered by cross-degree into S, best explored first
            F0 = U0
            F1 = U0
            for w in range(2):
                m = S0 if w == 0 else S1
                base = 0 if w == 0 else 64
                while m:
                    mm = m & (~m + U1)
                    v = base + _lowbit_index(mm)
                    m &= m - U1
                    F0 |= adj0[v]
                    F1 |= adj1[v]
            F0 &= A0
            F1 &= A1
            nf = 0
            for w in range(2):
                m = F0 if w == 0 else F1
                base = 0 if w == 0 else 64
                while m:
                    mm = m & (~m + U1)
                    v = base + _lowbit_index(mm)
                    m &= m - U1
                    cand[nf] = v
                    candkey[nf] = _pc(adj0[v] & S0) + _pc(adj1[v] & S1)
                    nf += 1
            if nf == 0:
                continue
            order = np.argsort(candkey[:nf])
            # exclusion follows exploration order (descending key); frames are
            # pushed in reverse so the best candidate is popped first
            xc0, xc1 = X0, X1
            tmp_x0 = np.empty(nf, dtype=np.uint64)
            tmp_x1 = np.empty(nf, dtype=np.uint64)
            for oi in range(nf):
                v = cand[order[nf - 1 - oi]]
                tmp_x0[oi] = xc0
                tmp_x1[oi] = xc1
                if v < 64:
                    xc0 |= U1 << uint64(v)
                else:
                    xc1 |= U1 << uint64(v - 64)
            for oi in range(nf - 1, -1, -1):
                v = cand[order[nf - 1 - oi]]
                if top >= cap - 1:
                    return U0, U0, nodes, 2
                if v < 64:
                    st_s0[top] = S0 | (U1 << uint64(v))
                    st_s1[top] = S1
                else:
                    st_s0[top] = S0
                    st_s1[top] = S1 | (U1 << uint64(v - 64))
                st_x0[top] = tmp_x0[oi]
                st_x1[top] = tmp_x1[oi]
                top += 1
    return U0, U0, nodes, 0


@njit(cache=True)
def j_anchor_present(adj0, adj1, n, need):
    """True iff some triangle has >= need common neighbours outside itself
    (with need = 4 this decides K_{3,4}-plus-triangle subgraph presence)."""
    for u in range(n):
        au0, au1 = adj0[u], adj1[u]
        for w in range(2):
            m = au0 if w == 0 else au1
            base = 0 if w == 0 else 64
            # only v > u to halve the work
            while m:
                mm = m & (~m + U1)
                v = base + _lowbit_index(mm)
                m &= m - U1
                if v <= u:
                    continue
                c0 = au0 & adj0[v]
                c1 = au1 & adj1[v]
                for w2 in range(2):
                    mc = c0 if w2 == 0 else c1
                    base2 = 0 if w2 == 0 else 64
                    while mc:
                        mm2 = mc & (~mc + U1)
                        t = base2 + _lowbit_index(mm2)
                        mc &= mc - U1
                        if t <= v:
                            continue
                        cnt = _pc(c0 & adj0[t]) + _pc(c1 & adj1[t])
                        if cnt >= need:
                            return True
    return False
