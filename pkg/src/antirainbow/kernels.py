"""Backend dispatch for the hot kernels.

ANTIRAINBOW_BACKEND=python forces the pure Python/numpy fallback; anything
else (default) uses the numba-jitted kernels when importable and the graph
fits in 128 bits.  ``backend_name()`` reports what is active.
"""

from __future__ import annotations

import os

import numpy as np

from .graph import Graph

_FORCED = os.environ.get("ANTIRAINBOW_BACKEND", "").strip().lower()

if _FORCED == "python":
    _numba_mod = None
else:
    try:
        from . import _kernels_numba as _numba_mod
    except ImportError:  # pragma: no cover - numba is a hard dependency
        _numba_mod = None

from . import _kernels_python as _python_mod


def backend_name() -> str:
    return "numba" if _numba_mod is not None else "python"


def _two_words(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    adj0 = np.zeros(g.n, dtype=np.uint64)
    adj1 = np.zeros(g.n, dtype=np.uint64)
    for v in range(g.n):
        mask = g.adj[v]
        adj0[v] = np.uint64(mask & 0xFFFFFFFFFFFFFFFF)
        adj1[v] = np.uint64((mask >> 64) & 0xFFFFFFFFFFFFFFFF)
    return adj0, adj1


def dense_set_search(
    g: Graph, vmax: int, p: int, q: int, node_budget: int = 5 * 10**8
) -> tuple[int | None, int]:
    """A vertex bitmask S with |S| <= vmax, q*e(S) >= p*|S| and minimum
    internal degree floor(p/q)+1, or None.  Second value: 0 ok, 2 budget."""
    mindeg = p // q + 1
    if _numba_mod is not None and g.n <= 128:
        adj0, adj1 = _two_words(g)
        s0, s1, _, status = _numba_mod.kernel_search(
            adj0, adj1, g.n, vmax, p, q, mindeg, node_budget
        )
        mask = int(s0) | (int(s1) << 64)
    else:
        mask, _, status = _python_mod.kernel_search(
            list(g.adj), g.n, vmax, p, q, mindeg, node_budget
        )
    if status == 2:
        return None, 2
    return (mask if mask else None), 0


def has_j_anchor(g: Graph, need: int = 4) -> bool:
    """True iff some triangle of g has >= need common neighbours, i.e. g
    contains the K_{3,4}-plus-triangle witness as a subgraph (need = 4)."""
    if _numba_mod is not None and g.n <= 128:
        adj0, adj1 = _two_words(g)
        return bool(_numba_mod.j_anchor_present(adj0, adj1, g.n, need))
    return _python_mod.j_anchor_present(list(g.adj), g.n, need)
