"""Ground-truth oracle: evaluate every parameter over all 2^n vertex subsets.

Subset tables are built by doubling: the subsets containing vertex b are the
subsets of {0..b-1} with b added, so each property is one vectorized update
per vertex. Values are then read off by subset size. Dominating cycles are
found by scanning dominating subsets of each size L and testing whether the
induced subgraph is Hamiltonian.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .errors import TooLarge
from .graphcore import Graph, bits
from .solvers import Parameter

ORACLE_MAX_VERTICES = 22


class SubsetTables:
    def __init__(self, G: Graph):
        n = G.n
        if n > ORACLE_MAX_VERTICES:
            raise TooLarge(f"oracle limited to {ORACLE_MAX_VERTICES} vertices, got {n}")
        self.G = G
        N = 1 << n
        dt = np.uint32
        idx = np.arange(N, dtype=dt)
        once = np.zeros(N, dt)
        twice = np.zeros(N, dt)
        opened = np.zeros(N, dt)
        indep = np.ones(N, bool)
        for b in range(n):
            h = 1 << b
            cl, op = dt(G.closed[b]), dt(G.adj[b])
            twice[h : 2 * h] = twice[:h] | (once[:h] & cl)
            once[h : 2 * h] = once[:h] | cl
            opened[h : 2 * h] = opened[:h] | op
            indep[h : 2 * h] = indep[:h] & ((idx[:h] & op) == 0)
        full = dt(G.full)
        irr = np.ones(N, bool)
        for v in range(n):
            has_v = (idx >> dt(v)) & dt(1) == 1
            irr &= ~has_v | ((dt(G.closed[v]) & ~twice) != 0)
        extendable = np.zeros(N, bool)
        for u in range(n):
            bit = dt(1 << u)
            lacks = (idx & bit) == 0
            extendable |= lacks & irr[idx | bit]
        self.idx = idx
        self.size = np.bitwise_count(idx)
        self.dominating = once == full
        self.total = opened == full
        self.independent = indep
        self.irredundant = irr
        self.maximal_irredundant = irr & ~extendable

    def _min_size(self, mask: np.ndarray) -> Optional[int]:
        s = self.size[mask]
        return int(s.min()) if s.size else None

    def _max_size(self, mask: np.ndarray) -> Optional[int]:
        s = self.size[mask]
        return int(s.max()) if s.size else None

    def value(self, p: Parameter) -> Optional[int]:
        if p is Parameter.IR_LOWER:
            return self._min_size(self.maximal_irredundant)
        if p is Parameter.GAMMA:
            return self._min_size(self.dominating)
        if p is Parameter.GAMMA_T:
            return self._min_size(self.total)
        if p is Parameter.I_LOWER:
            return self._min_size(self.independent & self.dominating)
        if p is Parameter.ALPHA:
            return self._max_size(self.independent)
        if p is Parameter.GAMMA_UPPER:
            return self._max_size(self.dominating & self.irredundant)
        if p is Parameter.IR_UPPER:
            return self._max_size(self.irredundant)
        if p is Parameter.GAMMA_C:
            return self._min_dominating_cycle()
        raise ValueError(p)

    def _min_dominating_cycle(self) -> Optional[int]:
        G = self.G
        cands = self.dominating & (self.size >= 3)
        # every cycle vertex has two neighbours inside the cycle
        for v in range(G.n):
            bit = np.uint32(1 << v)
            inside = np.bitwise_count(self.idx & np.uint32(G.adj[v]))
            cands &= ((self.idx & bit) == 0) | (inside >= 2)
        subsets = self.idx[cands]
        sizes = self.size[cands]
        for L in range(3, G.n + 1):
            for S in subsets[sizes == L].tolist():
                if _hamiltonian(G, S):
                    return L
        return None


def _hamiltonian(G: Graph, S: int) -> bool:
    """Does G[S] contain a Hamiltonian cycle? Plain backtracking from the lowest member."""
    verts = list(bits(S))
    start = verts[0]
    target = len(verts)
    adj = G.adj

    def walk(v: int, used: int, depth: int) -> bool:
        if depth == target:
            return bool(adj[v] >> start & 1)
        nxt = adj[v] & S & ~used
        while nxt:
            low = nxt & -nxt
            if walk(low.bit_length() - 1, used | low, depth + 1):
                return True
            nxt ^= low
        return False

    return walk(start, 1 << start, 1)


def oracle(G: Graph, p: Parameter) -> Optional[int]:
    """Exhaustive value of parameter p (None when gamma_t or gamma_c is undefined)."""
    return SubsetTables(G).value(p)


def oracle_all(G: Graph) -> dict:
    T = SubsetTables(G)
    return {p: T.value(p) for p in Parameter}
