"""Exact solvers for the eight domination parameters.

Minimization parameters (ir, gamma, gamma_t, gamma_c, i) return a witness of the
optimal size after the search has refuted every smaller size; maximization
parameters (alpha, Gamma, IR) return an optimal witness after refuting every
larger size. All searches break ties by lowest vertex index, so witnesses are
deterministic for a fixed graph.

On vertex-transitive graphs the first member of a minimum (or maximum) set can
be taken to be vertex 0, since an automorphism moves any member there.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

import networkx as nx

from .errors import DomchainError, FeasibilityExceeded
from .graphcore import (
    Graph,
    bits,
    classify_set,
    is_dominating_cycle,
    members,
    neighborhood,
    to_mask,
)
from .numtheory import jacobsthal

DEFAULT_UPPER_CAP = 30
DEFAULT_XN_CAP = 200


class Parameter(Enum):
    IR_LOWER = "ir"
    GAMMA = "gamma"
    GAMMA_T = "gamma_t"
    GAMMA_C = "gamma_c"
    I_LOWER = "i"
    ALPHA = "alpha"
    GAMMA_UPPER = "Gamma"
    IR_UPPER = "IR"

    @classmethod
    def parse(cls, text: str) -> "Parameter":
        aliases = {"upper_gamma": "Gamma", "upper_ir": "IR", "gammat": "gamma_t", "gammac": "gamma_c"}
        text = aliases.get(text, text)
        for p in cls:
            if p.value == text or p.name == text:
                return p
        raise ValueError(f"unknown parameter {text!r}")

    @property
    def maximizes(self) -> bool:
        return self in (Parameter.ALPHA, Parameter.GAMMA_UPPER, Parameter.IR_UPPER)


CHAIN = (
    Parameter.IR_LOWER,
    Parameter.GAMMA,
    Parameter.I_LOWER,
    Parameter.ALPHA,
    Parameter.GAMMA_UPPER,
    Parameter.IR_UPPER,
)
ALL_PARAMETERS = tuple(Parameter)


class InvariantViolation(DomchainError, AssertionError):
    """A solved instance broke a theorem-level invariant (should never happen)."""


@dataclass
class SolveResult:
    parameter: Parameter
    status: str  # computed | absent | timeout | skipped
    value: Optional[int] = None
    witness: Optional[tuple[int, ...]] = None
    lower: Optional[int] = None
    upper: Optional[int] = None
    elapsed: float = 0.0
    nodes: int = 0
    note: str = ""


class SearchTimeout(DomchainError):
    """Budget ran out before a search could finish."""


class _Timeout(Exception):
    pass


class Budget:
    """Wall-clock deadline polled by the searches every few hundred nodes."""

    def __init__(self, seconds: Optional[float]):
        self.deadline = None if seconds is None else time.monotonic() + seconds
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.deadline is not None and self.nodes & 255 == 0 and time.monotonic() > self.deadline:
            raise _Timeout


# -- domination-type minimization ---------------------------------------------


class _MinCover:
    """Shared branch-and-bound for gamma (closed), gamma_t (open) and i (independent)."""

    def __init__(self, G: Graph, kind: str, budget: Budget):
        self.G, self.kind, self.budget = G, kind, budget
        self.rows = G.adj if kind == "open" else G.closed
        self.best: Optional[list[int]] = None
        self.stop_at = -1
        self.limit = math.inf
        self.coords = G.labels if G.factors is not None else None

    def orbit_key(self, w: int, used: list, used_parts: list) -> tuple:
        """Candidates with equal keys are swapped by a value permutation fixing the chosen set."""
        key = []
        for i, (v, (_, b)) in enumerate(zip(self.coords[w], self.G.factors)):
            if v in used[i]:
                key.append(v)
            elif v % b in used_parts[i]:
                key.append(-1 - v % b)
            else:
                key.append(None)
        return tuple(key)

    def candidates(self, u: int, undominated: int, forbidden: int) -> int:
        c = self.rows[u] & ~forbidden
        if self.kind == "independent":
            c &= undominated
        return c

    def lower_bound(self, U: int, forbidden: int) -> int:
        # Each dominator w covers |rows[w] & U| targets; a target u can only be
        # credited 1/max over its candidates, and the credits sum to at most |D|.
        rows = self.rows
        gain: dict[int, int] = {}
        total = 0.0
        for u in bits(U):
            c = self.candidates(u, U, forbidden)
            if not c:
                return math.inf
            m = 0
            for w in bits(c):
                g = gain.get(w)
                if g is None:
                    g = gain[w] = (rows[w] & U).bit_count()
                if g > m:
                    m = g
            total += 1.0 / m
        return math.ceil(total - 1e-9)

    def search(self, chosen: list[int], U: int, forbidden: int):
        self.budget.tick()
        if not U:
            if self.best is None or len(chosen) < len(self.best):
                self.best = list(chosen)
            return
        limit = len(self.best) if self.best is not None else self.limit
        if len(chosen) + 1 >= limit:
            return
        if len(chosen) + self.lower_bound(U, forbidden) >= limit:
            return
        rows = self.rows
        c_best, c_count = 0, math.inf
        for u in bits(U):
            c = self.candidates(u, U, forbidden)
            k = c.bit_count()
            if k < c_count:
                c_best, c_count = c, k
                if k <= 1:
                    break
        cands = sorted(bits(c_best), key=lambda w: (-(rows[w] & U).bit_count(), w))
        excluded = forbidden
        seen = None
        if self.coords is not None:
            seen = set()
            used = [set() for _ in self.G.factors]
            for v in chosen:
                for i, x in enumerate(self.coords[v]):
                    used[i].add(x)
            used_parts = [{x % b for x in u} for u, (_, b) in zip(used, self.G.factors)]
        for w in cands:
            if seen is not None:
                key = self.orbit_key(w, used, used_parts)
                if key in seen:
                    excluded |= 1 << w
                    continue
                seen.add(key)
            chosen.append(w)
            nf = excluded | (1 << w)
            if self.kind == "independent":
                nf |= self.G.adj[w]
            self.search(chosen, U & ~rows[w], nf)
            chosen.pop()
            if self.best is not None and len(self.best) <= self.stop_at:
                return
            excluded |= 1 << w

    def greedy(self) -> Optional[list[int]]:
        G, rows = self.G, self.rows
        U, chosen, allowed = G.full, [], G.full
        while U:
            pool = allowed if self.kind != "independent" else allowed & U
            best_w, best_gain = -1, 0
            for w in bits(pool):
                g = (rows[w] & U).bit_count()
                if g > best_gain:
                    best_w, best_gain = w, g
            if best_w < 0:
                return None
            chosen.append(best_w)
            U &= ~rows[best_w]
            if self.kind == "independent":
                allowed &= ~G.closed[best_w]
        return chosen

    def run(self, limit: Optional[int] = None, stop_at: int = -1) -> Optional[list[int]]:
        """Minimum set; with `limit`, only sets smaller than `limit` are sought."""
        G = self.G
        self.stop_at = stop_at
        self.limit = math.inf if limit is None else limit
        self.best = self.greedy() if limit is None else None
        if self.best is not None and len(self.best) <= stop_at:
            return self.best
        if G.vertex_transitive and G.n > 0:
            nf = 1 if self.kind != "independent" else 1 | G.adj[0]
            self.search([0], G.full & ~self.rows[0], nf)
        else:
            self.search([], G.full, 0)
        return self.best


def find_dominating_set(G: Graph, size: int, budget: Optional[float] = None, kind: str = "closed") -> Optional[list[int]]:
    """Some dominating set (of the given kind) with at most `size` vertices, or None."""
    eng = _MinCover(G, kind, Budget(budget))
    try:
        found = eng.run(limit=size + 1, stop_at=size)
    except _Timeout:
        raise SearchTimeout(f"no verdict on a size-{size} dominating set within {budget}s") from None
    return sorted(found) if found is not None else None


# -- independence number --------------------------------------------------------


def _max_independent(G: Graph, budget: Budget, state: Optional[dict] = None) -> list[int]:
    adj = G.adj
    comp = [G.full & ~G.closed[v] for v in range(G.n)]  # non-neighbours
    best: list[int] = []

    # greedy start: repeatedly take the lowest-degree remaining vertex
    P = G.full
    while P:
        v = min(bits(P), key=lambda x: ((adj[x] & P).bit_count(), x))
        best.append(v)
        P &= comp[v]

    def color_bound(P: int) -> list[tuple[int, int]]:
        # partition P into cliques of G; the k-th clique gets bound k
        out = []
        k = 0
        while P:
            k += 1
            Q = P
            while Q:
                v = (Q & -Q).bit_length() - 1
                out.append((v, k))
                P &= ~(1 << v)
                Q &= adj[v]
        return out

    def expand(C: list[int], P: int):
        nonlocal best
        budget.tick()
        order = color_bound(P)
        for v, k in reversed(order):
            if len(C) + k <= len(best):
                return
            C.append(v)
            NP = P & comp[v]
            if NP:
                expand(C, NP)
            elif len(C) > len(best):
                best = list(C)
                if state is not None:
                    state["best"] = best
            C.pop()
            P &= ~(1 << v)

    if state is not None:
        state["best"] = best
    if G.vertex_transitive:
        if comp[0]:
            expand([0], comp[0])
    else:
        expand([], G.full)
    return sorted(best)


# -- irredundance ------------------------------------------------------------------


def _has_irredundant_extension(G: Graph, S: int, once: int, twice: int) -> bool:
    closed = G.closed
    pns = [closed[v] & ~twice for v in bits(S)]
    for u in bits(G.full & ~S):
        row = closed[u]
        if not row & ~once:
            continue
        if all(p & ~row for p in pns):
            return True
    return False


def _min_maximal_irredundant(G: Graph, budget: Budget, state: dict) -> list[int]:
    closed, n = G.closed, G.n
    for k in range(1, n + 1):
        state["lower"] = k
        found = None

        def dfs(S: int, size: int, start: int, once: int, twice: int):
            nonlocal found
            budget.tick()
            if size == k:
                if not _has_irredundant_extension(G, S, once, twice):
                    found = S
                return
            for u in range(start, n - (k - size) + 1):
                row = closed[u]
                nt = twice | (once & row)
                no = once | row
                if not row & ~once:
                    continue
                S2 = S | 1 << u
                if any(not (closed[v] & ~nt) for v in bits(S)):
                    continue
                dfs(S2, size + 1, u + 1, no, nt)
                if found is not None:
                    return

        if G.vertex_transitive:
            dfs(1, 1, 1, closed[0], 0)
        else:
            dfs(0, 0, 0, 0, 0)
        if found is not None:
            return members(found)
    raise AssertionError("every graph has a maximal irredundant set")


def _max_irredundant(
    G: Graph, budget: Budget, start_best: list[int], need_dominating: bool, state: dict
) -> list[int]:
    closed, n, full = G.closed, G.n, G.full
    best = list(start_best)
    best_size = len(best)

    def dfs(S: int, size: int, last: int, once: int, twice: int):
        nonlocal best, best_size
        budget.tick()
        if size > best_size and (not need_dominating or once == full):
            best, best_size = members(S), size
            state["best"] = best
        pns = [closed[v] & ~twice for v in bits(S)]
        cand = []
        for u in range(last + 1, n):
            row = closed[u]
            if not row & ~once:
                continue
            if all(p & ~row for p in pns):
                cand.append(u)
        room = min(len(cand), (full & ~once).bit_count())
        if size + room <= best_size:
            return
        for j, u in enumerate(cand):
            if size + min(len(cand) - j, (full & ~once).bit_count()) <= best_size:
                return
            row = closed[u]
            dfs(S | 1 << u, size + 1, u, once | row, twice | (once & row))

    if G.vertex_transitive and n:
        dfs(1, 1, 0, closed[0], 0)
    else:
        dfs(0, 0, -1, 0, 0)
    return sorted(best)


# -- dominating cycles ------------------------------------------------------------


def _dominating_blocks(G: Graph) -> list[int]:
    """Vertex masks of biconnected blocks B (with |B| >= 3) such that N[B] = V."""
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges())
    out = []
    for comp in nx.biconnected_components(H):
        if len(comp) >= 3:
            m = to_mask(comp)
            if neighborhood(G, m) == G.full:
                out.append(m)
    return sorted(out, key=lambda m: (m & -m))


def _min_dominating_cycle(G: Graph, budget: Budget, state: dict) -> Optional[list[int]]:
    closed = G.closed
    blocks = _dominating_blocks(G)
    if not blocks:
        return None
    cover_max = max(c.bit_count() for c in closed)
    max_len = max(b.bit_count() for b in blocks)
    for L in range(3, max_len + 1):
        state["lower"] = L
        for block in blocks:
            if block.bit_count() < L:
                continue
            symmetric = G.vertex_transitive and block & 1
            starts = [0] if symmetric else list(bits(block))
            for s in starts:
                # the cycle's smallest vertex is s (or s = 0 under symmetry)
                allowed = block & ~((1 << (s + 1)) - 1)
                path = [s]
                found = _cycle_dfs(G, budget, L, path, 1 << s, closed[s], allowed, cover_max)
                if found is not None:
                    return found
    return None


def _cycle_dfs(G, budget, L, path, used, dom, allowed, cover_max):
    budget.tick()
    adj, full = G.adj, G.full
    depth = len(path)
    s = path[0]
    if depth == L:
        if dom == full and adj[path[-1]] >> s & 1 and path[1] < path[-1]:
            return list(path)
        return None
    missing = (full & ~dom).bit_count()
    if missing > (L - depth) * cover_max:
        return None
    nxt = adj[path[-1]] & allowed & ~used
    if depth == L - 1:
        nxt &= adj[s]
    for v in bits(nxt):
        if depth >= 2 and depth == L - 1 and path[1] > v:
            continue
        path.append(v)
        found = _cycle_dfs(G, budget, L, path, used | 1 << v, dom | G.closed[v], allowed, cover_max)
        path.pop()
        if found is not None:
            return found
    return None


# -- public API ---------------------------------------------------------------------


def solve(
    G: Graph,
    p: Parameter,
    budget: Optional[float] = None,
    upper_cap: int = DEFAULT_UPPER_CAP,
    alpha_hint: Optional[Sequence[int]] = None,
) -> SolveResult:
    """Solve one parameter exactly within `budget` seconds (None = unlimited)."""
    if G.n == 0:
        raise ValueError("solve requires a nonempty graph")
    t0 = time.monotonic()
    B = Budget(budget)
    state: dict = {}
    res = SolveResult(p, "computed")
    try:
        w = _dispatch(G, p, B, state, upper_cap, alpha_hint, res)
        if res.status == "computed":
            if w is None:
                res.status = "absent"
            else:
                res.value = len(w)
                res.witness = tuple(w)
                res.lower = res.upper = res.value
    except _Timeout:
        res.status = "timeout"
        best = state.get("best")
        res.lower = state.get("lower")
        if best is not None:
            res.upper = len(best)
            res.witness = tuple(best)
    res.elapsed = time.monotonic() - t0
    res.nodes = B.nodes
    return res


def _dispatch(G, p, B, state, upper_cap, alpha_hint, res):
    if p in (Parameter.GAMMA, Parameter.GAMMA_T, Parameter.I_LOWER):
        if p is Parameter.GAMMA_T and G.has_isolated_vertex():
            return None
        kind = {Parameter.GAMMA: "closed", Parameter.GAMMA_T: "open", Parameter.I_LOWER: "independent"}[p]
        eng = _MinCover(G, kind, B)
        try:
            return sorted(eng.run())
        except _Timeout:
            state["best"] = eng.best
            raise
    if p is Parameter.ALPHA:
        return _max_independent(G, B, state)
    if p is Parameter.IR_LOWER:
        return _min_maximal_irredundant(G, B, state)
    if p is Parameter.GAMMA_C:
        w = _min_dominating_cycle(G, B, state)
        return w
    if p in (Parameter.GAMMA_UPPER, Parameter.IR_UPPER):
        if G.n > upper_cap:
            res.status = "skipped"
            res.note = f"{G.n} vertices exceeds exact cap {upper_cap} for {p.value}"
            return None
        start = list(alpha_hint) if alpha_hint is not None else _max_independent(G, B)
        state["best"] = start
        state["lower"] = len(start)
        return _max_irredundant(G, B, start, p is Parameter.GAMMA_UPPER, state)
    raise ValueError(p)


def witness_ok(G: Graph, p: Parameter, witness: Sequence[int]) -> bool:
    """Check the defining property of a witness using graphcore predicates only."""
    if p is Parameter.GAMMA_C:
        return len(witness) >= 3 and is_dominating_cycle(G, witness)
    c = classify_set(G, list(witness))
    return {
        Parameter.IR_LOWER: c.maximal_irredundant,
        Parameter.GAMMA: c.dominating,
        Parameter.GAMMA_T: c.total_dominating,
        Parameter.I_LOWER: c.maximal_independent,
        Parameter.ALPHA: c.independent,
        Parameter.GAMMA_UPPER: c.minimal_dominating,
        Parameter.IR_UPPER: c.irredundant,
    }[p]


@dataclass
class ChainReport:
    graph_id: str
    results: dict = field(default_factory=dict)

    def value(self, p: Parameter) -> Optional[int]:
        r = self.results.get(p)
        return r.value if r is not None and r.status == "computed" else None

    def all_computed(self) -> bool:
        return all(r.status in ("computed", "absent") for r in self.results.values())

    def any_timeout(self) -> bool:
        return any(r.status == "timeout" for r in self.results.values())

    def violations(self, G: Optional[Graph] = None) -> list[str]:
        out = []
        vals = [(p, self.value(p)) for p in CHAIN]
        known = [(p, v) for p, v in vals if v is not None]
        for (p1, v1), (p2, v2) in zip(known, known[1:]):
            if v1 > v2:
                out.append(f"{p1.value}={v1} > {p2.value}={v2}")
        g, gt, gc = (self.value(p) for p in (Parameter.GAMMA, Parameter.GAMMA_T, Parameter.GAMMA_C))
        if g is not None and gt is not None and g > gt:
            out.append(f"gamma={g} > gamma_t={gt}")
        if gt is not None and gc is not None and gt > gc:
            out.append(f"gamma_t={gt} > gamma_c={gc}")
        if g is not None and gc is not None and g > gc:
            out.append(f"gamma={g} > gamma_c={gc}")
        ir = self.value(Parameter.IR_LOWER)
        if ir is not None and g is not None and 2 * ir < g + 1:
            out.append(f"ir={ir} < (gamma+1)/2 with gamma={g}")
        if G is not None:
            for p, r in self.results.items():
                if r.status == "computed" and not witness_ok(G, p, r.witness):
                    out.append(f"witness for {p.value} fails its defining property")
            gt_r = self.results.get(Parameter.GAMMA_T)
            if gt_r is not None and (gt_r.status == "absent") != G.has_isolated_vertex():
                out.append("gamma_t absence does not match isolated-vertex test")
        return out


def solve_chain(
    G: Graph,
    params: Iterable[Parameter] = ALL_PARAMETERS,
    budget: Optional[float] = None,
    upper_cap: int = DEFAULT_UPPER_CAP,
) -> ChainReport:
    """Solve several parameters (budget is per parameter) and assert the chain invariants."""
    params = list(params)
    order = sorted(params, key=lambda p: list(Parameter).index(p))
    rep = ChainReport(G.name)
    alpha_witness = None
    for p in order:
        hint = alpha_witness if p in (Parameter.GAMMA_UPPER, Parameter.IR_UPPER) else None
        r = solve(G, p, budget=budget, upper_cap=upper_cap, alpha_hint=hint)
        if p is Parameter.ALPHA and r.status == "computed":
            alpha_witness = r.witness
        rep.results[p] = r
    bad = rep.violations(G)
    if bad:
        raise InvariantViolation(f"{G.name}: " + "; ".join(bad))
    return rep


@dataclass
class XnClass:
    n: int
    g: int
    gamma_t: Optional[int]
    gamma_c: Optional[int]
    in_Mt: dict
    in_Mc: dict
    gamma_t_witness: Optional[tuple] = None
    gamma_c_witness: Optional[tuple] = None


def classify_xn(n: int, budget: Optional[float] = None, cap: int = DEFAULT_XN_CAP) -> XnClass:
    """Membership of n in M_{t,j} and M_{c,j} (j = 1, 2, 3) from exact values."""
    from .generators import unitary_cayley

    if n > cap:
        raise FeasibilityExceeded(f"n = {n} above solver cap {cap}")
    G = unitary_cayley(n)
    g = jacobsthal(n)
    if n == 1:
        rt = rc = SolveResult(Parameter.GAMMA_T, "absent")
    else:
        rt = solve(G, Parameter.GAMMA_T, budget)
        rc = solve(G, Parameter.GAMMA_C, budget)
    if "timeout" in (rt.status, rc.status):
        raise FeasibilityExceeded(f"X_{n}: solver budget exhausted")
    gt, gc = rt.value, rc.value
    return XnClass(
        n=n,
        g=g,
        gamma_t=gt,
        gamma_c=gc,
        in_Mt={j: gt is not None and g - gt >= j for j in (1, 2, 3)},
        in_Mc={j: gc is not None and g - gc >= j for j in (1, 2, 3)},
        gamma_t_witness=rt.witness,
        gamma_c_witness=rc.witness,
    )
