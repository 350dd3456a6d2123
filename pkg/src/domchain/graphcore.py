"""Dense graphs as Python-int bit rows, plus the domination set predicates.

A vertex set is an int bitmask (bit v set iff v is a member). All predicates use
closed neighborhoods N[v] = N(v) | {v}, except total domination which uses open
neighborhoods. Private neighbors follow pn[v; S] = N[v] \\ N[S - {v}], so a
vertex can be its own private neighbor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import DuplicateVertex, OutOfRangeVertex, TooShort

VertexSet = int
SetLike = Union[int, Iterable[int]]


def bits(mask: int):
    """Yield member indices of a bitmask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def members(mask: int) -> list[int]:
    return list(bits(mask))


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    adj: tuple[int, ...]
    labels: Optional[tuple] = None
    name: str = ""
    # Cayley graphs (X_n, gcd-graphs, products of K[a,b]) set this; solvers may
    # then place vertex 0 in a minimum set without loss of generality.
    vertex_transitive: bool = False
    # (a_i, b_i) factors when labels are product coordinates; enables value-symmetry pruning
    factors: Optional[tuple] = None
    _checked: bool = field(default=True, repr=False)

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match vertex count")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("label count does not match vertex count")
        if self._checked:
            full = self.full
            for v, row in enumerate(self.adj):
                if row >> v & 1:
                    raise ValueError(f"loop at vertex {v}")
                if row & ~full:
                    raise OutOfRangeVertex(f"row {v} has out-of-range bits")
                for u in bits(row):
                    if not self.adj[u] >> v & 1:
                        raise ValueError(f"asymmetric edge {v}->{u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kw) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise OutOfRangeVertex(f"edge ({u}, {v}) out of range for n={n}")
            if u != v:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        return cls(n, tuple(adj), **kw)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def closed(self) -> tuple[int, ...]:
        return tuple(row | 1 << v for v, row in enumerate(self.adj))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def has_isolated_vertex(self) -> bool:
        return any(r == 0 for r in self.adj)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def same_adjacency(self, other: "Graph") -> bool:
        return self.n == other.n and self.adj == other.adj

    def check_mask(self, S: SetLike) -> int:
        """Normalize S to a bitmask, raising OutOfRangeVertex on bad members."""
        if isinstance(S, int):
            if S < 0 or S >> self.n:
                raise OutOfRangeVertex("vertex set has bits outside the graph")
            return S
        m = 0
        for v in S:
            if not 0 <= v < self.n:
                raise OutOfRangeVertex(f"vertex {v} out of range for n={self.n}")
            m |= 1 << v
        return m


def adjacency_matrix(G: Graph) -> np.ndarray:
    """Dense boolean matrix of G."""
    width = (G.n + 7) // 8
    raw = b"".join(row.to_bytes(width, "little") for row in G.adj)
    packed = np.frombuffer(raw, dtype=np.uint8).reshape(G.n, width)
    return np.unpackbits(packed, axis=1, count=G.n, bitorder="little").astype(bool)


def rows_from_matrix(A: np.ndarray) -> tuple[int, ...]:
    packed = np.packbits(A, axis=1, bitorder="little")
    return tuple(int.from_bytes(r.tobytes(), "little") for r in packed)


# -- mask predicates (hot paths, no validation) -------------------------------


def neighborhood(G: Graph, S: int) -> int:
    """N[S] as a mask."""
    acc = 0
    closed = G.closed
    for v in bits(S):
        acc |= closed[v]
    return acc


def open_neighborhood(G: Graph, S: int) -> int:
    acc = 0
    for v in bits(S):
        acc |= G.adj[v]
    return acc


def coverage(G: Graph, S: int) -> tuple[int, int]:
    """(vertices dominated at least once, vertices dominated at least twice)."""
    once = twice = 0
    closed = G.closed
    for v in bits(S):
        row = closed[v]
        twice |= once & row
        once |= row
    return once, twice


def is_dominating(G: Graph, S: int) -> bool:
    return neighborhood(G, S) == G.full


def is_total_dominating(G: Graph, S: int) -> bool:
    return open_neighborhood(G, S) == G.full


def is_independent(G: Graph, S: int) -> bool:
    adj = G.adj
    return all(not adj[v] & S for v in bits(S))


def is_irredundant(G: Graph, S: int) -> bool:
    _, twice = coverage(G, S)
    closed = G.closed
    return all(closed[v] & ~twice for v in bits(S))


def private_neighbors(G: Graph, S: int, v: int) -> int:
    """pn[v; S] as a mask (v must be a member of S)."""
    return G.closed[v] & ~neighborhood(G, S & ~(1 << v))


def irredundant_extensions(G: Graph, S: int, candidates: int) -> int:
    """Vertices u in candidates (not in S) for which S + {u} stays irredundant.

    S itself must be irredundant.
    """
    closed = G.closed
    once, twice = coverage(G, S)
    pns = [(closed[v] & ~twice) for v in bits(S)]
    out = 0
    for u in bits(candidates & ~S):
        row = closed[u]
        if not row & ~once:
            continue
        if all(p & ~row for p in pns):
            out |= 1 << u
    return out


def is_maximal_irredundant(G: Graph, S: int) -> bool:
    return is_irredundant(G, S) and not irredundant_extensions(G, S, G.full)


def induced_adjacency_count(G: Graph, S: int, v: int) -> int:
    return (G.adj[v] & S).bit_count()


@dataclass(frozen=True)
class SetClassification:
    members: tuple[int, ...]
    independent: bool
    dominating: bool
    total_dominating: bool
    irredundant: bool
    maximal_independent: bool
    minimal_dominating: bool
    maximal_irredundant: bool
    private_neighbor_map: dict
    lonely: int
    social: int


def classify_set(G: Graph, S: SetLike) -> SetClassification:
    S = G.check_mask(S)
    once, twice = coverage(G, S)
    closed, adj = G.closed, G.adj
    pn_map = {v: members(closed[v] & ~twice) for v in bits(S)}
    irredundant = all(pn_map.values())
    independent = is_independent(G, S)
    dominating = once == G.full
    lonely = to_mask(v for v in bits(S) if not adj[v] & S)
    return SetClassification(
        members=tuple(bits(S)),
        independent=independent,
        dominating=dominating,
        total_dominating=is_total_dominating(G, S),
        irredundant=irredundant,
        maximal_independent=independent and dominating,
        minimal_dominating=dominating and irredundant,
        maximal_irredundant=irredundant and not irredundant_extensions(G, S, G.full),
        private_neighbor_map=pn_map,
        lonely=lonely,
        social=S & ~lonely,
    )


def is_dominating_cycle(G: Graph, order: Sequence[int]) -> bool:
    if len(order) < 3:
        raise TooShort("a cycle needs at least 3 vertices")
    if len(set(order)) != len(order):
        raise DuplicateVertex("cycle repeats a vertex")
    S = G.check_mask(order)
    k = len(order)
    if not all(G.has_edge(order[i], order[(i + 1) % k]) for i in range(k)):
        return False
    return is_dominating(G, S)


def induced_subgraph(G: Graph, U: SetLike) -> Graph:
    U = G.check_mask(U)
    keep = members(U)
    index = {v: i for i, v in enumerate(keep)}
    adj = []
    for v in keep:
        row = 0
        for u in bits(G.adj[v] & U):
            row |= 1 << index[u]
        adj.append(row)
    labels = tuple(G.labels[v] for v in keep) if G.labels is not None else tuple(keep)
    return Graph(len(keep), tuple(adj), labels=labels, name=f"{G.name}[{len(keep)}]", _checked=False)


def subset_domination_number(
    G: Graph, target: SetLike, cap: int
) -> Optional[tuple[int, list[int]]]:
    """Smallest C with target contained in N[C], if one of size <= cap exists.

    Iterative deepening; branches on the lowest-index undominated target vertex
    with the fewest dominators.
    """
    target = G.check_mask(target)
    if not target:
        return 0, []
    closed = G.closed

    def search(k: int, left: int, chosen: list[int]) -> Optional[list[int]]:
        if not left:
            return list(chosen)
        if k == 0:
            return None
        u = min(bits(left), key=lambda x: closed[x].bit_count())
        for w in bits(closed[u]):
            chosen.append(w)
            found = search(k - 1, left & ~closed[w], chosen)
            chosen.pop()
            if found is not None:
                return found
        return None

    if neighborhood(G, G.full) & target != target:
        return None
    for k in range(1, cap + 1):
        found = search(k, target, [])
        if found is not None:
            return k, sorted(found)
    return None


def brute_force_subset_cover(G: Graph, target: int, cap: int) -> Optional[int]:
    """Size of a smallest dominator of target by plain enumeration (testing aid)."""
    for k in range(0, cap + 1):
        for C in combinations(range(G.n), k):
            if neighborhood(G, to_mask(C)) & target == target:
                return k
    return None
