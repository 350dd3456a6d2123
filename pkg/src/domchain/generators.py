"""Graph families: complete and balanced multipartite graphs, direct products,
unitary Cayley graphs X_n and gcd-graphs, plus the graph-spec mini-language.

Product vertices use mixed-radix order with the last factor varying fastest.
Coordinate i of a vertex lives in [0, a_i*b_i); two vertices are adjacent iff
their coordinates differ mod b_i in every position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import SizeCap, SpecParseError
from .graphcore import Graph, adjacency_matrix, rows_from_matrix
from .numtheory import Factorization, factorize

DEFAULT_SIZE_CAP = 100_000


@dataclass(frozen=True)
class ProductSpec:
    """Symbolic direct product of balanced complete multipartite graphs K[a, b]."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a product needs at least one factor")
        for a, b in self.factors:
            if a < 1 or b < 2:
                raise ValueError(f"bad factor K[{a},{b}]: need a >= 1, b >= 2")

    @classmethod
    def complete(cls, ns: Iterable[int]) -> "ProductSpec":
        return cls(tuple((1, n) for n in ns))

    def canonical(self) -> "ProductSpec":
        return ProductSpec(tuple(sorted(self.factors, key=lambda f: (f[1], f[0]))))

    @property
    def t(self) -> int:
        return len(self.factors)

    @property
    def a(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.factors)

    @property
    def b(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.factors)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(a * b for a, b in self.factors)

    @property
    def vertex_count(self) -> int:
        return math.prod(self.sizes)

    @property
    def degree(self) -> int:
        return math.prod(a * (b - 1) for a, b in self.factors)

    @property
    def is_complete_product(self) -> bool:
        return all(a == 1 for a in self.a)

    def index(self, coords: Sequence[int]) -> int:
        idx = 0
        for c, s in zip(coords, self.sizes):
            idx = idx * s + c
        return idx

    def coords(self, index: int) -> tuple[int, ...]:
        out = []
        for s in reversed(self.sizes):
            index, c = divmod(index, s)
            out.append(c)
        return tuple(reversed(out))

    def residue_vector(self, coords: Sequence[int]) -> tuple[int, ...]:
        return tuple(c % b for c, b in zip(coords, self.b))

    def __str__(self) -> str:
        return "Kab:" + "x".join(f"{a},{b}" for a, b in self.factors)


def _mask_from_bool(arr: np.ndarray) -> int:
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def product(spec: ProductSpec, size_cap: int = DEFAULT_SIZE_CAP, name: Optional[str] = None) -> Graph:
    N = spec.vertex_count
    if N > size_cap:
        raise SizeCap(f"{spec} has {N} vertices, cap is {size_cap}")
    sizes = spec.sizes
    idx = np.arange(N, dtype=np.int64)
    coord_cols = []
    rem = idx.copy()
    for s in reversed(sizes):
        coord_cols.append(rem % s)
        rem //= s
    coord_cols.reverse()
    full = (1 << N) - 1
    # away[i][r]: vertices whose coordinate i is not congruent to r mod b_i
    away = []
    for col, b in zip(coord_cols, spec.b):
        res = col % b
        away.append([full & ~_mask_from_bool(res == r) for r in range(b)])
    code = np.zeros(N, dtype=np.int64)
    for col, b in zip(coord_cols, spec.b):
        code = code * b + col % b
    rows_by_code: dict[int, int] = {}
    bs = spec.b
    for c in np.unique(code).tolist():
        row, rem_c = full, c
        for i in reversed(range(spec.t)):
            rem_c, r = divmod(rem_c, bs[i])
            row &= away[i][r]
        rows_by_code[c] = row
    adj = [rows_by_code[c] for c in code.tolist()]
    labels = tuple(zip(*(c.tolist() for c in coord_cols)))
    return Graph(
        N,
        tuple(adj),
        labels=labels,
        name=name or str(spec),
        vertex_transitive=True,
        factors=spec.factors,
        _checked=False,
    )


def complete(n: int, size_cap: int = DEFAULT_SIZE_CAP) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    if n > size_cap:
        raise SizeCap(f"K_{n} exceeds cap {size_cap}")
    full = (1 << n) - 1
    adj = tuple(full & ~(1 << v) for v in range(n))
    return Graph(n, adj, labels=tuple(range(n)), name=f"Kn:{n}", vertex_transitive=True, _checked=False)


def multipartite(a: int, b: int, size_cap: int = DEFAULT_SIZE_CAP) -> Graph:
    """K[a, b] on 0..ab-1 with u ~ v iff u and v differ mod b."""
    g = product(ProductSpec(((a, b),)), size_cap=size_cap, name=f"Kab:{a},{b}")
    return Graph(g.n, g.adj, labels=tuple(range(g.n)), name=g.name, vertex_transitive=True, _checked=False)


def _circulant(n: int, connection: int, name: str) -> Graph:
    full = (1 << n) - 1
    adj = tuple(((connection << x) | (connection >> (n - x))) & full for x in range(n))
    return Graph(n, adj, labels=tuple(range(n)), name=name, vertex_transitive=True, _checked=False)


def unitary_cayley(n: int, size_cap: int = DEFAULT_SIZE_CAP) -> Graph:
    """X_n: vertices Z/n, a ~ b iff gcd(a - b, n) = 1."""
    if n < 1:
        raise ValueError("X_n needs n >= 1")
    if n > size_cap:
        raise SizeCap(f"X_{n} exceeds cap {size_cap}")
    units = 0
    for d in range(1, n):
        if math.gcd(d, n) == 1:
            units |= 1 << d
    return _circulant(n, units, f"X:{n}")


def gcd_graph(n: int, divisors: Iterable[int], size_cap: int = DEFAULT_SIZE_CAP) -> Graph:
    """X_n(D): x ~ y iff gcd(|x - y|, n) lies in D."""
    D = set(divisors)
    if not D:
        raise ValueError("divisor set must be nonempty")
    if n > size_cap:
        raise SizeCap(f"gcd-graph on {n} vertices exceeds cap {size_cap}")
    conn = 0
    for d in range(1, n):
        if math.gcd(d, n) in D:
            conn |= 1 << d
    return _circulant(n, conn, f"GCD:{n}:" + ",".join(map(str, sorted(D))))


def xn_product_spec(n: int, factorization: Optional[Factorization] = None) -> ProductSpec:
    """The spec prod K[p^(e-1), p] isomorphic to X_n, primes ascending."""
    fac = factorization or factorize(n)
    if not fac.pairs:
        raise ValueError("X_1 is not a product of multipartite factors")
    return ProductSpec(tuple((p ** (e - 1), p) for p, e in fac))


def crt_coordinates(n: int, spec: ProductSpec) -> list[tuple[int, ...]]:
    """x -> (x mod p_i^e_i) for every residue x."""
    mods = spec.sizes
    return [tuple(x % m for m in mods) for x in range(n)]


def unitary_cayley_as_product(n: int, size_cap: int = DEFAULT_SIZE_CAP) -> tuple[Graph, list[int]]:
    """Build X_n as prod K[p^(e-1), p].

    Returns (product graph, bijection) where bijection[x] is the product vertex
    index of residue x.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    spec = xn_product_spec(n)
    G = product(spec, size_cap=size_cap)
    x = np.arange(n, dtype=np.int64)
    bij = np.zeros(n, dtype=np.int64)
    for m in spec.sizes:
        bij = bij * m + x % m
    return G, bij.tolist()


def pull_back(G: Graph, bijection: Sequence[int]) -> Graph:
    """Relabel G so vertex x of the result is vertex bijection[x] of G."""
    perm = np.asarray(bijection, dtype=np.int64)
    A = np.take(np.take(adjacency_matrix(G), perm, axis=0), perm, axis=1)
    return Graph(
        G.n,
        rows_from_matrix(A),
        labels=tuple(range(G.n)),
        name=G.name,
        vertex_transitive=G.vertex_transitive,
        _checked=False,
    )


def relabeled_equal(G: Graph, H: Graph, bijection: Sequence[int]) -> bool:
    """True iff u ~ v in H exactly when bijection[u] ~ bijection[v] in G."""
    if G.n != H.n or len(bijection) != H.n:
        return False
    perm = np.asarray(bijection, dtype=np.int64)
    if not np.array_equal(np.sort(perm), np.arange(H.n)):
        return False
    A = np.take(np.take(adjacency_matrix(G), perm, axis=0), perm, axis=1)
    return bool(np.array_equal(A, adjacency_matrix(H)))


# -- graph-spec mini-language ---------------------------------------------------


def _ints(text: str, what: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",")]
    except ValueError:
        raise SpecParseError(f"bad integer list in {what}: {text!r}") from None
    return vals


def parse_product_spec(text: str) -> ProductSpec:
    """Parse 'Kn:3x3x3' or 'Kab:2,2x1,3' into a ProductSpec (order kept)."""
    kind, _, args = text.partition(":")
    if not args:
        raise SpecParseError(f"missing arguments in {text!r}")
    parts = args.split("x")
    try:
        if kind == "Kn":
            return ProductSpec.complete(int(p) for p in parts)
        if kind == "Kab":
            factors = []
            for p in parts:
                ab = _ints(p, text)
                if len(ab) != 2:
                    raise SpecParseError(f"factor {p!r} must be 'a,b'")
                factors.append((ab[0], ab[1]))
            return ProductSpec(tuple(factors))
    except SpecParseError:
        raise
    except ValueError as e:
        raise SpecParseError(f"bad product spec {text!r}: {e}") from None
    raise SpecParseError(f"{text!r} is not a product spec (use Kn: or Kab:)")


def parse_graph_spec(text: str, size_cap: int = DEFAULT_SIZE_CAP) -> Graph:
    """Build a graph from 'Kn:3x3x3', 'Kab:2,2x1,3', 'X:105' or 'GCD:12:1,2'."""
    kind, _, args = text.strip().partition(":")
    if kind in ("Kn", "Kab"):
        spec = parse_product_spec(text.strip())
        if kind == "Kn" and any(b < 1 for b in spec.b):
            raise SpecParseError("complete factors need n >= 1")
        return product(spec, size_cap=size_cap, name=text.strip())
    if kind == "X":
        n = _ints(args, text)
        if len(n) != 1 or n[0] < 1:
            raise SpecParseError(f"X expects one positive integer, got {args!r}")
        return unitary_cayley(n[0], size_cap=size_cap)
    if kind == "GCD":
        n_text, _, d_text = args.partition(":")
        n = _ints(n_text, text)
        if len(n) != 1 or n[0] < 1 or not d_text:
            raise SpecParseError(f"GCD expects 'GCD:n:d1,d2,...', got {text!r}")
        return gcd_graph(n[0], _ints(d_text, text), size_cap=size_cap)
    raise SpecParseError(f"unknown graph kind {kind!r} in {text!r}")


def product_vertices(spec: ProductSpec) -> Iterable[tuple[int, ...]]:
    return iproduct(*(range(s) for s in spec.sizes))
