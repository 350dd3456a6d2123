"""Integer arithmetic: factorization, totients, CRT and the Jacobsthal function.

Everything here works on Python ints, so values are unbounded. The Jacobsthal
sieve is the only numpy-backed routine; it walks the residues of rad(n) in
fixed-size chunks so memory stays bounded for radicals near 10^9.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import FeasibilityExceeded, NonCoprimeModuli

DEFAULT_SIEVE_CAP = 10**9
SIEVE_CHUNK = 1 << 22

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    c = max(n + 1, 2)
    while not is_prime(c):
        c += 1
    return c


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)  # seeded by n: factoring stays deterministic
    while True:
        c = rng.randrange(1, n)
        f = lambda x: (x * x + c) % n
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def _factor_large(n: int, out: dict) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_rho(n)
    _factor_large(d, out)
    _factor_large(n // d, out)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ascending (prime, exponent) pairs."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        prev = 1
        for p, e in self.pairs:
            if p <= prev or e < 1 or not is_prime(p):
                raise ValueError(f"invalid factor pair ({p}, {e})")
            prev = p

    @classmethod
    def from_primes(cls, primes: Iterable[int]) -> "Factorization":
        """Build a squarefree factorization from known distinct primes, skipping factoring."""
        return cls(tuple((p, 1) for p in sorted(primes)))

    @property
    def value(self) -> int:
        return math.prod(p**e for p, e in self.pairs)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.pairs]

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def factorize(n: int) -> Factorization:
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # 2-3-5 wheel up to a modest bound, then Pollard rho on the cofactor
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    f, i = 7, 0
    while f * f <= n and f < 1 << 16:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += wheel[i]
        i = (i + 1) % 8
    if n > 1:
        if f * f > n:
            out[n] = out.get(n, 0) + 1
        else:
            _factor_large(n, out)
    return Factorization(tuple(sorted(out.items())))


@dataclass(frozen=True)
class ArithProfile:
    n: int
    phi: int
    radical: int
    omega: int
    smallest_prime: Optional[int]
    largest_prime: Optional[int]
    factorization: Factorization = field(repr=False, default=Factorization())


def profile(n: int, factorization: Optional[Factorization] = None) -> ArithProfile:
    fac = factorization if factorization is not None else factorize(n)
    if fac.value != n:
        raise ValueError("factorization does not match n")
    phi = math.prod(p ** (e - 1) * (p - 1) for p, e in fac)
    primes = fac.primes
    return ArithProfile(
        n=n,
        phi=phi,
        radical=math.prod(primes),
        omega=len(primes),
        smallest_prime=primes[0] if primes else None,
        largest_prime=primes[-1] if primes else None,
        factorization=fac,
    )


def phi(n: int) -> int:
    return profile(n).phi


def radical(n: int) -> int:
    return math.prod(factorize(n).primes)


def crt(residues: Sequence[tuple[int, int]]) -> int:
    """Unique x in [0, prod m_i) with x = r_i (mod m_i); moduli must be pairwise coprime."""
    mods = [m for _, m in residues]
    for i in range(len(mods)):
        if mods[i] < 1:
            raise ValueError("moduli must be positive")
        for j in range(i + 1, len(mods)):
            if math.gcd(mods[i], mods[j]) != 1:
                raise NonCoprimeModuli(f"gcd({mods[i]}, {mods[j]}) > 1")
    x, M = 0, 1
    for r, m in residues:
        # lift x (mod M) to x' (mod M*m) with x' = r (mod m)
        t = ((r - x) * pow(M, -1, m)) % m if m > 1 else 0
        x += M * t
        M *= m
    return x % M


@dataclass(frozen=True)
class CoprimeRun:
    """A block [start, start+length-1] of integers, each sharing a factor with n."""

    start: int
    length: int

    def members(self) -> range:
        return range(self.start, self.start + self.length)

    def verify(self, n: int) -> Optional[int]:
        """Return the first member coprime to n, or None if the run is valid."""
        for x in self.members():
            if math.gcd(x, n) == 1:
                return x
        return None


def _radical_primes(n: int, factorization: Optional[Factorization]) -> list[int]:
    fac = factorization if factorization is not None else factorize(n)
    return fac.primes


def max_noncoprime_run(
    n: int,
    cap: int = DEFAULT_SIEVE_CAP,
    factorization: Optional[Factorization] = None,
    chunk: int = SIEVE_CHUNK,
) -> CoprimeRun:
    """Longest circular run of residues mod rad(n) that are not coprime to n.

    Ties go to the smallest start residue. For n = 1 the run is empty.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    primes = _radical_primes(n, factorization)
    R = math.prod(primes)
    if R > cap:
        raise FeasibilityExceeded(f"rad(n) = {R} exceeds sieve cap {cap}")
    if R == 1:
        return CoprimeRun(0, 0)

    first = last = None
    best_len, best_start = -1, 0
    for lo in range(0, R, chunk):
        hi = min(lo + chunk, R)
        marked = np.zeros(hi - lo, dtype=bool)
        for p in primes:
            marked[(-lo) % p :: p] = True
        coprime = np.flatnonzero(~marked)
        if coprime.size == 0:
            continue
        coprime = coprime.astype(np.int64) + lo
        if first is None:
            first = int(coprime[0])
        else:
            gap = int(coprime[0]) - last - 1
            if gap > best_len:
                best_len, best_start = gap, last + 1
        if coprime.size > 1:
            gaps = np.diff(coprime) - 1
            j = int(np.argmax(gaps))  # argmax returns the first maximum
            if int(gaps[j]) > best_len:
                best_len, best_start = int(gaps[j]), int(coprime[j]) + 1
        last = int(coprime[-1])

    # 1 is always coprime, so first is set; close the circle
    wrap = first + R - last - 1
    wrap_start = (last + 1) % R
    if wrap > best_len or (wrap == best_len and wrap_start < best_start):
        best_len, best_start = wrap, wrap_start
    return CoprimeRun(best_start, best_len)


def jacobsthal(
    n: int, cap: int = DEFAULT_SIEVE_CAP, factorization: Optional[Factorization] = None
) -> int:
    """g(n): least m such that any m consecutive integers contain one coprime to n."""
    return max_noncoprime_run(n, cap=cap, factorization=factorization).length + 1


def jacobsthal_bruteforce(n: int) -> int:
    """Direct definition over residues mod n; for testing at small n only."""
    if n == 1:
        return 1
    ok = [math.gcd(x, n) == 1 for x in range(n)]
    best = run = 0
    for x in range(2 * n):
        if ok[x % n]:
            run = 0
        else:
            run += 1
            best = max(best, run)
    return min(best, n) + 1
