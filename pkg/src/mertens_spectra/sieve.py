"""Mobius sieve, Mertens prefix sums, and divisor-quotient value sets.

The Mertens function M(n) = sum_{m <= n} mu(m) is the ground truth that the
matrix machinery in this package must reproduce through linear algebra.  This
module computes it the boring way, by sieving, so the two routes stay
independent of each other.

Conventions: mu(1) = 1 and M(0) = 0 (empty sum).  Tables are 0-indexed with
index 0 unused and zero-filled, so table.mertens[j] is M(j) for every j up to
the limit, including j = 0.

The divisor-quotient value set of n is
    S = { floor(n/k) : 1 <= k <= n },
which has the familiar two-sided description: every value is either a small
k <= sqrt(n) or a quotient floor(n/j) with j <= sqrt(n).  For n = r*r a
perfect square the two sides overlap exactly at r and |S| = 2r - 1.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from math import isqrt

import numpy as np

# Ceiling on sieve table size; ~100 MB of int8 + int64 at the default.
DEFAULT_SIEVE_CAP = 10**8


class CapacityError(Exception):
    """Requested size exceeds the configured sieve or dimension budget."""


@dataclass(frozen=True)
class MertensTable:
    """Mobius values and their prefix sums on 1..limit.

    mu is int8 (values in {-1, 0, 1}), mertens is int64; both have length
    limit + 1 with index 0 zero-filled so mertens[0] = M(0) = 0.
    """

    limit: int
    mu: np.ndarray
    mertens: np.ndarray


def build_mertens_table(limit: int, cap: int = DEFAULT_SIEVE_CAP) -> MertensTable:
    """Sieve mu(1..limit) and its prefix sums in one pass.

    Linear-space sieve: every multiple of a prime p <= sqrt(limit) gets a
    sign flip, multiples of p*p are zeroed, and a running product of the
    sieved primes detects numbers with one leftover prime factor above
    sqrt(limit), which need one extra flip.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if limit > cap:
        raise CapacityError(f"sieve limit {limit} exceeds cap {cap}")

    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    # Product of the small primes dividing each index, with multiplicity.
    # Tracked so the final mask can tell "all prime factors <= sqrt(limit)"
    # apart from "one prime factor above sqrt(limit)".
    prime_part = np.ones(limit + 1, dtype=np.int64)
    root = isqrt(limit)
    composite = np.zeros(root + 1, dtype=bool)
    for p in range(2, root + 1):
        if composite[p]:
            continue
        composite[p * p :: p] = True
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
        q = p
        while q <= limit:
            prime_part[q::q] *= p
            q *= p
    # Indices whose small-prime part falls short of the index itself carry
    # exactly one prime factor > sqrt(limit): flip once more.  Where mu is
    # already 0 the flip is harmless.
    leftover = prime_part != np.arange(limit + 1, dtype=np.int64)
    mu[leftover] *= -1
    mu[0] = 0
    mu[1] = 1

    mertens = np.cumsum(mu, dtype=np.int64)
    mertens[0] = 0
    return MertensTable(limit=limit, mu=mu, mertens=mertens)


_cache_lock = threading.Lock()
_cached_table: MertensTable | None = None


def mertens_at(n: int, table: MertensTable | None = None,
               cap: int = DEFAULT_SIEVE_CAP) -> int:
    """M(n) for n >= 0, growing a shared module-level table as needed.

    Passing an explicit table bypasses the shared cache when it is large
    enough; otherwise the cache is (re)built geometrically so repeated
    ascending queries cost amortized O(limit log log limit).
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return 0
    if table is not None and n <= table.limit:
        return int(table.mertens[n])
    global _cached_table
    with _cache_lock:
        if _cached_table is None or _cached_table.limit < n:
            previous = 0 if _cached_table is None else _cached_table.limit
            # Grow geometrically but never past the cap unless n itself
            # demands it; in that case build_mertens_table raises.
            target = max(n, min(max(n, 1024, 2 * previous), cap))
            _cached_table = build_mertens_table(target, cap=cap)
        local = _cached_table
    return int(local.mertens[n])


@dataclass(frozen=True)
class DivisorValueSet:
    """The distinct values of floor(n/k), split into its two classical halves.

    values   ascending int64 array of the full set S
    s_minus  1..isqrt(n), the "small k" half
    s_plus   sorted {floor(n/j) : j <= isqrt(n)}, the "large quotient" half
    """

    n: int
    root: int
    values: np.ndarray
    s_minus: np.ndarray
    s_plus: np.ndarray

    @property
    def size(self) -> int:
        return int(self.values.shape[0])


def divisor_value_set(n: int) -> DivisorValueSet:
    """Enumerate S = {floor(n/k)} in O(sqrt(n)) time."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    root = isqrt(n)
    small = np.arange(1, root + 1, dtype=np.int64)
    large = n // small  # floor(n/j) for j = 1..root, descending
    s_plus = large[::-1].copy()
    # The halves meet exactly when floor(n/root) == root; drop the duplicate.
    if large[-1] == root:
        values = np.concatenate([small, s_plus[1:]])
    else:
        values = np.concatenate([small, s_plus])
    return DivisorValueSet(n=n, root=root, values=values,
                           s_minus=small, s_plus=s_plus)
