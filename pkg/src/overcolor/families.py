"""Named coefficient families and their independent combinatorial oracles.

The central family counts partitions where every odd part carries one of s
colors and the first occurrence of each part may be overlined; its
generating function is f_2^(3s-2) / (f_1^(2s) f_4^(s-1)).  Relatives: plain
overpartitions, two-colored-odd partitions (kept as a genuinely distinct
expansion path so their equality is a real check), colored odd partitions
without overlines, pure Euler powers, and a handful of weighted products
used by the coefficient recurrences.

Two oracle layers are deliberately independent of the eta engine: a
dynamic-programming count over (part value, color) letters, and a brute
multiset enumerator for tiny n that validates the DP's factor shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import _kernels
from .eta import SeriesCache, default_cache, eta_power, eta_quotient
from .series import EXACT, Ring, Series

ENUMERATION_BOUND = 50


@dataclass(frozen=True)
class Family:
    """A named q-series family; s/r parametrize the tags that need them."""

    kind: str
    s: int = 0
    r: int = 0

    def __post_init__(self):
        if self.kind in ("abar", "a") and self.s < 1:
            raise ValueError(f"family {self.kind} needs s >= 1")
        if self.kind == "power" and self.r == 0:
            raise ValueError("pure power needs a nonzero exponent")
        if self.kind not in _FAMILY_VECTORS and self.kind not in ("abar", "a", "power"):
            raise ValueError(f"unknown family kind {self.kind!r}")

    @property
    def eta_vector(self) -> dict[int, int]:
        if self.kind == "abar":
            s = self.s
            vec = {2: 3 * s - 2, 1: -2 * s}
            if s > 1:
                vec[4] = -(s - 1)
            return vec
        if self.kind == "a":
            s = self.s
            vec = {1: -s}
            if s > 1:
                vec[2] = s - 1
            return vec
        if self.kind == "power":
            return {1: self.r}
        return dict(_FAMILY_VECTORS[self.kind])

    @property
    def q_offset(self) -> int:
        return 1 if self.kind == "b4" else 0

    def label(self) -> str:
        if self.kind in ("abar", "a"):
            return f"{self.kind}[{self.s}]"
        if self.kind == "power":
            return f"f1^{self.r}"
        return self.kind


_FAMILY_VECTORS = {
    "pbar": {2: 1, 1: -2},
    "p2": {2: 1, 1: -2},  # Euler-reduced form; the series path expands directly
    "c": {1: 3, 2: 6},
    "c1": {1: 4, 2: 4},
    "c2": {1: 6},
    "c3": {1: 18},
    "c4": {1: 1, 2: 10},
    "b4": {4: 6},
}


def overcolored(s: int) -> Family:
    return Family("abar", s=s)


def colored_odd(s: int) -> Family:
    return Family("a", s=s)


def pure_power(r: int) -> Family:
    return Family("power", r=r)


def family_series(
    fam: Family,
    n: int,
    ring: Ring = EXACT,
    cache: SeriesCache | None = None,
) -> Series:
    """q-expansion of a family to truncation n.

    The two-colored-odd family expands its defining product directly
    (odd-step Pochhammer factors, then a reciprocal) rather than through
    the Euler-reduced eta vector, so its equality with overpartitions is a
    genuine identity check.  The b4 family returns q * f_4^6 with the
    offset applied: coefficient index equals the q-exponent, so result(1)=1.
    """
    if cache is None:
        cache = default_cache()
    if fam.kind == "p2":
        return _two_color_odd_direct(n, ring)
    if fam.kind == "b4":
        return eta_power(4, 6, n, ring, cache).shifted(1)
    return eta_quotient(fam.eta_vector, n, ring, cache)


def _two_color_odd_direct(n: int, ring: Ring) -> Series:
    """1 / ((q; q^2)^2 (q^2; q^2)) by direct factor-by-factor expansion."""
    denom = [0] * (n + 1)
    denom[0] = 1

    def times_one_minus(c: list[int], j: int) -> None:
        for i in range(n, j - 1, -1):
            c[i] -= c[i - j]

    for j in range(1, n + 1, 2):
        times_one_minus(denom, j)
        times_one_minus(denom, j)
    for j in range(2, n + 1, 2):
        times_one_minus(denom, j)
    return Series(ring, denom).invert()


def overcolored_batch(
    s_values,
    n: int,
    ring: Ring,
    cache: SeriesCache | None = None,
) -> dict[int, Series]:
    """Series of the overcolored family for several s at one truncation.

    Exact rewrite used for power-of-two rings: with phi = f_1^2/f_2 (square
    support) the family equals phi(q^2)^(s-1) / phi(q)^s, so stepping s by
    one costs a single sparse multiply plus a single sparse divide.  This
    is what makes 10^7-deep theorem sweeps affordable; the identity itself
    is cross-checked against the pentagonal route in the test suite.
    """
    wanted = sorted(set(s_values))
    if not wanted or wanted[0] < 1:
        raise ValueError("s values must be >= 1")
    out: dict[int, Series] = {}
    if not ring.is_pow2:
        if cache is None:
            cache = default_cache()
        for s in wanted:
            out[s] = family_series(overcolored(s), n, ring, cache)
        return out
    phi1 = _kernels.square_terms(1, n)
    phi2 = _kernels.square_terms(2, n)
    acc = _kernels.sparse_div_array(
        Series.one(ring, n).raw().copy(), phi1
    )
    s = 1
    while True:
        if s in wanted:
            out[s] = Series(ring, acc.copy(), _raw=True)
        if s >= wanted[-1]:
            break
        acc = _kernels.sparse_div_array(_kernels.sparse_mul_array(acc, phi2), phi1)
        s += 1
    return out


def overcolored_batch_depths(
    depths: dict[int, int],
    ring: Ring,
    cache: SeriesCache | None = None,
) -> dict[int, Series]:
    """Like overcolored_batch, but with a per-s truncation requirement.

    The chain ascends s and truncates the accumulator to the largest depth
    still needed by any later s, so one deep series does not force deep
    passes for the whole ladder.
    """
    if not depths:
        return {}
    if min(depths) < 1:
        raise ValueError("s values must be >= 1")
    if not ring.is_pow2:
        if cache is None:
            cache = default_cache()
        return {
            s: family_series(overcolored(s), n, ring, cache)
            for s, n in depths.items()
        }
    s_max = max(depths)
    need_after: dict[int, int] = {}
    running = 0
    for s in range(s_max, 0, -1):
        need_after[s] = running
        if s in depths:
            running = max(running, depths[s])
    phi1 = _kernels.square_terms(1, running)
    acc = _kernels.sparse_div_array(Series.one(ring, running).raw().copy(), phi1)
    out: dict[int, Series] = {}
    for s in range(1, s_max + 1):
        if s in depths:
            out[s] = Series(ring, acc[: depths[s] + 1].copy(), _raw=True)
        if s == s_max:
            break
        need = need_after[s]
        if need < acc.shape[0] - 1:
            acc = acc[: need + 1].copy()
            phi1 = _kernels.square_terms(1, need)
        phi2 = _kernels.square_terms(2, acc.shape[0] - 1)
        acc = _kernels.sparse_div_array(_kernels.sparse_mul_array(acc, phi2), phi1)
    return out


# ---------------------------------------------------------------------------
# Combinatorial oracles (independent of the series engine)
# ---------------------------------------------------------------------------

def overcolored_counts(s: int, n: int) -> list[int]:
    """Counts for 0..n by DP over (part value, color) letters.

    Each odd value contributes s letters, each even value one letter; a
    letter used with multiplicity >= 1 may overline its first occurrence,
    which is the factor (1 + q^v) / (1 - q^v).
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    if n > ENUMERATION_BOUND:
        raise ValueError(f"enumeration bound {ENUMERATION_BOUND} exceeded")
    ways = [1] + [0] * n
    for v in range(1, n + 1):
        for _ in range(s if v % 2 else 1):
            u = ways[:]
            for i in range(v, n + 1):
                u[i] += u[i - v]
            w = u[:]
            for i in range(v, n + 1):
                w[i] += u[i - v]
            ways = w
    return ways


def enumerate_overcolored(s: int, n: int) -> int:
    """Exact count for one n; DP form of the letter factorization."""
    return overcolored_counts(s, n)[n]


def colored_odd_counts(s: int, n: int) -> list[int]:
    """Counts for the no-overline variant (odd parts in s colors)."""
    if s < 1:
        raise ValueError("s must be >= 1")
    if n > ENUMERATION_BOUND:
        raise ValueError(f"enumeration bound {ENUMERATION_BOUND} exceeded")
    ways = [1] + [0] * n
    for v in range(1, n + 1):
        for _ in range(s if v % 2 else 1):
            for i in range(v, n + 1):
                ways[i] += ways[i - v]
    return ways


def brute_overcolored(s: int, n: int) -> int:
    """Literal multiset enumeration for tiny n; validates the DP factors.

    Walks (value, color) classes in a fixed order; a used class picks a
    multiplicity and independently whether its first occurrence is
    overlined (2 choices).
    """
    classes = [(v, c) for v in range(1, n + 1) for c in range(s if v % 2 else 1)]

    @lru_cache(maxsize=None)
    def rec(i: int, rem: int) -> int:
        if rem == 0:
            return 1
        if i == len(classes):
            return 0
        v = classes[i][0]
        total = rec(i + 1, rem)
        mu = 1
        while mu * v <= rem:
            total += 2 * rec(i + 1, rem - mu * v)
            mu += 1
        return total

    result = rec(0, n)
    rec.cache_clear()
    return result
