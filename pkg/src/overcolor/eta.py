"""Euler-product powers f_l^m = (q^l; q^l)_inf^m and eta-quotient expansions.

Every power is built by repeated sparse passes with the pentagonal-number
support of (q^l; q^l)_inf, so f_l^m to truncation N costs O(|m| N sqrt(N/l))
instead of dense O(N^2) per factor.  A shared cache keyed by
(scale, exponent, ring) reuses partial ladders: f_l^5 extends a cached
f_l^3 by two more passes, and any cached truncation >= N serves N by
slicing.
"""

from __future__ import annotations

import os
import threading
from typing import Mapping

from . import _kernels
from .report import VerificationReport
from .series import EXACT, Ring, Series, eq_mod, mod_int, mod_pow2


class SeriesCache:
    """Thread-safe memo for eta-power ladders.

    Entries are idempotent (every writer computes identical data), so
    last-writer-wins is safe.  The entry cap is a crude guard against
    unbounded growth during long scans.
    """

    def __init__(self, max_entries: int | None = None):
        if max_entries is None:
            max_entries = int(os.environ.get("OVERCOLOR_CACHE_LIMIT", "192"))
        self.max_entries = max_entries
        self._lock = threading.Lock()
        self._data: dict = {}

    def get(self, key, n: int) -> Series | None:
        with self._lock:
            hit = self._data.get(key)
        if hit is None:
            return None
        series, stamp = hit
        if series.n < n:
            return None
        return series if series.n == n else series.truncated(n)

    def best_rung(self, scale: int, ring: Ring, m: int, n: int):
        """Deepest cached f_scale^j with 0 <= j <= m (same sign) and n' >= n."""
        best = None
        with self._lock:
            items = list(self._data.items())
        for key, (series, _) in items:
            if len(key) != 3 or key[0] != scale or key[2] != ring:
                continue
            j = key[1]
            if j == 0 or (j > 0) != (m > 0) or abs(j) > abs(m) or series.n < n:
                continue
            if best is None or abs(j) > abs(best[0]):
                best = (j, series if series.n == n else series.truncated(n))
        return best

    def put(self, key, series: Series) -> None:
        with self._lock:
            if key in self._data and self._data[key][0].n >= series.n:
                return
            if len(self._data) >= self.max_entries:
                # Drop the oldest entries; correctness never depends on hits.
                for old in sorted(self._data, key=lambda k: self._data[k][1])[
                    : max(1, self.max_entries // 4)
                ]:
                    del self._data[old]
            self._data[key] = (series, self._stamp())

    _counter = 0

    def _stamp(self) -> int:
        SeriesCache._counter += 1
        return SeriesCache._counter

    def clear(self) -> None:
        with self._lock:
            self._data.clear()


_default_cache = SeriesCache()


def default_cache() -> SeriesCache:
    return _default_cache


def _mul_pass(series: Series, terms) -> Series:
    ring = series.ring
    if ring.is_pow2:
        return Series(ring, _kernels.sparse_mul_array(series.raw(), terms), _raw=True)
    mod = None if ring.is_exact else ring.modulus
    return Series(ring, tuple(_kernels.sparse_mul_list(list(series.raw()), terms, mod)), _raw=True)


def _div_pass(series: Series, terms) -> Series:
    ring = series.ring
    if ring.is_pow2:
        return Series(ring, _kernels.sparse_div_array(series.raw(), terms), _raw=True)
    mod = None if ring.is_exact else ring.modulus
    return Series(ring, tuple(_kernels.sparse_div_list(list(series.raw()), terms, mod)), _raw=True)


def apply_euler_factor(series: Series, scale: int, exponent: int) -> Series:
    """Multiply a series by f_scale^exponent via |exponent| sparse passes."""
    if exponent == 0:
        return series
    terms = _kernels.pentagonal_terms(scale, series.n)
    out = series
    for _ in range(abs(exponent)):
        out = _mul_pass(out, terms) if exponent > 0 else _div_pass(out, terms)
    return out


def eta_power(
    scale: int,
    m: int,
    n: int,
    ring: Ring = EXACT,
    cache: SeriesCache | None = None,
) -> Series:
    """Expansion of (q^scale; q^scale)_inf^m to truncation n."""
    if scale < 1:
        raise ValueError("scale must be >= 1")
    if n < 0:
        raise ValueError("truncation must be >= 0")
    if cache is None:
        cache = _default_cache
    if m == 0:
        return Series.one(ring, n)
    hit = cache.get((scale, m, ring), n)
    if hit is not None:
        return hit
    start = 0
    acc = Series.one(ring, n)
    rung = cache.best_rung(scale, ring, m, n)
    if rung is not None:
        start, acc = rung
    step = 1 if m > 0 else -1
    terms = _kernels.pentagonal_terms(scale, n)
    j = start
    while j != m:
        acc = _mul_pass(acc, terms) if step > 0 else _div_pass(acc, terms)
        j += step
        cache.put((scale, j, ring), acc)
    return acc


def eta_quotient(
    exponents: Mapping[int, int],
    n: int,
    ring: Ring = EXACT,
    cache: SeriesCache | None = None,
) -> Series:
    """Product over scales of f_scale^r_scale, built by incremental passes.

    Exponent maps may use arbitrary scales (not just divisors of a level);
    the q^(sum scale*r/24) eta prefactor is NOT included here.
    """
    if cache is None:
        cache = _default_cache
    items = tuple(sorted((s, m) for s, m in exponents.items() if m != 0))
    for scale, _ in items:
        if scale < 1:
            raise ValueError("scales must be positive integers")
    if not items:
        return Series.one(ring, n)
    if len(items) == 1:
        return eta_power(items[0][0], items[0][1], n, ring, cache)
    key = ("quot", items, ring)
    hit = cache.get(key, n)
    if hit is not None:
        return hit
    # Positive exponents first keeps intermediate coefficient growth (for the
    # exact ring) closer to the final product's size.
    acc = Series.one(ring, n)
    for scale, m in sorted(items, key=lambda sm: (sm[1] < 0, sm[0])):
        acc = apply_euler_factor(acc, scale, m)
    cache.put(key, acc)
    return acc


def verify_binomial_reduction(
    p: int,
    k: int,
    m: int,
    n: int,
    ring: Ring | None = None,
) -> VerificationReport:
    """Check f_m^(p^k) == f_(m*p)^(p^(k-1)) coefficientwise mod p^k.

    The congruence follows from the binomial theorem; here it is verified
    numerically to truncation n.
    """
    if k < 1 or m < 1:
        raise ValueError("need k >= 1 and m >= 1")
    modulus = p**k
    if ring is None:
        ring = mod_pow2(max(k, 1)) if p == 2 else mod_int(modulus)
    report = VerificationReport(
        claim="binomial-reduction",
        grid={"p": p, "k": k, "m": m},
        truncation=n,
        ring=ring.label(),
    )
    lhs = eta_power(m, p**k, n, ring)
    rhs = eta_power(m * p, p ** (k - 1), n, ring)
    res = eq_mod(lhs, rhs, modulus)
    report.checked = res.checked
    if not res.equal:
        report.add_failure(
            {"p": p, "k": k, "m": m},
            res.first_difference,
            f"{res.lhs_residue} != {res.rhs_residue} (mod {modulus})",
        )
    return report
