"""Sparse-support series passes over dense coefficient arrays.

The Euler products handled here all have square-root-size support:

* ``(q^l; q^l)_inf``       -- generalized pentagonal exponents, coefficients +-1
* ``(q^l;q^l)^2/(q^2l;q^2l)`` -- square exponents ``l*k^2``, coefficients ``2*(-1)^k``

Multiplying or dividing a dense coefficient vector by such a series costs
``O(N * sqrt(N/l))`` instead of the dense ``O(N^2)``.  Two backends share the
same term representation: numpy unsigned arrays for power-of-two moduli
(wrapping arithmetic is exact there) and plain Python ints for exact or
general modular coefficients.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

_DIV_BLOCK = 1 << 16


# ---------------------------------------------------------------------------
# Sparse term supports
# ---------------------------------------------------------------------------

def pentagonal_terms(scale: int, n: int) -> list[tuple[int, int]]:
    """Terms of (q^scale; q^scale)_inf up to exponent n: [(0,1), (g,+-1), ...]."""
    terms = [(0, 1)]
    k = 1
    while True:
        g1 = scale * k * (3 * k - 1) // 2
        if g1 > n:
            break
        s = -1 if k % 2 else 1
        terms.append((g1, s))
        g2 = scale * k * (3 * k + 1) // 2
        if g2 <= n:
            terms.append((g2, s))
        k += 1
    terms.sort()
    return terms


def square_terms(scale: int, n: int) -> list[tuple[int, int]]:
    """Terms of f_scale^2 / f_{2*scale} up to exponent n.

    That quotient equals 1 + 2*sum_k (-1)^k q^(scale*k^2), supported on squares.
    """
    terms = [(0, 1)]
    k = 1
    while scale * k * k <= n:
        terms.append((scale * k * k, -2 if k % 2 else 2))
        k += 1
    return terms


def terms_as_arrays(terms: list[tuple[int, int]]) -> tuple[np.ndarray, np.ndarray]:
    exps = np.array([g for g, _ in terms], dtype=np.int64)
    coefs = np.array([c for _, c in terms], dtype=np.int64)
    return exps, coefs


def dtype_for_bits(e: int) -> np.dtype:
    """Smallest unsigned dtype whose width covers 2^e arithmetic."""
    if e <= 8:
        return np.dtype(np.uint8)
    if e <= 16:
        return np.dtype(np.uint16)
    if e <= 32:
        return np.dtype(np.uint32)
    if e <= 64:
        return np.dtype(np.uint64)
    raise ValueError(f"power-of-two modulus 2^{e} exceeds 64-bit words")


# ---------------------------------------------------------------------------
# numpy backend (unsigned wrap-around == arithmetic mod 2^width)
# ---------------------------------------------------------------------------

def _apply_term_slice(dst: np.ndarray, src: np.ndarray, coef: int) -> None:
    """dst += coef * src elementwise, wrapping in dst's dtype."""
    if coef == 1:
        np.add(dst, src, out=dst)
    elif coef == -1:
        np.subtract(dst, src, out=dst)
    elif coef == 2:
        np.add(dst, src, out=dst)
        np.add(dst, src, out=dst)
    elif coef == -2:
        np.subtract(dst, src, out=dst)
        np.subtract(dst, src, out=dst)
    else:
        w = dst.dtype.type(coef % (1 << (dst.dtype.itemsize * 8)))
        np.add(dst, src * w, out=dst)


def sparse_mul_array(src: np.ndarray, terms: list[tuple[int, int]]) -> np.ndarray:
    """Return src * f where f has the given sparse terms (term (0, c0) first)."""
    n1 = src.shape[0]
    g0, c0 = terms[0]
    assert g0 == 0
    out = src.copy()
    if c0 != 1:
        _apply_term_slice(out, src, c0 - 1)
    for g, c in terms[1:]:
        if g >= n1:
            break
        _apply_term_slice(out[g:], src[: n1 - g], c)
    return out


if _HAVE_NUMBA:

    @njit(cache=True)
    def _div_near_block(out, exps, coefs_u64, lo, hi):  # pragma: no cover - jitted
        for i in range(lo, hi):
            acc = np.uint64(out[i])
            off = i - lo
            for t in range(1, exps.shape[0]):
                g = exps[t]
                if g > off:
                    break
                acc = acc - coefs_u64[t] * np.uint64(out[i - g])
            out[i] = acc

else:

    def _div_near_block(out, exps, coefs_u64, lo, hi):
        mask = (1 << (out.dtype.itemsize * 8)) - 1
        for i in range(lo, hi):
            acc = int(out[i])
            off = i - lo
            for t in range(1, exps.shape[0]):
                g = int(exps[t])
                if g > off:
                    break
                acc -= int(coefs_u64[t]) * int(out[i - g])
            out[i] = acc & mask


def sparse_div_array(src: np.ndarray, terms: list[tuple[int, int]]) -> np.ndarray:
    """Return b with b * f = src, f given by sparse terms with leading coef 1.

    Blocked forward substitution: contributions from finished coefficients are
    applied with vector ops, the short in-block recurrence runs in a jitted
    scalar loop.
    """
    g0, c0 = terms[0]
    if g0 != 0 or c0 != 1:
        raise ValueError("sparse divisor must have constant term 1")
    n1 = src.shape[0]
    out = src.copy()
    exps, coefs = terms_as_arrays(terms)
    coefs_u64 = coefs.astype(np.uint64)
    for lo in range(0, n1, _DIV_BLOCK):
        hi = min(n1, lo + _DIV_BLOCK)
        for g, c in terms[1:]:
            if g >= hi:
                break
            a = lo if lo >= g else g
            b = hi if hi <= lo + g else lo + g
            if a < b:
                _apply_term_slice(out[a:b], out[a - g : b - g], -c)
        _div_near_block(out, exps, coefs_u64, lo, hi)
    return out


# ---------------------------------------------------------------------------
# list backend (exact integers, or reduced mod m when mod is given)
# ---------------------------------------------------------------------------

def sparse_mul_list(src: list[int], terms: list[tuple[int, int]], mod: int | None) -> list[int]:
    n1 = len(src)
    g0, c0 = terms[0]
    assert g0 == 0
    out = [c0 * x for x in src]
    for g, c in terms[1:]:
        if g >= n1:
            break
        for i in range(g, n1):
            out[i] += c * src[i - g]
    if mod is not None:
        out = [x % mod for x in out]
    return out


def sparse_div_list(src: list[int], terms: list[tuple[int, int]], mod: int | None) -> list[int]:
    g0, c0 = terms[0]
    if g0 != 0 or c0 != 1:
        raise ValueError("sparse divisor must have constant term 1")
    n1 = len(src)
    out = [0] * n1
    for i in range(n1):
        acc = src[i]
        for g, c in terms[1:]:
            if g > i:
                break
            acc -= c * out[i - g]
        out[i] = acc % mod if mod is not None else acc
    return out
