"""Exact truncated formal power series over selectable coefficient rings.

A series holds coefficients a(0..N) of sum a(n) q^n.  Three coefficient
rings are supported: arbitrary-precision integers, integers mod 2^e (stored
in unsigned numpy words, where wrap-around arithmetic is exact), and
integers mod an arbitrary M >= 2.  Series are immutable; every operation
returns a fresh series, and mixed-truncation operands resolve to the
minimum truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class Ring:
    """Coefficient ring descriptor: exact integers, mod 2^e, or mod M."""

    kind: str  # "exact" | "pow2" | "mod"
    e: int = 0
    modulus: int = 0

    def __post_init__(self):
        if self.kind == "pow2":
            if self.e < 1:
                raise ValueError("mod-2^e ring needs e >= 1")
            object.__setattr__(self, "modulus", 1 << self.e)
        elif self.kind == "mod":
            if self.modulus < 2:
                raise ValueError("modular ring needs modulus >= 2")
        elif self.kind != "exact":
            raise ValueError(f"unknown ring kind {self.kind!r}")

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    @property
    def is_pow2(self) -> bool:
        return self.kind == "pow2"

    @property
    def dtype(self) -> np.dtype:
        assert self.is_pow2
        return _kernels.dtype_for_bits(self.e)

    def label(self) -> str:
        if self.is_exact:
            return "exact"
        if self.is_pow2:
            return f"mod2^{self.e}"
        return f"mod{self.modulus}"

    def normalize(self, x: int) -> int:
        if self.is_exact:
            return x
        return x % self.modulus

    def is_unit(self, x: int) -> bool:
        if self.is_exact:
            return x in (1, -1)
        return math.gcd(self.normalize(x), self.modulus) == 1

    def unit_inverse(self, x: int) -> int:
        if self.is_exact:
            if x not in (1, -1):
                raise ValueError(f"{x} is not invertible over exact integers")
            return x
        return pow(self.normalize(x), -1, self.modulus)


EXACT = Ring("exact")


def mod_pow2(e: int) -> Ring:
    return Ring("pow2", e=e)


def mod_int(m: int) -> Ring:
    return Ring("mod", modulus=m)


def parse_ring(text: str) -> Ring:
    """Parse a ring spec: 'exact', 'pow2:E', or 'int:M'."""
    if text == "exact":
        return EXACT
    if text.startswith("pow2:"):
        return mod_pow2(int(text[5:]))
    if text.startswith("int:"):
        return mod_int(int(text[4:]))
    raise ValueError(f"unknown ring spec {text!r} (use exact | pow2:E | int:M)")


class Series:
    """Immutable truncated power series with coefficients in a Ring."""

    __slots__ = ("ring", "n", "_c")

    def __init__(self, ring: Ring, coeffs, *, _raw: bool = False):
        self.ring = ring
        if ring.is_pow2:
            if _raw and isinstance(coeffs, np.ndarray):
                arr = coeffs
            else:
                arr = np.array(
                    [c % (1 << ring.e) for c in coeffs], dtype=ring.dtype
                )
            arr.setflags(write=False)
            self._c = arr
            self.n = arr.shape[0] - 1
        else:
            if _raw and isinstance(coeffs, tuple):
                self._c = coeffs
            else:
                self._c = tuple(ring.normalize(int(c)) for c in coeffs)
            self.n = len(self._c) - 1
        if self.n < 0:
            raise ValueError("series needs at least the constant coefficient")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ring: Ring, n: int) -> Series:
        return Series.constant(ring, 0, n)

    @staticmethod
    def one(ring: Ring, n: int) -> Series:
        return Series.constant(ring, 1, n)

    @staticmethod
    def constant(ring: Ring, c: int, n: int) -> Series:
        if ring.is_pow2:
            arr = np.zeros(n + 1, dtype=ring.dtype)
            arr[0] = c % (1 << ring.e)
            return Series(ring, arr, _raw=True)
        return Series(ring, (ring.normalize(c),) + (0,) * n, _raw=True)

    @staticmethod
    def from_coeffs(ring: Ring, coeffs: Iterable[int]) -> Series:
        return Series(ring, list(coeffs))

    # -- coefficient access (always reduced ring elements) ------------------

    def coeff(self, i: int) -> int:
        if i < 0 or i > self.n:
            raise IndexError(f"coefficient {i} outside truncation {self.n}")
        if self.ring.is_pow2:
            return int(self._c[i]) % (1 << self.ring.e)
        return self._c[i]

    def __getitem__(self, i: int) -> int:
        return self.coeff(i)

    def to_list(self) -> list[int]:
        if self.ring.is_pow2:
            mask = (1 << self.ring.e) - 1
            return [int(x) & mask for x in self._c]
        return list(self._c)

    def raw(self):
        """Internal storage; numpy arrays may carry extra high bits beyond 2^e."""
        return self._c

    def nonzero_count(self) -> int:
        if self.ring.is_pow2:
            mask = (1 << self.ring.e) - 1
            return int(np.count_nonzero(self._c & np.array(mask, dtype=self.ring.dtype)))
        return sum(1 for x in self._c if x)

    def __repr__(self):
        head = ", ".join(str(self.coeff(i)) for i in range(min(self.n, 7) + 1))
        tail = ", ..." if self.n > 7 else ""
        return f"Series[{self.ring.label()}; N={self.n}]({head}{tail})"

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.n == other.n
            and self.to_list() == other.to_list()
        )

    def __hash__(self):
        return hash((self.ring, self.n, tuple(self.to_list())))

    # -- arithmetic ----------------------------------------------------------

    def _check_ring(self, other: Series):
        if self.ring != other.ring:
            raise ValueError(
                f"ring mismatch: {self.ring.label()} vs {other.ring.label()}"
            )

    def add(self, other: Series) -> Series:
        self._check_ring(other)
        n = min(self.n, other.n)
        if self.ring.is_pow2:
            return Series(self.ring, self._c[: n + 1] + other._c[: n + 1], _raw=True)
        ring = self.ring
        return Series(
            ring,
            tuple(ring.normalize(a + b) for a, b in zip(self._c, other._c)),
            _raw=True,
        )

    def sub(self, other: Series) -> Series:
        self._check_ring(other)
        n = min(self.n, other.n)
        if self.ring.is_pow2:
            return Series(self.ring, self._c[: n + 1] - other._c[: n + 1], _raw=True)
        ring = self.ring
        return Series(
            ring,
            tuple(ring.normalize(a - b) for a, b in zip(self._c, other._c)),
            _raw=True,
        )

    def scalar_mul(self, c: int) -> Series:
        if self.ring.is_pow2:
            w = self.ring.dtype.type(c % (1 << self.ring.e))
            return Series(self.ring, self._c * w, _raw=True)
        ring = self.ring
        return Series(ring, tuple(ring.normalize(c * x) for x in self._c), _raw=True)

    def neg(self) -> Series:
        return self.scalar_mul(-1)

    def _sparse_terms(self) -> list[tuple[int, int]]:
        out = []
        for i, x in enumerate(self.to_list()):
            if x:
                out.append((i, x))
        return out

    def mul(self, other: Series) -> Series:
        """Cauchy product to the shared truncation.

        Dense schoolbook; when one operand has at most ~sqrt(N) nonzero
        terms the product iterates that sparse support instead.
        """
        self._check_ring(other)
        n = min(self.n, other.n)
        a, b = self, other
        nnz_a, nnz_b = a.nonzero_count(), b.nonzero_count()
        if nnz_b < nnz_a:
            a, b = b, a
            nnz_a, nnz_b = nnz_b, nnz_a
        sparse = nnz_a <= math.isqrt(n) + 1
        if self.ring.is_pow2:
            dtype = self.ring.dtype
            out = np.zeros(n + 1, dtype=dtype)
            src = b._c[: n + 1]
            terms = a._sparse_terms() if sparse else list(enumerate(a.to_list()))
            for g, c in terms:
                if g > n:
                    break
                if c:
                    _kernels._apply_term_slice(out[g:], src[: n + 1 - g], c)
            return Series(self.ring, out, _raw=True)
        ring = self.ring
        out = [0] * (n + 1)
        bc = b._c
        terms = a._sparse_terms() if sparse else list(enumerate(a._c))
        for g, c in terms:
            if g > n:
                break
            if not c:
                continue
            for j in range(0, n + 1 - g):
                bj = bc[j]
                if bj:
                    out[g + j] += c * bj
        return Series(ring, tuple(ring.normalize(x) for x in out), _raw=True)

    def invert(self) -> Series:
        """Power-series reciprocal by forward substitution.

        Requires a unit constant term.  Cost O(N * nnz); the eta engine keeps
        its own sparse fast paths, so this generic route only runs at small N.
        """
        ring = self.ring
        c = self.to_list()
        if not ring.is_unit(c[0]):
            raise ValueError(
                f"constant term {c[0]} is not a unit in {ring.label()}"
            )
        u = ring.unit_inverse(c[0])
        n = self.n
        support = [(g, x) for g, x in enumerate(c) if x and g > 0]
        out = [0] * (n + 1)
        out[0] = ring.normalize(u)
        for i in range(1, n + 1):
            acc = 0
            for g, x in support:
                if g > i:
                    break
                acc += x * out[i - g]
            out[i] = ring.normalize(-acc * u)
        return Series(ring, out)

    def pow(self, e: int) -> Series:
        """e-fold product; negative e inverts first (unit constant required)."""
        if e == 0:
            return Series.one(self.ring, self.n)
        base = self if e > 0 else self.invert()
        e = abs(e)
        result = None
        acc = base
        while e:
            if e & 1:
                result = acc if result is None else result.mul(acc)
            e >>= 1
            if e:
                acc = acc.mul(acc)
        return result

    def extract_ap(self, m: int, r: int) -> Series:
        """Arithmetic-progression extraction: result(n) = a(m*n + r)."""
        if m < 1 or r < 0 or r >= m:
            raise ValueError(f"need m >= 1 and 0 <= r < m, got m={m} r={r}")
        if r > self.n:
            raise ValueError(f"offset {r} exceeds truncation {self.n}")
        if self.ring.is_pow2:
            return Series(self.ring, self._c[r :: m].copy(), _raw=True)
        return Series(self.ring, self._c[r :: m], _raw=True)

    def shifted(self, k: int) -> Series:
        """Multiply by q^k, keeping the truncation (tail drops off)."""
        if k < 0:
            raise ValueError("only nonnegative shifts are defined")
        if k == 0:
            return self
        if self.ring.is_pow2:
            out = np.zeros(self.n + 1, dtype=self.ring.dtype)
            out[k:] = self._c[: self.n + 1 - k]
            return Series(self.ring, out, _raw=True)
        return Series(self.ring, (0,) * k + self._c[: self.n + 1 - k], _raw=True)

    def truncated(self, n: int) -> Series:
        if n > self.n:
            raise ValueError(f"cannot extend truncation {self.n} to {n}")
        if n == self.n:
            return self
        if self.ring.is_pow2:
            return Series(self.ring, self._c[: n + 1].copy(), _raw=True)
        return Series(self.ring, self._c[: n + 1], _raw=True)

    def reduced_to(self, ring: Ring) -> Series:
        """Image under the coefficientwise reduction homomorphism."""
        if ring == self.ring:
            return self
        if self.ring.is_exact:
            return Series(ring, self._c)
        if self.ring.is_pow2 and ring.is_pow2 and ring.e <= self.ring.e:
            return Series(ring, self._c.astype(ring.dtype), _raw=True)
        if ring.modulus and self.ring.modulus % ring.modulus == 0:
            return Series(ring, self.to_list())
        raise ValueError(
            f"no reduction from {self.ring.label()} to {ring.label()}"
        )


@dataclass(frozen=True)
class EqModResult:
    """Outcome of a coefficientwise congruence check."""

    equal: bool
    modulus: int
    checked: int
    first_difference: int | None = None
    lhs_residue: int | None = None
    rhs_residue: int | None = None


def _residues_ok(ring: Ring, modulus: int):
    if ring.is_exact:
        return
    if ring.modulus % modulus != 0:
        raise ValueError(
            f"modulus {modulus} is not faithful over {ring.label()}"
        )


def eq_mod(a: Series, b: Series, modulus: int, up_to: int | None = None) -> EqModResult:
    """Report the first index where a(n) != b(n) (mod modulus), or equality."""
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    a._check_ring(b)
    _residues_ok(a.ring, modulus)
    n = min(a.n, b.n)
    if up_to is not None:
        if up_to > n:
            raise ValueError(f"up_to={up_to} exceeds shared truncation {n}")
        n = up_to
    if a.ring.is_pow2:
        diff = (a._c[: n + 1] - b._c[: n + 1]).astype(np.uint64) & np.uint64(modulus - 1)
        idx = np.nonzero(diff)[0]
        if idx.size == 0:
            return EqModResult(True, modulus, n + 1)
        i = int(idx[0])
        return EqModResult(
            False, modulus, n + 1, i, a.coeff(i) % modulus, b.coeff(i) % modulus
        )
    for i in range(n + 1):
        if (a._c[i] - b._c[i]) % modulus:
            return EqModResult(
                False, modulus, n + 1, i, a._c[i] % modulus, b._c[i] % modulus
            )
    return EqModResult(True, modulus, n + 1)


def first_difference(a: Series, b: Series, up_to: int | None = None) -> int | None:
    """First index with a(n) != b(n) exactly, or None (shared truncation)."""
    a._check_ring(b)
    n = min(a.n, b.n)
    if up_to is not None:
        n = min(n, up_to)
    la, lb = a.to_list(), b.to_list()
    for i in range(n + 1):
        if la[i] != lb[i]:
            return i
    return None
