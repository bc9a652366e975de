"""Eta-quotient level machinery: weight and character conditions, cusp
orders, and the prime-index Hecke operator on q-expansions.

Everything here is finite arithmetic on exponent data and truncated
series.  No transformation theory is proved: the level conditions and cusp
orders are evaluated as stated, and the eigenform check verifies the
eigen-relation only up to a truncation and for finitely many primes, which
every report labels explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import legendre
from .eta import SeriesCache, default_cache, eta_quotient
from .series import EXACT, Ring, Series


@dataclass(frozen=True)
class EtaQuotient:
    """A level N together with integer exponents over divisors of N."""

    level: int
    exponents: tuple[tuple[int, int], ...]

    def __init__(self, level: int, exponents):
        if level < 1:
            raise ValueError("level must be >= 1")
        items = tuple(sorted((int(d), int(r)) for d, r in dict(exponents).items() if r))
        for d, _ in items:
            if d < 1 or level % d != 0:
                raise ValueError(f"scale {d} does not divide level {level}")
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "exponents", items)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self.exponents), 2)

    @property
    def q_offset(self) -> Fraction:
        return Fraction(sum(d * r for d, r in self.exponents), 24)

    @property
    def character_discriminant(self) -> int | None:
        """(-1)^k * prod d^(r_d), squarefree-equivalent integer form.

        Negative exponents make the product rational; numerator times
        denominator represents the same quadratic character.  None when the
        weight is not an integer (the character is not defined then).
        """
        k = self.weight
        if k.denominator != 1:
            return None
        prod = Fraction(1)
        for d, r in self.exponents:
            prod *= Fraction(d) ** r
        value = prod.numerator * prod.denominator
        return -value if k.numerator % 2 else value

    def vector(self) -> dict[int, int]:
        return dict(self.exponents)


@dataclass(frozen=True)
class LevelConditions:
    weight_integral: bool
    scaled_sum_ok: bool  # sum d*r_d == 0 (mod 24)
    dual_sum_ok: bool  # sum (N/d)*r_d == 0 (mod 24)
    character_discriminant: int | None


def check_level_conditions(eq: EtaQuotient) -> LevelConditions:
    """Evaluate the two mod-24 sums and weight integrality, nothing more."""
    scaled = sum(d * r for d, r in eq.exponents)
    dual = sum((eq.level // d) * r for d, r in eq.exponents)
    return LevelConditions(
        weight_integral=eq.weight.denominator == 1,
        scaled_sum_ok=scaled % 24 == 0,
        dual_sum_ok=dual % 24 == 0,
        character_discriminant=eq.character_discriminant,
    )


def divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def cusp_orders(eq: EtaQuotient) -> dict[int, Fraction]:
    """Order of vanishing at each cusp denominator d | N.

    (N/24) * sum_d' gcd(d, d')^2 r_d' / (gcd(d, N/d) * d * d'); the value is
    shared by all cusps c/d with the same denominator.
    """
    n = eq.level
    orders: dict[int, Fraction] = {}
    for d in divisors(n):
        total = Fraction(0)
        for delta, r in eq.exponents:
            g = math.gcd(d, delta)
            total += Fraction(g * g * r, math.gcd(d, n // d) * d * delta)
        orders[d] = Fraction(n, 24) * total
    return orders


def all_cusp_orders_nonnegative(eq: EtaQuotient) -> bool:
    return all(v >= 0 for v in cusp_orders(eq).values())


def eta_quotient_expansion(
    eq: EtaQuotient,
    n: int,
    ring: Ring = EXACT,
    cache: SeriesCache | None = None,
) -> Series:
    """q-expansion including the q^(sum d*r/24) prefactor.

    Only quotients whose offset is a nonnegative integer have a power
    series expansion; others are rejected.
    """
    off = eq.q_offset
    if off.denominator != 1 or off < 0:
        raise ValueError(f"q-offset {off} is not a nonnegative integer")
    series = eta_quotient(eq.vector(), n, ring, cache or default_cache())
    return series.shifted(int(off))


def hecke_tp(a: Series, p: int, weight: int, chi_p: int) -> Series:
    """Prime Hecke operator: out(n) = a(p*n) + chi(p) p^(k-1) a(n/p).

    a(n/p) is 0 whenever p does not divide n.  The input truncation must be
    at least p times the output truncation, so the output is cut at n // p.
    """
    if a.n < p:
        raise ValueError(f"input truncation {a.n} < p={p}: nothing to produce")
    out_n = a.n // p
    scale = chi_p * p ** (weight - 1)
    coeffs = []
    for n in range(out_n + 1):
        val = a.coeff(p * n)
        if n % p == 0:
            val += scale * a.coeff(n // p)
        coeffs.append(val)
    return Series(a.ring, coeffs)


@dataclass(frozen=True)
class HeckeResult:
    prime: int
    eigenvalue: int | None
    residual: int | None
    note: str = "finite verification, not proof"

    @property
    def is_eigen(self) -> bool:
        return self.residual is None


def eigenform_check(
    eq: EtaQuotient,
    p: int,
    n: int,
    cache: SeriesCache | None = None,
) -> HeckeResult:
    """Verify T_p f = lambda(p) f to truncation, extracting lambda.

    Preconditions (asserted, not proved): integral weight, both level sums
    divisible by 24, all cusp orders nonnegative.  lambda is read off at
    the first nonzero coefficient of f; the relation is then checked
    coefficientwise to n // p.
    """
    conds = check_level_conditions(eq)
    if not (conds.weight_integral and conds.scaled_sum_ok and conds.dual_sum_ok):
        raise ValueError("eta quotient fails the level conditions")
    if not all_cusp_orders_nonnegative(eq):
        raise ValueError("eta quotient has a negative cusp order")
    disc = eq.character_discriminant
    chi_p = legendre(disc % p, p)
    f = eta_quotient_expansion(eq, n, EXACT, cache)
    tp = hecke_tp(f, p, int(eq.weight), chi_p)
    lead = None
    for i in range(tp.n + 1):
        if f.coeff(i):
            lead = i
            break
    if lead is None:
        raise ValueError("series is zero to truncation; eigenvalue undefined")
    num, den = tp.coeff(lead), f.coeff(lead)
    if num % den:
        return HeckeResult(p, None, lead)
    lam = num // den
    for i in range(tp.n + 1):
        if tp.coeff(i) != lam * f.coeff(i):
            return HeckeResult(p, None, i)
    return HeckeResult(p, lam, None)


def eta6_weight3_level16() -> EtaQuotient:
    """The weight-3 level-16 quotient with expansion q * f_4^6."""
    return EtaQuotient(16, {4: 6})
