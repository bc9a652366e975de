"""Theorem sweeps: every main congruence family as a checkable grid.

A theorem instance is a progression A*n + B, a power-of-two modulus, side
conditions on n, and parity hypotheses on small coefficients.  The
verifier first evaluates the hypotheses (recording witnesses), then checks
the congruence for enough n, with the truncation budget derived from the
requested number of checked values.  Two statements are equality-type
(their right side is another coefficient of the same family, possibly
scaled); those are checked at the stated modulus, and the one with a
printed sign discrepancy is checked under both sign readings.

Rings: sweeps default to the mod-2^64 ring.  Since every reported residue
is taken mod the instance modulus (<= 2^7 here), the runner computes in
the narrowest power-of-two word that is a multiple of every instance
modulus; reduction commutes with all ring operations, so reports are
identical to the wide-word run (a property the test suite pins down).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

from .arith import is_prime, legendre
from .eta import SeriesCache, default_cache, eta_quotient
from .families import Family, family_series, overcolored, overcolored_batch_depths
from .report import VerificationReport
from .series import EXACT, Ring, Series, mod_pow2

DEFAULT_MAX_TRUNCATION = 200_000_000

THEOREM_IDS = (
    "T1.1", "T1.2", "C1.1", "T1.3", "C1.2",
    "T1.4", "T1.5", "T1.6", "T1.7", "T1.8", "T1.9", "T1.10",
)


class BudgetExceeded(RuntimeError):
    """A sweep would need a series deeper than the configured bound."""

    def __init__(self, needed: int, limit: int, what: str):
        super().__init__(
            f"{what} needs truncation {needed}, over the limit {limit}"
        )
        self.needed = needed
        self.limit = limit


@dataclass(frozen=True)
class SweepGrid:
    """Parameter grid for theorem sweeps."""

    primes: tuple[int, ...] = (3, 5, 7, 11, 13)
    m_values: tuple[int, ...] = (1, 2)
    alpha_values: tuple[int, ...] = (1, 3)
    beta_values: tuple[int, ...] = (1, 2)
    s_values: tuple[int, ...] = (1, 2, 3, 4, 5)
    k_values: tuple[int, ...] = (0, 1)
    j_values: tuple[int, ...] = (4, 8)
    r_values: tuple[int, ...] | None = None
    n_count: int = 20
    n_max: int | None = None

    def describe(self) -> dict:
        out = {
            "primes": list(self.primes),
            "m": list(self.m_values),
            "alpha": list(self.alpha_values),
            "beta": list(self.beta_values),
            "s": list(self.s_values),
            "k": list(self.k_values),
            "j": list(self.j_values),
            "n_count": self.n_count,
        }
        if self.r_values is not None:
            out["r"] = list(self.r_values)
        if self.n_max is not None:
            out["n_max"] = self.n_max
        return out


@dataclass(frozen=True)
class Check:
    """One sweep instance over a single family series."""

    params: dict
    s: int
    step: int
    offset: int
    modulus: int
    side: Callable[[int], bool] | None = None
    hypotheses: tuple[tuple[str, int], ...] = ()
    rhs: Callable[[int, Callable[[int], int]], int] | None = None

    def depth_for(self, n_count: int) -> tuple[int, int]:
        """(last n swept, truncation needed) for n_count valid values."""
        found = 0
        n = 0
        while True:
            if self.side is None or self.side(n):
                found += 1
                if found >= n_count:
                    break
            n += 1
            if n > 10_000_000:  # side conditions exclude a residue class at most
                raise RuntimeError("side condition rejected every candidate")
        depth = self.step * n + self.offset
        for _, idx in self.hypotheses:
            depth = max(depth, idx)
        return n, depth


# ---------------------------------------------------------------------------
# Families of branch parameters
# ---------------------------------------------------------------------------

def _pow2_branches(grid: SweepGrid, mod_exp: Callable[[int], int]):
    """s = 2^m * alpha with odd alpha; modulus exponent depends on m."""
    for m in grid.m_values:
        for a in grid.alpha_values:
            if m < 1 or a < 1 or a % 2 == 0:
                continue
            yield {"m": m, "alpha": a}, (1 << m) * a, 1 << mod_exp(m)


def _odd_branches(grid: SweepGrid, modulus: int):
    for b in grid.beta_values:
        if b >= 1:
            yield {"beta": b}, 2 * b + 1, modulus


def _even_branches(grid: SweepGrid, modulus: int):
    for a in grid.alpha_values:
        if a >= 1:
            yield {"alpha": a}, 2 * a, modulus


def _kappa(family: str, p: int, cache: SeriesCache) -> int:
    """Closed-form branch constant for the two weighted-product theorems."""
    b_coef, half_exp, vec = {
        "c": (5, 3, {1: 3, 2: 6}),
        "c4": (7, 4, {1: 1, 2: 10}),
    }[family]
    delta = b_coef * (p * p - 1) // 8
    series = eta_quotient(vec, delta, EXACT, cache)
    return series.coeff(delta) + p**half_exp * legendre(-b_coef * (p * p - 1) // 4, p)


def _not_div(p: int, a: int = 1, b: int = 0) -> Callable[[int], bool]:
    """Side condition p does not divide a*n + b."""
    return lambda n: (a * n + b) % p != 0


def theorem_checks(
    ident: str, grid: SweepGrid, cache: SeriesCache | None = None
) -> tuple[list[Check], list[tuple[dict, str, object]]]:
    """Expand a theorem id over a grid into concrete checks.

    Returns (checks, notes); notes carry skipped grid points (wrong residue
    class) and branch constants, to be recorded as witnesses.
    """
    cache = cache or default_cache()
    checks: list[Check] = []
    notes: list[tuple[dict, str, object]] = []

    def wrong_class(p: int, why: str) -> bool:
        if not is_prime(p) or p < 3:
            notes.append(({"p": p}, "skipped", "not an odd prime >= 3"))
            return True
        if why == "3mod4" and p % 4 != 3:
            notes.append(({"p": p}, "skipped", "needs p == 3 (mod 4)"))
            return True
        if why == "1mod4" and p % 4 != 1:
            notes.append(({"p": p}, "skipped", "needs p == 1 (mod 4)"))
            return True
        if why == "3mod4ge5" and (p % 4 != 3 or p < 5):
            notes.append(({"p": p}, "skipped", "needs p >= 5 with p == 3 (mod 4)"))
            return True
        return False

    def branches(mod_exp_even=None, odd_mod=None, even_mod=None, any_mod=None):
        if mod_exp_even is not None:
            yield from _pow2_branches(grid, mod_exp_even)
        if even_mod is not None:
            yield from _even_branches(grid, even_mod)
        if odd_mod is not None:
            yield from _odd_branches(grid, odd_mod)
        if any_mod is not None:
            for s in grid.s_values:
                if s >= 1:
                    yield {"s": s}, s, any_mod

    if ident == "T1.1":
        for p in grid.primes:
            if wrong_class(p, "odd"):
                continue
            for k in grid.k_values:
                a_step = 2 * p ** (2 * k + 1)
                b_off = p ** (2 * k + 1)
                for tag, s, modulus in branches(lambda m: m + 2, odd_mod=4):
                    checks.append(Check(
                        params={"p": p, "k": k, **tag},
                        s=s, step=a_step, offset=b_off, modulus=modulus,
                        side=_not_div(p, 2, 1),
                        hypotheses=(("family(p) even", p),),
                    ))
    elif ident == "T1.2":
        # The statement allows any j != 0 (mod p); the proof substitutes
        # j = r(1-p^2) with p not dividing r, and 8 | 1-p^2, so only
        # j == 0 (mod 4) is actually covered -- and j == 1 (mod 4) has real
        # counterexamples at the stated modulus (family s=4, p=3, j=1, n=0).
        class_primes = [p for p in grid.primes if p % 4 == 3 and is_prime(p)]
        for p in grid.primes:
            wrong_class(p, "3mod4")
        for k in grid.k_values:
            for combo in _prime_tuples(class_primes, k + 1):
                p_last = combo[-1]
                lead = 1
                for q in combo[:-1]:
                    lead *= q * q
                for j in grid.j_values:
                    if not _j_admissible(j, p_last, notes):
                        continue
                    a_step = 4 * lead * p_last * p_last
                    b_off = lead * p_last * (j + p_last)
                    for tag, s, modulus in branches(lambda m: m + 2, odd_mod=4):
                        checks.append(Check(
                            params={"primes": list(combo), "k": k, "j": j, **tag},
                            s=s, step=a_step, offset=b_off, modulus=modulus,
                        ))
        if checks:
            notes.append(({}, "statement_reading",
                          "j restricted to 0 (mod 4): the proof's substitution"
                          " only reaches those classes"))
    elif ident == "C1.1":
        for p in grid.primes:
            if wrong_class(p, "3mod4"):
                continue
            for k in grid.k_values:
                for j in grid.j_values:
                    if not _j_admissible(j, p, notes):
                        continue
                    a_step = 4 * p ** (2 * k + 2)
                    b_off = p ** (2 * k + 1) * j + p ** (2 * k + 2)
                    for tag, s, modulus in branches(lambda m: m + 2, odd_mod=4):
                        checks.append(Check(
                            params={"p": p, "k": k, "j": j, **tag},
                            s=s, step=a_step, offset=b_off, modulus=modulus,
                        ))
        if checks:
            notes.append(({}, "statement_reading",
                          "j restricted to 0 (mod 4): the proof's substitution"
                          " only reaches those classes"))
    elif ident == "T1.3":
        for p in grid.primes:
            if wrong_class(p, "3mod4"):
                continue
            r_values = grid.r_values
            if r_values is None:
                r0 = next(r for r in range(p) if (4 * r + 3) % p == 0)
                r_values = (r0, r0 + p)
            for k in grid.k_values:
                for r in r_values:
                    if (4 * r + 3) % p:
                        notes.append(({"r": r, "p": p}, "skipped", "p must divide 4r+3"))
                        continue
                    a_step = 4 * p ** (k + 1)
                    b_off = 4 * p * r + 3 * p

                    def rhs(n, coeff, p=p, k=k, r=r):
                        num = 4 * p**k * n + 4 * r + 3
                        if num % p:
                            return 0
                        return p * p * coeff(num // p)

                    for tag, s, modulus in branches(lambda m: m + 2, odd_mod=4):
                        checks.append(Check(
                            params={"p": p, "k": k, "r": r, **tag},
                            s=s, step=a_step, offset=b_off, modulus=modulus,
                            rhs=rhs,
                        ))
        if checks:
            notes.append(({}, "statement_reading",
                          "progression includes the n the statement omits"))
    elif ident == "C1.2":
        for p in grid.primes:
            if wrong_class(p, "3mod4"):
                continue
            for k in grid.k_values:
                a_step = 4 * p ** (2 * k)
                b_off = p ** (2 * k)
                for sign in (1, -1):
                    def rhs(n, coeff, p=p, k=k, sign=sign):
                        return sign**k * p ** (2 * k) * coeff(4 * n + 1)

                    for tag, s, modulus in branches(lambda m: m + 2, odd_mod=4):
                        checks.append(Check(
                            params={"p": p, "k": k, "sign": sign, **tag},
                            s=s, step=a_step, offset=b_off, modulus=modulus,
                            rhs=rhs,
                        ))
    elif ident == "T1.4":
        for p in grid.primes:
            if wrong_class(p, "3mod4ge5"):
                continue
            for k in grid.k_values:
                a_step = 4 * p ** (2 * k + 1)
                b_off = p ** (2 * k + 2)
                for tag, s, modulus in branches(lambda m: m + 2, odd_mod=4):
                    checks.append(Check(
                        params={"p": p, "k": k, **tag},
                        s=s, step=a_step, offset=b_off, modulus=modulus,
                        side=_not_div(p),
                    ))
    elif ident == "T1.5":
        for p in grid.primes:
            if wrong_class(p, "odd"):
                continue
            for k in grid.k_values:
                a_step = 4 * p ** (2 * k + 1)
                b_off = 2 * p ** (2 * k + 1)
                for tag, s, modulus in branches(even_mod=4, odd_mod=8):
                    checks.append(Check(
                        params={"p": p, "k": k, **tag},
                        s=s, step=a_step, offset=b_off, modulus=modulus,
                        side=_not_div(p, 2, 1),
                        hypotheses=(("family(2p) even", 2 * p),),
                    ))
    elif ident == "T1.6":
        for p in grid.primes:
            if wrong_class(p, "1mod4"):
                continue
            for k in grid.k_values:
                a_step = 4 * p ** (2 * k + 1)
                b_off = 3 * p ** (2 * k + 1)
                for tag, s, modulus in branches(lambda m: m + 3, odd_mod=16):
                    checks.append(Check(
                        params={"p": p, "k": k, **tag},
                        s=s, step=a_step, offset=b_off, modulus=modulus,
                        side=_not_div(p, 4, 3),
                        hypotheses=(("family(3p) even", 3 * p),),
                    ))
    elif ident == "T1.7":
        for p in grid.primes:
            if wrong_class(p, "odd"):
                continue
            for k in grid.k_values:
                a_step = 8 * p ** (2 * k + 1)
                b_off = 4 * p ** (2 * k + 1)
                for tag, s, modulus in branches(even_mod=8, odd_mod=4):
                    checks.append(Check(
                        params={"p": p, "k": k, **tag},
                        s=s, step=a_step, offset=b_off, modulus=modulus,
                        side=_not_div(p, 2, 1),
                        hypotheses=(("family(4p) even", 4 * p),),
                    ))
    elif ident in ("T1.8", "T1.10"):
        fam, b_coef, exp_shift, odd_mod = (
            ("c", 5, 3, 16) if ident == "T1.8" else ("c4", 7, 4, 128)
        )
        for p in grid.primes:
            if wrong_class(p, "odd"):
                continue
            kappa = _kappa(fam, p, cache)
            nu = 4 if kappa % 2 == 0 else 6
            notes.append(({"p": p}, "kappa", kappa))
            notes.append(({"p": p}, "nu", nu))
            for k in grid.k_values:
                a_step = 8 * p ** (nu * (k + 1) - 1)
                b_off = b_coef * p ** (nu * (k + 1))
                for tag, s, modulus in branches(lambda m: m + exp_shift, odd_mod=odd_mod):
                    checks.append(Check(
                        params={"p": p, "k": k, "part": 1, **tag},
                        s=s, step=a_step, offset=b_off, modulus=modulus,
                        side=_not_div(p),
                    ))
                if kappa % 2 == 1:
                    a2 = 8 * p ** (6 * k + 2)
                    b2 = b_coef * p ** (6 * k + 2)
                    for tag, s, modulus in branches(lambda m: m + exp_shift, odd_mod=odd_mod):
                        checks.append(Check(
                            params={"p": p, "k": k, "part": 2, **tag},
                            s=s, step=a2, offset=b2, modulus=modulus,
                            side=_not_div(p, 8, b_coef),
                        ))
                else:
                    notes.append(({"p": p, "k": k}, "part2", "not applicable (kappa even)"))
    elif ident == "T1.9":
        for p in grid.primes:
            if wrong_class(p, "1mod4"):
                continue
            for k in grid.k_values:
                a_step = 8 * p ** (4 * k + 1)
                b_off = 6 * p ** (4 * k + 1)
                for tag, s, modulus in branches(any_mod=16):
                    checks.append(Check(
                        params={"p": p, "k": k, **tag},
                        s=s, step=a_step, offset=b_off, modulus=modulus,
                        side=_not_div(p, 4, 3),
                        hypotheses=(("family(6p) even", 6 * p),),
                    ))
    else:
        raise ValueError(f"unknown theorem id {ident!r} (know {THEOREM_IDS})")
    return checks, notes


def _j_admissible(j: int, p: int, notes: list) -> bool:
    if j % p == 0:
        notes.append(({"j": j, "p": p}, "skipped", "j == 0 (mod p)"))
        return False
    if j % 4 != 0:
        notes.append(({"j": j, "p": p}, "skipped",
                      "proof covers j == 0 (mod 4) only"))
        return False
    return True


def _prime_tuples(primes: list[int], length: int):
    if length == 1:
        for p in primes:
            yield (p,)
        return
    for p in primes:
        for rest in _prime_tuples(primes, length - 1):
            yield (p,) + rest


# ---------------------------------------------------------------------------
# Sweep execution
# ---------------------------------------------------------------------------

def _evaluate_check(check: Check, series: Series, grid: SweepGrid):
    coeff = series.coeff
    failures = []
    witnesses = []
    hyp_ok = True
    for label, idx in check.hypotheses:
        value = coeff(idx) % 2
        witnesses.append((check.params, label, value))
        if value != 0:
            hyp_ok = False
    if not hyp_ok:
        witnesses.append((check.params, "skipped", "hypothesis not satisfied"))
        return 0, failures, witnesses
    checked = 0
    n = 0
    limit = grid.n_max if grid.n_max is not None else None
    while True:
        idx = check.step * n + check.offset
        if idx > series.n or (limit is not None and idx > limit):
            break
        if check.side is None or check.side(n):
            value = coeff(idx) % check.modulus
            expected = (check.rhs(n, coeff) % check.modulus) if check.rhs else 0
            if value != expected:
                failures.append((check.params, n, f"{value} != {expected} (mod {check.modulus})"))
            checked += 1
            if limit is None and checked >= grid.n_count:
                break
        n += 1
    return checked, failures, witnesses


def verify_theorem(
    ident: str,
    grid: SweepGrid | None = None,
    ring: Ring | None = None,
    cache: SeriesCache | None = None,
    parallel: int = 1,
    max_truncation: int = DEFAULT_MAX_TRUNCATION,
) -> VerificationReport:
    """Sweep one theorem over a grid; zero failures expected.

    The truncation budget per instance covers n_count checked values (or
    n_max when given).  Series are built once per s at the maximum needed
    depth and shared across instances.
    """
    grid = grid or SweepGrid()
    ring = ring or mod_pow2(64)
    cache = cache or default_cache()
    checks, notes = theorem_checks(ident, grid, cache)
    report = VerificationReport(
        claim=f"theorem:{ident}",
        grid=grid.describe(),
        truncation=0,
        ring=ring.label(),
    )
    for params, label, value in notes:
        report.add_witness(params, label, value)
    if not checks:
        return report

    depths: dict[int, int] = {}
    for check in checks:
        if grid.n_max is not None:
            depth = grid.n_max
        else:
            _, depth = check.depth_for(grid.n_count)
        if depth > max_truncation:
            raise BudgetExceeded(depth, max_truncation, f"{ident} {check.params}")
        depths[check.s] = max(depths.get(check.s, 0), depth)
    report.truncation = max(depths.values())

    if ring.is_pow2:
        width = max(check.modulus.bit_length() - 1 for check in checks)
        if width > ring.e:
            raise ValueError(
                f"ring {ring.label()} cannot represent modulus 2^{width}"
            )
        work_ring = mod_pow2(width) if width < ring.e else ring
    else:
        work_ring = ring
    series_by_s = overcolored_batch_depths(depths, work_ring, cache)

    def run(check: Check):
        return _evaluate_check(check, series_by_s[check.s], grid)

    if parallel > 1:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(run, checks))
    else:
        results = [run(check) for check in checks]
    for checked, failures, witnesses in results:
        report.checked += checked
        for params, n, observed in failures:
            report.add_failure(params, n, observed)
        for params, label, value in witnesses:
            report.add_witness(params, label, value)
    return report


def scan_progressions(
    s: int,
    modulus: int,
    a_max: int,
    n: int,
    ring: Ring | None = None,
    family: Family | None = None,
    cache: SeriesCache | None = None,
) -> tuple[list[tuple[int, int, int]], VerificationReport]:
    """Empirical search for progressions A*n + B with all coefficients == 0.

    Tests every A <= a_max and 0 <= B <= A against the family expansion to
    truncation n; hits are unproved observations, and are labeled so.
    """
    ring = ring or mod_pow2(64)
    cache = cache or default_cache()
    fam = family if family is not None else overcolored(s)
    series = family_series(fam, n, ring, cache)
    hits: list[tuple[int, int, int]] = []
    report = VerificationReport(
        claim=f"scan:{fam.label()}",
        grid={"modulus": modulus, "a_max": a_max, "family": fam.label()},
        truncation=n,
        ring=ring.label(),
    )
    report.add_witness({}, "scope", "empirical, unproved")
    for a in range(1, a_max + 1):
        for b in range(0, a + 1):
            count = 0
            good = True
            idx = b
            while idx <= n:
                if series.coeff(idx) % modulus:
                    good = False
                    break
                count += 1
                idx += a
            report.checked += count + (0 if good else 1)
            if good and count > 0:
                hits.append((a, b, count))
                report.add_witness({"A": a, "B": b}, "progression", count)
    return hits, report
