"""Small number-theory helpers: primality, Legendre symbol, valuations."""

from __future__ import annotations

# Witness set proving primality for every n < 3.3 * 10^24 (Sorenson-Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for the input sizes this package meets."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(n: int, p: int) -> int:
    """Legendre symbol (n/p) via Euler's criterion; 0 when p divides n.

    Requires p to be an odd prime.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"legendre symbol needs an odd prime, got p={p}")
    n %= p
    if n == 0:
        return 0
    t = pow(n, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def sign_pow(e: int) -> int:
    """(-1)**e for any integer e, staying in int arithmetic."""
    return -1 if e % 2 else 1


def exact_div(num: int, den: int, what: str = "quantity") -> int:
    """Integer division that must be exact; raises otherwise."""
    q, r = divmod(num, den)
    if r:
        raise ValueError(f"{what} = {num}/{den} is not an integer")
    return q
