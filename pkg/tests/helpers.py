"""Independent brute-force oracles for the test suite.

Everything here computes expansions the slow, obvious way (direct
products, naive convolution, naive forward substitution) with no shared
code with the package, so a bug in the fast paths cannot hide.
"""

from __future__ import annotations


def conv(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * (n + 1)
    for i, ai in enumerate(a[: n + 1]):
        if ai:
            for j, bj in enumerate(b[: n + 1 - i]):
                if bj:
                    out[i + j] += ai * bj
    return out


def naive_invert(a: list[int], n: int) -> list[int]:
    assert a[0] in (1, -1)
    out = [0] * (n + 1)
    out[0] = a[0]
    for i in range(1, n + 1):
        acc = 0
        for k in range(1, i + 1):
            if k < len(a) and a[k]:
                acc += a[k] * out[i - k]
        out[i] = -acc * a[0]
    return out


def euler_product(n: int, scale: int = 1) -> list[int]:
    """(q^scale; q^scale)_inf by multiplying the factors one by one."""
    c = [1] + [0] * n
    for j in range(scale, n + 1, scale):
        for i in range(n, j - 1, -1):
            c[i] -= c[i - j]
    return c


def euler_power(exponent: int, n: int, scale: int = 1) -> list[int]:
    """f_scale^exponent by repeated naive convolution / inversion."""
    base = euler_product(n, scale)
    out = [1] + [0] * n
    factor = base if exponent > 0 else naive_invert(base, n)
    for _ in range(abs(exponent)):
        out = conv(out, factor, n)
    return out


def eta_vector_series(vec: dict[int, int], n: int) -> list[int]:
    out = [1] + [0] * n
    for scale, e in sorted(vec.items()):
        if e:
            out = conv(out, euler_power(e, n, scale), n)
    return out


def partition_counts(n: int) -> list[int]:
    ways = [1] + [0] * n
    for v in range(1, n + 1):
        for i in range(v, n + 1):
            ways[i] += ways[i - v]
    return ways


def overpartition_counts(n: int) -> list[int]:
    """Overlined-first-occurrence partitions: factor (1+q^v)/(1-q^v)."""
    ways = [1] + [0] * n
    for v in range(1, n + 1):
        u = ways[:]
        for i in range(v, n + 1):
            u[i] += u[i - v]
        ways = [u[i] + (u[i - v] if i >= v else 0) for i in range(n + 1)]
    return ways


def two_color_partition_counts(n: int) -> list[int]:
    """Each part size in two colors, unrestricted multiplicity."""
    ways = [1] + [0] * n
    for v in range(1, n + 1):
        for _ in range(2):
            for i in range(v, n + 1):
                ways[i] += ways[i - v]
    return ways
