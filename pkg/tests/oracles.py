"""Independent naive reference implementations for cross-checking.

Deliberately shares no code with the package: inverses come from a
hand-rolled extended gcd and exponentials from cmath.  Slow on purpose.
"""

from __future__ import annotations

import cmath
import math


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    return old_r, old_s, old_t


def naive_inverse(n: int, q: int) -> int:
    g, s, _ = ext_gcd(n % q, q)
    if g != 1:
        raise ValueError(f"{n} not invertible mod {q}")
    return s % q


def naive_sum(q: int, N: int, a: int, b: int, c: int) -> complex:
    total = 0j
    for n in range(c + 1, c + N + 1):
        if math.gcd(n, q) != 1:
            continue
        arg = (a * naive_inverse(n, q) + b * n) % q
        total += cmath.exp(2j * cmath.pi * arg / q)
    return total


def naive_w(q: int, q_eps: int, a: int, b: int, n_plus_c: int, h: int) -> complex:
    total = 0j
    for x in range(1, h + 1):
        for y in range(1, h + 1):
            arg = (a * naive_inverse(n_plus_c + q_eps * x * y, q) + b * q_eps * x * y) % q
            total += cmath.exp(2j * cmath.pi * arg / q)
    return total


def naive_j_count(k: int, m: int, P: int, lam: list[int]) -> int:
    """Exact O(P^{2k}) enumeration of the power-sum system."""
    count = 0
    tuples = [[]]
    for _ in range(2 * k):
        tuples = [t + [x] for t in tuples for x in range(1, P + 1)]
    for t in tuples:
        left, right = t[:k], t[k:]
        if all(
            sum(x**j for x in left) == sum(x**j for x in right) + lam[j - 1]
            for j in range(1, m + 1)
        ):
            count += 1
    return count
