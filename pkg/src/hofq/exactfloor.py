"""Exact integer evaluation of the floor expressions used throughout.

gamma denotes the reciprocal golden ratio (sqrt(5) - 1)/2, the positive root
of g^2 + g = 1.  Floors of gamma*n and gamma^2*n are computed from integer
square roots, never from floating point:

    floor(gamma * n)   = (isqrt(5 n^2) - n) // 2
    floor(gamma^2 * n) = n - 1 - floor(gamma * n)        (n >= 1)

Both identities rely on 5 n^2 never being a perfect square (n >= 1), so the
enclosed square root is irrational and the floor commutes with the outer
integer shift/halving.
"""

from __future__ import annotations

import math

import numpy as np

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)

# headroom so the (s+2)^2 correction below cannot wrap int64
ISQRT_ARRAY_CAP = INT64_MAX - 2**34
# largest n with 5*n^2 within the isqrt_array cap (vectorized gamma floors)
GAMMA_ARRAY_CAP = math.isqrt(ISQRT_ARRAY_CAP // 5)


def isqrt_array(x: np.ndarray) -> np.ndarray:
    """Elementwise integer square root of a non-negative int64 array.

    A float64 seed is repaired by exact integer correction loops, so the
    result is correct even where float rounding misses by a few units.
    """
    x = np.asarray(x, dtype=np.int64)
    if x.size and int(x.min()) < 0:
        raise ValueError("isqrt_array: negative input")
    if x.size and int(x.max()) > ISQRT_ARRAY_CAP:
        raise OverflowError("isqrt_array: input too close to int64 max")
    s = np.sqrt(x.astype(np.float64)).astype(np.int64)
    s = np.maximum(s - 2, 0)
    # climb while (s+1)^2 <= x, then descend while s^2 > x; both terminate
    # in a few passes because the seed is within a few ulps
    while True:
        low = (s + 1) * (s + 1) <= x
        if not low.any():
            break
        s[low] += 1
    while True:
        high = s * s > x
        if not high.any():
            break
        s[high] -= 1
    return s


def iroot(m: int, k: int) -> tuple[int, bool]:
    """Return (floor(m ** (1/k)), exact) for integers m >= 0, k >= 1."""
    if m < 0 or k < 1:
        raise ValueError("iroot: need m >= 0, k >= 1")
    if k == 1:
        return m, True
    if k == 2:
        r = math.isqrt(m)
        return r, r * r == m
    if k == 4:  # floor(m^(1/4)) = isqrt(isqrt(m)), nested-floor identity
        r = math.isqrt(math.isqrt(m))
        return r, r**4 == m
    if m < 2:
        return m, True
    # integer Newton seeded above the root (works for arbitrarily large m)
    r = 1 << ((m.bit_length() + k - 1) // k)
    while True:
        t = ((k - 1) * r + m // r ** (k - 1)) // k
        if t >= r:
            break
        r = t
    while r**k > m:
        r -= 1
    while (r + 1) ** k <= m:
        r += 1
    return r, r**k == m


def floor_gamma(n: int) -> int:
    """floor(gamma * n) for n >= 0, exact for arbitrary Python ints."""
    if n < 0:
        raise ValueError("floor_gamma: need n >= 0")
    return (math.isqrt(5 * n * n) - n) // 2


def floor_gamma_sq(n: int) -> int:
    """floor(gamma^2 * n) for n >= 0."""
    if n == 0:
        return 0
    return n - 1 - floor_gamma(n)


def floor_gamma_array(n: np.ndarray) -> np.ndarray:
    """Vectorized floor(gamma * n); requires 0 <= n <= GAMMA_ARRAY_CAP."""
    n = np.asarray(n, dtype=np.int64)
    if n.size == 0:
        return n.copy()
    if int(n.min()) < 0:
        raise ValueError("floor_gamma_array: negative index")
    if int(n.max()) > GAMMA_ARRAY_CAP:
        raise OverflowError("floor_gamma_array: 5*n^2 exceeds int64")
    return (isqrt_array(5 * n * n) - n) >> 1


def floor_gamma_sq_array(n: np.ndarray) -> np.ndarray:
    """Vectorized floor(gamma^2 * n); n = 0 handled as 0."""
    n = np.asarray(n, dtype=np.int64)
    out = n - 1 - floor_gamma_array(n)
    return np.where(n == 0, 0, out)


def staircase_start(k: int) -> int:
    """First index at which the value k appears in the k-repeats staircase:
    (k^2 - k + 2) / 2."""
    if k < 1:
        raise ValueError("staircase_start: need k >= 1")
    return (k * k - k + 2) // 2


def staircase_value(n: int) -> int:
    """Closed form floor(1/2 + sqrt(2n - 7/4)) = (1 + isqrt(8n - 7)) // 2, n >= 1."""
    if n < 1:
        raise ValueError("staircase_value: need n >= 1")
    return (1 + math.isqrt(8 * n - 7)) // 2


def staircase_value_array(n: np.ndarray) -> np.ndarray:
    """Vectorized staircase_value."""
    n = np.asarray(n, dtype=np.int64)
    if n.size and int(n.min()) < 1:
        raise ValueError("staircase_value_array: need n >= 1")
    return (1 + isqrt_array(8 * n - 7)) >> 1


def ceil_div_sqrt(a: int, n: int) -> int:
    """ceil(a / sqrt(n)) exactly, for integers a >= 0, n >= 1."""
    if a == 0:
        return 0
    k = math.isqrt((a * a) // n)  # floor(a / sqrt(n))
    return k if k * k * n == a * a else k + 1


def ceil_div_pow(a: int, n: int, p: int, q: int) -> int:
    """ceil(a / n**(p/q)) exactly, for integers a >= 0, n >= 1, p, q >= 1.

    Uses the monotone predicate k**q * n**p >= a**q.
    """
    if a == 0:
        return 0
    target = a**q
    npow = n**p
    k = int(a / float(n) ** (p / q)) + 1
    if k < 1:
        k = 1
    while k > 1 and (k - 1) ** q * npow >= target:
        k -= 1
    while k**q * npow < target:
        k += 1
    return k
