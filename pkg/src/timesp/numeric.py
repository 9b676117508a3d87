"""Small numerical kernels shared by the measure and mixing code."""

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

EPS = float(np.finfo(float).eps)
TWO_PI = 2.0 * math.pi

_QUARTER_TURNS = ((1, 0), (0, 1), (-1, 0), (0, -1))
_QUARTER_ARRAY = np.array([1, 1j, -1, -1j])


@lru_cache(maxsize=1 << 16)
def root_of_unity(num, den):
    """Return ``exp(2*pi*i*num/den)`` for integers ``num`` and ``den > 0``.

    The angle is reduced exactly to the nearest quarter turn plus a remainder
    in [-1/8, 1/8], so quarter-turn multiples come out exact and the result is
    within two ulps of the true value elsewhere.
    """
    num %= den
    q = (8 * num + den) // (2 * den)  # nearest integer to 4*num/den
    rem = Fraction(4 * num - q * den, 4 * den)
    if rem:
        theta = TWO_PI * float(rem)
        c, s = math.cos(theta), math.sin(theta)
    else:
        c, s = 1.0, 0.0
    a, b = _QUARTER_TURNS[q % 4]
    return complex(a * c - b * s, b * c + a * s)


def cis_turns(t):
    """Vectorised ``exp(2*pi*i*t)`` for an array of angles measured in turns."""
    t = np.asarray(t, dtype=float)
    t = t - np.floor(t)
    q = np.rint(4.0 * t)
    rem = t - 0.25 * q
    # multiplying by 1, i, -1, -i is exact
    return np.exp((1j * TWO_PI) * rem) * _QUARTER_ARRAY[q.astype(np.int64) % 4]


def csum(values):
    """Correctly rounded sum of complex numbers (real and imaginary parts via fsum)."""
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def cmean(values):
    values = list(values)
    if not values:
        raise ValueError("mean of an empty sequence")
    s = csum(values)
    n = len(values)
    return complex(s.real / n, s.imag / n)


def fmean(values):
    values = list(values)
    if not values:
        raise ValueError("mean of an empty sequence")
    return math.fsum(values) / len(values)


def floor_log(n, base):
    """Largest e with base**e <= n, for integers n >= 1, base >= 2."""
    if n < 1:
        raise ValueError("floor_log needs n >= 1")
    e = max(0, int((n.bit_length() - 1) / math.log2(base)) - 1)
    while base ** (e + 1) <= n:
        e += 1
    while e > 0 and base**e > n:
        e -= 1
    return e


def ceil_log(n, base):
    """Smallest e with base**e >= n, for integers n >= 1, base >= 2."""
    e = floor_log(n, base)
    return e if base**e == n else e + 1
