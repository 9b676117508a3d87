"""Measures on the circle R/Z and their Fourier coefficients.

Four variants are supported: finitely supported measures on rational points
(:class:`Atomic`), :class:`Lebesgue`, infinite Bernoulli convolutions over the
digits of a base (:class:`DigitBernoulli`) and a finite table of Fourier
coefficients (:class:`FourierTable`).  All are frozen and hashable, so
coefficient evaluations can be memoised on ``(measure, frequency)``.

Coefficients are returned as :class:`ComplexWithError`.  Exact paths (atomic,
Lebesgue, table) carry a small multiple of machine epsilon; the digit
Bernoulli product carries its truncation bound on top of that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import gmpy2
import numpy as np
from scipy.signal import lfilter

from .errors import (
    BudgetExceededError,
    InvalidArgumentError,
    InvalidMeasureError,
    OutOfRangeError,
    UnsupportedVariantError,
)
from .numeric import EPS, TWO_PI, cis_turns, csum, root_of_unity

DEFAULT_TOL = 1e-12
DEFAULT_K = 128
# bound used for the exact atomic and table paths, see module docstring
ATOMIC_ERR = float(8 * EPS)
MAX_FREQUENCY_BITS = 1 << 24


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise InvalidMeasureError(f"floats are not exact rationals: {x!r}")
    return Fraction(x)


def circle_point(x) -> Fraction:
    """Reduce a rational to its representative in [0, 1)."""
    x = as_fraction(x)
    return x - math.floor(x)


@dataclass(frozen=True)
class ComplexWithError:
    value: complex
    err: float = 0.0

    def __abs__(self):
        return abs(self.value)


@dataclass(frozen=True)
class BigFrequency:
    """The integer ``k * p**j + l``, kept symbolic so ``j`` may be huge."""

    k: int
    p: int
    j: int
    l: int

    def __post_init__(self):
        check_base(self.p)
        if self.j < 0:
            raise InvalidArgumentError(f"exponent j must be nonnegative, got {self.j}")

    def mod(self, m: int) -> int:
        return (self.k * pow(self.p, self.j, m) + self.l) % m

    def bit_bound(self) -> int:
        """Upper bound on the bit length of the denoted integer."""
        return (
            abs(self.k).bit_length()
            + self.j * abs(self.p).bit_length()
            + abs(self.l).bit_length()
            + 1
        )

    def materialize(self, max_bits: int = MAX_FREQUENCY_BITS) -> int:
        if self.bit_bound() > max_bits:
            raise BudgetExceededError(
                f"frequency k*p^j+l needs about {self.bit_bound()} bits (> {max_bits})"
            )
        return self.k * self.p**self.j + self.l


def check_base(p: int) -> int:
    if not isinstance(p, int) or abs(p) < 2:
        raise InvalidArgumentError(f"|p| >= 2 required, got p={p!r}")
    return p


@dataclass(frozen=True)
class Atomic:
    """Finitely many atoms at rational points.

    ``atoms`` is a tuple of ``(point, weight)`` pairs of Fractions.  Duplicate
    points and unnormalised weights are allowed here; :func:`normalize` merges
    and rescales them, and the Fourier routines normalise on the fly.
    """

    atoms: tuple

    def __post_init__(self):
        atoms = []
        for item in self.atoms:
            x, w = item
            w = as_fraction(w)
            if w < 0:
                raise InvalidMeasureError(f"negative weight {w} at {x}")
            atoms.append((circle_point(x), w))
        object.__setattr__(self, "atoms", tuple(atoms))

    @classmethod
    def from_pairs(cls, pairs) -> "Atomic":
        return normalize(cls(tuple(pairs)))

    @classmethod
    def uniform(cls, points) -> "Atomic":
        points = list(points)
        return cls.from_pairs((x, Fraction(1, len(points))) for x in points)

    @classmethod
    def dirac(cls, x=0) -> "Atomic":
        return cls.from_pairs([(x, 1)])

    @property
    def points(self):
        return tuple(x for x, _ in self.atoms)

    @property
    def weights(self):
        return tuple(w for _, w in self.atoms)

    @property
    def denominator_lcm(self) -> int:
        return math.lcm(*(x.denominator for x, _ in self.atoms)) if self.atoms else 1

    def mass(self, x) -> Fraction:
        x = circle_point(x)
        return sum((w for y, w in normalize(self).atoms if y == x), Fraction(0))


@dataclass(frozen=True)
class Lebesgue:
    pass


@dataclass(frozen=True)
class DigitBernoulli:
    """Law of ``sum_j d_j base**-j`` with i.i.d. digits ``d_j`` drawn from ``weights``."""

    base: int
    weights: tuple

    def __post_init__(self):
        if not isinstance(self.base, int) or self.base < 2:
            raise InvalidMeasureError(f"digit base must be an integer >= 2, got {self.base!r}")
        weights = tuple(as_fraction(w) for w in self.weights)
        if len(weights) != self.base:
            raise InvalidMeasureError(
                f"need {self.base} digit weights, got {len(weights)}"
            )
        if any(w < 0 for w in weights):
            raise InvalidMeasureError("digit weights must be nonnegative")
        if sum(weights) != 1:
            raise InvalidMeasureError(f"digit weights sum {sum(weights)} != 1")
        object.__setattr__(self, "weights", weights)

    @property
    def support_digits(self):
        return tuple(d for d, w in enumerate(self.weights) if w)

    def is_atomic(self) -> bool:
        return len(self.support_digits) == 1


@dataclass(frozen=True)
class FourierTable:
    """Coefficients ``coeffs[k]`` for ``0 <= k <= K``; negative k by conjugation."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        if not coeffs:
            raise InvalidMeasureError("Fourier table needs at least coefficient 0")
        if abs(coeffs[0] - 1) > 1e-12:
            raise InvalidMeasureError(f"coefficient 0 must be 1, got {coeffs[0]}")
        for k, c in enumerate(coeffs):
            if abs(c) > 1 + 1e-12:
                raise InvalidMeasureError(f"|coefficient {k}| = {abs(c)} exceeds 1")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def K(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> complex:
        if abs(k) > self.K:
            raise OutOfRangeError(f"frequency {k} outside table range |k| <= {self.K}")
        c = self.coeffs[abs(k)]
        return c if k >= 0 else c.conjugate()


Measure = Union[Atomic, Lebesgue, DigitBernoulli, FourierTable]


def normalize(measure: Measure) -> Measure:
    """Merge duplicate atoms, drop zero weights and rescale to total mass 1."""
    if not isinstance(measure, Atomic):
        return measure
    return Atomic(_normalized_atoms(measure.atoms))


@lru_cache(maxsize=4096)
def _normalized_atoms(atoms):
    merged = {}
    for x, w in atoms:
        merged[x] = merged.get(x, Fraction(0)) + w
    total = sum(merged.values(), Fraction(0))
    if not merged or total == 0:
        raise InvalidMeasureError("atomic measure has no mass")
    return tuple((x, w / total) for x, w in sorted(merged.items()) if w)


# ---------------------------------------------------------------------------
# Fourier coefficients


@lru_cache(maxsize=1 << 18)
def _atomic_coeff(atoms, n):
    # Group atoms by the exact angle n*x mod 1 before touching floats, so two
    # measures with the same angle/weight histogram give bit-identical sums.
    by_angle = {}
    for x, w in atoms:
        d = x.denominator
        a = (n * x.numerator) % d
        key = Fraction(a, d)
        by_angle[key] = by_angle.get(key, Fraction(0)) + w
    terms = [float(w) * root_of_unity(a.numerator, a.denominator) for a, w in sorted(by_angle.items())]
    return csum(terms)


def _atomic_at_residue(measure: Atomic, residue: int) -> ComplexWithError:
    atoms = _normalized_atoms(measure.atoms)
    return ComplexWithError(_atomic_coeff(atoms, residue), ATOMIC_ERR)


TABLE_LIMIT = 1 << 14


@lru_cache(maxsize=256)
def atomic_residue_table(measure: Atomic):
    """All coefficients of an atomic measure indexed by residue mod the lcm of
    its denominators, or None when that lcm exceeds TABLE_LIMIT."""
    L = measure.denominator_lcm
    if L > TABLE_LIMIT:
        return None
    atoms = _normalized_atoms(measure.atoms)
    return tuple(ComplexWithError(_atomic_coeff(atoms, r), ATOMIC_ERR) for r in range(L))


def _digit_lut(alphabet):
    lut = np.zeros(256, dtype=np.int64)
    for i, ch in enumerate(alphabet):
        lut[ord(ch)] = i
    return lut


# gmpy2 writes digits as 0-9a-z up to base 36 and 0-9A-Za-z above
_DIGIT_LUT = (
    _digit_lut("0123456789abcdefghijklmnopqrstuvwxyz"),
    _digit_lut("0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz"),
)


@lru_cache(maxsize=256)
def _digit_arrays(measure):
    digits = measure.support_digits
    return np.array(digits, dtype=float), np.array([float(measure.weights[d]) for d in digits])


def _base_digits(m: int, base: int, count: int) -> np.ndarray:
    """Least significant first digits of ``0 <= m < base**count``."""
    out = np.zeros(count, dtype=np.int64)
    if m == 0:
        return out
    if base <= 62:
        raw = np.frombuffer(gmpy2.digits(m, base).encode(), dtype=np.uint8)[::-1]
        vals = _DIGIT_LUT[1 if base > 36 else 0][raw]
        out[: len(vals)] = vals
        return out
    i = 0
    while m:
        m, d = divmod(m, base)
        out[i] = d
        i += 1
    return out


def _frac_parts(digits: np.ndarray, base: int) -> np.ndarray:
    # t_i = (n mod base^i) / base^i through t_i = (d_i + t_{i-1}) / base;
    # each step divides the accumulated rounding error by base, so every t_i
    # is within 2 ulps of its exact value.
    inv = 1.0 / base
    return lfilter([inv], [1.0, -inv], digits.astype(float))


@lru_cache(maxsize=1 << 16)
def _digit_bernoulli_coeff(measure: DigitBernoulli, n: int, tol: float) -> ComplexWithError:
    if n == 0:
        return ComplexWithError(1 + 0j, 0.0)
    if n < 0:
        c = _digit_bernoulli_coeff(measure, -n, tol)
        return ComplexWithError(c.value.conjugate(), c.err)
    b = measure.base
    digits = measure.support_digits
    if len(digits) == 1:
        # Dirac mass at d/(b-1)
        return ComplexWithError(root_of_unity(n * digits[0], b - 1), ATOMIC_ERR)
    dmax = max(digits)
    lead = TWO_PI * dmax / (b - 1)
    log_n = math.log(n)
    # smallest J with lead*|n|*b^-J < tol
    J = max(1, math.ceil((log_n + math.log(lead / tol)) / math.log(b)))
    while lead * math.exp(log_n - J * math.log(b)) >= tol:
        J += 1
    m = n % (b**J)
    t = _frac_parts(_base_digits(m, b, J), b)
    dig, w = _digit_arrays(measure)
    psi = cis_turns(np.outer(t, dig)) @ w
    if np.any(psi == 0):
        value = 0j
    else:
        value = complex(np.prod(psi))
    tail = lead * math.exp(log_n - J * math.log(b))
    # per factor: phase error of d*t_i, cis rounding, weighted sum, product step
    per_factor = (20 * dmax + 3 * len(digits) + 6) * EPS
    err = float(tail + J * per_factor)
    return ComplexWithError(value, err)


def fourier_coeff(measure: Measure, k: int, tol: float = DEFAULT_TOL) -> ComplexWithError:
    """``mu_hat(k)``, the integral of ``exp(2*pi*i*k*x)`` against the measure."""
    k = int(k)
    if isinstance(measure, Atomic):
        return _atomic_at_residue(measure, k % measure.denominator_lcm)
    if isinstance(measure, Lebesgue):
        return ComplexWithError(1 + 0j if k == 0 else 0j, 0.0)
    if isinstance(measure, DigitBernoulli):
        return _digit_bernoulli_coeff(measure, k, tol)
    if isinstance(measure, FourierTable):
        return ComplexWithError(measure.coeff(k), 0.0)
    raise UnsupportedVariantError(f"not a measure: {measure!r}")


def fourier_coeff_at(measure: Measure, freq: BigFrequency, tol: float = DEFAULT_TOL) -> ComplexWithError:
    """``mu_hat(k*p**j + l)`` without forming ``p**j`` where that can be avoided."""
    if isinstance(measure, Atomic):
        return _atomic_at_residue(measure, freq.mod(measure.denominator_lcm))
    if isinstance(measure, Lebesgue):
        return ComplexWithError(1 + 0j if _is_zero(freq) else 0j, 0.0)
    if isinstance(measure, FourierTable):
        if freq.k != 0 and freq.j > (measure.K + abs(freq.l)).bit_length():
            raise OutOfRangeError(f"frequency {freq} exceeds table range {measure.K}")
        return fourier_coeff(measure, freq.materialize(), tol)
    if isinstance(measure, DigitBernoulli):
        return _digit_bernoulli_coeff(measure, freq.materialize(), tol)
    raise UnsupportedVariantError(f"not a measure: {measure!r}")


def _is_zero(freq: BigFrequency) -> bool:
    if freq.k == 0:
        return freq.l == 0
    # |k p^j| >= 2^j > |l| once j exceeds the bit length of l
    if freq.j > abs(freq.l).bit_length():
        return False
    return freq.materialize() == 0


# ---------------------------------------------------------------------------
# Dynamics


def pushforward(measure: Measure, q: int) -> Atomic:
    """Image of an atomic measure under ``x -> q*x mod 1``."""
    if not isinstance(measure, Atomic):
        raise UnsupportedVariantError(
            "pushforward is exact only for atomic measures; use invariance_defect"
        )
    return normalize(Atomic(tuple((circle_point(q * x), w) for x, w in measure.atoms)))


def invariance_defect(measure: Measure, q: int, K: int = DEFAULT_K, tol: float = DEFAULT_TOL) -> float:
    """``max_{1<=|k|<=K} |mu_hat(q k) - mu_hat(k)|`` plus the error bounds involved.

    Zero certifies that the measure is x q invariant up to frequency K.  For a
    Fourier table only the k with ``|q k|`` inside the table are compared.
    """
    if K < 1:
        raise InvalidArgumentError(f"K must be >= 1, got {K}")
    ks = [k for k in range(-K, K + 1) if k]
    if isinstance(measure, FourierTable):
        ks = [k for k in ks if abs(q * k) <= measure.K]
        if not ks:
            raise OutOfRangeError(f"no frequency k with |{q}k| inside the table")
    worst = 0.0
    for k in ks:
        a = fourier_coeff(measure, q * k, tol)
        b = fourier_coeff(measure, k, tol)
        worst = max(worst, abs(a.value - b.value) + a.err + b.err)
    return worst


def support_root_test(measure: Measure, k: int) -> Optional[complex]:
    """Return c if every atom x satisfies ``exp(2 pi i k x) == c``, else None.

    The test is exact on rationals: all ``k*x mod 1`` must coincide.
    """
    if k == 0:
        raise InvalidArgumentError("support_root_test needs k != 0")
    if not isinstance(measure, Atomic):
        raise UnsupportedVariantError("support_root_test applies to atomic measures")
    angles = {circle_point(k * x) for x, _ in normalize(measure).atoms}
    if len(angles) != 1:
        return None
    (a,) = angles
    return root_of_unity(a.numerator, a.denominator)


def is_atomic(measure: Measure) -> bool:
    if isinstance(measure, Atomic):
        return True
    if isinstance(measure, DigitBernoulli):
        return measure.is_atomic()
    return False
