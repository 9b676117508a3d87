"""Fourier-coefficient statistics for ergodic, weakly mixing and strongly mixing
x p invariant measures, plus the exactness defect and an atom-based
obstruction to weak mixing.

Every statistic compares ``mu_hat(k p^j + l)`` against the target
``mu_hat(k) mu_hat(l)``, either averaged along a Følner stage or as a tail
over a window of exponents.  Sums are taken in ascending j with
:func:`math.fsum`, so results do not depend on evaluation order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import InvalidArgumentError, NotApplicableError, UnsupportedVariantError
from .folner import tail_windows
from .measure import (
    DEFAULT_K,
    Atomic,
    BigFrequency,
    ComplexWithError,
    DigitBernoulli,
    atomic_residue_table,
    check_base,
    fourier_coeff,
    fourier_coeff_at,
    invariance_defect,
    normalize,
    pushforward,
)
from .numeric import cmean, fmean

TOL_EXACT = 1e-6
TOL_DIGIT_BERNOULLI = 1e-3


def _stage(sigma, n):
    F = sigma.stage(n)
    return F if isinstance(F, range) else list(F)


def target(mu, k: int, l: int) -> ComplexWithError:
    a = fourier_coeff(mu, k)
    b = fourier_coeff(mu, l)
    return ComplexWithError(a.value * b.value, a.err + b.err)


@lru_cache(maxsize=1024)
def _power_residues(p: int, L: int, start: int, stop: int) -> tuple:
    """``p^j mod L`` for j in [start, stop), by repeated multiplication."""
    out = []
    x = pow(p, start, L)
    for _ in range(start, stop):
        out.append(x)
        x = x * p % L
    return tuple(out)


def orbit_values(mu, p: int, k: int, l: int, js) -> list:
    """``mu_hat(k p^j + l)`` for each j, in the given order."""
    check_base(p)
    if isinstance(mu, Atomic):
        table = atomic_residue_table(mu)
        if table is not None:
            L = len(table)
            if isinstance(js, range) and js.step == 1:
                return [table[(k * r + l) % L] for r in _power_residues(p, L, js.start, js.stop)]
            return [table[(k * pow(p, j, L) + l) % L] for j in js]
    return [fourier_coeff_at(mu, BigFrequency(k, p, j, l)) for j in js]


def ergodic_average(mu, p: int, k: int, l: int, sigma, n: int) -> ComplexWithError:
    """Mean of ``mu_hat(k p^j + l)`` over ``j in F_n``."""
    vals = orbit_values(mu, p, k, l, _stage(sigma, n))
    return ComplexWithError(cmean(v.value for v in vals), fmean(v.err for v in vals))


def weak_mixing_average(mu, p: int, k: int, l: int, sigma, n: int) -> float:
    """Mean of ``|mu_hat(k p^j + l) - mu_hat(k) mu_hat(l)|^2`` over ``j in F_n``."""
    t = target(mu, k, l).value
    vals = orbit_values(mu, p, k, l, _stage(sigma, n))
    return fmean(abs(v.value - t) ** 2 for v in vals)


def strong_mixing_tail(mu, p: int, k: int, l: int, j_from: int, j_to: int) -> float:
    """``max_{j_from <= j <= j_to} |mu_hat(k p^j + l) - mu_hat(k) mu_hat(l)|``."""
    if not 0 <= j_from <= j_to:
        raise InvalidArgumentError(f"need 0 <= j_from <= j_to, got {j_from}, {j_to}")
    t = target(mu, k, l).value
    return max(abs(v.value - t) for v in orbit_values(mu, p, k, l, range(j_from, j_to + 1)))


def exactness_defect(mu, p: int, l: int, j: int, K: int) -> float:
    """``max_{1 <= |k| <= K} |mu_hat(k p^j + l) - mu_hat(k) mu_hat(l)|``."""
    if K < 1:
        raise InvalidArgumentError(f"K must be >= 1, got {K}")
    check_base(p)
    worst = 0.0
    for k in range(-K, K + 1):
        if k:
            v = fourier_coeff_at(mu, BigFrequency(k, p, j, l)).value
            worst = max(worst, abs(v - target(mu, k, l).value))
    return worst


@dataclass(frozen=True)
class StageStats:
    """Ergodic and weak mixing statistics for one (k, l) at one stage."""

    n: int
    size: int
    ergodic: ComplexWithError
    weak: float
    deviation: float


def stage_profile(mu, p: int, k: int, l: int, sigma, stages) -> list:
    """:class:`StageStats` for each stage index in ``stages``."""
    t = target(mu, k, l).value
    out = []
    for n in stages:
        vals = orbit_values(mu, p, k, l, _stage(sigma, n))
        avg = ComplexWithError(cmean(v.value for v in vals), fmean(v.err for v in vals))
        weak = fmean(abs(v.value - t) ** 2 for v in vals)
        out.append(StageStats(n, len(vals), avg, weak, abs(avg.value - t)))
    return out


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ClassifyParams:
    k_max: int = 8
    l_max: int = 8
    sigma: object = field(default_factory=tail_windows)
    n_stages: int = 256
    j_window: tuple = (32, 64)
    tol: Optional[float] = None
    K: int = DEFAULT_K

    def resolved_tol(self, mu) -> float:
        if self.tol is not None:
            return self.tol
        return TOL_DIGIT_BERNOULLI if isinstance(mu, DigitBernoulli) else TOL_EXACT


@dataclass(frozen=True)
class PairStats:
    k: int
    l: int
    target: complex
    ergodic_average: complex
    ergodic_deviation: float
    weak_mixing_average: float
    strong_mixing_tail: float
    err: float


@dataclass(frozen=True)
class MixingReport:
    p: int
    params: ClassifyParams
    tol: float
    invariance_defect: float
    invariant: bool
    pairs: tuple
    ergodic_consistent: bool
    weakly_mixing_consistent: bool
    strongly_mixing_consistent: bool

    def __post_init__(self):
        if self.strongly_mixing_consistent and not self.weakly_mixing_consistent:
            raise AssertionError("strong mixing verdict without weak mixing")
        if self.weakly_mixing_consistent and not self.ergodic_consistent:
            raise AssertionError("weak mixing verdict without ergodicity")

    @property
    def verdicts(self) -> dict:
        return {
            "invariant": self.invariant,
            "ergodic_consistent": self.ergodic_consistent,
            "weakly_mixing_consistent": self.weakly_mixing_consistent,
            "strongly_mixing_consistent": self.strongly_mixing_consistent,
        }


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("TIMESP_THREADS", "1")))
    except ValueError:
        return 1


def ordered_map(fn, items):
    """``map`` with optional thread fan-out; results always in input order."""
    items = list(items)
    workers = _workers()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _pair_stats(mu, p, k, l, params):
    t = target(mu, k, l)
    vals = orbit_values(mu, p, k, l, _stage(params.sigma, params.n_stages))
    avg = cmean(v.value for v in vals)
    err = fmean(v.err for v in vals) + t.err
    weak = fmean(abs(v.value - t.value) ** 2 for v in vals)
    j0, j1 = params.j_window
    strong = max(abs(v.value - t.value) for v in orbit_values(mu, p, k, l, range(j0, j1 + 1)))
    return PairStats(k, l, t.value, avg, abs(avg - t.value), weak, strong, err)


def classify(mu, p: int, params: Optional[ClassifyParams] = None) -> MixingReport:
    """Run the three statistics over all ``|k| <= k_max``, ``|l| <= l_max``.

    A verdict holds when every pair is within tol of its target at the final
    stage (ergodic deviation, weak mixing average) or over the j window
    (strong mixing tail).  A failure propagates down the hierarchy.  Measures
    that are not x p invariant up to frequency K get no statistics at all.
    """
    params = params or ClassifyParams()
    check_base(p)
    tol = params.resolved_tol(mu)
    defect = invariance_defect(mu, p, params.K)
    if defect > tol:
        return MixingReport(p, params, tol, defect, False, (), False, False, False)
    grid = [(k, l) for k in range(-params.k_max, params.k_max + 1) for l in range(-params.l_max, params.l_max + 1)]
    pairs = tuple(ordered_map(lambda kl: _pair_stats(mu, p, kl[0], kl[1], params), grid))
    ergodic = all(s.ergodic_deviation <= tol for s in pairs)
    weak = ergodic and all(s.weak_mixing_average <= tol for s in pairs)
    strong = weak and all(s.strong_mixing_tail <= tol for s in pairs)
    return MixingReport(p, params, tol, defect, True, pairs, ergodic, weak, strong)


# ---------------------------------------------------------------------------
# atoms obstruct weak mixing


def _orbit_point(x: Fraction, p: int, j: int) -> Fraction:
    d = x.denominator
    return Fraction(x.numerator * pow(p, j, d) % d, d)


def walters_set_average(mu, p: int, n: int) -> Fraction:
    """Largest, over atoms x with weight in (0, 1), of

    ``(1/n) sum_{j<n} |mu(T^-j A ∩ B) - mu(A) mu(B)|^2`` with ``A = T \\ {x}``
    and ``B = {x}``, computed exactly.  ``mu(T^-j A ∩ B)`` is the weight of x
    when ``T_p^j x != x`` and 0 otherwise.
    """
    if not isinstance(mu, Atomic):
        raise UnsupportedVariantError("walters_set_average needs an atomic measure")
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    check_base(p)
    mu = normalize(mu)
    if pushforward(mu, p) != mu:
        raise NotApplicableError(f"measure is not x{p} invariant")
    candidates = [(x, w) for x, w in mu.atoms if 0 < w < 1]
    if not candidates:
        raise NotApplicableError("no atom with weight strictly between 0 and 1")
    best = None
    for x, lam in candidates:
        baseline = lam * (1 - lam)
        total = Fraction(0)
        for j in range(n):
            hit = lam if _orbit_point(x, p, j) != x else Fraction(0)
            total += (hit - baseline) ** 2
        avg = total / n
        if best is None or avg > best:
            best = avg
    return best


def walters_lower_bound(lam: Fraction) -> Fraction:
    """``min{lam(1-lam), lam - lam(1-lam)}^2``."""
    return min(lam * (1 - lam), lam - lam * (1 - lam)) ** 2
