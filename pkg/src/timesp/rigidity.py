"""Invariance scans over the family ``x (p^j + l)`` and the rigidity verdict.

A scan records the exponents j for which a measure is ``x (p^j + l)``
invariant up to frequency K.  The verdict combines that exponent set with its
density along a Følner sequence and with a :class:`~timesp.mixing.MixingReport`,
and checks the outcome against the Dirac-or-Lebesgue dichotomy.  Every
asymptotic hypothesis is replaced by a finite surrogate, and the surrogate
wording travels with the verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InvalidArgumentError
from .folner import ExplicitList, IntervalUnion, densities
from .measure import (
    DEFAULT_K,
    Atomic,
    DigitBernoulli,
    FourierTable,
    Lebesgue,
    check_base,
    fourier_coeff,
    invariance_defect,
)
from .mixing import ordered_map

EPS_EXACT = 1e-9
EPS_TABLE = 1e-6
DENSITY_ONE_TOL = 1e-3
UPPER_DENSITY_FLOOR = 1e-3
WIENER_THRESHOLD = 0.05
MAX_STAGES = 1 << 20

LEBESGUE = "consistent-with-Lebesgue"
ATOMIC = "consistent-with-atomic"
NOT_MET = "hypotheses-not-met"
CONTRADICTION = "CONTRADICTION"

SURROGATES = {
    1: f"density one: tail liminf of |A∩F_n|/|F_n| >= 1 - {DENSITY_ONE_TOL:g}, plus ergodic_consistent",
    2: (
        f"positive upper density: tail limsup > {UPPER_DENSITY_FLOOR:g} and A gains new elements"
        " during the tail stages, plus weakly_mixing_consistent"
    ),
    3: "infinitely many j: A meets every dyadic block [2^i, 2^(i+1)) inside [0, j_max], plus strongly_mixing_consistent",
}


def default_eps(mu) -> float:
    return EPS_TABLE if isinstance(mu, FourierTable) else EPS_EXACT


@dataclass(frozen=True)
class InvarianceScan:
    p: int
    l: int
    j_max: int
    K: int
    eps: float
    A: IntervalUnion
    defects: tuple

    def rows(self):
        """(j, q = p^j + l, defect, in_A) for every scanned j."""
        return [(j, self.p**j + self.l, d, d <= self.eps) for j, d in enumerate(self.defects)]


def invariance_scan(mu, p: int, l: int, j_max: int, K: int = DEFAULT_K, eps: Optional[float] = None) -> InvarianceScan:
    """Test ``x (p^j + l)`` invariance for j = 0..j_max with q formed exactly."""
    if l == 0:
        raise InvalidArgumentError("l must be nonzero")
    check_base(p)
    if j_max < 0:
        raise InvalidArgumentError(f"j_max must be >= 0, got {j_max}")
    if K < 1:
        raise InvalidArgumentError(f"K must be >= 1, got {K}")
    eps = default_eps(mu) if eps is None else eps
    defects = tuple(ordered_map(lambda j: invariance_defect(mu, p**j + l, K), range(j_max + 1)))
    A = IntervalUnion.from_elements(j for j, d in enumerate(defects) if d <= eps)
    return InvarianceScan(p, l, j_max, K, eps, A, defects)


# ---------------------------------------------------------------------------
# atomicity and the dichotomy


def wiener_average(mu, K: int) -> float:
    """``(1/(2K+1)) sum_{|k|<=K} |mu_hat(k)|^2``; tends to the sum of squared atom weights."""
    vals = [abs(fourier_coeff(mu, k).value) ** 2 for k in range(-K, K + 1)]
    return sum(vals) / len(vals)


def looks_atomic(mu, K: int = DEFAULT_K) -> bool:
    """Whether the measure has an atom: exact for analytic variants, a
    Wiener-average heuristic for Fourier tables."""
    if isinstance(mu, Atomic):
        return True
    if isinstance(mu, Lebesgue):
        return False
    if isinstance(mu, DigitBernoulli):
        return mu.is_atomic()
    if isinstance(mu, FourierTable):
        return wiener_average(mu, min(K, mu.K)) >= WIENER_THRESHOLD
    raise InvalidArgumentError(f"not a measure: {mu!r}")


def dichotomy_check(mu, report=None, K: int = DEFAULT_K, eps: Optional[float] = None) -> str:
    """``"dirac-like"`` if every ``|mu_hat(k)|`` with ``|k| <= K`` is within eps of 1,
    ``"lebesgue-like"`` if every nonzero-frequency coefficient is within eps of 0,
    ``"neither"`` otherwise.

    eps defaults to the report's tolerance, or to the exact-variant scan
    tolerance without a report.
    """
    if eps is None:
        eps = report.tol if report is not None else default_eps(mu)
    if isinstance(mu, FourierTable):
        K = min(K, mu.K)
    mods = [abs(fourier_coeff(mu, k).value) for k in range(1, K + 1)]
    # |mu_hat(-k)| = |mu_hat(k)|
    if all(m >= 1 - eps for m in mods):
        return "dirac-like"
    if all(m <= eps for m in mods):
        return "lebesgue-like"
    return "neither"


# ---------------------------------------------------------------------------
# verdict


@dataclass(frozen=True)
class RigidityVerdict:
    hypotheses_met: tuple
    tested: dict
    density_value: float
    density: object
    dichotomy: str
    atomic: bool
    conclusion: str
    surrogates: dict

    @property
    def hypothesis(self):
        """The first hypothesis that holds, or None."""
        return self.hypotheses_met[0] if self.hypotheses_met else None

    @property
    def hypothesis_met(self) -> bool:
        return bool(self.hypotheses_met)


def _stages_inside(sigma, j_max):
    limit = len(sigma.sets) if isinstance(sigma, ExplicitList) else MAX_STAGES
    out = []
    for n in range(1, limit + 1):
        F = sigma.stage(n)
        if max(F) > j_max:
            if isinstance(sigma, ExplicitList):
                continue
            break
        out.append(n)
    return out


def _gains_in_tail(A, sigma, stages):
    # some element of A in the tail stages exceeds everything A had before the tail
    half = len(stages) // 2
    before = [j for n in stages[:half] for j in sigma.stage(n) if A.contains(j)]
    later = [j for n in stages[half:] for j in sigma.stage(n) if A.contains(j)]
    if not later:
        return False
    return not before or max(later) > max(before)


def _dyadic_occupied(A, j_max):
    if A.count_range(0, j_max) == 0:
        return False
    i = 0
    while 2**i <= j_max:
        if A.count_range(2**i, min(2 ** (i + 1) - 1, j_max)) == 0:
            return False
        i += 1
    return True


def rigidity_verdict(mu, scan: InvarianceScan, sigma, report, K: Optional[int] = None) -> RigidityVerdict:
    """Evaluate the three hypotheses on finite data and draw the conclusion.

    Hypothesis (1) forces Lebesgue among non-atomic measures; (2) and (3)
    additionally force Dirac or Lebesgue.  A met hypothesis whose conclusion
    fails numerically is reported as CONTRADICTION.
    """
    if scan.p != report.p:
        raise InvalidArgumentError(f"scan uses p={scan.p} but the mixing report uses p={report.p}")
    K = scan.K if K is None else K
    stages = _stages_inside(sigma, scan.j_max)
    if not stages:
        raise InvalidArgumentError(f"no Følner stage lies inside the scanned range [0, {scan.j_max}]")
    dens = densities(scan.A, sigma, len(stages), stages=stages)

    tested = {
        1: dens.liminf_estimate >= 1 - DENSITY_ONE_TOL and report.ergodic_consistent,
        2: (
            dens.limsup_estimate > UPPER_DENSITY_FLOOR
            and _gains_in_tail(scan.A, sigma, stages)
            and report.weakly_mixing_consistent
        ),
        3: _dyadic_occupied(scan.A, scan.j_max) and report.strongly_mixing_consistent,
    }
    met = tuple(h for h in (1, 2, 3) if tested[h])
    dich = dichotomy_check(mu, report, K)
    atomic = looks_atomic(mu, K)

    if not met:
        conclusion = NOT_MET
    elif (2 in met or 3 in met) and dich == "neither":
        conclusion = CONTRADICTION
    elif dich == "lebesgue-like":
        conclusion = LEBESGUE
    elif atomic:
        conclusion = ATOMIC
    else:
        # met (1), non-atomic, yet not Lebesgue
        conclusion = CONTRADICTION
    return RigidityVerdict(
        hypotheses_met=met,
        tested=tested,
        density_value=float(dens.final),
        density=dens,
        dichotomy=dich,
        atomic=atomic,
        conclusion=conclusion,
        surrogates=dict(SURROGATES),
    )
