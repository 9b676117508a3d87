"""Følner sequences in N, integer subsets, and densities along them.

A Følner sequence is given as a rule ``n -> F_n`` (n = 1, 2, ...).  Stages
are returned as ``range`` objects when they are intervals, otherwise as
sorted tuples.  Every count here is exact; nothing samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import (
    BudgetExceededError,
    HorizonExceededError,
    InvalidArgumentError,
    OutOfRangeError,
    ValidationError,
)
from .expr import Expr

CONVERGENCE_TOL = 1e-3
MAX_BLOCKS = 1 << 20
MAX_ENUMERATION = 1 << 22


def _as_expr(rule):
    return rule if isinstance(rule, Expr) else Expr(rule)


# ---------------------------------------------------------------------------
# Følner sequences


@dataclass(frozen=True)
class InitialSegments:
    """``F_n = [start, start + n - 1]``."""

    start: int = 0

    def stage(self, n: int) -> range:
        _check_index(n)
        return range(self.start, self.start + n)

    def union(self):
        return Interval(self.start, None)


@dataclass(frozen=True)
class ShiftedIntervals:
    """``F_n = [a(n), a(n) + l(n)]`` for integer rules ``a`` and ``l``."""

    a: Expr
    l: Expr

    def __post_init__(self):
        object.__setattr__(self, "a", _as_expr(self.a))
        object.__setattr__(self, "l", _as_expr(self.l))

    def stage(self, n: int) -> range:
        _check_index(n)
        lo = self.a.int_value(n=n)
        length = self.l.int_value(n=n)
        if lo < 0 or length < 0:
            raise ValidationError(f"stage {n} = [{lo}, {lo + length}] is not a nonempty subset of N")
        return range(lo, lo + length + 1)

    def union(self):
        return BlockUnion(self.a, self.l, first=1)


@dataclass(frozen=True)
class ExplicitList:
    """A finite list of finite sets, ``F_n = sets[n - 1]``."""

    sets: tuple

    def __post_init__(self):
        sets = tuple(tuple(sorted(set(int(x) for x in s))) for s in self.sets)
        for i, s in enumerate(sets, 1):
            if not s:
                raise ValidationError(f"stage {i} is empty")
            if s[0] < 0:
                raise ValidationError(f"stage {i} has a negative element")
        object.__setattr__(self, "sets", sets)

    def stage(self, n: int) -> tuple:
        _check_index(n)
        if n > len(self.sets):
            raise OutOfRangeError(f"explicit sequence has only {len(self.sets)} stages")
        return self.sets[n - 1]

    def union(self):
        return FiniteSet(frozenset(x for s in self.sets for x in s))


FolnerSequence = InitialSegments | ShiftedIntervals | ExplicitList


def tail_windows() -> ShiftedIntervals:
    """``F_n = [n, 2n - 1]``: n elements, escaping every finite set."""
    return ShiftedIntervals(Expr("n"), Expr("n-1"))


def remark_blocks() -> ShiftedIntervals:
    """``F_n = [2^n, 2^n + n]``."""
    return ShiftedIntervals(Expr("2^n"), Expr("n"))


def _check_index(n):
    if n < 1:
        raise InvalidArgumentError(f"stage index must be >= 1, got {n}")


def folner_defect(sigma, m: int, n: int) -> Fraction:
    """``|(F_n + m) symmetric-difference F_n| / |F_n|``, exactly."""
    if m < 0:
        raise InvalidArgumentError(f"shift m must be nonnegative, got {m}")
    F = sigma.stage(n)
    size = len(F)
    if isinstance(F, range):
        return Fraction(2 * min(m, size), size)
    s = set(F)
    shifted = {x + m for x in F}
    return Fraction(len(s ^ shifted), size)


# ---------------------------------------------------------------------------
# Integer subsets


class IntegerSubset:
    """Subset of N with membership and exact counting over stages."""

    def contains(self, x: int) -> bool:
        raise NotImplementedError

    def __contains__(self, x):
        return self.contains(x)

    def count_range(self, lo: int, hi: int) -> int:
        """``|A ∩ [lo, hi]|``; by enumeration unless a subclass knows better."""
        if hi < lo:
            return 0
        if hi - lo + 1 > MAX_ENUMERATION:
            raise BudgetExceededError(f"counting {type(self).__name__} over {hi - lo + 1} integers")
        return sum(1 for x in range(lo, hi + 1) if self.contains(x))

    def count(self, stage) -> int:
        if isinstance(stage, range):
            return self.count_range(stage.start, stage.stop - 1) if len(stage) else 0
        return sum(1 for x in stage if self.contains(x))


@dataclass(frozen=True)
class Interval(IntegerSubset):
    """``[lo, hi]``; ``hi=None`` is the half line ``[lo, inf)``."""

    lo: int
    hi: Optional[int] = None

    def contains(self, x):
        return x >= self.lo and (self.hi is None or x <= self.hi)

    def pieces(self, lo, hi):
        a = max(lo, self.lo)
        b = hi if self.hi is None else min(hi, self.hi)
        if a <= b:
            yield a, b

    def count_range(self, lo, hi):
        return sum(b - a + 1 for a, b in self.pieces(lo, hi))


def Naturals():
    return Interval(0, None)


@dataclass(frozen=True)
class IntervalUnion(IntegerSubset):
    """Finite union of closed integer intervals, stored merged and sorted."""

    intervals: tuple

    def __post_init__(self):
        merged = []
        for a, b in sorted((int(a), int(b)) for a, b in self.intervals):
            if a > b:
                raise ValidationError(f"empty interval [{a}, {b}]")
            if merged and a <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        object.__setattr__(self, "intervals", tuple(merged))

    @classmethod
    def from_elements(cls, elements):
        runs = []
        for x in sorted(set(elements)):
            if runs and x == runs[-1][1] + 1:
                runs[-1][1] = x
            else:
                runs.append([x, x])
        return cls(tuple(map(tuple, runs)))

    def contains(self, x):
        return any(a <= x <= b for a, b in self.intervals)

    def pieces(self, lo, hi):
        for a, b in self.intervals:
            a, b = max(a, lo), min(b, hi)
            if a <= b:
                yield a, b

    def count_range(self, lo, hi):
        return sum(b - a + 1 for a, b in self.pieces(lo, hi))

    def elements(self):
        for a, b in self.intervals:
            yield from range(a, b + 1)

    def __len__(self):
        return sum(b - a + 1 for a, b in self.intervals)


@dataclass(frozen=True)
class BlockUnion(IntegerSubset):
    """``∪_{m >= first} [a(m), a(m) + l(m)]`` with ``a`` nondecreasing."""

    a: Expr
    l: Expr
    first: int = 1

    def __post_init__(self):
        object.__setattr__(self, "a", _as_expr(self.a))
        object.__setattr__(self, "l", _as_expr(self.l))

    def blocks(self):
        prev = None
        for i, m in enumerate(range(self.first, self.first + MAX_BLOCKS)):
            lo = self.a.int_value(n=m)
            hi = lo + self.l.int_value(n=m)
            if prev is not None and lo < prev:
                raise ValidationError(f"block starts must be nondecreasing (block {m})")
            prev = lo
            yield lo, hi
        raise BudgetExceededError(f"more than {MAX_BLOCKS} blocks scanned")

    def pieces(self, lo, hi):
        covered = lo - 1
        for a, b in self.blocks():
            if a > hi:
                return
            a = max(a, covered + 1)
            b = min(b, hi)
            if a <= b:
                yield a, b
            covered = max(covered, b)

    def contains(self, x):
        return any(True for _ in self.pieces(x, x))

    def count_range(self, lo, hi):
        return sum(b - a + 1 for a, b in self.pieces(lo, hi))


@dataclass(frozen=True)
class Progression(IntegerSubset):
    """``{x >= start : x ≡ residue (mod modulus)}``."""

    residue: int
    modulus: int
    start: int = 0

    def __post_init__(self):
        if self.modulus < 1:
            raise ValidationError("modulus must be positive")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def contains(self, x):
        return x >= self.start and x % self.modulus == self.residue

    def _upto(self, x):
        # elements in [start, x]
        if x < self.start:
            return 0
        first = self.start + (self.residue - self.start) % self.modulus
        if first > x:
            return 0
        return (x - first) // self.modulus + 1

    def count_range(self, lo, hi):
        if hi < lo:
            return 0
        return self._upto(hi) - self._upto(lo - 1)


@dataclass(frozen=True)
class FiniteSet(IntegerSubset):
    elements: frozenset

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(int(x) for x in self.elements))

    def contains(self, x):
        return x in self.elements

    def count_range(self, lo, hi):
        return sum(1 for x in self.elements if lo <= x <= hi)


@dataclass(frozen=True)
class Predicate(IntegerSubset):
    fn: Callable[[int], bool]
    name: str = "predicate"

    def contains(self, x):
        return bool(self.fn(x))


@dataclass(frozen=True)
class Complement(IntegerSubset):
    """``N \\ inner``."""

    inner: IntegerSubset

    def contains(self, x):
        return x >= 0 and not self.inner.contains(x)

    def count_range(self, lo, hi):
        lo = max(lo, 0)
        if hi < lo:
            return 0
        return hi - lo + 1 - self.inner.count_range(lo, hi)

    def count(self, stage):
        return len(stage) - self.inner.count(stage)


@dataclass(frozen=True)
class Intersection(IntegerSubset):
    left: IntegerSubset
    right: IntegerSubset

    def contains(self, x):
        return self.left.contains(x) and self.right.contains(x)

    def count_range(self, lo, hi):
        for outer, inner in ((self.right, self.left), (self.left, self.right)):
            if hasattr(outer, "pieces"):
                return sum(inner.count_range(a, b) for a, b in outer.pieces(lo, hi))
        return super().count_range(lo, hi)


@dataclass(frozen=True)
class Horizon(IntegerSubset):
    """``inner ∩ [0, horizon]`` that refuses to answer beyond the horizon."""

    inner: IntegerSubset
    horizon: int

    def _guard(self, hi):
        if hi > self.horizon:
            raise HorizonExceededError(f"query up to {hi} beyond horizon {self.horizon}")

    def contains(self, x):
        self._guard(x)
        return self.inner.contains(x)

    def count_range(self, lo, hi):
        self._guard(hi)
        return self.inner.count_range(lo, hi)

    def count(self, stage):
        if len(stage):
            self._guard(max(stage))
        return self.inner.count(stage)


def restrict_to_union(A: IntegerSubset, sigma, horizon: Optional[int] = None) -> IntegerSubset:
    """``A ∩ (∪_n F_n)``; with a horizon, additionally cut to ``[0, horizon]``."""
    restricted = Intersection(A, sigma.union())
    if horizon is not None:
        restricted = Horizon(restricted, horizon)
    return restricted


# ---------------------------------------------------------------------------
# Densities


@dataclass(frozen=True)
class DensityReport:
    stages: tuple
    sizes: tuple
    counts: tuple
    ratios: tuple
    liminf_estimate: float
    limsup_estimate: float
    oscillation: float
    converged: bool
    window: tuple
    tol: float = CONVERGENCE_TOL

    @property
    def final(self) -> Fraction:
        return self.ratios[-1]

    def verdict(self) -> str:
        est = _short(float(self.final))
        if self.converged:
            return f"density {est}"
        return (
            f"density {est} (final-stage estimate; tail oscillation "
            f"{self.oscillation:.2e} >= {self.tol:g}, not converged)"
        )

    def rows(self):
        for n, size, count, ratio in zip(self.stages, self.sizes, self.counts, self.ratios):
            yield n, size, count, ratio


def _short(x):
    s = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def schedule_indices(n_max: int, schedule: str = "linear") -> list:
    if n_max < 1:
        raise InvalidArgumentError("n_max must be >= 1")
    if schedule == "linear":
        return list(range(1, n_max + 1))
    if schedule == "dyadic":
        return [2**i for i in range(1, n_max + 1)]
    raise InvalidArgumentError(f"unknown schedule {schedule!r}")


def densities(
    A: IntegerSubset,
    sigma,
    n_max: int,
    schedule: str = "linear",
    stages: Optional[Sequence[int]] = None,
    tol: float = CONVERGENCE_TOL,
) -> DensityReport:
    """Ratios ``|A ∩ F_n| / |F_n|`` for stage indices 1..n_max (or a schedule).

    limsup/liminf are estimated as max/min over the second half of the
    computed stages; ``converged`` means that tail oscillates by less than tol.
    ``schedule="dyadic"`` evaluates stage indices 2, 4, ..., 2**n_max.
    """
    indices = list(stages) if stages is not None else schedule_indices(n_max, schedule)
    if not indices:
        raise InvalidArgumentError("no stages requested")
    sizes, counts, ratios = [], [], []
    for n in indices:
        F = sigma.stage(n)
        c = A.count(F)
        sizes.append(len(F))
        counts.append(c)
        ratios.append(Fraction(c, len(F)))
    tail = ratios[len(ratios) // 2:]
    hi, lo = float(max(tail)), float(min(tail))
    window = (indices[len(ratios) // 2], indices[-1])
    return DensityReport(
        stages=tuple(indices),
        sizes=tuple(sizes),
        counts=tuple(counts),
        ratios=tuple(ratios),
        liminf_estimate=lo,
        limsup_estimate=hi,
        oscillation=hi - lo,
        converged=(hi - lo) < tol,
        window=window,
        tol=tol,
    )
