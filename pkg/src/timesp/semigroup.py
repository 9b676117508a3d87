"""The sparse multiplicative semigroup generated by p and p^j + 1, j in A.

The exponent set A is a union of blocks ``F_m = [N*_m, N*_m + l_m]`` where
``N*_m`` is the least integer N with ``tau(N) >= 1 + f(m)`` and
``f(m) = l_1 + ... + l_m``.  Elements are enumerated exactly with a
smooth-number style min-heap, and counts are compared against
``(log_p N)^tau(N)`` and the block counting bound ``ceil(log_p N)^(1 + f(m))``.
"""

from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .errors import BudgetExceededError, InvalidArgumentError, InvalidTauError
from .expr import Expr
from .folner import IntervalUnion
from .numeric import ceil_log, floor_log

PRECISION_DPS = 50
MAX_SEARCH_BITS = 1 << 16
MAX_REPAIR_BITS = 1 << 20
DEFAULT_ELEMENT_BUDGET = 10_000_000


# ---------------------------------------------------------------------------
# tau


class TauFunction:
    """An increasing function of the positive integers, compared exactly or at
    ``PRECISION_DPS`` significant digits."""

    kind = "tau"

    def __call__(self, n: int):
        raise NotImplementedError

    def at_least(self, n: int, target) -> bool:
        """``tau(n) >= target``."""
        with mpmath.workdps(PRECISION_DPS):
            return self(n) >= target

    def check_increasing(self, lo: int, hi: int, samples: int = 64) -> None:
        """Spot-check monotonicity at geometrically spaced points of [lo, hi]."""
        if lo < 1 or hi < lo:
            raise InvalidArgumentError(f"bad range [{lo}, {hi}]")
        pts = sorted({lo, hi} | {int(lo * (hi / lo) ** (i / samples)) for i in range(samples + 1)})
        with mpmath.workdps(PRECISION_DPS):
            vals = [self(n) for n in pts if lo <= n <= hi]
        for a, b in zip(vals, vals[1:]):
            if b < a:
                raise InvalidTauError(f"τ not increasing on [{lo}, {hi}]")
        if not vals[-1] > vals[0] and hi > lo:
            raise InvalidTauError(f"τ does not grow on [{lo}, {hi}]")


@dataclass(frozen=True)
class LogLog(TauFunction):
    """``tau(n) = log log(n + 3)``, natural logarithms unless ``base`` is set."""

    base: Optional[float] = None
    kind = "loglog"

    def __call__(self, n):
        with mpmath.workdps(PRECISION_DPS):
            x = mpmath.mpf(n) + 3
            if self.base is None:
                return mpmath.log(mpmath.log(x))
            b = mpmath.mpf(self.base)
            return mpmath.log(mpmath.log(x, b), b)


@dataclass(frozen=True)
class TableTau(TauFunction):
    """Step interpolation through ``(n, tau)`` points: ``tau(n)`` is the value
    of the last point at or before n (the first value below the first point)."""

    points: tuple
    kind = "table"

    def __post_init__(self):
        pts = tuple((int(n), Fraction(str(v))) for n, v in self.points)
        problems = table_problems(pts)
        if problems:
            raise InvalidTauError("; ".join(problems))
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_ns", [n for n, _ in pts])

    def __call__(self, n):
        i = bisect.bisect_right(self._ns, n) - 1
        return self.points[max(i, 0)][1]

    def at_least(self, n, target):
        return self(n) >= Fraction(target)

    @property
    def limit(self):
        return self.points[-1][1]


def table_problems(points) -> list:
    problems = []
    if not points:
        return ["τ table is empty"]
    ns = [n for n, _ in points]
    vs = [v for _, v in points]
    if ns[0] < 1:
        problems.append("τ table points must start at n >= 1")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        problems.append("τ table n values not strictly increasing")
    if any(b <= a for a, b in zip(vs, vs[1:])):
        problems.append("τ not increasing")
    return problems


@dataclass(frozen=True)
class ExpressionTau(TauFunction):
    """``tau`` given by an expression in n, evaluated with mpmath."""

    expr: Expr
    kind = "expression"

    def __post_init__(self):
        if not isinstance(self.expr, Expr):
            object.__setattr__(self, "expr", Expr(self.expr))

    def __call__(self, n):
        with mpmath.workdps(PRECISION_DPS):
            return self.expr.real_value(n=n)


# ---------------------------------------------------------------------------
# blocks


@dataclass(frozen=True)
class Block:
    m: int
    f: int
    n_star: int
    lo: int
    hi: int


@dataclass(frozen=True)
class Adjustment:
    """``N*_m`` raised from ``found`` to ``repaired`` so the blocks stay disjoint
    and ``N*_{m-1} + l_{m-1} < log_p N*_m``."""

    m: int
    found: int
    repaired: int


@dataclass(frozen=True)
class SemigroupSpec:
    p: int
    tau: Optional[TauFunction] = None
    l: Expr = field(default_factory=lambda: Expr("n"))
    m_max: Optional[int] = None
    exponents: Optional[tuple] = None
    blocks: Optional[tuple] = None
    adjustments: tuple = ()

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 2:
            raise InvalidArgumentError(f"p must be an integer >= 2, got {self.p!r}")
        if not isinstance(self.l, Expr):
            object.__setattr__(self, "l", Expr(self.l))
        if self.exponents is not None:
            exps = tuple(sorted({int(j) for j in self.exponents}))
            if exps and exps[0] < 0:
                raise InvalidArgumentError("exponents must be nonnegative")
            object.__setattr__(self, "exponents", exps)
        elif self.tau is None:
            raise InvalidArgumentError("a semigroup spec needs tau or explicit exponents")

    def l_at(self, n: int) -> int:
        v = self.l.int_value(n=n)
        if v < 1:
            raise InvalidArgumentError(f"l_{n} = {v} is not a positive integer")
        return v

    def f(self, m: int) -> int:
        return sum(self.l_at(n) for n in range(1, m + 1))

    @property
    def A(self) -> IntervalUnion:
        """The exponent set: explicit exponents, or the union of the blocks."""
        if self.exponents is not None:
            return IntervalUnion.from_elements(self.exponents)
        if self.blocks is None:
            raise InvalidArgumentError("blocks not built; call build_blocks first")
        return IntervalUnion(tuple((b.lo, b.hi) for b in self.blocks))

    def g(self, m: int) -> float:
        """``log_p N*_m`` as a float."""
        return math.log(self.blocks[m - 1].n_star) / math.log(self.p)


class _MonotoneProbe:
    """Evaluates ``tau(N) >= target`` and checks that probed values never decrease."""

    def __init__(self, tau):
        self.tau = tau
        self.seen = []

    def __call__(self, n, target):
        if not isinstance(self.tau, TableTau):
            with mpmath.workdps(PRECISION_DPS):
                v = self.tau(n)
            i = bisect.bisect_left([x for x, _ in self.seen], n)
            if i > 0 and v < self.seen[i - 1][1] or i < len(self.seen) and v > self.seen[i][1]:
                raise InvalidTauError(f"τ not increasing near n = {n}")
            self.seen.insert(i, (n, v))
            return v >= target
        return self.tau.at_least(n, target)


def least_reaching(tau, target, lo: int = 1, probe=None) -> int:
    """Least integer N >= lo with ``tau(N) >= target``: doubling then bisection."""
    probe = probe or _MonotoneProbe(tau)
    if isinstance(tau, TableTau) and tau.limit < target:
        raise InvalidTauError(f"τ table never reaches {target} (its largest value is {tau.limit})")
    if probe(lo, target):
        return lo
    below, hi = lo, max(lo * 2, lo + 1)
    while not probe(hi, target):
        if hi.bit_length() > MAX_SEARCH_BITS:
            raise BudgetExceededError(f"no N below 2^{MAX_SEARCH_BITS} has τ(N) >= {target}")
        below, hi = hi, hi * 2
    while hi - below > 1:
        mid = (below + hi) // 2
        if probe(mid, target):
            hi = mid
        else:
            below = mid
    return hi


def build_blocks(spec: SemigroupSpec, m_max: Optional[int] = None) -> SemigroupSpec:
    """Fill in blocks 1..m_max and record any compatibility repairs.

    Raises :class:`BudgetExceededError` (carrying the blocks built so far as
    ``partial``) when a block start would need more than ``MAX_REPAIR_BITS``
    bits.
    """
    m_max = spec.m_max if m_max is None else m_max
    if m_max is None or m_max < 0:
        raise InvalidArgumentError(f"m_max must be a nonnegative integer, got {m_max!r}")
    if spec.tau is None:
        raise InvalidArgumentError("build_blocks needs tau")
    probe = _MonotoneProbe(spec.tau)
    blocks, adjustments = [], []
    f = 0
    prev_l = 0
    for m in range(1, m_max + 1):
        lm = spec.l_at(m)
        if lm < prev_l:
            raise InvalidArgumentError(f"l_n must be nondecreasing: l_{m} = {lm} < l_{m - 1} = {prev_l}")
        prev_l = lm
        f += lm
        lo = blocks[-1].n_star if blocks else 1
        found = least_reaching(spec.tau, 1 + f, lo, probe)
        n_star = found
        if blocks:
            end = blocks[-1].hi
            if end > MAX_REPAIR_BITS / math.log2(spec.p):
                raise BudgetExceededError(
                    f"block {m} would start above {spec.p}^e with e a {end.bit_length()}-bit integer",
                    partial=tuple(blocks),
                )
            required = max(end + 1, spec.p**end + 1)
            if n_star < required:
                n_star = required
                adjustments.append(Adjustment(m, found, n_star))
        blocks.append(Block(m, f, n_star, n_star, n_star + lm))
    return replace(spec, m_max=m_max, blocks=tuple(blocks), adjustments=tuple(adjustments))


# ---------------------------------------------------------------------------
# generators and enumeration


def _exponents_up_to(spec: SemigroupSpec, N: int):
    """Elements j of A with ``p^j + 1 <= N``, ascending."""
    if N < 2:
        return []
    top = floor_log(N - 1, spec.p)
    if spec.exponents is not None:
        return [j for j in spec.exponents if j <= top]
    if spec.blocks is None:
        raise InvalidArgumentError("blocks not built; call build_blocks first")
    out = []
    for b in spec.blocks:
        if b.lo > top:
            break
        out.extend(range(b.lo, min(b.hi, top) + 1))
    return out


def generators_up_to(spec: SemigroupSpec, N: int) -> list:
    """``p`` together with every ``p^j + 1 <= N`` for j in A, ascending."""
    gens = {spec.p} if spec.p <= N else set()
    gens.update(spec.p**j + 1 for j in _exponents_up_to(spec, N))
    return sorted(gens)


def _check_generators(generators):
    gens = sorted({int(g) for g in generators})
    if not gens:
        raise InvalidArgumentError("at least one generator is required")
    if gens[0] < 2:
        raise InvalidArgumentError(f"generators must be >= 2, got {gens[0]}")
    return gens


def enumerate_semigroup(
    generators: Sequence[int], N: int, budget: int = DEFAULT_ELEMENT_BUDGET, stats: Optional[dict] = None
) -> list:
    """All products of one or more generators that are ``<= N``, ascending.

    Each heap entry ``(x, i)`` remembers the largest generator index used, and
    only extends by generators of index ``>= i``; values reached by several
    factorisations are emitted once.  If ``stats`` is given it receives the
    total number of heap entries allocated under ``"pushes"``.
    """
    gens = _check_generators(generators)
    heap = [(g, i) for i, g in enumerate(gens) if g <= N]
    heapq.heapify(heap)
    pushes = len(heap)
    out = []
    last = 0
    while heap:
        x, i = heapq.heappop(heap)
        if x == last:
            continue  # the first pop of x had the smallest index, so its children cover these
        if x < last:
            raise AssertionError("heap emitted elements out of order")
        last = x
        out.append(x)
        if len(out) > budget:
            raise BudgetExceededError(f"more than {budget} elements up to {N}", partial=len(out))
        for k in range(i, len(gens)):
            y = x * gens[k]
            if y > N:
                break
            heapq.heappush(heap, (y, k))
            pushes += 1
    if stats is not None:
        stats["pushes"] = pushes
    return out


def count_semigroup(generators, N: int, budget: int = DEFAULT_ELEMENT_BUDGET) -> int:
    return len(enumerate_semigroup(generators, N, budget))


@dataclass(frozen=True)
class GrowthReport:
    N: int
    count: int
    bound: object
    exponent: Optional[float]
    passed: bool
    tau_value: object
    generators: tuple

    @property
    def bound_float(self) -> float:
        return float(self.bound)


def _exponent(count, N):
    if count < 1 or N < 2:
        return None
    return math.log(count) / math.log(N)


def growth_bound(spec: SemigroupSpec, N: int):
    """``(log_p N)^tau(N) = exp(tau(N) ln(log_p N))`` at ``PRECISION_DPS`` digits."""
    with mpmath.workdps(PRECISION_DPS):
        t = spec.tau(N)
        t = mpmath.mpf(t.numerator) / t.denominator if isinstance(t, Fraction) else mpmath.mpf(t)
        lp = mpmath.log(N) / mpmath.log(spec.p)
        if lp <= 0:
            return t, mpmath.mpf(0)
        return t, mpmath.exp(t * mpmath.log(lp))


def verify_growth_bound(spec: SemigroupSpec, N: int, budget: int = DEFAULT_ELEMENT_BUDGET) -> GrowthReport:
    if spec.tau is None:
        raise InvalidArgumentError("the growth bound needs tau")
    if N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    gens = generators_up_to(spec, N)
    count = count_semigroup(gens, N, budget) if gens else 0
    t, bound = growth_bound(spec, N)
    return GrowthReport(N, count, bound, _exponent(count, N), count <= bound, t, tuple(gens))


def _next_start_exceeds(spec: SemigroupSpec, N: int) -> bool:
    # N*_{m+1} = max(search, end + 1, p^end + 1), each compared with N without materialising
    m = len(spec.blocks)
    end = spec.blocks[-1].hi if spec.blocks else 0
    if spec.blocks and (end + 1 > N or end > floor_log(max(N - 1, 1), spec.p) or N == 1):
        return True
    return not spec.tau.at_least(N, 1 + spec.f(m + 1))


def block_index(spec: SemigroupSpec, N: int) -> int:
    """The m with ``N*_m <= N < N*_{m+1}`` (0 below the first block)."""
    if spec.blocks is None:
        raise InvalidArgumentError("blocks not built; call build_blocks first")
    m = sum(1 for b in spec.blocks if b.n_star <= N)
    if m == len(spec.blocks) and not _next_start_exceeds(spec, N):
        raise InvalidArgumentError(f"N = {N} lies beyond block {m}; build more blocks")
    return m


def combinatorial_bound(spec: SemigroupSpec, N: int) -> int:
    """``ceil(log_p N)^(1 + f(m))`` for the block region m containing N.

    With explicit exponents, ``f(m)`` is replaced by the number of j in A with
    ``p^j + 1 <= N``.
    """
    if N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    if spec.exponents is not None:
        e = 1 + len(_exponents_up_to(spec, N))
    else:
        e = 1 + spec.f(block_index(spec, N))
    return ceil_log(N, spec.p) ** e


def growth_exponent_series(generators, Ns, budget: int = DEFAULT_ELEMENT_BUDGET) -> list:
    """``(N, count, ln count / ln N)`` for each N from a single enumeration."""
    gens = _check_generators(generators)
    Ns = [int(n) for n in Ns]
    if not Ns:
        raise InvalidArgumentError("no N values given")
    if any(b < a for a, b in zip(Ns, Ns[1:])):
        raise InvalidArgumentError("N values must be ascending")
    elems = enumerate_semigroup(gens, Ns[-1], budget)
    out = []
    for N in Ns:
        c = bisect.bisect_right(elems, N)
        out.append((N, c, _exponent(c, N)))
    return out
