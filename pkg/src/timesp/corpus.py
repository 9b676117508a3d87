"""Bundled measures, Følner sequences, subsets and semigroup specs.

These are the objects the test suite, the scripts and the CLI refer to by
name.  Periodic-orbit measures are uniform on the orbit of ``1/d`` under
``x -> 2x``.
"""

from fractions import Fraction

from .folner import BlockUnion, InitialSegments, Progression, remark_blocks, tail_windows
from .measure import Atomic, DigitBernoulli, Lebesgue
from .semigroup import LogLog, SemigroupSpec, TableTau


def orbit_measure(d: int, p: int = 2) -> Atomic:
    """Uniform measure on the ``x p`` orbit of ``1/d``."""
    x = Fraction(1, d)
    orbit = []
    while x not in orbit:
        orbit.append(x)
        x = (p * x) % 1
    start = orbit.index(x)
    return Atomic.uniform(orbit[start:])


MEASURES = {
    "lebesgue": Lebesgue(),
    "dirac0": Atomic.dirac(0),
    "orbit13": Atomic.uniform([Fraction(1, 3), Fraction(2, 3)]),
    "orbit15": orbit_measure(5),
    "orbit17": orbit_measure(7),
    "bernoulli34": DigitBernoulli(2, (Fraction(3, 4), Fraction(1, 4))),
}

# invariant atomic measures with an atom of weight strictly between 0 and 1
WALTERS_CASES = ("orbit13", "orbit15", "orbit17")

FOLNER = {
    "initial": InitialSegments(0),
    "initial@1": InitialSegments(1),
    "tail": tail_windows(),
    "blocks": remark_blocks(),
}

SUBSETS = {
    "pow2blocks": BlockUnion("2^n", "n", 1),
    "evens": Progression(0, 2, 0),
    "odds": Progression(1, 2, 0),
}

SEMIGROUPS = {
    "loglog": SemigroupSpec(2, LogLog(), "n", 1),
    "loglog2": SemigroupSpec(2, LogLog(), "n", 2),
    "table-identity": SemigroupSpec(2, TableTau(tuple((n, n) for n in range(1, 65))), "1", 2),
    "table-sqrt": SemigroupSpec(
        2, TableTau(tuple((n * n, n) for n in range(1, 65))), "1", 3
    ),
    "explicit-1": SemigroupSpec(2, None, "n", None, (1,)),
    "explicit-3-12": SemigroupSpec(3, None, "n", None, (1, 2)),
}

KINDS = {"measure": MEASURES, "folner": FOLNER, "subset": SUBSETS, "semigroup": SEMIGROUPS}
