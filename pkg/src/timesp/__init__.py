"""Computable objects around x p invariant measures on the circle.

Fourier coefficients of measures (``measure``), densities along Følner
sequences (``folner``), mixing-hierarchy statistics (``mixing``), invariance
scans and rigidity verdicts (``rigidity``), and the sparse semigroup with its
growth bound (``semigroup``).
"""

from .errors import (
    BudgetExceededError,
    ComputationError,
    HorizonExceededError,
    InvalidArgumentError,
    InvalidMeasureError,
    InvalidTauError,
    NotApplicableError,
    OutOfRangeError,
    SpecError,
    TimespError,
    UnsupportedVariantError,
    ValidationError,
)
from .folner import (
    ExplicitList,
    InitialSegments,
    ShiftedIntervals,
    densities,
    folner_defect,
    restrict_to_union,
)
from .measure import (
    Atomic,
    BigFrequency,
    ComplexWithError,
    DigitBernoulli,
    FourierTable,
    Lebesgue,
    fourier_coeff,
    fourier_coeff_at,
    invariance_defect,
    normalize,
    pushforward,
    support_root_test,
)
from .mixing import (
    ClassifyParams,
    classify,
    ergodic_average,
    exactness_defect,
    strong_mixing_tail,
    walters_set_average,
    weak_mixing_average,
)
from .rigidity import dichotomy_check, invariance_scan, rigidity_verdict
from .semigroup import (
    LogLog,
    SemigroupSpec,
    TableTau,
    build_blocks,
    combinatorial_bound,
    enumerate_semigroup,
    generators_up_to,
    growth_exponent_series,
    verify_growth_bound,
)

__version__ = "0.1.0"
