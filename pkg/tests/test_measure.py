import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from timesp import (
    Atomic,
    BigFrequency,
    DigitBernoulli,
    FourierTable,
    InvalidArgumentError,
    InvalidMeasureError,
    Lebesgue,
    OutOfRangeError,
    UnsupportedVariantError,
    fourier_coeff,
    fourier_coeff_at,
    invariance_defect,
    normalize,
    pushforward,
    support_root_test,
)
from timesp.corpus import MEASURES

ORBIT13 = Atomic.uniform([Fraction(1, 3), Fraction(2, 3)])
CANTOR = DigitBernoulli(3, (Fraction(1, 2), 0, Fraction(1, 2)))


@st.composite
def atomic_measures(draw, max_den=24, max_atoms=5):
    n = draw(st.integers(1, max_atoms))
    atoms = []
    for _ in range(n):
        d = draw(st.integers(1, max_den))
        a = draw(st.integers(0, d - 1))
        w = draw(st.integers(1, 9))
        atoms.append((Fraction(a, d), Fraction(w)))
    return normalize(Atomic(tuple(atoms)))


@st.composite
def digit_measures(draw):
    base = draw(st.integers(2, 5))
    ws = draw(st.lists(st.integers(0, 4), min_size=base, max_size=base).filter(any))
    total = sum(ws)
    return DigitBernoulli(base, tuple(Fraction(w, total) for w in ws))


any_measure = st.one_of(atomic_measures(), digit_measures(), st.just(Lebesgue()))


# examples


def test_orbit13_coefficients():
    for k in range(-12, 13):
        c = fourier_coeff(ORBIT13, k)
        assert abs(c.value - complex(oracles.orbit13_coeff(k))) <= 1e-15
        assert c.err <= 1e-14


def test_lebesgue_and_dirac():
    assert fourier_coeff(Lebesgue(), 0).value == 1
    assert fourier_coeff(Lebesgue(), 7).value == 0
    for k in (-5, 0, 3, 10**30):
        assert fourier_coeff(Atomic.dirac(0), k).value == 1


def test_cantor_first_coefficient_matches_product():
    c = fourier_coeff(CANTOR, 1)
    ref = oracles.digit_bernoulli_coeff(3, (Fraction(1, 2), 0, Fraction(1, 2)), 1)
    assert abs(c.value - ref) <= max(c.err, 1e-14)
    assert abs(fourier_coeff(CANTOR, -1).value - ref.conjugate()) <= c.err


def test_support_root_examples():
    assert support_root_test(ORBIT13, 3) == 1
    assert support_root_test(ORBIT13, 1) is None
    for k in (1, -4, 99):
        assert support_root_test(Atomic.dirac(0), k) == 1
    with pytest.raises(InvalidArgumentError):
        support_root_test(ORBIT13, 0)
    with pytest.raises(UnsupportedVariantError):
        support_root_test(Lebesgue(), 1)


def test_pushforward_orbit13_is_invariant():
    assert pushforward(ORBIT13, 2) == normalize(ORBIT13)
    assert pushforward(ORBIT13, 3) == Atomic.dirac(0)


def test_invariance_defect_examples():
    assert invariance_defect(ORBIT13, 2) <= 1e-12
    assert invariance_defect(ORBIT13, 3) == pytest.approx(1.5, abs=1e-12)
    assert invariance_defect(Lebesgue(), 5) == 0
    assert invariance_defect(MEASURES["bernoulli34"], 2) <= 1e-10
    assert invariance_defect(Atomic.dirac(Fraction(1, 2)), 2) > 1


def test_rejects_bad_measures():
    with pytest.raises(InvalidMeasureError):
        Atomic(((0.5, Fraction(1)),))
    with pytest.raises(InvalidMeasureError):
        DigitBernoulli(1, (Fraction(1),))
    with pytest.raises(InvalidMeasureError):
        FourierTable((0.5,))
    with pytest.raises(InvalidArgumentError):
        BigFrequency(1, 1, 3, 0)
    with pytest.raises(InvalidArgumentError):
        BigFrequency(1, 2, -1, 0)


def test_fourier_table_range():
    t = FourierTable((1, 0.5, 0.25j))
    assert fourier_coeff(t, -2).value == -0.25j
    with pytest.raises(OutOfRangeError):
        fourier_coeff(t, 3)
    with pytest.raises(OutOfRangeError):
        fourier_coeff_at(t, BigFrequency(1, 2, 10, 0))


# properties


@given(any_measure, st.integers(-1000, 1000))
def test_hermitian_symmetry(mu, k):
    a = fourier_coeff(mu, k)
    b = fourier_coeff(mu, -k)
    assert abs(a.value - b.value.conjugate()) <= 2 * max(a.err, b.err) + 1e-15


@given(any_measure, st.integers(-1000, 1000))
def test_boundedness(mu, k):
    c = fourier_coeff(mu, k)
    assert abs(c.value) <= 1 + c.err


@given(atomic_measures(), st.integers(-200, 200).filter(bool))
def test_support_root_iff_unit_modulus(mu, k):
    c = support_root_test(mu, k)
    assert (c is not None) == (abs(fourier_coeff(mu, k).value) >= 1 - 1e-12)
    if c is not None:
        assert abs(fourier_coeff(mu, k).value - c) <= 1e-12


@given(atomic_measures(), st.integers(-30, 30), st.integers(-1000, 1000))
def test_pushforward_fourier_identity(mu, q, k):
    assert fourier_coeff(pushforward(mu, q), k).value == fourier_coeff(mu, q * k).value


@given(atomic_measures(max_den=12, max_atoms=3), st.integers(-50, 50))
def test_atomic_against_mpmath(mu, k):
    assert abs(fourier_coeff(mu, k).value - oracles.atomic_coeff(mu.atoms, k)) <= 1e-13


@given(digit_measures(), st.integers(-300, 300))
def test_digit_bernoulli_against_mpmath(mu, n):
    c = fourier_coeff(mu, n)
    ref = oracles.digit_bernoulli_coeff(mu.base, mu.weights, n)
    assert abs(c.value - ref) <= c.err + 1e-15
    assert c.err <= 1e-10


# big frequencies

GRID = [(k, l, p, j) for p in (2, 3, 10) for j in range(31) for k in range(-8, 9) for l in range(-8, 9)]


@pytest.mark.parametrize("name", ["orbit13", "orbit15", "orbit17", "dirac0", "lebesgue"])
def test_big_frequency_grid_exact_measures(name):
    mu = MEASURES[name]
    atoms = mu.atoms if isinstance(mu, Atomic) else None
    worst = 0.0
    for k, l, p, j in GRID:
        n = k * p**j + l
        got = fourier_coeff_at(mu, BigFrequency(k, p, j, l)).value
        direct = fourier_coeff(mu, n).value
        worst = max(worst, abs(got - direct))
        if atoms is not None and j % 7 == 0 and k in (-8, -1, 1, 5) and l in (-3, 0, 2):
            assert abs(got - oracles.atomic_coeff(atoms, n)) <= 1e-12
    assert worst <= 1e-12


def test_big_frequency_grid_digit_bernoulli():
    mu = MEASURES["bernoulli34"]
    ws = mu.weights
    for k, l, p, j in GRID[::97]:
        n = k * p**j + l
        got = fourier_coeff_at(mu, BigFrequency(k, p, j, l))
        assert abs(got.value - oracles.digit_bernoulli_coeff(2, ws, n)) <= got.err + 1e-12


def test_big_frequency_modular_path_huge_exponent():
    mu = MEASURES["orbit17"]
    freq = BigFrequency(3, 2, 10**6, 5)
    r = (3 * pow(2, 10**6, 7) + 5) % 7
    assert fourier_coeff_at(mu, freq).value == fourier_coeff(mu, r).value


# Monte Carlo


def test_cantor_monte_carlo():
    ws = (Fraction(1, 2), 0, Fraction(1, 2))
    ns = [n for n in range(-20, 21) if n]
    mc = oracles.monte_carlo_coeff(3, ws, ns)
    for n in ns:
        mean, se = mc[n]
        c = fourier_coeff(CANTOR, n)
        assert abs(c.value - mean) <= 3 * se + c.err, n
        # the exact tail bound from the product
        assert c.err <= 1e-10


def test_phase_helpers_unit_modulus():
    for k in (1, 2, 5, 17):
        assert abs(abs(fourier_coeff(Atomic.dirac(Fraction(1, 7)), k).value) - 1) <= 1e-15
        assert cmath.isclose(
            fourier_coeff(Atomic.dirac(Fraction(1, 4)), k).value, 1j**k, abs_tol=1e-15
        )
