import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from timesp import FourierTable, InitialSegments, Lebesgue, classify, dichotomy_check, invariance_scan, rigidity_verdict
from timesp.corpus import MEASURES, orbit_measure
from timesp.errors import InvalidArgumentError
from timesp.folner import remark_blocks, tail_windows
from timesp.measure import normalize
from timesp.rigidity import ATOMIC, CONTRADICTION, LEBESGUE, NOT_MET, looks_atomic

ORBIT13 = MEASURES["orbit13"]


def test_scan_examples():
    assert invariance_scan(Lebesgue(), 2, 1, 32, K=64, eps=1e-9).A.intervals == ((0, 32),)
    assert invariance_scan(MEASURES["dirac0"], 3, 2, 16, K=32, eps=1e-9).A.intervals == ((0, 16),)
    s = invariance_scan(ORBIT13, 2, 1, 32, K=16, eps=1e-9)
    assert list(s.A.elements()) == list(range(0, 33, 2))
    rows = s.rows()
    assert rows[5][1] == 2**5 + 1 and rows[5][3] is False


def test_scan_rejects_zero_shift():
    with pytest.raises(InvalidArgumentError):
        invariance_scan(ORBIT13, 2, 0, 8)


@st.composite
def invariant_atomic(draw, max_d=60):
    # uniform measure on the x p orbit of 1/d
    p = draw(st.sampled_from([2, 3, 5]))
    d = draw(st.integers(2, max_d).filter(lambda d: math.gcd(d, p) == 1))
    m = orbit_measure(d, p)
    return p, m


@given(invariant_atomic(), st.sampled_from([-3, -1, 1, 2, 4]), st.integers(4, 32))
def test_scan_matches_pushforward(pm, l, j_max):
    p, mu = pm
    s = invariance_scan(mu, p, l, j_max, K=int(mu.denominator_lcm) + 1)
    target = {x: w for x, w in normalize(mu).atoms}
    for j in range(j_max + 1):
        exact = oracles.pushforward_atoms(mu.atoms, p**j + l) == target
        assert s.A.contains(j) == exact, j


@settings(max_examples=25)
@given(invariant_atomic(max_d=30), st.sampled_from([-2, -1, 1, 3]))
def test_scan_period_divides_order(pm, l):
    p, mu = pm
    d = mu.denominator_lcm
    t = oracles.multiplicative_order(p, d)
    j_max = 2 * t + 1
    s = invariance_scan(mu, p, l, j_max, K=d + 1)
    member = [s.A.contains(j) for j in range(j_max + 1)]
    assert all(member[j] == member[j + t] for j in range(j_max + 1 - t))


def test_dichotomy_examples():
    assert dichotomy_check(MEASURES["dirac0"]) == "dirac-like"
    assert dichotomy_check(Lebesgue()) == "lebesgue-like"
    assert dichotomy_check(ORBIT13) == "neither"


def test_verdict_lebesgue():
    scan = invariance_scan(Lebesgue(), 2, 1, 32, K=64)
    v = rigidity_verdict(Lebesgue(), scan, InitialSegments(), classify(Lebesgue(), 2))
    assert 1 in v.hypotheses_met
    assert v.conclusion == LEBESGUE


def test_verdict_orbit13_not_met():
    scan = invariance_scan(ORBIT13, 2, 1, 32, K=16)
    v = rigidity_verdict(ORBIT13, scan, InitialSegments(), classify(ORBIT13, 2))
    assert v.conclusion == NOT_MET
    assert not v.hypothesis_met
    # stages [0, n-1] inside [0, 32]; even n give exactly 1/2
    assert v.density.ratios[-1] == Fraction(17, 33)
    assert all(r == Fraction(1, 2) for n, r in zip(v.density.stages, v.density.ratios) if n % 2 == 0)


@pytest.mark.parametrize("sigma", [InitialSegments(), tail_windows(), remark_blocks()])
def test_verdict_dirac(sigma):
    mu = MEASURES["dirac0"]
    scan = invariance_scan(mu, 2, 1, 32)
    v = rigidity_verdict(mu, scan, sigma, classify(mu, 2))
    assert 3 in v.hypotheses_met
    assert v.conclusion == ATOMIC


def test_verdict_parameter_mismatch():
    scan = invariance_scan(ORBIT13, 2, 1, 8)
    with pytest.raises(InvalidArgumentError):
        rigidity_verdict(ORBIT13, scan, InitialSegments(), classify(MEASURES["dirac0"], 3))


def test_verdict_prints_surrogates():
    scan = invariance_scan(Lebesgue(), 2, 1, 8)
    v = rigidity_verdict(Lebesgue(), scan, InitialSegments(), classify(Lebesgue(), 2))
    assert set(v.surrogates) == {1, 2, 3}
    assert all(v.surrogates.values())


def test_wiener_heuristic_on_tables():
    atomic_like = FourierTable(tuple([1] + [(-0.5) if k % 3 else 1 for k in range(1, 65)]))
    flat = FourierTable(tuple([1] + [0] * 64))
    assert looks_atomic(atomic_like)
    assert not looks_atomic(flat)


@pytest.mark.parametrize("name", sorted(MEASURES))
def test_no_contradiction_over_corpus(name):
    mu = MEASURES[name]
    report = classify(mu, 2)
    for l in (1, -1, 2, 3):
        scan = invariance_scan(mu, 2, l, 32)
        for sigma in (InitialSegments(), tail_windows(), remark_blocks()):
            assert rigidity_verdict(mu, scan, sigma, report).conclusion != CONTRADICTION
