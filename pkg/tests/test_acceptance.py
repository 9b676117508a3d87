"""Acceptance criteria; one test per criterion, summarised as PASS/FAIL lines."""

import random
import time
from fractions import Fraction

import pytest

import oracles
from timesp import (
    BigFrequency,
    InitialSegments,
    build_blocks,
    classify,
    combinatorial_bound,
    densities,
    enumerate_semigroup,
    ergodic_average,
    fourier_coeff,
    fourier_coeff_at,
    generators_up_to,
    growth_exponent_series,
    invariance_scan,
    rigidity_verdict,
    strong_mixing_tail,
    verify_growth_bound,
    walters_set_average,
    weak_mixing_average,
)
from timesp.corpus import MEASURES, SEMIGROUPS, WALTERS_CASES
from timesp.folner import BlockUnion, remark_blocks, tail_windows
from timesp.mixing import stage_profile, walters_lower_bound
from timesp.rigidity import CONTRADICTION, NOT_MET
from timesp.semigroup import count_semigroup

criterion = pytest.mark.criterion


@criterion(1, "density of the power-of-two blocks: 0 along initial segments, 1 along the blocks")
def test_block_density_depends_on_folner_sequence():
    t0 = time.perf_counter()
    A = BlockUnion("2^n", "n", 1)
    r = densities(A, InitialSegments(1), 20, schedule="dyadic")
    r2 = densities(A, remark_blocks(), 20)
    elapsed = time.perf_counter() - t0
    assert len(r.ratios) == 20
    assert r.final <= Fraction(2, 100)
    tail = r.ratios[len(r.ratios) // 2:]
    assert all(b < a for a, b in zip(tail, tail[1:]))
    assert r.verdict().startswith("density 0")
    assert all(x == 1 for x in r2.ratios)
    assert r2.verdict() == "density 1"
    assert elapsed < 1.0


def _orbit13_ergodic_closed_form(k, l, n):
    # initial segment [0, n-1]: ceil(n/2) even j with 2^j = 1 mod 3, floor(n/2) odd j with 2^j = 2
    even, odd = (n + 1) // 2, n // 2
    return (even * oracles.orbit13_coeff(k + l) + odd * oracles.orbit13_coeff(2 * k + l)) / Fraction(n)


@criterion(2, "orbit {1/3, 2/3} statistics match closed forms")
def test_orbit13_statistics_exact():
    mu = MEASURES["orbit13"]
    sigma = InitialSegments()
    grid = [(k, l, n) for k in range(-8, 9) for l in range(-8, 9) for n in range(1, 257)]
    t0 = time.perf_counter()
    got = [ergodic_average(mu, 2, k, l, sigma, n).value for k, l, n in grid]
    weak = weak_mixing_average(mu, 2, 1, 1, sigma, 256)
    strong = strong_mixing_tail(mu, 2, 1, 1, 10, 60)
    elapsed = time.perf_counter() - t0
    worst = max(abs(g - float(_orbit13_ergodic_closed_form(k, l, n))) for g, (k, l, n) in zip(got, grid))
    assert worst <= 1e-12
    assert abs(weak - 9 / 16) <= 1e-12
    assert abs(strong - 3 / 4) <= 1e-12
    assert elapsed < 5.0


@criterion(3, "mixing hierarchy and the Cauchy-Schwarz relation across the corpus")
def test_mixing_hierarchy_over_corpus():
    for name, mu in MEASURES.items():
        r = classify(mu, 2)
        assert not r.strongly_mixing_consistent or r.weakly_mixing_consistent, name
        assert not r.weakly_mixing_consistent or r.ergodic_consistent, name
        stages = range(1, r.params.n_stages + 1)
        for k in (-2, -1, 1, 2):
            for l in (-2, 0, 1, 2):
                t_err = fourier_coeff(mu, k).err + fourier_coeff(mu, l).err
                for s in stage_profile(mu, 2, k, l, r.params.sigma, stages):
                    slack = 4 * (s.ergodic.err + t_err) + 1e-12
                    assert s.deviation**2 <= s.weak + slack, (name, k, l, s.n)


@criterion(4, "atoms obstruct weak mixing: averaged set correlations stay above the weight bound")
def test_walters_average_over_corpus():
    assert walters_set_average(MEASURES["orbit13"], 2, 100) == Fraction(1, 16)
    for name in WALTERS_CASES:
        mu = MEASURES[name]
        for _, lam in mu.atoms:
            assert 0 < lam < 1
            bound = walters_lower_bound(lam)
            assert bound > 0
            assert walters_set_average(mu, 2, 100) >= bound, name


@criterion(5, "rigidity harness: no contradictions; orbit {1/3, 2/3} fails the density hypothesis")
def test_rigidity_harness():
    for name, mu in MEASURES.items():
        report = classify(mu, 2)
        for l in (1, -1, 2, 3):
            scan = invariance_scan(mu, 2, l, 32)
            for sigma in (InitialSegments(), tail_windows(), remark_blocks()):
                assert rigidity_verdict(mu, scan, sigma, report).conclusion != CONTRADICTION, (name, l, sigma)

    mu = MEASURES["orbit13"]
    scan = invariance_scan(mu, 2, 1, 32, K=16)
    assert list(scan.A.elements()) == list(range(0, 33, 2))
    v = rigidity_verdict(mu, scan, InitialSegments(), classify(mu, 2))
    even_stages = [r for n, r in zip(v.density.stages, v.density.ratios) if n % 2 == 0]
    assert even_stages and all(r == Fraction(1, 2) for r in even_stages)
    assert v.conclusion == NOT_MET
    for name in ("lebesgue", "dirac0"):
        assert invariance_scan(MEASURES[name], 2, 1, 32).A.intervals == ((0, 32),)


@criterion(6, "semigroup enumeration equals brute-force closure")
def test_semigroup_oracle_equivalence():
    rng = random.Random(20240601)
    t0 = time.perf_counter()
    for _ in range(25):
        gens = rng.sample(range(2, 51), rng.randint(2, 4))
        assert enumerate_semigroup(gens, 10**5) == oracles.closure(set(gens), 10**5), gens
    assert enumerate_semigroup([2, 3], 100) == [2, 3, 4, 6, 8, 9, 12, 16, 18, 24, 27, 32, 36, 48, 54, 64, 72, 81, 96]
    assert time.perf_counter() - t0 < 10.0


@criterion(7, "sparse semigroup for tau = log log (n + 3): blocks, count and growth bound")
def test_loglog_growth_bound():
    t0 = time.perf_counter()
    spec = build_blocks(SEMIGROUPS["loglog"])
    gens = generators_up_to(spec, 10**6)
    report = verify_growth_bound(spec, 10**6)
    series = growth_exponent_series(generators_up_to(spec, 10**7), [10**e for e in range(3, 8)])
    elapsed = time.perf_counter() - t0
    assert spec.blocks[0].n_star == oracles.least_loglog(2)
    assert gens == [2]
    assert report.count == 19
    assert report.passed and report.bound_float >= 1000
    exps = [e for _, _, e in series]
    assert all(b < a for a, b in zip(exps, exps[1:]))
    assert elapsed < 1.0


def _corpus_Ns(spec):
    rng = random.Random(spec.p)
    Ns = {2, 3, 7, 10, 100, 1000, 1616, 1617, 10**4, 10**5, 10**6} | {rng.randrange(2, 10**6) for _ in range(30)}
    Ns |= {spec.p**e for e in range(1, 20)}
    return sorted(Ns)


@criterion(8, "the counting bound dominates the enumerated count")
def test_combinatorial_bound_dominates():
    blocks = {"table-identity": 3}
    for name, spec in SEMIGROUPS.items():
        if spec.tau is not None:
            spec = build_blocks(spec, blocks.get(name))
        for N in _corpus_Ns(spec):
            gens = generators_up_to(spec, N)
            count = count_semigroup(gens, N) if gens else 0
            assert count <= combinatorial_bound(spec, N), (name, N)


@criterion(9, "big-frequency coefficients: modular path equals the materialised integer")
def test_big_frequency_paths():
    worst = 0.0
    for name, mu in MEASURES.items():
        for p in (2, 3, 10):
            for j in range(31):
                for k in range(-8, 9):
                    for l in range(-8, 9):
                        a = fourier_coeff_at(mu, BigFrequency(k, p, j, l)).value
                        b = fourier_coeff(mu, k * p**j + l).value
                        worst = max(worst, abs(a - b))
    assert worst <= 1e-12

    mu = MEASURES["orbit17"]
    times = []
    for i in range(20):
        freq = BigFrequency(3 + i, 2, 10**6 + i, 5 - i)
        t0 = time.perf_counter()
        v = fourier_coeff_at(mu, freq).value
        times.append(time.perf_counter() - t0)
        r = ((3 + i) * pow(2, 10**6 + i, 7) + 5 - i) % 7
        assert abs(v - oracles.atomic_coeff(mu.atoms, r)) <= 1e-12
    assert max(times) < 0.01
