import math
import random

import pytest
from hypothesis import given, strategies as st

import oracles
from timesp import (
    LogLog,
    TableTau,
    build_blocks,
    combinatorial_bound,
    enumerate_semigroup,
    generators_up_to,
    growth_exponent_series,
    verify_growth_bound,
)
from timesp.corpus import SEMIGROUPS
from timesp.errors import BudgetExceededError, InvalidArgumentError, InvalidTauError
from timesp.semigroup import count_semigroup, least_reaching

SMOOTH_3 = [2, 3, 4, 6, 8, 9, 12, 16, 18, 24, 27, 32, 36, 48, 54, 64, 72, 81, 96]


def built(name, m_max=None):
    spec = SEMIGROUPS[name]
    return spec if spec.exponents is not None else build_blocks(spec, m_max)


# enough blocks that the next block starts above every N in the sweeps
SWEEP_BLOCKS = {"table-identity": 3}


def test_enumeration_examples():
    assert enumerate_semigroup([2, 3], 100) == SMOOTH_3
    assert enumerate_semigroup([2, 3], 100) == oracles.smooth_sieve([2, 3], 100)
    assert enumerate_semigroup([2], 100) == [2, 4, 8, 16, 32, 64]
    assert enumerate_semigroup([5, 7], 35) == [5, 7, 25, 35]


def test_enumeration_rejects():
    with pytest.raises(InvalidArgumentError):
        enumerate_semigroup([], 10)
    with pytest.raises(InvalidArgumentError):
        enumerate_semigroup([1, 2], 10)
    with pytest.raises(BudgetExceededError) as e:
        enumerate_semigroup([2, 3], 10**6, budget=50)
    assert e.value.partial == 51


@given(st.lists(st.integers(2, 50), min_size=1, max_size=4), st.integers(1, 20000))
def test_enumeration_matches_closure(gens, N):
    stats = {}
    got = enumerate_semigroup(gens, N, stats=stats)
    assert got == oracles.closure(set(gens), N)
    assert all(a < b for a, b in zip(got, got[1:]))
    assert stats["pushes"] <= len(got) + len(set(gens)) * len(got) or not got


@given(st.lists(st.integers(2, 30), min_size=1, max_size=3), st.integers(2, 30), st.integers(1, 3000), st.integers(1, 3000))
def test_count_monotone(gens, extra, n1, n2):
    lo, hi = sorted((n1, n2))
    assert count_semigroup(gens, lo) <= count_semigroup(gens, hi)
    assert count_semigroup(gens, hi) <= count_semigroup(gens + [extra], hi)


def test_loglog_first_block_matches_scan():
    n_star = oracles.least_loglog(2)
    spec = build_blocks(SEMIGROUPS["loglog"])
    b = spec.blocks[0]
    assert (b.m, b.f, b.n_star, b.lo, b.hi) == (1, 1, n_star, n_star, n_star + 1)
    assert n_star == 1616
    assert least_reaching(LogLog(), 2) == 1616


def test_loglog_second_block_repaired():
    spec = build_blocks(SEMIGROUPS["loglog2"])
    (adj,) = spec.adjustments
    assert adj.m == 2 and adj.found < adj.repaired == 2**1617 + 1
    # the unrepaired start is the least N with ln ln(N + 3) >= 4
    assert LogLog()(adj.found) >= 4 > LogLog()(adj.found - 1)


def test_loglog_third_block_over_budget():
    with pytest.raises(BudgetExceededError) as e:
        build_blocks(SEMIGROUPS["loglog"], 3)
    assert len(e.value.partial) == 2


def test_table_blocks_adjusted():
    spec = build_blocks(SEMIGROUPS["table-identity"])
    assert [(b.lo, b.hi) for b in spec.blocks] == [(2, 3), (9, 10)]
    (adj,) = spec.adjustments
    assert (adj.m, adj.found, adj.repaired) == (2, 3, 9)


def test_zero_blocks():
    spec = build_blocks(SEMIGROUPS["loglog"], 0)
    assert spec.blocks == () and spec.A.intervals == ()
    assert generators_up_to(spec, 10**6) == [2]


def test_decreasing_table_rejected():
    with pytest.raises(InvalidTauError):
        TableTau(((1, 3), (2, 1)))


def test_generators_examples():
    assert generators_up_to(SEMIGROUPS["explicit-1"], 100) == [2, 3]
    assert generators_up_to(SEMIGROUPS["explicit-3-12"], 10) == [3, 4, 10]
    assert generators_up_to(built("loglog"), 10**6) == [2]


def test_growth_report_loglog():
    r = verify_growth_bound(built("loglog"), 10**6)
    assert r.count == 19 and r.passed
    expected = math.exp(math.log(math.log(10**6 + 3)) * math.log(math.log2(10**6)))
    assert r.bound_float == pytest.approx(expected, rel=1e-12)
    assert r.bound_float >= 1000
    assert r.count >= math.floor(math.log2(10**6))


def test_growth_report_tiny():
    r = verify_growth_bound(built("loglog"), 2)
    assert r.count == 1 and r.bound_float >= 1 and r.passed


def test_combinatorial_examples():
    assert combinatorial_bound(SEMIGROUPS["explicit-1"], 100) == 49
    assert combinatorial_bound(built("loglog"), 10**6) == 400
    assert combinatorial_bound(built("loglog"), 1000) == 10
    assert combinatorial_bound(built("loglog"), 2) >= 1


def test_exponent_series():
    assert growth_exponent_series([2], [1000]) == [(1000, 9, pytest.approx(math.log(9) / math.log(1000)))]
    rows = growth_exponent_series([2, 3], [100, 10**4])
    assert rows[0][1] == 19 and rows[1][1] == len(oracles.smooth_sieve([2, 3], 10**4))
    assert rows[1][2] < rows[0][2]
    with pytest.raises(InvalidArgumentError):
        growth_exponent_series([], [10])
    with pytest.raises(InvalidArgumentError):
        growth_exponent_series([2], [100, 10])


def test_exponent_series_against_power_count():
    Ns = [10**e for e in range(3, 8)]
    rows = growth_exponent_series(generators_up_to(built("loglog"), 10**7), Ns)
    for N, count, ex in rows:
        assert count == math.floor(math.log2(N))
        assert ex == pytest.approx(math.log(math.floor(math.log2(N))) / math.log(N))


def corpus_Ns(spec, seed):
    rng = random.Random(seed)
    Ns = {2, 3, 10, 100, 1000, 1616, 1617, 10**4, 10**5} | {rng.randrange(2, 10**5) for _ in range(20)}
    # exact powers of p are where ceil and floor of log_p agree
    Ns |= {spec.p**e for e in range(1, 15)}
    return sorted(Ns)


@pytest.mark.parametrize("name", sorted(SEMIGROUPS))
def test_combinatorial_dominance_over_corpus(name):
    spec = built(name, SWEEP_BLOCKS.get(name))
    for N in corpus_Ns(spec, name):
        gens = generators_up_to(spec, N)
        count = count_semigroup(gens, N) if gens else 0
        assert count <= combinatorial_bound(spec, N), N


@pytest.mark.parametrize("name", [n for n in sorted(SEMIGROUPS) if SEMIGROUPS[n].tau is not None])
def test_growth_bound_where_tau_at_least_one(name):
    # below the first block the counting argument needs 1 <= tau(N)
    spec = built(name, SWEEP_BLOCKS.get(name))
    for N in corpus_Ns(spec, name):
        if spec.tau(N) >= 1:
            assert verify_growth_bound(spec, N).passed, N


def test_growth_bound_fails_while_tau_below_one():
    spec = built("loglog")
    r = verify_growth_bound(spec, 4)
    assert r.tau_value < 1
    assert r.count == 2 and not r.passed
    assert all(verify_growth_bound(spec, N).passed for N in range(13, 3000))
