import math
from collections import Counter

import pytest

from propo.core import InputError, LinearOrder, Tournament, is_consistent
from propo.decide import has_property_o
from propo.stochastic import (
    SampleConfig,
    estimate_property_o_probability,
    mean_consistent_count,
    sample_orientation,
    sample_tournament,
    thm2_experiment,
    thm2_witness_attempt,
    trial_generator,
)


def test_stream_golden_values():
    assert sample_orientation(5, 3, 42, 0).tolist() == [2, 5, 3, 5, 1, 5, 2, 1, 3, 5]
    assert sample_orientation(5, 3, 42, 1).tolist() == [0, 2, 1, 0, 3, 3, 2, 0, 4, 5]
    assert sample_orientation(4, 2, 0, 999).tolist() == [0, 1, 1, 0, 0, 0]
    raw = trial_generator(2**64 - 1, 7).bit_generator.random_raw(3).tolist()
    assert raw == [4692318544024626926, 4327322334263917558, 5202491080496658129]


def test_sampling_is_deterministic():
    cfg = SampleConfig(6, 3, 10, 123)
    assert sample_tournament(cfg, 4) == sample_tournament(cfg, 4)
    assert sample_tournament(cfg, 4) != sample_tournament(cfg, 5)


def test_config_validation():
    with pytest.raises(InputError):
        SampleConfig(5, 2, 0, 1)
    with pytest.raises(InputError):
        SampleConfig(2, 3, 10, 1)
    with pytest.raises(InputError):
        SampleConfig(5, 2, 10, -1)


def test_uniform_over_n3_k2():
    trials = 100_000
    cfg = SampleConfig(3, 2, trials, 8)
    counts = Counter(sample_tournament(cfg, i).index() for i in range(trials))
    assert set(counts) == set(range(8))
    p = 1 / 8
    sigma = math.sqrt(trials * p * (1 - p))
    for c in counts.values():
        assert abs(c - trials * p) < 4 * sigma
    chi2 = sum((c - trials * p) ** 2 / (trials * p) for c in counts.values())
    # 7 degrees of freedom, 0.999 quantile
    assert chi2 < 24.32


def test_estimate_k2_n5():
    est = estimate_property_o_probability(SampleConfig(5, 2, 100_000, 2024))
    p = 1 - 120 / 1024
    se = math.sqrt(p * (1 - p) / est.trials)
    assert abs(est.fraction - p) < 3 * se
    assert est.ci95 == pytest.approx(1.96 * math.sqrt(est.fraction * (1 - est.fraction) / est.trials))


def test_acyclic_fraction_k2_n5():
    est = estimate_property_o_probability(SampleConfig(5, 2, 100_000, 99))
    acyclic = 1 - est.fraction
    p = 120 / 2**10
    assert p == 0.1171875
    assert abs(acyclic - p) < 3 * math.sqrt(p * (1 - p) / est.trials)


def test_estimate_exact_mode():
    est = estimate_property_o_probability(SampleConfig(3, 2, 1, 0), exact=True)
    assert est.fraction == 0.25 and est.ci95 == 0.0


def test_estimate_is_reproducible_and_schedule_free():
    cfg = SampleConfig(5, 3, 3000, 5)
    a = estimate_property_o_probability(cfg)
    b = estimate_property_o_probability(cfg, jobs=2)
    assert a == b


def test_estimate_agrees_with_dfs():
    cfg = SampleConfig(5, 2, 400, 17)
    est = estimate_property_o_probability(cfg)
    direct = sum(has_property_o(sample_tournament(cfg, i).to_hypergraph()) for i in range(cfg.trials))
    assert est.successes == direct


def test_estimator_interval_coverage():
    n = 4
    p = 1 - math.factorial(n) / 2 ** math.comb(n, 2)
    hits = 0
    runs = 60
    for seed in range(runs):
        est = estimate_property_o_probability(SampleConfig(n, 2, 2000, seed))
        hits += abs(est.fraction - p) <= est.ci95
    # nominal coverage 95%; allow binomial slack over 60 runs
    assert hits >= 52


def test_mean_consistent_count():
    mean, se = mean_consistent_count(SampleConfig(5, 3, 20_000, 3))
    assert abs(mean - 10 / 6) < 3 * se


def test_thm2_empty_consistent_set():
    # every subset oriented away from the increasing tuple
    t = Tournament(4, 2, (1,) * 6)
    trace = thm2_witness_attempt(t)
    assert trace.consistent_set == []
    assert trace.applicable and trace.witness_found
    assert trace.modified_order == LinearOrder.natural(4)


def test_thm2_inapplicable_instance_found_by_brute_force():
    inapplicable = []
    for idx in range(2**3):
        t = Tournament.from_index(3, 2, idx)
        trace = thm2_witness_attempt(t)
        if not trace.applicable:
            inapplicable.append(t.edges())
    assert ((0, 1), (2, 0), (1, 2)) in inapplicable
    trace = thm2_witness_attempt(Tournament(3, 2, (0, 1, 0)))
    assert trace.minima_set == {0, 1}
    assert not trace.applicable


def test_thm2_trace_invariants():
    cfg = SampleConfig(7, 3, 500, 1)
    for i in range(cfg.trials):
        t = sample_tournament(cfg, i)
        trace = thm2_witness_attempt(t)
        assert trace.minima_set == {e[0] for e in trace.consistent_set}
        if not trace.applicable:
            continue
        w = set(trace.selection)
        assert not w & trace.minima_set
        assert len(w) <= len(trace.consistent_set)
        order = trace.modified_order
        natural = LinearOrder.natural(t.n)
        for e in t.edges():
            if e in trace.consistent_set:
                assert not is_consistent(e, order)
            if not w & set(e):
                assert is_consistent(e, order) == is_consistent(e, natural)
        if trace.witness_found:
            assert not any(is_consistent(e, order) for e in t.edges())
            assert not has_property_o(t.to_hypergraph())


@pytest.mark.parametrize("k,n", [(3, 6), (4, 6), (6, 8)])
def test_phase1_claim_small_run(k, n):
    s = thm2_experiment(SampleConfig(n, k, 1000, 4))
    assert s.claim_violations == 0
    assert s.claim_checked == s.applicable > 0
