"""Acceptance suite: one test per release criterion.

Each test prints a PASS line with the measured quantity; run with
``pytest tests/test_acceptance.py -v -s`` to see them. The two full-scale
sweeps are shared module-scoped fixtures, so the whole module runs in a
few minutes.
"""

import io
import time
from collections import Counter

import numpy as np
import pytest

from halving import (
    AlphaOutOfRange,
    BatchConfig,
    RewardSource,
    advance_first_targets,
    breadth_first_targets,
    build_schedule,
    check_promotion_margin,
    find_tightness_counterexample,
    fit_slope,
    make_instance,
    num_rounds,
    regret_sweep,
    run_ash,
    run_bsh,
    run_sh,
    slope_points,
)
from halving.engines import select_ash, select_sh
from halving.experiments import equivalence_from_records, write_sweep_csv
from halving.theory import margin_violated

LARGE_TRIALS = 1000
SEEDS_PER_TRIAL = 20
N_MAX = 256


@pytest.fixture(scope="module")
def large_sweep():
    start = time.perf_counter()
    records = regret_sweep(
        ("ash", "bsh", "jun16", "sh"),
        trials=LARGE_TRIALS,
        seeds_per_trial=SEEDS_PER_TRIAL,
        rng_seed=0,
        regime="large",
        n_max=N_MAX,
    )
    return records, time.perf_counter() - start


@pytest.fixture(scope="module")
def small_sweep():
    return regret_sweep(
        ("ash", "bsh", "jun16", "sh"),
        trials=LARGE_TRIALS,
        seeds_per_trial=SEEDS_PER_TRIAL,
        rng_seed=0,
        regime="small",
        n_max=N_MAX,
    )


def test_criterion_batched_equals_sequential_at_scale(large_sweep):
    # 1,000 instances x 20 seeds, conditions enforced: identical selections
    # in 100.0% of runs, zero tolerance
    records, elapsed = large_sweep
    report = equivalence_from_records(records)
    assert report.total == LARGE_TRIALS * SEEDS_PER_TRIAL
    assert report.mismatches == ()
    assert report.match_rate == 1.0
    assert elapsed < 300, f"sweep took {elapsed:.0f}s, expected under 5 minutes"
    print(
        f"PASS equivalence sweep: {report.matches}/{report.total} identical "
        f"selections in {elapsed:.0f}s"
    )


def test_criterion_exhaustive_small_instance_oracle():
    # every (n in [2,16], b in [2,8], B >= max{4, n/b}*rounds, b*B <= 512),
    # 50 seeds each: zero mismatches
    seeds = np.arange(50, dtype=np.uint64)
    configs = []
    for n in range(2, 17):
        rounds = num_rounds(n)
        for b in range(2, 9):
            budget = 4 * rounds
            while b * budget <= 512:
                if b * budget >= n * rounds:
                    configs.append((n, b, budget))
                budget += 1
    mismatches = 0
    means_by_n = {n: make_instance(n, 1.0, 0.1, 0.9).means for n in range(2, 17)}
    for n, b, budget in configs:
        mu = means_by_n[n]
        sh = select_sh(n, b * budget, mu, seeds)
        ash = select_ash(n, b, budget, mu, seeds)
        mismatches += int((sh != ash).sum())
    assert mismatches == 0
    # spot-check the engines against the per-pull references on the grid
    rng = np.random.default_rng(123)
    for idx in rng.choice(len(configs), size=25, replace=False):
        n, b, budget = configs[idx]
        seed = int(rng.integers(0, 2**62))
        src = RewardSource.bernoulli(means_by_n[n], seed)
        one = np.array([seed], dtype=np.uint64)
        assert run_sh(n, b * budget, src).selected == int(
            select_sh(n, b * budget, means_by_n[n], one)[0]
        )
        assert run_ash(n, BatchConfig(b, budget), src).selected == int(
            select_ash(n, b, budget, means_by_n[n], one)[0]
        )
    print(
        f"PASS exhaustive oracle: {len(configs)} configurations x 50 seeds, "
        f"0 mismatches"
    )


def test_criterion_margin_enumeration_under_ten_seconds():
    start = time.perf_counter()
    for b in range(2, 4097):
        assert check_promotion_margin(b).holds, f"margin violated at b={b}"
    elapsed = time.perf_counter() - start
    assert elapsed < 10, f"enumeration took {elapsed:.1f}s"
    print(f"PASS margin enumeration: b in [2, 4096] verified in {elapsed:.1f}s")


def test_criterion_tightness_witnesses():
    found = {}
    for alpha in (1.0, 2.0, 3.0, 3.9):
        witness = find_tightness_counterexample(alpha, 1000)
        assert witness is not None, f"no witness for alpha={alpha}"
        assert margin_violated(witness.b, witness.x, alpha)
        found[alpha] = witness
    with pytest.raises(AlphaOutOfRange):
        find_tightness_counterexample(4.0, 1000)
    pretty = ", ".join(f"a={a}: (b={w.b}, x={w.x})" for a, w in found.items())
    print(f"PASS tightness witnesses verified; {pretty}; alpha=4 rejected")


def test_criterion_golden_target_sequences():
    breadth = breadth_first_targets(8, 192).values[:46]
    advance = advance_first_targets(8, 192).values[:46]
    expected_breadth = (
        0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1,
        2, 2, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3,
        4, 4, 4, 4, 4, 4, 4, 4, 5, 5, 5, 5, 5, 5,
    )
    expected_advance = (
        0, 1, 2, 3, 4, 5, 6, 7, 0, 1, 2, 3, 4, 5, 6, 7,
        0, 1, 2, 3, 4, 5, 6, 7, 0, 1, 2, 3, 4, 5, 6, 7,
        0, 1, 2, 3, 4, 5, 6, 7, 0, 1, 2, 3, 4, 5,
    )
    assert breadth == expected_breadth
    assert advance == expected_advance
    print("PASS golden target sequences: both 46-value prefixes exact")


def test_criterion_large_regime_slopes(large_sweep):
    records, _ = large_sweep
    betas = {
        algo: fit_slope(slope_points(records, algo)).beta
        for algo in ("ash", "bsh", "jun16")
    }
    assert betas["ash"] == 1.0  # forced by exact equivalence
    assert 0.90 <= betas["bsh"] <= 1.10
    assert 0.90 <= betas["jun16"] <= 1.10
    print(
        "PASS large-regime slopes: "
        + ", ".join(f"beta_{a}={b:.4f}" for a, b in betas.items())
    )


def test_criterion_small_regime_slopes(small_sweep):
    records = small_sweep
    betas = {
        algo: fit_slope(slope_points(records, algo)).beta
        for algo in ("ash", "bsh", "jun16")
    }
    for algo, beta in betas.items():
        assert 0.90 <= beta <= 1.20, f"beta_{algo}={beta}"
    match_rate = equivalence_from_records(records).match_rate
    print(
        "PASS small-regime slopes: "
        + ", ".join(f"beta_{a}={b:.4f}" for a, b in betas.items())
        + f"; ash match rate {match_rate:.4f} (reported, not asserted)"
    )


def test_criterion_unit_batch_reduction():
    rng = np.random.default_rng(2718)
    flat = lambda trace: [(p.step, p.arm, p.reward) for p in trace.pulls]
    for _ in range(200):
        n = int(rng.integers(2, 65))
        rounds = num_rounds(n)
        budget = int(rng.integers(n * rounds, 2049))
        src = RewardSource.bernoulli(
            rng.uniform(0.05, 0.95, n).tolist(), int(rng.integers(0, 2**62))
        )
        assert flat(run_ash(n, BatchConfig(1, budget), src)) == flat(
            run_sh(n, budget, src, mode="advance")
        )
        assert flat(run_bsh(n, BatchConfig(1, budget), src)) == flat(
            run_sh(n, budget, src, mode="breadth")
        )
    print("PASS unit-batch reduction: 200/200 pull-for-pull")


def test_criterion_target_mode_invariance():
    rng = np.random.default_rng(314)
    for _ in range(500):
        n = int(rng.integers(2, 65))
        rounds = num_rounds(n)
        budget = int(rng.integers(n * rounds, 2049))
        src = RewardSource.bernoulli(
            rng.uniform(0.05, 0.95, n).tolist(), int(rng.integers(0, 2**62))
        )
        sched = build_schedule(n, budget)
        breadth = run_sh(n, budget, src, mode="breadth")
        advance = run_sh(n, budget, src, mode="advance")
        assert breadth.selected == advance.selected
        start = 0
        for spec in sched.rounds:
            seg_b = Counter(p.arm for p in breadth.pulls[start : start + spec.round_budget])
            seg_a = Counter(p.arm for p in advance.pulls[start : start + spec.round_budget])
            assert seg_b == seg_a
            start += spec.round_budget
    print("PASS target-mode invariance: 500/500 same arm and round counts")


def test_criterion_sweep_determinism_bytes():
    kwargs = dict(
        trials=40, seeds_per_trial=5, rng_seed=11, regime="large", n_max=64
    )
    outputs = []
    for workers in (1, 1, 2):
        records = regret_sweep(("ash", "bsh", "jun16", "sh"), workers=workers, **kwargs)
        buf = io.StringIO()
        write_sweep_csv(records, buf, metadata=("acceptance determinism",))
        outputs.append(buf.getvalue().encode("utf-8"))
    assert outputs[0] == outputs[1] == outputs[2]
    print(
        f"PASS sweep determinism: {len(outputs[0])} bytes identical across "
        f"reruns and worker counts"
    )
