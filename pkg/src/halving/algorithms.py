"""The four pull policies: sequential halving and its batched variants.

These are the reference implementations: they follow the per-pull /
per-batch dynamics literally and record a full RunTrace. For large
parameter sweeps use :mod:`halving.engines`, which reproduces the same
selections with round-level vectorized arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    MEAN_ONLY,
    PULLS_THEN_MEAN,
    ArmStats,
    Pull,
    RewardSource,
    RunTrace,
    select_candidate,
)
from .errors import BudgetTooSmall, InsufficientBatches
from .schedule import (
    ADVANCE,
    BREADTH,
    advance_first_targets,
    breadth_first_targets,
    build_schedule,
    num_rounds,
)


@dataclass(frozen=True)
class BatchConfig:
    """Fixed batch size b and batch budget B; the total budget is b * B."""

    batch_size: int
    batch_budget: int

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError(f"batch size must be >= 1, got {self.batch_size}")
        if self.batch_budget < 1:
            raise ValueError(f"batch budget must be >= 1, got {self.batch_budget}")

    @property
    def total_budget(self) -> int:
        return self.batch_size * self.batch_budget


def run_sh(n: int, budget: int, source: RewardSource, mode: str = ADVANCE) -> RunTrace:
    """Sequential halving driven by target pulls.

    At step t the candidates are the arms whose pull count equals the
    target L_t; the one with the highest empirical mean is pulled. The
    final selection maximizes (pull count, empirical mean). The target
    mode (breadth or advance) does not change the selected arm.
    """
    targets = (
        breadth_first_targets(n, budget)
        if mode == BREADTH
        else advance_first_targets(n, budget)
    )
    stats = [ArmStats() for _ in range(n)]
    pulls: list[Pull] = []
    for t, target in enumerate(targets.values):
        candidates = [a for a in range(1, n + 1) if stats[a - 1].pulls == target]
        arm = select_candidate(candidates, stats, MEAN_ONLY)
        reward = source.reward(arm, stats[arm - 1].pulls + 1)
        stats[arm - 1] = stats[arm - 1].add(reward)
        pulls.append(Pull(step=t, batch=t, arm=arm, reward=reward))
    selected = select_candidate(range(1, n + 1), stats, PULLS_THEN_MEAN)
    return RunTrace(
        n=n,
        pulls=tuple(pulls),
        final_stats=tuple(stats),
        selected=selected,
        consumed=len(pulls),
    )


def _run_batched_impl(
    n: int, cfg: BatchConfig, source: RewardSource, mode: str, batch_key: str
) -> RunTrace:
    budget = cfg.total_budget
    sched = build_schedule(n, budget)
    targets = (
        breadth_first_targets(n, budget)
        if mode == BREADTH
        else advance_first_targets(n, budget)
    )
    rounds = num_rounds(n)
    # Under both executability and equivalence conditions a batch can span
    # at most two rounds; assert it as an internal sanity check.
    guaranteed = (
        cfg.batch_budget >= 4 * rounds and cfg.total_budget >= n * rounds
    )
    stats = [ArmStats() for _ in range(n)]
    pulls: list[Pull] = []
    t = 0
    short_final = False
    for batch_idx in range(cfg.batch_budget):
        virtual = [0] * n
        scheduled: list[tuple[int, int]] = []
        for _ in range(cfg.batch_size):
            if t >= len(targets.values):
                short_final = True
                break
            target = targets.values[t]
            candidates = [
                a for a in range(1, n + 1) if stats[a - 1].pulls + virtual[a - 1] == target
            ]
            arm = select_candidate(candidates, stats, batch_key)
            virtual[arm - 1] += 1
            scheduled.append((t, arm))
            t += 1
        if guaranteed and scheduled:
            spanned = {
                sched.round_of_step(step) for step, _ in scheduled
            }
            assert len(spanned) <= 2, "batch spans more than two rounds"
        for step, arm in scheduled:
            reward = source.reward(arm, stats[arm - 1].pulls + 1)
            stats[arm - 1] = stats[arm - 1].add(reward)
            pulls.append(Pull(step=step, batch=batch_idx, arm=arm, reward=reward))
    selected = select_candidate(range(1, n + 1), stats, PULLS_THEN_MEAN)
    return RunTrace(
        n=n,
        pulls=tuple(pulls),
        final_stats=tuple(stats),
        selected=selected,
        consumed=len(pulls),
        short_final_batch=short_final,
    )


def run_ash(n: int, cfg: BatchConfig, source: RewardSource) -> RunTrace:
    """Advance-first batched halving.

    Each batch schedules b arms sequentially using virtual pulls: the
    candidates at step t are the arms whose committed-plus-scheduled count
    equals the advance-first target, ranked by (pull count, empirical
    mean). Rewards are observed only when the batch commits.
    """
    return _run_batched_impl(n, cfg, source, ADVANCE, PULLS_THEN_MEAN)


def run_bsh(n: int, cfg: BatchConfig, source: RewardSource) -> RunTrace:
    """Breadth-first batched halving: breadth-first targets and mean-only
    in-batch selection, otherwise identical to :func:`run_ash`."""
    return _run_batched_impl(n, cfg, source, BREADTH, MEAN_ONLY)


def run_jun16(n: int, cfg: BatchConfig, source: RewardSource) -> RunTrace:
    """Round-synchronized batched halving baseline.

    Each round issues floor(B / rounds) whole batches (the remainder goes
    to the final round); every batch spreads b pulls over the active arms
    as equally as possible, starting from the arm with the fewest pulls in
    the round. After a round, the top half by empirical mean survives.
    """
    rounds = num_rounds(n)
    if cfg.batch_budget < rounds:
        raise InsufficientBatches(
            f"batch budget {cfg.batch_budget} < number of rounds {rounds}"
        )
    if cfg.total_budget < n * rounds:
        raise BudgetTooSmall(
            f"total budget {cfg.total_budget} < n * ceil(log2 n) = {n * rounds}"
        )
    per_round, remainder = divmod(cfg.batch_budget, rounds)
    stats = [ArmStats() for _ in range(n)]
    pulls: list[Pull] = []
    active = list(range(1, n + 1))
    t = 0
    batch_idx = 0
    for r in range(rounds):
        batches = per_round + (remainder if r == rounds - 1 else 0)
        round_pulls = {a: 0 for a in active}
        for _ in range(batches):
            scheduled_counts = dict(round_pulls)
            scheduled: list[int] = []
            for _ in range(cfg.batch_size):
                arm = min(active, key=lambda a: (scheduled_counts[a], a))
                scheduled_counts[arm] += 1
                scheduled.append(arm)
            for arm in scheduled:
                reward = source.reward(arm, stats[arm - 1].pulls + 1)
                stats[arm - 1] = stats[arm - 1].add(reward)
                round_pulls[arm] += 1
                pulls.append(Pull(step=t, batch=batch_idx, arm=arm, reward=reward))
                t += 1
            batch_idx += 1
        keep = (len(active) + 1) // 2
        active = sorted(active, key=lambda a: (-stats[a - 1].mean, a))[:keep]
    selected = active[0]
    return RunTrace(
        n=n,
        pulls=tuple(pulls),
        final_stats=tuple(stats),
        selected=selected,
        consumed=len(pulls),
    )


def simple_regret(trace: RunTrace, means) -> float:
    """Gap between the best mean and the selected arm's mean (>= 0)."""
    best = max(means)
    return best - means[trace.selected - 1]
