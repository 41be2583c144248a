"""Vectorized selection-only simulators for Bernoulli instances.

These reproduce the arm selections of the reference implementations in
:mod:`halving.algorithms` exactly (property-tested against them) while
running a whole vector of seeds at once. They exist because the sweep
harness runs hundreds of thousands of simulations; the per-pull reference
loops are kept as the readable contract.

All functions take a 1-D array of stream seeds and return the 1-based
selected arm per seed.
"""

from __future__ import annotations

import numpy as np

from .core import uniform_block
from .errors import BudgetTooSmall, InsufficientBatches
from .schedule import build_schedule, num_rounds


def _seg_reward_sums(
    seeds: np.ndarray,
    arms1: np.ndarray,
    starts: np.ndarray,
    counts: np.ndarray,
    mu: np.ndarray,
) -> np.ndarray:
    """Per-segment sums of Bernoulli rewards.

    Segment i covers pull indices starts[i] .. starts[i]+counts[i]-1 of
    arm arms1[i] (1-based) under seeds[i]; zero-length segments sum to 0.
    """
    counts = np.asarray(counts, dtype=np.int64)
    out = np.zeros(len(counts), dtype=np.float64)
    nz = counts > 0
    if not nz.any():
        return out
    c = counts[nz]
    offsets = np.concatenate(([0], np.cumsum(c)))
    total = offsets[-1]
    j = np.arange(total, dtype=np.int64) - np.repeat(offsets[:-1], c) + np.repeat(
        np.asarray(starts)[nz], c
    )
    u = uniform_block(np.repeat(np.asarray(seeds)[nz], c), np.repeat(arms1[nz], c), j)
    rewards = u < np.repeat(mu[arms1[nz] - 1], c)
    out[nz] = np.add.reduceat(rewards.astype(np.float64), offsets[:-1])
    return out


def _rank_by_mean(active: np.ndarray, means_active: np.ndarray, keep: int) -> np.ndarray:
    """Top ``keep`` arms per row by (mean desc, arm index asc), index-sorted."""
    order = np.argsort(-means_active, axis=1, kind="stable")
    return np.sort(np.take_along_axis(active, order[:, :keep], axis=1), axis=1)


def select_sh(n: int, budget: int, means, seeds) -> np.ndarray:
    """Selected arm of sequential halving, per seed."""
    sched = build_schedule(n, budget)
    seeds = np.asarray(seeds, dtype=np.uint64)
    mu = np.asarray(means, dtype=np.float64)
    s_count = len(seeds)
    rows = np.arange(s_count)[:, None]
    sums = np.zeros((s_count, n))
    active = np.tile(np.arange(n), (s_count, 1))
    done = 0
    last = len(sched.rounds) - 1
    for r, spec in enumerate(sched.rounds):
        j_indices = np.arange(done + 1, done + spec.pulls_per_arm + 1, dtype=np.int64)
        u = uniform_block(
            seeds[:, None, None], active[:, :, None] + 1, j_indices[None, None, :]
        )
        rewards = u < mu[active][:, :, None]
        sums[rows, active] += rewards.sum(axis=2, dtype=np.float64)
        done += spec.pulls_per_arm
        keep = 1 if r == last else (spec.active_size + 1) // 2
        active = _rank_by_mean(active, sums[rows, active] / done, keep)
    return active[:, 0] + 1


def _advance_blocks(sched) -> list[tuple[int, int]]:
    """Advance-first layout: one (target, length) block per active arm."""
    blocks = []
    done = 0
    for spec in sched.rounds:
        blocks.extend([(done, spec.pulls_per_arm)] * spec.active_size)
        done += spec.pulls_per_arm
    return blocks


def _breadth_levels(sched) -> list[tuple[int, int, bool]]:
    """Breadth-first layout: (target, width, first_of_round) per level."""
    levels = []
    done = 0
    for spec in sched.rounds:
        for j in range(spec.pulls_per_arm):
            levels.append((done + j, spec.active_size, j == 0))
        done += spec.pulls_per_arm
    return levels


def _commit(C, V, sums, seeds, mu) -> None:
    srows, cols = np.nonzero(V)
    if len(srows) == 0:
        return
    counts = V[srows, cols]
    seg = _seg_reward_sums(seeds[srows], cols + 1, C[srows, cols] + 1, counts, mu)
    sums[srows, cols] += seg
    C[srows, cols] += counts
    V[srows, cols] = 0


def _final_selection(C, sums) -> np.ndarray:
    means_arr = np.where(C > 0, sums / np.maximum(C, 1), 0.0)
    top_pulls = C == C.max(axis=1)[:, None]
    masked = np.where(top_pulls, means_arr, -1.0)
    winners = top_pulls & (masked == masked.max(axis=1)[:, None])
    return np.argmax(winners, axis=1) + 1


def select_ash(n: int, batch_size: int, batch_budget: int, means, seeds) -> np.ndarray:
    """Selected arm of advance-first batched halving, per seed.

    Walks the advance-first block layout: a block is claimed once by the
    per-seed argmax of (pulls, mean, lowest index) over arms whose
    committed-plus-scheduled count equals the block target; the rest of the
    block is forced to the claimant. Commits happen at batch boundaries.
    """
    sched = build_schedule(n, batch_size * batch_budget)
    blocks = _advance_blocks(sched)
    seeds = np.asarray(seeds, dtype=np.uint64)
    mu = np.asarray(means, dtype=np.float64)
    s_count = len(seeds)
    rows = np.arange(s_count)
    C = np.zeros((s_count, n), dtype=np.int64)
    V = np.zeros((s_count, n), dtype=np.int64)
    sums = np.zeros((s_count, n))
    owner = np.zeros(s_count, dtype=np.int64)
    bi = 0
    off = 0
    for _ in range(batch_budget):
        capacity = batch_size
        while capacity > 0 and bi < len(blocks):
            target, width = blocks[bi]
            if off == 0:
                cand = (C + V) == target
                pull_max = np.where(cand, C, -1).max(axis=1)
                tied = cand & (C == pull_max[:, None])
                means_arr = np.where(C > 0, sums / np.maximum(C, 1), 0.0)
                masked = np.where(tied, means_arr, -1.0)
                winners = tied & (masked == masked.max(axis=1)[:, None])
                owner = np.argmax(winners, axis=1)
            take = min(width - off, capacity)
            V[rows, owner] += take
            off += take
            capacity -= take
            if off == width:
                bi += 1
                off = 0
        _commit(C, V, sums, seeds, mu)
    return _final_selection(C, sums)


def select_bsh(n: int, batch_size: int, batch_budget: int, means, seeds) -> np.ndarray:
    """Selected arm of breadth-first batched halving, per seed.

    Walks the breadth-first level layout. Slots of a level are filled by
    the per-seed (mean desc, index asc) ranking of arms whose count equals
    the level target; complete remainders of interior levels need no
    ranking because the eligible arms exactly fill them.
    """
    sched = build_schedule(n, batch_size * batch_budget)
    levels = _breadth_levels(sched)
    seeds = np.asarray(seeds, dtype=np.uint64)
    mu = np.asarray(means, dtype=np.float64)
    s_count = len(seeds)
    rows = np.arange(s_count)[:, None]
    C = np.zeros((s_count, n), dtype=np.int64)
    V = np.zeros((s_count, n), dtype=np.int64)
    sums = np.zeros((s_count, n))
    li = 0
    off = 0
    for _ in range(batch_budget):
        capacity = batch_size
        while capacity > 0 and li < len(levels):
            target, width, first_of_round = levels[li]
            take = min(width - off, capacity)
            cand = (C + V) == target
            if first_of_round or take < width - off:
                means_arr = np.where(C > 0, sums / np.maximum(C, 1), 0.0)
                score = np.where(cand, means_arr, -np.inf)
                order = np.argsort(-score, axis=1, kind="stable")
                chosen = order[:, :take]
                V[rows, chosen] += 1
            else:
                # interior level: eligible arms exactly fill the remainder
                V[cand] += 1
            off += take
            capacity -= take
            if off == width:
                li += 1
                off = 0
        _commit(C, V, sums, seeds, mu)
    return _final_selection(C, sums)


def select_jun16(n: int, batch_size: int, batch_budget: int, means, seeds) -> np.ndarray:
    """Selected arm of the round-synchronized batched baseline, per seed."""
    rounds = num_rounds(n)
    if batch_budget < rounds:
        raise InsufficientBatches(
            f"batch budget {batch_budget} < number of rounds {rounds}"
        )
    if batch_size * batch_budget < n * rounds:
        raise BudgetTooSmall(
            f"total budget {batch_size * batch_budget} < n * ceil(log2 n) = {n * rounds}"
        )
    per_round, remainder = divmod(batch_budget, rounds)
    seeds = np.asarray(seeds, dtype=np.uint64)
    mu = np.asarray(means, dtype=np.float64)
    s_count = len(seeds)
    rows = np.arange(s_count)[:, None]
    C = np.zeros((s_count, n), dtype=np.int64)
    sums = np.zeros((s_count, n))
    active = np.tile(np.arange(n), (s_count, 1))
    for r in range(rounds):
        width = active.shape[1]
        batches = per_round + (remainder if r == rounds - 1 else 0)
        round_counts = np.zeros((s_count, width), dtype=np.int64)
        base, extra = divmod(batch_size, width)
        add_sorted = base + (np.arange(width) < extra)
        for _ in range(batches):
            order = np.argsort(round_counts, axis=1, kind="stable")
            add = np.empty((s_count, width), dtype=np.int64)
            np.put_along_axis(add, order, np.broadcast_to(add_sorted, (s_count, width)), axis=1)
            round_counts += add
        starts = C[rows, active] + 1
        seg = _seg_reward_sums(
            np.repeat(seeds, width),
            (active + 1).ravel(),
            starts.ravel(),
            round_counts.ravel(),
            mu,
        ).reshape(s_count, width)
        sums[rows, active] += seg
        C[rows, active] += round_counts
        means_active = np.where(
            C[rows, active] > 0, sums[rows, active] / np.maximum(C[rows, active], 1), 0.0
        )
        keep = (width + 1) // 2
        active = _rank_by_mean(active, means_active, keep)
    return active[:, 0] + 1
