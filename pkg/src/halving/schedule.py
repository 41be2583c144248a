"""Halving round structure and breadth-/advance-first target-pull sequences.

A run over ``n`` arms with total budget ``T`` is organized in
``ceil(log2 n)`` rounds. Round ``r`` keeps an active set of ``s_r`` arms
(``s_0 = n``, halving as ``ceil(s_r / 2)``) and pulls each of them
``floor(T / (s_r * ceil(log2 n)))`` times. Budget not consumed by the
rounds is split equally between the two finalists; an odd single pull
cannot be split and is discarded.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from .errors import BudgetTooSmall, InvalidArmCount, ScheduleExhausted

BREADTH = "breadth"
ADVANCE = "advance"


def num_rounds(n: int) -> int:
    """ceil(log2 n) via bit length, exact at powers of two."""
    if n < 2:
        raise InvalidArmCount(f"need at least 2 arms, got n={n}")
    return (n - 1).bit_length()


@dataclass(frozen=True)
class RoundSpec:
    """One halving round: active-set size, pulls per active arm, total pulls.

    ``pulls_per_arm`` for the final round includes the leftover extension.
    """

    active_size: int
    pulls_per_arm: int
    round_budget: int

    def __post_init__(self) -> None:
        if self.round_budget != self.active_size * self.pulls_per_arm:
            raise ValueError("round_budget must equal active_size * pulls_per_arm")


@dataclass(frozen=True)
class HalvingSchedule:
    """Round structure for (n, budget).

    ``leftover`` is the raw remainder ``budget - sum(s_r * floor-pulls)``
    before the final-round extension; ``leftover_discard`` (0 or 1) is the
    odd pull that could not be split between the two finalists. Every pull
    is accounted for: ``sum(round_budget) + leftover_discard == budget``.
    """

    n: int
    budget: int
    rounds: tuple[RoundSpec, ...]
    leftover: int
    leftover_discard: int

    @property
    def consumed(self) -> int:
        """Pulls actually issued: budget minus the discarded odd pull."""
        return self.budget - self.leftover_discard

    @property
    def active_sizes(self) -> tuple[int, ...]:
        return tuple(r.active_size for r in self.rounds)

    @property
    def pulls_per_arm(self) -> tuple[int, ...]:
        return tuple(r.pulls_per_arm for r in self.rounds)

    @property
    def round_starts(self) -> tuple[int, ...]:
        """Step index at which each round begins in the target sequence."""
        starts = []
        acc = 0
        for spec in self.rounds:
            starts.append(acc)
            acc += spec.round_budget
        return tuple(starts)

    def round_of_step(self, t: int) -> int:
        """Round containing step ``t`` of the target-pull sequence."""
        if t < 0 or t >= self.consumed:
            raise ScheduleExhausted(f"step {t} outside [0, {self.consumed})")
        return bisect.bisect_right(self.round_starts, t) - 1

    def cumulative_pulls_before(self, r: int) -> int:
        """Per-arm pulls completed by a survivor entering round ``r``."""
        return sum(spec.pulls_per_arm for spec in self.rounds[:r])


def build_schedule(n: int, budget: int) -> HalvingSchedule:
    """Construct the halving schedule for ``n`` arms and total budget ``budget``.

    Raises InvalidArmCount for n < 2 and BudgetTooSmall when the budget
    cannot give every arm at least one pull in round 0 (the sequential
    form of the executability condition).
    """
    rounds_count = num_rounds(n)
    if budget < n * rounds_count:
        raise BudgetTooSmall(
            f"budget {budget} < n * ceil(log2 n) = {n * rounds_count}"
        )
    sizes = []
    size = n
    for _ in range(rounds_count):
        sizes.append(size)
        size = (size + 1) // 2
    pulls = [budget // (s * rounds_count) for s in sizes]
    leftover = budget - sum(s * j for s, j in zip(sizes, pulls))
    extension, discard = divmod(leftover, 2)
    pulls[-1] += extension
    rounds = tuple(
        RoundSpec(active_size=s, pulls_per_arm=j, round_budget=s * j)
        for s, j in zip(sizes, pulls)
    )
    return HalvingSchedule(
        n=n,
        budget=budget,
        rounds=rounds,
        leftover=leftover,
        leftover_discard=discard,
    )


@dataclass(frozen=True)
class TargetPulls:
    """The per-step target pull counts L for one (n, budget) schedule.

    At step ``t`` only arms whose pull count equals ``values[t]`` are
    eligible. Length is ``budget - leftover_discard``.
    """

    values: tuple[int, ...]
    mode: str

    def __len__(self) -> int:
        return len(self.values)

    def target_at(self, t: int) -> int:
        if t < 0 or t >= len(self.values):
            raise ScheduleExhausted(f"no target pull at step {t}")
        return self.values[t]


def breadth_first_targets(n: int, budget: int) -> TargetPulls:
    """Level the active arms: within each round, emit each target once per
    active arm before moving to the next target."""
    sched = build_schedule(n, budget)
    values: list[int] = []
    done = 0
    for spec in sched.rounds:
        for j in range(spec.pulls_per_arm):
            values.extend([done + j] * spec.active_size)
        done += spec.pulls_per_arm
    return TargetPulls(values=tuple(values), mode=BREADTH)


def advance_first_targets(n: int, budget: int) -> TargetPulls:
    """Finish one arm's round allocation before starting the next: within
    each round, emit the full target block once per active arm."""
    sched = build_schedule(n, budget)
    values: list[int] = []
    done = 0
    for spec in sched.rounds:
        block = range(done, done + spec.pulls_per_arm)
        for _ in range(spec.active_size):
            values.extend(block)
        done += spec.pulls_per_arm
    return TargetPulls(values=tuple(values), mode=ADVANCE)
