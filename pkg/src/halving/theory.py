"""Machine checks of the batch-equivalence conditions by exhaustive enumeration.

All arithmetic is exact: integer comparisons instead of division, and
rationals for the tightness search, so boundary cases like B equal to four
times the round count never depend on floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .algorithms import BatchConfig, run_ash, run_sh
from .core import RewardSource
from .engines import select_ash, select_sh
from .errors import AlphaOutOfRange
from .schedule import build_schedule, num_rounds


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class ConditionReport:
    """Executability (c1) and equivalence (c2) conditions for (n, b, B).

    c1: b * B >= n * ceil(log2 n)  (every arm can be pulled in round 0)
    c2: B >= 4 * ceil(log2 n)      (batched selection matches sequential)
    """

    n: int
    b: int
    B: int
    c1_holds: bool
    c2_holds: bool

    @property
    def equivalence_guaranteed(self) -> bool:
        return self.c1_holds and self.c2_holds


def check_conditions(n: int, b: int, B: int) -> ConditionReport:
    """Evaluate both conditions with integer arithmetic only."""
    rounds = num_rounds(n)
    if b < 2:
        raise ValueError(f"batch size must be >= 2, got {b}")
    if B < 1:
        raise ValueError(f"batch budget must be >= 1, got {B}")
    return ConditionReport(
        n=n,
        b=b,
        B=B,
        c1_holds=b * B >= n * rounds,
        c2_holds=B >= 4 * rounds,
    )


class MarginCheck(NamedTuple):
    holds: bool
    violating_x: int | None


def check_promotion_margin(b: int) -> MarginCheck:
    """Exhaustively verify ceil(x/2) - 1 >= ceil((b-1) / floor(4b/x)) for
    every integer x in [3, 4b].

    This is the per-active-set-size margin that rules out incorrect
    promotions when a batch straddles two rounds; it holds for every
    b >= 2 and is tight in the factor 4.
    """
    if b < 2:
        raise ValueError(f"b must be >= 2, got {b}")
    x = np.arange(3, 4 * b + 1, dtype=np.int64)
    lhs = (x + 1) // 2 - 1
    denom = (4 * b) // x
    rhs = (b - 1 + denom - 1) // denom
    bad = lhs < rhs
    if bad.any():
        return MarginCheck(False, int(x[int(np.argmax(bad))]))
    return MarginCheck(True, None)


class SafetyCheck(NamedTuple):
    holds: bool
    witness: tuple[int, int] | None


def check_promotion_safety(n: int, b: int, B: int) -> SafetyCheck:
    """Check, for every round boundary r and every in-batch split z, that
    enough promotion slots remain for arms still finishing round r:

        next_active - ceil((b - z) / J_{r+1}) >= ceil(z / J_r)

    for r < rounds - 1 and z in [1, b-1]. Returns the first violating
    (r, z) if any. Checked regardless of whether the conditions hold.
    """
    sched = build_schedule(n, b * B)
    if b < 1:
        raise ValueError(f"batch size must be >= 1, got {b}")
    z = np.arange(1, b, dtype=np.int64)
    for r in range(len(sched.rounds) - 1):
        j_here = sched.rounds[r].pulls_per_arm
        j_next = sched.rounds[r + 1].pulls_per_arm
        next_size = sched.rounds[r + 1].active_size
        lhs = next_size - (b - z + j_next - 1) // j_next
        rhs = (z + j_here - 1) // j_here
        bad = lhs < rhs
        if bad.any():
            return SafetyCheck(False, (r, int(z[int(np.argmax(bad))])))
    return SafetyCheck(True, None)


class TightnessWitness(NamedTuple):
    b: int
    x: int


def _as_fraction(alpha) -> Fraction:
    if isinstance(alpha, float):
        # read the decimal the caller wrote, not the binary approximation
        return Fraction(str(alpha))
    return Fraction(alpha)


def find_tightness_counterexample(alpha, b_max: int) -> TightnessWitness | None:
    """Search for the smallest b whose margin fails when the factor 4 is
    weakened to ``alpha`` < 4, i.e. an integer x in [3, floor(alpha*b)] with

        ceil(x/2) - 1 < ceil((b-1) / floor(alpha*b/x)).

    Such a counterexample exists for every alpha < 4 once b is large
    enough; alpha >= 4 is rejected because the margin provably holds there.
    """
    frac = _as_fraction(alpha)
    if not 0 < frac < 4:
        raise AlphaOutOfRange(f"alpha must be in (0, 4), got {alpha}")
    if b_max < 2:
        raise ValueError(f"b_max must be >= 2, got {b_max}")
    p, q = frac.numerator, frac.denominator
    for b in range(2, b_max + 1):
        x_hi = (p * b) // q
        if x_hi < 3:
            continue
        x = np.arange(3, x_hi + 1, dtype=np.int64)
        lhs = (x + 1) // 2 - 1
        denom = (p * b) // (q * x)
        rhs = (b - 1 + denom - 1) // denom
        bad = lhs < rhs
        if bad.any():
            return TightnessWitness(b, int(x[int(np.argmax(bad))]))
    return None


def margin_violated(b: int, x: int, alpha=4) -> bool:
    """Direct single-point evaluation used to re-verify search witnesses."""
    frac = _as_fraction(alpha)
    p, q = frac.numerator, frac.denominator
    denom = (p * b) // (q * x)
    if denom < 1:
        raise ValueError("floor(alpha * b / x) must be >= 1")
    return (x + 1) // 2 - 1 < ceil_div(b - 1, denom)


@dataclass(frozen=True)
class DivergenceExample:
    """A concrete small-budget instance where the batched and sequential
    algorithms return different arms, realized as an explicit matrix."""

    n: int
    b: int
    B: int
    source: RewardSource
    sh_selected: int
    ash_selected: int


def find_behavioral_divergence(
    n_values=(4, 5, 6, 8),
    batch_sizes=(2, 3, 4, 6, 8),
    seeds_per_config: int = 40,
    means=None,
) -> DivergenceExample | None:
    """Search the small-batch-budget regime for a run where the advance-first
    batched algorithm and sequential halving disagree.

    The margin counterexamples say the proof's slack vanishes below the
    factor 4; this searches for an actual behavioral divergence and, when
    found, freezes the realized rewards into an explicit matrix so the
    example replays without the generator.
    """
    for n in n_values:
        mu = means if means is not None else [0.9 - 0.8 * i / (n - 1) for i in range(n)]
        rounds = num_rounds(n)
        for B in range(rounds, 4 * rounds):
            for b in batch_sizes:
                if b * B < n * rounds:
                    continue
                seed_vec = np.arange(seeds_per_config, dtype=np.uint64)
                sh_sel = select_sh(n, b * B, mu, seed_vec)
                ash_sel = select_ash(n, b, B, mu, seed_vec)
                diff = np.nonzero(sh_sel != ash_sel)[0]
                if len(diff) == 0:
                    continue
                seed = int(seed_vec[diff[0]])
                bern = RewardSource.bernoulli(mu, seed)
                rows = [
                    [bern.reward(arm, j) for j in range(1, b * B + 1)]
                    for arm in range(1, n + 1)
                ]
                matrix = RewardSource.from_matrix(rows, means=mu)
                sh_trace = run_sh(n, b * B, matrix)
                ash_trace = run_ash(n, BatchConfig(b, B), matrix)
                if sh_trace.selected == ash_trace.selected:
                    continue
                return DivergenceExample(
                    n=n,
                    b=b,
                    B=B,
                    source=matrix,
                    sh_selected=sh_trace.selected,
                    ash_selected=ash_trace.selected,
                )
    return None
