"""Reward streams, per-arm statistics, run traces, and candidate selection.

Arms are 1-based throughout the public API, matching the usual bandit
convention; pull indices ``j`` are 1-based as well. Rewards are a pure
function of ``(seed, arm, j)``, so the j-th pull of an arm yields the same
value no matter which algorithm asks for it or in which order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import EmptyCandidateSet, IndexOutOfRange, MatrixExhausted

BERNOULLI = "bernoulli"
EXPLICIT_MATRIX = "explicit-matrix"

MEAN_ONLY = "mean-only"
PULLS_THEN_MEAN = "pulls-then-mean"

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_ARM_SALT = 0xD1B54A32D192ED03


def _mix64_int(x: int) -> int:
    """SplitMix64 finalizer on a Python int, wrapping at 64 bits."""
    x &= _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


def _mix64(x: np.ndarray) -> np.ndarray:
    """Vectorized SplitMix64 finalizer on uint64 arrays."""
    x = x ^ (x >> np.uint64(30))
    x = x * np.uint64(0xBF58476D1CE4E5B9)
    x = x ^ (x >> np.uint64(27))
    x = x * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def hash_ints(*parts: int) -> int:
    """Deterministic 64-bit hash of an integer tuple (stream-seed derivation)."""
    h = _GAMMA
    for p in parts:
        h = _mix64_int(h ^ _mix64_int((int(p) + 1) * _GAMMA))
    return h


def uniform_scalar(seed: int, arm: int, j: int) -> float:
    """U[0,1) as a pure function of (seed, arm, pull index)."""
    key = _mix64_int(seed ^ _mix64_int(arm * _ARM_SALT))
    bits = _mix64_int((key + j * _GAMMA) & _MASK64)
    return (bits >> 11) * 2.0**-53


def uniform_block(
    seed: np.ndarray | int, arms: np.ndarray, pull_indices: np.ndarray
) -> np.ndarray:
    """Vectorized counterpart of :func:`uniform_scalar` (broadcasting inputs)."""
    with np.errstate(over="ignore"):
        s = np.asarray(seed, dtype=np.uint64)
        a = np.asarray(arms, dtype=np.uint64)
        j = np.asarray(pull_indices, dtype=np.uint64)
        key = _mix64(s ^ _mix64(a * np.uint64(_ARM_SALT)))
        bits = _mix64(key + j * np.uint64(_GAMMA))
        return (bits >> np.uint64(11)).astype(np.float64) * 2.0**-53


@dataclass(frozen=True)
class RewardSource:
    """Per-arm i.i.d. reward streams with values in [0, 1].

    ``bernoulli`` sources draw 0/1 rewards with P(1) = means[arm-1] from a
    counter-based generator keyed by (seed, arm, j). ``explicit-matrix``
    sources return stored entries (row = arm, column = pull index) and
    raise MatrixExhausted past the end of a row.
    """

    means: tuple[float, ...]
    seed: int
    kind: str = BERNOULLI
    matrix: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)
        if self.kind not in (BERNOULLI, EXPLICIT_MATRIX):
            raise ValueError(f"unknown reward source kind {self.kind!r}")
        if len(self.means) < 1:
            raise ValueError("need at least one arm")
        for m in self.means:
            if not 0.0 <= m <= 1.0:
                raise ValueError(f"mean {m} outside [0, 1]")
        if self.kind == EXPLICIT_MATRIX:
            if self.matrix is None or len(self.matrix) != len(self.means):
                raise ValueError("explicit-matrix source needs one row per arm")
            for row in self.matrix:
                for v in row:
                    if not 0.0 <= v <= 1.0:
                        raise ValueError(f"matrix entry {v} outside [0, 1]")

    @classmethod
    def bernoulli(cls, means: Sequence[float], seed: int) -> "RewardSource":
        return cls(means=tuple(float(m) for m in means), seed=int(seed))

    @classmethod
    def from_matrix(
        cls,
        rows: Sequence[Sequence[float]],
        means: Sequence[float] | None = None,
    ) -> "RewardSource":
        """Explicit-matrix source; ``means`` defaults to the row averages
        (used only for regret reporting)."""
        matrix = tuple(tuple(float(v) for v in row) for row in rows)
        if means is None:
            means = [math.fsum(row) / len(row) if row else 0.0 for row in matrix]
        return cls(
            means=tuple(float(m) for m in means),
            seed=0,
            kind=EXPLICIT_MATRIX,
            matrix=matrix,
        )

    @classmethod
    def from_csv(cls, path: str) -> "RewardSource":
        """Load an explicit matrix from CSV: one row per arm, one column per
        pull index. Rows may have different lengths."""
        rows: list[list[float]] = []
        with open(path, newline="", encoding="utf-8") as fh:
            for record in csv.reader(fh):
                if not record or record[0].lstrip().startswith("#"):
                    continue
                rows.append([float(v) for v in record if v.strip() != ""])
        if not rows:
            raise ValueError(f"no reward rows in {path}")
        return cls.from_matrix(rows)

    @property
    def n(self) -> int:
        return len(self.means)

    def _check_arm(self, arm: int) -> None:
        if not 1 <= arm <= self.n:
            raise IndexOutOfRange(f"arm {arm} outside [1, {self.n}]")

    def reward(self, arm: int, j: int) -> float:
        """Reward of the j-th pull of ``arm`` (j counted per arm, from 1)."""
        self._check_arm(arm)
        if j < 1:
            raise IndexOutOfRange(f"pull index {j} must be >= 1")
        if self.kind == BERNOULLI:
            u = uniform_scalar(self.seed, arm, j)
            return 1.0 if u < self.means[arm - 1] else 0.0
        row = self.matrix[arm - 1]
        if j > len(row):
            raise MatrixExhausted(f"arm {arm} has no pull {j} (row length {len(row)})")
        return row[j - 1]

    def reward_block(self, arms: np.ndarray, pull_indices: np.ndarray) -> np.ndarray:
        """Vectorized rewards; identical values to :meth:`reward` elementwise."""
        arms = np.asarray(arms)
        pull_indices = np.asarray(pull_indices)
        if self.kind == BERNOULLI:
            mu = np.asarray(self.means)[arms - 1]
            u = uniform_block(self.seed, arms, pull_indices)
            return (u < mu).astype(np.float64)
        flat_a = arms.ravel()
        flat_j = pull_indices.ravel()
        out = np.empty(flat_a.shape, dtype=np.float64)
        for i, (a, j) in enumerate(zip(flat_a, flat_j)):
            out[i] = self.reward(int(a), int(j))
        return out.reshape(np.broadcast(arms, pull_indices).shape)

    def best_mean(self) -> float:
        return max(self.means)


@dataclass(frozen=True)
class ArmStats:
    """Pull count and reward sum of one arm; mean is 0 while unpulled."""

    pulls: int = 0
    reward_sum: float = 0.0

    @property
    def mean(self) -> float:
        return self.reward_sum / self.pulls if self.pulls else 0.0

    def add(self, reward: float) -> "ArmStats":
        return ArmStats(self.pulls + 1, self.reward_sum + reward)


class Pull(NamedTuple):
    step: int
    batch: int
    arm: int
    reward: float


@dataclass(frozen=True)
class RunTrace:
    """Ordered pull record of one run plus final statistics and selection."""

    n: int
    pulls: tuple[Pull, ...]
    final_stats: tuple[ArmStats, ...]
    selected: int
    consumed: int
    short_final_batch: bool = False

    def __post_init__(self) -> None:
        if self.consumed != len(self.pulls):
            raise ValueError("consumed must equal the number of recorded pulls")
        if not 1 <= self.selected <= self.n:
            raise ValueError(f"selected arm {self.selected} outside [1, {self.n}]")

    def pull_counts(self) -> tuple[int, ...]:
        counts = [0] * self.n
        for p in self.pulls:
            counts[p.arm - 1] += 1
        return tuple(counts)


def stats_from_pulls(pulls: Iterable[Pull], n: int) -> tuple[ArmStats, ...]:
    """Recompute per-arm stats from a pull record with exact-rounding sums."""
    rewards: list[list[float]] = [[] for _ in range(n)]
    for p in pulls:
        rewards[p.arm - 1].append(p.reward)
    return tuple(ArmStats(len(r), math.fsum(r)) for r in rewards)


def select_candidate(
    candidates: Iterable[int], stats: Sequence[ArmStats], key: str = MEAN_ONLY
) -> int:
    """Pick one arm from ``candidates``.

    ``mean-only`` maximizes the empirical mean; ``pulls-then-mean``
    maximizes (pull count, empirical mean) lexicographically. All remaining
    ties break toward the lowest arm index.
    """
    best: int | None = None
    best_key: tuple = ()
    for arm in candidates:
        s = stats[arm - 1]
        if key == PULLS_THEN_MEAN:
            k = (s.pulls, s.mean, -arm)
        elif key == MEAN_ONLY:
            k = (s.mean, -arm)
        else:
            raise ValueError(f"unknown selection key {key!r}")
        if best is None or k > best_key:
            best, best_key = arm, k
    if best is None:
        raise EmptyCandidateSet("no candidate arms to select from")
    return best
