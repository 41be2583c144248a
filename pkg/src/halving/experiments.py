"""Polynomial-gap instances, paired regret sweeps, and slope fits.

A sweep samples bandit instances and batch shapes, runs the requested
algorithms on shared reward streams (one stream per (instance, seed), so
comparisons are paired), and emits one record per (instance, algorithm,
seed). Everything is keyed off the sweep's rng seed and the trial index,
so records are reproducible bit-for-bit regardless of execution order or
worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Iterable, Sequence, TextIO

import numpy as np

from .core import hash_ints
from .engines import select_ash, select_bsh, select_jun16, select_sh
from .errors import DegenerateFit, InvalidArmCount, InvalidRange
from .schedule import num_rounds

LARGE = "large"
SMALL = "small"

ALGORITHMS = ("ash", "bsh", "jun16", "sh")

_MU_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
_ALPHA_GRID = (0.5, 1.0, 2.0)
_SWEEP_SALT = 0x5EED
_RESAMPLE_CAP = 1000

SWEEP_COLUMNS = (
    "instance_id",
    "n",
    "alpha",
    "mu_min",
    "mu_max",
    "b",
    "B",
    "algo",
    "seed",
    "selected_arm",
    "regret",
)


@dataclass(frozen=True)
class ProblemInstance:
    """Mean vector with polynomially growing gaps, descending from mu_max
    to mu_min."""

    n: int
    alpha: float
    mu_min: float
    mu_max: float
    means: tuple[float, ...]


def make_instance(n: int, alpha: float, mu_min: float, mu_max: float) -> ProblemInstance:
    """mu_a = mu_max - (mu_max - mu_min) * ((a-1)/(n-1))^alpha for a = 1..n."""
    if n < 2:
        raise InvalidArmCount(f"need at least 2 arms, got n={n}")
    if alpha <= 0:
        raise InvalidRange(f"alpha must be positive, got {alpha}")
    if not 0 < mu_min < mu_max < 1:
        raise InvalidRange(
            f"need 0 < mu_min < mu_max < 1, got ({mu_min}, {mu_max})"
        )
    span = mu_max - mu_min
    means = tuple(
        mu_max - span * ((a - 1) / (n - 1)) ** alpha for a in range(1, n + 1)
    )
    return ProblemInstance(n=n, alpha=alpha, mu_min=mu_min, mu_max=mu_max, means=means)


@dataclass(frozen=True)
class SweepRecord:
    instance_id: int
    n: int
    alpha: float
    mu_min: float
    mu_max: float
    b: int
    B: int
    algo: str
    seed: int
    selected_arm: int
    regret: float


@dataclass(frozen=True)
class TrialConfig:
    instance_id: int
    instance: ProblemInstance
    b: int
    B: int


def sample_trial(rng_seed: int, trial: int, regime: str, n_max: int) -> TrialConfig:
    """Deterministically sample one (instance, b, B) trial configuration.

    Instance parameters follow the sweep protocol: n uniform on [2, n_max],
    alpha from {0.5, 1, 2}, mu bounds a distinct pair from {0.1..0.9}. The
    batch shape is resampled until executable (b*B >= n*rounds); the large
    regime draws B from [4*rounds, 10*rounds], the small regime from
    [rounds, 4*rounds - 1].
    """
    if regime not in (LARGE, SMALL):
        raise ValueError(f"unknown regime {regime!r}")
    rng = np.random.default_rng((_SWEEP_SALT, rng_seed, trial))
    n = int(rng.integers(2, n_max + 1))
    alpha = _ALPHA_GRID[int(rng.integers(len(_ALPHA_GRID)))]
    lo, hi = sorted(int(v) for v in rng.choice(len(_MU_GRID), size=2, replace=False))
    instance = make_instance(n, alpha, _MU_GRID[lo], _MU_GRID[hi])
    rounds = num_rounds(n)
    for _ in range(_RESAMPLE_CAP):
        if regime == LARGE:
            batch_budget = int(rng.integers(4 * rounds, 10 * rounds + 1))
        else:
            batch_budget = int(rng.integers(rounds, 4 * rounds))
        batch_size = int(rng.integers(2, 5 * n + 1))
        if batch_size * batch_budget >= n * rounds:
            return TrialConfig(
                instance_id=trial, instance=instance, b=batch_size, B=batch_budget
            )
    raise RuntimeError(f"could not sample an executable batch shape for trial {trial}")


def stream_seeds(rng_seed: int, trial: int, count: int) -> np.ndarray:
    """Per-(trial, seed) reward-stream seeds; independent of the algorithm
    set, so adding algorithms never perturbs existing records."""
    return np.array(
        [hash_ints(rng_seed, trial, s) for s in range(count)], dtype=np.uint64
    )


def _run_trial(
    rng_seed: int,
    trial: int,
    regime: str,
    n_max: int,
    algos: Sequence[str],
    seeds_per_trial: int,
) -> list[SweepRecord]:
    cfg = sample_trial(rng_seed, trial, regime, n_max)
    inst = cfg.instance
    seeds = stream_seeds(rng_seed, trial, seeds_per_trial)
    best = inst.means[0]
    records: list[SweepRecord] = []
    for algo in sorted(algos):
        if algo == "sh":
            selected = select_sh(inst.n, cfg.b * cfg.B, inst.means, seeds)
        elif algo == "ash":
            selected = select_ash(inst.n, cfg.b, cfg.B, inst.means, seeds)
        elif algo == "bsh":
            selected = select_bsh(inst.n, cfg.b, cfg.B, inst.means, seeds)
        elif algo == "jun16":
            selected = select_jun16(inst.n, cfg.b, cfg.B, inst.means, seeds)
        else:
            raise ValueError(f"unknown algorithm {algo!r}")
        for seed_idx, arm in enumerate(selected):
            records.append(
                SweepRecord(
                    instance_id=cfg.instance_id,
                    n=inst.n,
                    alpha=inst.alpha,
                    mu_min=inst.mu_min,
                    mu_max=inst.mu_max,
                    b=cfg.b,
                    B=cfg.B,
                    algo=algo,
                    seed=seed_idx,
                    selected_arm=int(arm),
                    regret=best - inst.means[int(arm) - 1],
                )
            )
    return records


def _trial_worker(args) -> list[SweepRecord]:
    return _run_trial(*args)


def regret_sweep(
    algos: Sequence[str],
    trials: int,
    seeds_per_trial: int,
    rng_seed: int = 0,
    regime: str = LARGE,
    n_max: int = 256,
    workers: int = 1,
) -> list[SweepRecord]:
    """Run ``algos`` over ``trials`` sampled instances; records are sorted
    by (instance_id, algo, seed) and identical for any worker count."""
    for algo in algos:
        if algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {algo!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    args = [
        (rng_seed, trial, regime, n_max, tuple(algos), seeds_per_trial)
        for trial in range(trials)
    ]
    if workers > 1:
        with Pool(processes=workers) as pool:
            per_trial = pool.map(_trial_worker, args, chunksize=max(1, trials // (8 * workers)))
    else:
        per_trial = [_trial_worker(a) for a in args]
    return [record for chunk in per_trial for record in chunk]


@dataclass(frozen=True)
class EquivalenceReport:
    total: int
    matches: int
    mismatches: tuple[tuple[int, int, int, int], ...]  # (instance, seed, sh, ash)

    @property
    def match_rate(self) -> float:
        return self.matches / self.total if self.total else 0.0


def equivalence_sweep(
    trials: int,
    seeds_per_trial: int,
    rng_seed: int = 0,
    regime: str = LARGE,
    n_max: int = 256,
    workers: int = 1,
) -> EquivalenceReport:
    """Fraction of (instance, seed) runs where the advance-first batched
    algorithm selects the same arm as sequential halving."""
    records = regret_sweep(
        ("ash", "sh"), trials, seeds_per_trial, rng_seed, regime, n_max, workers
    )
    return equivalence_from_records(records)


def equivalence_from_records(records: Iterable[SweepRecord]) -> EquivalenceReport:
    picks: dict[tuple[int, int], dict[str, int]] = {}
    for r in records:
        if r.algo in ("sh", "ash"):
            picks.setdefault((r.instance_id, r.seed), {})[r.algo] = r.selected_arm
    mismatches = []
    total = 0
    for (instance_id, seed), by_algo in sorted(picks.items()):
        if "sh" not in by_algo or "ash" not in by_algo:
            continue
        total += 1
        if by_algo["sh"] != by_algo["ash"]:
            mismatches.append((instance_id, seed, by_algo["sh"], by_algo["ash"]))
    return EquivalenceReport(
        total=total, matches=total - len(mismatches), mismatches=tuple(mismatches)
    )


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares slope of y = beta * x through the origin."""

    beta: float
    point_count: int


def fit_slope(points: Sequence[tuple[float, float]]) -> SlopeFit:
    """beta = sum(x*y) / sum(x^2); requires at least one nonzero x."""
    sum_xx = math.fsum(x * x for x, _ in points)
    if sum_xx == 0.0:
        raise DegenerateFit("all x-values are zero; the slope is undefined")
    sum_xy = math.fsum(x * y for x, y in points)
    return SlopeFit(beta=sum_xy / sum_xx, point_count=len(points))


def slope_points(
    records: Iterable[SweepRecord], algo: str, baseline: str = "sh"
) -> list[tuple[float, float]]:
    """Per-instance (baseline mean regret, algo mean regret) pairs."""
    sums: dict[tuple[int, str], list[float]] = {}
    for r in records:
        sums.setdefault((r.instance_id, r.algo), []).append(r.regret)
    points = []
    instances = sorted({iid for (iid, a) in sums if a == baseline})
    for iid in instances:
        if (iid, algo) not in sums:
            continue
        x = math.fsum(sums[(iid, baseline)]) / len(sums[(iid, baseline)])
        y = math.fsum(sums[(iid, algo)]) / len(sums[(iid, algo)])
        points.append((x, y))
    return points


def write_sweep_csv(
    records: Iterable[SweepRecord], fh: TextIO, metadata: Sequence[str] = ()
) -> None:
    """Sweep records as CSV (UTF-8, LF); metadata lines are '#'-prefixed."""
    for line in metadata:
        fh.write(f"# {line}\n")
    fh.write(",".join(SWEEP_COLUMNS) + "\n")
    for r in records:
        fh.write(
            f"{r.instance_id},{r.n},{r.alpha!r},{r.mu_min!r},{r.mu_max!r},"
            f"{r.b},{r.B},{r.algo},{r.seed},{r.selected_arm},{r.regret!r}\n"
        )


def read_sweep_csv(fh: TextIO) -> list[SweepRecord]:
    """Parse a sweep CSV, skipping '#' metadata lines; validates the header."""
    header: list[str] | None = None
    records: list[SweepRecord] = []
    for line in fh:
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line.split(",")
            missing = [c for c in SWEEP_COLUMNS if c not in header]
            if missing:
                raise ValueError(f"missing sweep columns: {', '.join(missing)}")
            continue
        row = dict(zip(header, line.split(",")))
        records.append(
            SweepRecord(
                instance_id=int(row["instance_id"]),
                n=int(row["n"]),
                alpha=float(row["alpha"]),
                mu_min=float(row["mu_min"]),
                mu_max=float(row["mu_max"]),
                b=int(row["b"]),
                B=int(row["B"]),
                algo=row["algo"],
                seed=int(row["seed"]),
                selected_arm=int(row["selected_arm"]),
                regret=float(row["regret"]),
            )
        )
    if header is None:
        raise ValueError("empty sweep CSV: no header row")
    return records
