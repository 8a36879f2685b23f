"""Seeded random-graph census of controllable graphs and F_n members."""
from __future__ import annotations

import csv
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import Pool

from .graph import random_graph
from .walk import classify_Fn

CSV_FIELDS = ("n", "samples", "p", "seed", "controllable", "in_fn")


@dataclass
class ExperimentStats:
    n: int
    samples: int
    p: Fraction
    seed: int
    controllable_count: int
    fn_count: int
    elapsed: float = 0.0

    @property
    def controllable_fraction(self) -> float:
        return self.controllable_count / self.samples

    @property
    def fn_fraction(self) -> float:
        return self.fn_count / self.samples

    def csv_row(self) -> dict[str, str]:
        return {
            "n": str(self.n),
            "samples": str(self.samples),
            "p": str(self.p),
            "seed": str(self.seed),
            "controllable": str(self.controllable_count),
            "in_fn": str(self.fn_count),
        }

    @classmethod
    def from_csv_row(cls, row: dict[str, str]) -> ExperimentStats:
        return cls(
            int(row["n"]),
            int(row["samples"]),
            Fraction(row["p"]),
            int(row["seed"]),
            int(row["controllable"]),
            int(row["in_fn"]),
        )

    def to_json(self) -> dict:
        return {**self.csv_row(), "elapsed_seconds": round(self.elapsed, 3)}


def sample_seed(seed: int, index: int) -> int:
    return (seed ^ index) & (2**64 - 1)


def _classify_sample(args: tuple[int, Fraction, int]) -> tuple[bool, bool]:
    n, p, seed = args
    c = classify_Fn(random_graph(n, p, seed))
    return c.controllable, c.in_Fn


def run_experiment(
    n: int,
    samples: int,
    p: Fraction | str | float = Fraction(1, 2),
    seed: int = 0,
    parallelism: int = 1,
) -> ExperimentStats:
    """Count controllable graphs and F_n members over ``samples`` G(n, p) draws.

    Sample ``i`` uses seed ``seed XOR i``, so the counts do not depend on
    ``parallelism``.
    """
    if n < 1 or samples < 1:
        raise ValueError("need n >= 1 and samples >= 1")
    p = Fraction(p)
    jobs = [(n, p, sample_seed(seed, i)) for i in range(samples)]
    start = time.perf_counter()
    if parallelism <= 1:
        results = map(_classify_sample, jobs)
        ctrl, fn = _tally(results)
    else:
        with Pool(parallelism) as pool:
            ctrl, fn = _tally(pool.imap_unordered(_classify_sample, jobs, chunksize=32))
    return ExperimentStats(n, samples, p, seed, ctrl, fn, time.perf_counter() - start)


def _tally(results) -> tuple[int, int]:
    ctrl = fn = 0
    for c, f in results:
        ctrl += c
        fn += f
    return ctrl, fn


def append_csv(path: str, stats: ExperimentStats) -> None:
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        if new:
            writer.writeheader()
        writer.writerow(stats.csv_row())


def read_csv(path: str) -> list[ExperimentStats]:
    with open(path, newline="") as fh:
        return [ExperimentStats.from_csv_row(row) for row in csv.DictReader(fh)]
