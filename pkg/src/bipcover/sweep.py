"""Threshold sweep harness: run many seeded trials over an (n, p) grid,
validate every output, and aggregate outcomes.

Each trial is fully determined by (base seed, n, p index, trial index),
so a sweep is reproducible record-for-record and trials can run in a
process pool in any order.  Per-trial failures (construction
infeasibility, property failures, retry exhaustion) become error records
rather than aborting the sweep.

The records CSV has the fixed header

    n,p_num,p_den,seed,source,algorithm,trees,uncovered,valid,case,runtime_ms

where runtime_ms is measured wall time and therefore the one column that
varies between re-runs; every other byte is deterministic.  The summary
CSV produced by :func:`summarise` contains aggregates only and is fully
byte-stable.
"""

from __future__ import annotations

import concurrent.futures
import math
import time
from dataclasses import dataclass
from fractions import Fraction

from .adversary import colour_lower3, colour_lower4
from .cover import CoverParams, almost_cover, audit_state
from .errors import BipcoverError
from .exact import tc_exact
from .graph import validate_cover, validate_partition
from .mindeg import PartitionParams, audit_partition_state, partition3
from .models import (ModelParams, as_fraction, sample_bipartite,
                     sample_colouring, sample_mindeg_subgraph)
from .rng import TAG_SWEEP, combine

RECORD_HEADER = "n,p_num,p_den,seed,source,algorithm,trees,uncovered,valid,case,runtime_ms"
SUMMARY_HEADER = ("n,p_num,p_den,source,algorithm,trials,valid_rate,error_rate,"
                  "mean_trees,mean_uncovered,max_uncovered,within_bound_rate,"
                  "audit_rate")

SOURCES = ("uniform", "lower3", "lower4")
ALGORITHMS = ("almost_cover", "partition3", "exact_tc")


@dataclass(frozen=True)
class SweepConfig:
    n_values: tuple[int, ...]
    trials: int
    base_seed: int = 0
    source: str = "uniform"
    algorithm: str = "almost_cover"
    p_values: tuple[Fraction, ...] | None = None
    c_values: tuple[Fraction, ...] | None = None  # p = c * sqrt(log n / n)
    delta: Fraction = Fraction(1, 20)
    epsilon: Fraction = Fraction(1, 10)
    retry_limit: int = 16
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise BipcoverError("trials must be at least 1")
        if self.source not in SOURCES:
            raise BipcoverError(f"unknown source {self.source!r}")
        if self.algorithm not in ALGORITHMS:
            raise BipcoverError(f"unknown algorithm {self.algorithm!r}")
        if (self.p_values is None) == (self.c_values is None):
            raise BipcoverError("exactly one of p_values / c_values required")
        for p in self.p_values or ():
            if not 0 < p <= 1:
                raise BipcoverError(f"p value {p} outside (0, 1]")

    def p_grid(self, n: int) -> list[Fraction]:
        if self.p_values is not None:
            return list(self.p_values)
        out = []
        for c in self.c_values:
            p = float(c) * math.sqrt(math.log(n) / n)
            out.append(min(Fraction(1), Fraction(p).limit_denominator(10 ** 9)))
        return out


@dataclass
class SweepRecord:
    n: int
    p: Fraction
    seed: int
    source: str
    algorithm: str
    trees: int
    uncovered: int
    valid: bool
    case: str
    runtime_ms: int
    error: str = ""
    audit_ok: bool | None = None  # in-memory only; the CSV schema is fixed

    def csv_row(self) -> str:
        return (f"{self.n},{self.p.numerator},{self.p.denominator},{self.seed},"
                f"{self.source},{self.algorithm},{self.trees},{self.uncovered},"
                f"{str(self.valid).lower()},{self.case},{self.runtime_ms}")


def _trial(config: SweepConfig, n: int, p_index: int, p: Fraction,
           trial: int) -> SweepRecord:
    seed = combine(config.base_seed, TAG_SWEEP, n, p_index, trial)
    start = time.perf_counter()

    def finish(trees: int, uncovered: int, valid: bool, case: str,
               error: str = "", audit_ok: bool | None = None) -> SweepRecord:
        ms = int((time.perf_counter() - start) * 1000)
        return SweepRecord(n, p, seed, config.source, config.algorithm,
                           trees, uncovered, valid, case, ms, error, audit_ok)

    try:
        if config.algorithm == "partition3":
            fraction = Fraction(13, 16) + config.delta
            g = sample_mindeg_subgraph(n, fraction, seed)
        else:
            g = sample_bipartite(ModelParams(n, n, p), seed)
        if config.source == "uniform":
            colouring = sample_colouring(g, Fraction(1, 2), seed)
        elif config.source == "lower3":
            colouring, _ = colour_lower3(g)
        else:
            colouring, _ = colour_lower4(g)

        if config.algorithm == "almost_cover":
            params = CoverParams(p=p, epsilon=config.epsilon,
                                 retry_limit=config.retry_limit, seed=seed)
            cover, state = almost_cover(g, colouring, params)
            ok = validate_cover(g, colouring, cover).ok
            audit_ok = audit_state(g, colouring, params, state).all_satisfied
            return finish(len(cover.trees), len(cover.uncovered), ok,
                          state.case.value, audit_ok=audit_ok)
        if config.algorithm == "partition3":
            params = PartitionParams(delta=config.delta, seed=seed,
                                     retry_limit=max(config.retry_limit, 32))
            partition, state = partition3(g, colouring, params)
            ok = validate_partition(g, colouring, partition).ok
            audit_ok = audit_partition_state(
                state, g, colouring, params).all_satisfied
            return finish(len(partition.parts), 0, ok, state.branch,
                          audit_ok=audit_ok)
        result = tc_exact(g, colouring)
        return finish(result.value, 0, True, "exact")
    except BipcoverError as exc:
        return finish(0, 0, False, "error", error=type(exc).__name__)


def run_sweep(config: SweepConfig) -> list[SweepRecord]:
    """All trials of the grid, in deterministic (n, p index, trial) order."""
    jobs = []
    for n in config.n_values:
        for p_index, p in enumerate(config.p_grid(n)):
            for trial in range(config.trials):
                jobs.append((n, p_index, p, trial))
    if config.threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.threads) as pool:
            records = list(pool.map(_trial_star, [(config,) + j for j in jobs],
                                    chunksize=8))
    else:
        records = [_trial(config, *job) for job in jobs]
    return records


def _trial_star(args) -> SweepRecord:
    config, n, p_index, p, trial = args
    return _trial(config, n, p_index, p, trial)


def records_to_csv(records: list[SweepRecord]) -> str:
    lines = [RECORD_HEADER]
    lines.extend(r.csv_row() for r in records)
    return "\n".join(lines) + "\n"


def summarise(records: list[SweepRecord]) -> str:
    """Aggregate per (n, p, source, algorithm) cell; byte-stable output.

    ``within_bound_rate`` is the fraction of valid almost_cover trials
    with at most 200/p uncovered vertices (1.0 for other algorithms'
    valid trials).
    """
    if not records:
        raise BipcoverError("no records to summarise")
    cells: dict[tuple, list[SweepRecord]] = {}
    for r in records:
        cells.setdefault((r.n, r.p, r.source, r.algorithm), []).append(r)
    lines = [SUMMARY_HEADER]
    for key in sorted(cells, key=lambda k: (k[0], k[1], k[2], k[3])):
        n, p, source, algorithm = key
        rs = cells[key]
        trials = len(rs)
        valid = sum(1 for r in rs if r.valid)
        errors = sum(1 for r in rs if r.error)
        mean_trees = sum(r.trees for r in rs) / trials
        mean_unc = sum(r.uncovered for r in rs) / trials
        max_unc = max(r.uncovered for r in rs)
        bound = 200 / p
        within = sum(1 for r in rs
                     if r.valid and (r.algorithm != "almost_cover"
                                     or Fraction(r.uncovered) <= bound))
        audited = [r for r in rs if r.audit_ok is not None]
        audit_rate = (f"{sum(1 for r in audited if r.audit_ok) / len(audited):.6f}"
                      if audited else "")
        lines.append(
            f"{n},{p.numerator},{p.denominator},{source},{algorithm},{trials},"
            f"{valid / trials:.6f},{errors / trials:.6f},{mean_trees:.6f},"
            f"{mean_unc:.6f},{max_unc},{within / trials:.6f},{audit_rate}")
    return "\n".join(lines) + "\n"


def plot_script(summary_path: str) -> str:
    """A generic gnuplot script over the summary CSV (no images rendered here)."""
    return f"""# gnuplot script for a bipcover sweep summary
set datafile separator ','
set key autotitle columnhead
set xlabel 'edge probability p'
set ylabel 'rate'
set yrange [0:1.05]
set grid
plot '{summary_path}' using ($2/$3):7 with linespoints title 'valid rate', \\
     '' using ($2/$3):12 with linespoints title 'within-bound rate'
"""


def parse_config_file(text: str) -> dict:
    """Flat ``key = value`` config format mirroring the CLI flags."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BipcoverError(f"config line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def config_from_mapping(mapping: dict) -> SweepConfig:
    def ints(value) -> tuple[int, ...]:
        if isinstance(value, (list, tuple)):
            return tuple(int(v) for v in value)
        return tuple(int(v) for v in str(value).split(","))

    def fracs(value) -> tuple[Fraction, ...]:
        if isinstance(value, (list, tuple)):
            return tuple(as_fraction(v) for v in value)
        return tuple(as_fraction(v) for v in str(value).split(","))

    kwargs: dict = {
        "n_values": ints(mapping["n_values"]),
        "trials": int(mapping.get("trials", 1)),
        "base_seed": int(mapping.get("base_seed", 0)),
        "source": mapping.get("source", "uniform"),
        "algorithm": mapping.get("algorithm", "almost_cover"),
        "retry_limit": int(mapping.get("retry_limit", 16)),
        "threads": int(mapping.get("threads", 1)),
        "delta": as_fraction(mapping.get("delta", Fraction(1, 20))),
        "epsilon": as_fraction(mapping.get("epsilon", Fraction(1, 10))),
    }
    if "p_values" in mapping and mapping["p_values"]:
        kwargs["p_values"] = fracs(mapping["p_values"])
    if "c_values" in mapping and mapping["c_values"]:
        kwargs["c_values"] = fracs(mapping["c_values"])
    return SweepConfig(**kwargs)
