"""Seeded i.i.d. sampling and Monte Carlo verification.

Reproducibility contract: every replicate draws from its own substream,
derived from the master seed by a counter-based split (replicate index ->
spawn key).  Replicates can therefore run in any order or thread layout and
the aggregate report is bit-for-bit identical; aggregation itself uses
exactly rounded summation over the index-ordered statistics.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distributions import ProbVector
from .errors import InvalidInputError
from .mass import expected_missing_mass, gt_bias
from .numerics import fsum

_CHUNK = 2048  # replicates per worker task; fixed so layout never matters


def _default_threads() -> int:
    raw = os.environ.get("MML_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    """Independent substream for one replicate of one experiment."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


@dataclass(frozen=True)
class SampleCounts:
    """Occurrence counts of t i.i.d. draws, indexed like the source masses."""

    t: int
    counts: tuple[int, ...]
    source: str
    seed: int

    def __post_init__(self):
        if sum(self.counts) != self.t:
            raise InvalidInputError("counts must sum to the sample size")


@dataclass(frozen=True)
class McReport:
    """Result of a seeded Monte Carlo experiment."""

    replicates: int
    estimate: float
    std_error: float
    seed: int
    exceed_freq: float | None = None
    bound: float | None = None
    violated: bool | None = None

    def to_json_obj(self) -> dict:
        obj = {
            "estimate": self.estimate,
            "std_error": self.std_error,
            "replicates": self.replicates,
            "seed": self.seed,
        }
        if self.exceed_freq is not None:
            obj["exceed_freq"] = self.exceed_freq
        if self.bound is not None:
            obj["bound"] = self.bound
        if self.violated is not None:
            obj["violated"] = self.violated
        return obj


def _cumulative_table(d: ProbVector) -> np.ndarray:
    cum = np.cumsum(np.asarray(d.masses))
    cum[-1] = 1.0  # guard: float cumsum may land a hair under 1
    return cum


def _draw_counts(cum: np.ndarray, t: int, rng: np.random.Generator) -> np.ndarray:
    """Multinomial counts from t inverse-CDF categorical draws."""
    u = rng.random(t)
    idx = np.searchsorted(cum, u, side="right")
    return np.bincount(idx, minlength=len(cum))


def draw_sample(d: ProbVector, t: int, seed: int, source: str | None = None) -> SampleCounts:
    """t i.i.d. draws from d, aggregated to per-atom counts; deterministic per seed."""
    if not isinstance(t, int) or t < 1:
        raise InvalidInputError(f"sample size must be a positive integer, got {t!r}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    counts = _draw_counts(_cumulative_table(d), t, rng)
    return SampleCounts(
        t=t,
        counts=tuple(int(c) for c in counts),
        source=source if source is not None else f"ProbVector(n={d.n})",
        seed=seed,
    )


def empirical_missing_mass(d: ProbVector, sc: SampleCounts) -> float:
    """Total mass of the atoms that the sample never hit."""
    if len(sc.counts) != d.n:
        raise InvalidInputError(
            f"counts cover {len(sc.counts)} atoms but the distribution has {d.n}"
        )
    return fsum(m for m, c in zip(d.masses, sc.counts) if c == 0)


def good_turing(sc: SampleCounts) -> float:
    """Good-Turing missing-mass estimate: fraction of the sample seen once."""
    if sc.t < 1:
        raise InvalidInputError("sample must contain at least one draw")
    return sum(1 for c in sc.counts if c == 1) / sc.t


def _mc_rows(
    replicates: int,
    seed: int,
    row_fn,
    width: int,
    threads: int | None = None,
) -> np.ndarray:
    """Run row_fn(rng, i) for each replicate; row order is index order."""
    threads = _default_threads() if threads is None else max(1, threads)
    out = np.empty((replicates, width))

    def run_chunk(start: int) -> None:
        for i in range(start, min(start + _CHUNK, replicates)):
            out[i] = row_fn(replicate_rng(seed, i), i)

    starts = range(0, replicates, _CHUNK)
    if threads == 1:
        for s in starts:
            run_chunk(s)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_chunk, starts))
    return out


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    r = len(values)
    mean = fsum(values) / r
    if r < 2:
        return mean, 0.0
    var = fsum((v - mean) ** 2 for v in values) / (r - 1)
    return mean, math.sqrt(var / r)


def verify_bias(
    d: ProbVector, t: int, replicates: int, seed: int, threads: int | None = None
) -> McReport:
    """Monte Carlo check of the bias identity for the Good-Turing estimate.

    Estimates E[GT estimate - missing mass] and compares it against the
    closed form; the report flags a violation when the closed form falls
    outside three standard errors of the estimate.
    """
    if replicates < 1000:
        raise InvalidInputError("bias verification needs at least 1000 replicates")
    if not isinstance(t, int) or t < 1:
        raise InvalidInputError(f"sample size must be a positive integer, got {t!r}")
    cum = _cumulative_table(d)
    masses = np.asarray(d.masses)

    def row(rng: np.random.Generator, _i: int):
        counts = _draw_counts(cum, t, rng)
        missing = float(masses[counts == 0].sum())
        estimate = float(np.count_nonzero(counts == 1)) / t
        return (estimate - missing,)

    diffs = _mc_rows(replicates, seed, row, 1, threads)[:, 0]
    mean, se = _mean_se(diffs)
    closed = gt_bias(d, t)
    return McReport(
        replicates=replicates,
        estimate=mean,
        std_error=se,
        seed=seed,
        bound=closed,
        violated=bool(abs(mean - closed) > 3.0 * se),
    )


def verify_concentration(
    d: ProbVector,
    t: int,
    eps: float,
    replicates: int,
    seed: int,
    threads: int | None = None,
) -> McReport:
    """Empirical tail frequency of |U_t - E U_t| >= eps against 2 exp(-t eps^2).

    The report's ``violated`` flag fires only when the empirical frequency
    exceeds the bound by more than three binomial standard errors.
    """
    if replicates < 10_000:
        raise InvalidInputError("concentration verification needs at least 10^4 replicates")
    if not (0.0 < eps <= 1.0):
        raise InvalidInputError(f"deviation eps must lie in (0, 1], got {eps}")
    if not isinstance(t, int) or t < 1:
        raise InvalidInputError(f"sample size must be a positive integer, got {t!r}")
    cum = _cumulative_table(d)
    masses = np.asarray(d.masses)
    center = expected_missing_mass(d, t)

    def row(rng: np.random.Generator, _i: int):
        counts = _draw_counts(cum, t, rng)
        missing = float(masses[counts == 0].sum())
        return missing, 1.0 if abs(missing - center) >= eps else 0.0

    rows = _mc_rows(replicates, seed, row, 2, threads)
    mean, se = _mean_se(rows[:, 0])
    freq = fsum(rows[:, 1]) / replicates
    freq_se = math.sqrt(freq * (1.0 - freq) / replicates)
    bound = 2.0 * math.exp(-t * eps * eps)
    return McReport(
        replicates=replicates,
        estimate=mean,
        std_error=se,
        seed=seed,
        exceed_freq=freq,
        bound=bound,
        violated=bool(freq - 3.0 * freq_se > bound),
    )
