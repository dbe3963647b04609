"""Paired-comparison statistics for the action-count study.

Small-n tooling: an exact Wilcoxon signed-rank test (the study sizes make
the exact null distribution cheap) with an Edgeworth-corrected normal
fallback for ties, and a studentized bootstrap interval for the mean
paired difference.  Everything is deterministic given a seed, so analysis
runs are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "BootstrapCI",
    "WilcoxonResult",
    "bootstrap_mean_ci",
    "mean_difference",
    "wilcoxon_signed_rank",
]


def _paired_diffs(x: Sequence[float], y: Sequence[float] | None) -> list[float]:
    if y is None:
        return [float(v) for v in x]
    if len(x) != len(y):
        raise ValueError(f"paired samples differ in length: {len(x)} vs {len(y)}")
    return [float(a) - float(b) for a, b in zip(x, y)]


def mean_difference(x: Sequence[float], y: Sequence[float] | None = None) -> float:
    d = _paired_diffs(x, y)
    if not d:
        raise ValueError("empty sample")
    return sum(d) / len(d)


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float          # W = min(W+, W-)
    p_value: float            # two-sided
    method: str               # "exact" | "edgeworth"
    n: int                    # pairs ranked (zero differences dropped)


def _average_ranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1           # ranks are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _exact_p(w: float, n: int) -> float:
    # counts[s] = number of rank subsets of {1..n} summing to s
    counts = [0] * (n * (n + 1) // 2 + 1)
    counts[0] = 1
    for r in range(1, n + 1):
        for s in range(len(counts) - 1, r - 1, -1):
            counts[s] += counts[s - r]
    tail = sum(counts[: int(w) + 1])
    return min(1.0, 2.0 * tail / (1 << n))


def wilcoxon_signed_rank(x: Sequence[float],
                         y: Sequence[float] | None = None, *,
                         method: str = "auto",
                         exact_limit: int = 25) -> WilcoxonResult:
    """Two-sided signed-rank test on `x - y` (or on `x` directly).

    Zero differences are dropped before ranking.  `method="auto"` uses
    the exact distribution when there are no ties or zeros and at most
    `exact_limit` pairs remain; otherwise a normal approximation with
    continuity and Edgeworth kurtosis corrections, using the exact
    second and fourth cumulants of the (possibly tied) rank null.
    """
    if method not in ("auto", "exact", "approx"):
        raise ValueError(f"unknown method {method!r}")
    diffs = _paired_diffs(x, y)
    d = [v for v in diffs if v != 0.0]
    had_zeros = len(d) != len(diffs)
    n = len(d)
    if n == 0:
        raise ValueError("all differences are zero")

    magnitudes = [abs(v) for v in d]
    ranks = _average_ranks(magnitudes)
    w_plus = sum(r for r, v in zip(ranks, d) if v > 0)
    w = min(w_plus, n * (n + 1) / 2 - w_plus)

    tied = len(set(magnitudes)) != n
    if method == "exact" and tied:
        raise ValueError("exact method is undefined with tied magnitudes")
    use_exact = (method == "exact"
                 or (method == "auto" and not tied and not had_zeros
                     and n <= exact_limit))
    if use_exact:
        return WilcoxonResult(w, _exact_p(w, n), "exact", n)

    # W+ is a sum of independent r_i * Bernoulli(1/2); its cumulants
    # follow directly from the rank values, which makes the tie
    # correction automatic (average ranks shrink the moments)
    mean = sum(ranks) / 2
    var = sum(r * r for r in ranks) / 4
    kappa4 = -sum(r ** 4 for r in ranks) / 8
    sd = math.sqrt(var)
    gamma2 = kappa4 / (var * var)
    z = (w - mean + 0.5) / sd        # lattice continuity
    phi = math.exp(-z * z / 2) / math.sqrt(2 * math.pi)
    cdf = math.erfc(-z / math.sqrt(2)) / 2 \
        - phi * (gamma2 / 24) * (z ** 3 - 3 * z)
    cdf = min(max(cdf, 0.0), 1.0)
    return WilcoxonResult(w, min(1.0, 2 * cdf), "edgeworth", n)


@dataclass(frozen=True)
class BootstrapCI:
    low: float
    high: float
    mean: float
    b: int
    seed: int
    redraws: int              # zero-variance resamples that were redrawn


def bootstrap_mean_ci(sample: Sequence[float], *, b: int = 10_000,
                      alpha: float = 0.05, seed: int = 0,
                      max_redraw_rounds: int = 50) -> BootstrapCI:
    """Studentized bootstrap interval for the mean.

    Resamples with a seeded PCG64 stream, so results repeat exactly.
    Resamples with zero variance have no t statistic; they are redrawn
    (a bounded number of rounds, then dropped) and counted in `redraws`.
    """
    x = np.asarray(sample, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need a flat sample of at least 2 values")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha out of range: {alpha}")
    n = x.size
    mean = float(x.mean())
    se = float(x.std(ddof=1)) / math.sqrt(n)
    if se == 0.0:
        return BootstrapCI(mean, mean, mean, b, seed, 0)

    rng = np.random.Generator(np.random.PCG64(seed))
    res = x[rng.integers(0, n, size=(b, n))]
    means = res.mean(axis=1)
    ses = res.std(axis=1, ddof=1) / math.sqrt(n)

    redraws = 0
    for _ in range(max_redraw_rounds):
        flat = np.flatnonzero(ses == 0.0)
        if flat.size == 0:
            break
        redraws += int(flat.size)
        res = x[rng.integers(0, n, size=(flat.size, n))]
        means[flat] = res.mean(axis=1)
        ses[flat] = res.std(axis=1, ddof=1) / math.sqrt(n)
    keep = ses > 0.0
    t = (means[keep] - mean) / ses[keep]

    lo_t, hi_t = np.quantile(t, [alpha / 2, 1 - alpha / 2])
    return BootstrapCI(low=mean - float(hi_t) * se,
                       high=mean - float(lo_t) * se,
                       mean=mean, b=b, seed=seed, redraws=redraws)
