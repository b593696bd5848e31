"""Empirical gap statistics over an ordinate table.

All counts are over indices n with gamma_n <= T (so N(T) of them) and all
thresholds are 2 pi c / log T in absolute units. Statistics that look
ahead past T raise :class:`~zetagaps.errors.CoverageError` when the table
stops short; indices are never silently dropped.

Failure classes: ``S_j`` collects the indices whose *first* sub-threshold
gap among g_n, ..., g_{n+r-1} is g_{n+j-1}. With this convention
``N(T) = N_r(T, c) + sum_j |S_j|`` holds exactly. The literal reading
(j moderate gaps followed by a short one) misses the indices whose very
first gap is short; it is available as ``convention="literal"`` and its
``partition_residual`` is then generally nonzero.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ArgumentError, CoverageError, DomainError, ValidationError
from .zeros import OrdinateTable, count_upto

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RunReport:
    r: int
    c: float
    T: float
    n_total: int
    n_runs: int
    s_sizes: tuple[int, ...]
    partition_residual: int
    convention: str = "minimal"

    @property
    def proportion(self) -> float:
        return self.n_runs / self.n_total if self.n_total else float("nan")


@dataclass(frozen=True)
class SpacingDistribution:
    bin_edges: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    n_samples: int
    normalization: str

    def __post_init__(self):
        if self.normalization not in ("global", "local"):
            raise ValidationError(f"unknown normalization {self.normalization!r}")
        if np.any(np.diff(self.bin_edges) <= 0):
            raise ValidationError("bin edges must be strictly increasing")
        if len(self.counts) != len(self.bin_edges) - 1:
            raise ValidationError("need len(counts) == len(bin_edges) - 1")

    def cdf(self) -> np.ndarray:
        """Empirical CDF at the right bin edges."""
        return np.cumsum(self.counts) / self.n_samples


@dataclass(frozen=True)
class AhHistogram:
    T: float
    bin_counts: dict[int, int]
    p_values: dict[int, float]
    n_total: int


def moderate_threshold(T: float, c: float) -> float:
    """2 pi c / log T: a gap of c mean spacings at height T."""
    if not T > 1:
        raise DomainError(f"threshold needs T > 1, got {T!r}")
    if not c >= 0:
        raise DomainError(f"threshold needs c >= 0, got {c!r}")
    return TWO_PI * c / math.log(T)


def _with_lookahead(table: OrdinateTable, T: float, ahead: int) -> tuple[int, np.ndarray]:
    """N(T) and the ordinates gamma_1 .. gamma_{N(T)+ahead}."""
    n_total = count_upto(table, T)
    need = n_total + ahead
    if need > len(table):
        raise CoverageError(
            f"statistic at T={T} needs {ahead} ordinates beyond the last one <= T; "
            f"table ends {need - len(table)} short"
        )
    return n_total, table.ordinates[:need]


def _moderate_run_lengths(table: OrdinateTable, r: int, c: float, T: float,
                          ahead: int) -> tuple[int, np.ndarray]:
    """Per index n <= N(T): how many consecutive gaps from g_n on are moderate, capped at r+1."""
    if int(r) != r or r < 1:
        raise ArgumentError(f"r must be a positive integer, got {r!r}")
    if not c > 0:
        raise DomainError(f"c must be positive, got {c!r}")
    n_total, gam = _with_lookahead(table, T, ahead)
    ok = np.diff(gam) >= moderate_threshold(T, c)
    # index of the next failing gap at or after each position
    pos = np.arange(ok.size)
    nxt = np.where(ok, ok.size + ahead, pos)
    nxt = np.minimum.accumulate(nxt[::-1])[::-1]
    return n_total, (nxt - pos)[:n_total]


def count_runs(table: OrdinateTable, r: int, c: float, T: float,
               convention: str = "minimal") -> RunReport:
    """N_r(T, c) with the failure partition |S_1|, ..., |S_r|."""
    if convention not in ("minimal", "literal"):
        raise ArgumentError(f"unknown convention {convention!r}")
    ahead = r if convention == "minimal" else r + 1
    n_total, run = _moderate_run_lengths(table, r, c, T, ahead)
    n_runs = int(np.count_nonzero(run >= r))
    hist = np.bincount(np.minimum(run, r + 1), minlength=r + 2)
    if convention == "minimal":
        sizes = hist[0:r]
    else:
        sizes = hist[1:r + 1]
    sizes = tuple(int(x) for x in sizes)
    residual = n_total - n_runs - sum(sizes)
    return RunReport(int(r), float(c), float(T), n_total, n_runs, sizes, residual, convention)


def partition_sj(table: OrdinateTable, r: int, c: float, T: float,
                 convention: str = "minimal") -> tuple[int, ...]:
    return count_runs(table, r, c, T, convention).s_sizes


def empirical_pair_correlation(table: OrdinateTable, c: float, T: float) -> float:
    """(1/N(T)) #{(m, n): 0 < gamma_n - gamma_m < 2 pi c / log T, both <= T}."""
    if not c > 0:
        raise DomainError(f"c must be positive, got {c!r}")
    n_total = count_upto(table, T)
    if n_total == 0:
        return 0.0
    x = table.ordinates[:n_total]
    return count_close_pairs(x, moderate_threshold(T, c)) / n_total


def count_close_pairs(x: np.ndarray, threshold: float) -> int:
    """Ordered pairs i < j with 0 < x[j] - x[i] < threshold, for sorted x.

    Sweep by binary search, then settle the rounding-sensitive boundary
    elements by comparing the differences themselves.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    lo = np.searchsorted(x, x, side="right")  # first strictly larger
    hi = np.searchsorted(x, x + threshold, side="left")
    hi = np.maximum(hi, lo)
    idx = np.arange(n)
    # x[hi-1] - x[i] may still reach the threshold, x[hi] - x[i] may fall below
    while True:
        back = (hi > lo) & (x[np.maximum(hi - 1, 0)] - x[idx] >= threshold)
        if not back.any():
            break
        hi[back] -= 1
    while True:
        fwd = (hi < n) & (x[np.minimum(hi, n - 1)] - x[idx] < threshold)
        if not fwd.any():
            break
        hi[fwd] += 1
    return int((hi - lo).sum())


def neighbor_spacing_cdf(table: OrdinateTable, ell: int, c: float, T: float) -> float:
    """(1/N(T)) #{n : gamma_{n+ell} - gamma_n <= 2 pi c / log T}."""
    if int(ell) != ell or ell < 1:
        raise ArgumentError(f"ell must be a positive integer, got {ell!r}")
    if not c >= 0:
        raise DomainError(f"c must be nonnegative, got {c!r}")
    n_total, gam = _with_lookahead(table, T, ell)
    if n_total == 0:
        return float("nan")
    diff = gam[ell:ell + n_total] - gam[:n_total]
    thr = moderate_threshold(T, c)
    return int(np.count_nonzero(diff <= thr)) / n_total


def joint_run_probability(table: OrdinateTable, thresholds: Sequence[float], T: float) -> float:
    """(1/N(T)) #{n : gamma_{n+l} - gamma_n <= 2 pi c_l / log T for l = 1..r}."""
    cs = np.asarray(thresholds, dtype=float)
    if cs.ndim != 1 or cs.size == 0:
        raise ArgumentError("need at least one threshold")
    if np.any(np.isnan(cs)) or np.any(cs < 0):
        raise DomainError("thresholds must be nonnegative")
    if np.any(np.diff(cs) < 0):
        raise ArgumentError("thresholds must be nondecreasing in ell")
    r = cs.size
    n_total, gam = _with_lookahead(table, T, r)
    if n_total == 0:
        return float("nan")
    logT = math.log(T)
    ok = np.ones(n_total, dtype=bool)
    for ell in range(1, r + 1):
        ok &= gam[ell:ell + n_total] - gam[:n_total] <= TWO_PI * cs[ell - 1] / logT
    return int(np.count_nonzero(ok)) / n_total


def normalized_gaps(table: OrdinateTable, T: float, normalization: str = "global") -> np.ndarray:
    """Nearest-neighbor gaps of the ordinates <= T in mean-spacing units.

    ``global`` scales by log(T)/2pi, ``local`` by log(gamma_n)/2pi.
    """
    n_total, gam = _with_lookahead(table, T, 1)
    g = np.diff(gam)[:n_total]
    if normalization == "global":
        return g * math.log(T) / TWO_PI
    if normalization == "local":
        return g * np.log(gam[:n_total]) / TWO_PI
    raise ValidationError(f"unknown normalization {normalization!r}")


def spacing_distribution(table: OrdinateTable, T: float, bin_edges,
                         normalization: str = "global") -> SpacingDistribution:
    gaps = normalized_gaps(table, T, normalization)
    edges = np.asarray(bin_edges, dtype=float)
    counts, _ = np.histogram(gaps, bins=edges)
    return SpacingDistribution(edges, counts, int(gaps.size), normalization)


def ah_rescaled_difference(table: OrdinateTable, n: int) -> float:
    """(gamma_{n+1} log gamma_{n+1} - gamma_n log gamma_n) / 2 pi."""
    a, b = table[n], table[n + 1]
    if not a > 1:
        raise DomainError(f"rescaled difference needs gamma_n > 1, got {a!r}")
    return (b * math.log(b) - a * math.log(a)) / TWO_PI


def ah_bin_index(d):
    """Half-integer bin k with max(k/2 - 1/4, 0) <= d < k/2 + 1/4."""
    d_arr = np.asarray(d, dtype=float)
    if np.any(~np.isfinite(d_arr)) or np.any(d_arr < 0):
        raise DomainError("bin index needs finite nonnegative differences")
    k = np.floor(2.0 * d_arr + 0.5).astype(np.int64)
    return int(k) if k.ndim == 0 else k


def ah_binning(table: OrdinateTable, T: float) -> AhHistogram:
    """Occupancy of the half-integer bins B_{k/2}(T) and p_{k/2}(T)."""
    n_total, gam = _with_lookahead(table, T, 1)
    if n_total and gam[0] <= 1:
        raise DomainError("rescaled differences need ordinates > 1")
    w = gam * np.log(gam) / TWO_PI
    k = ah_bin_index(np.diff(w)[:n_total])
    counts = dict(sorted((int(key), int(v)) for key, v in Counter(k.tolist()).items()))
    p = {key: v / n_total for key, v in counts.items()}
    return AhHistogram(float(T), counts, p, n_total)
