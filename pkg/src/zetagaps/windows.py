"""Zero counts in consecutive windows of length h = 2 pi m / log T.

Windows are half-open on the left, I_j(t) = (t + (j-1) h, t + j h].
Everything here is exact with respect to the ordinate table: the window
count N(t+h) - N(t) is a step function of t whose breakpoints are the
points gamma and gamma - h, so integrals and measures over t are computed
by sweeping those events rather than by sampling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, DomainError
from .zeros import OrdinateTable

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class WindowConfig:
    T: float
    m: int
    r: int = 1
    epsilon: float = 0.1
    c_exponent: float = 3.0  # reserved for coupling to construct_tj

    def __post_init__(self):
        if not self.T > 1:
            raise DomainError(f"T must exceed 1, got {self.T!r}")
        if int(self.m) != self.m or self.m < 1:
            raise ArgumentError(f"m must be a positive integer, got {self.m!r}")
        if int(self.r) != self.r or self.r < 1:
            raise ArgumentError(f"r must be a positive integer, got {self.r!r}")
        if not 0 < self.epsilon < 1:
            raise ArgumentError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")

    @property
    def h(self) -> float:
        return TWO_PI * self.m / math.log(self.T)

    @property
    def gap_threshold(self) -> float:
        """4 pi / (3 log T)."""
        return 4 * math.pi / (3 * math.log(self.T))


@dataclass(frozen=True)
class WindowReport:
    t: float
    counts: tuple[int, ...]
    all_within_bounds: bool
    max_gaps: tuple[float, ...] = field(default=())
    has_moderate_gap: tuple[bool, ...] = field(default=())


def _edges(t: float, cfg: WindowConfig) -> np.ndarray:
    return t + cfg.h * np.arange(cfg.r + 1)


def window_counts(table: OrdinateTable, t: float, cfg: WindowConfig) -> tuple[int, ...]:
    """Number of ordinates in each of the r windows starting at t."""
    edges = _edges(t, cfg)
    table.check_covers(edges[0], edges[-1])
    n = np.searchsorted(table.ordinates, edges, side="right")
    return tuple(int(x) for x in np.diff(n))


def within_bounds(counts, m: int) -> bool:
    """m/2 < count < 3m/2 for every window (compared in integers)."""
    return all(m < 2 * c < 3 * m for c in counts)


def _segment_values(table: OrdinateTable, lo: float, hi: float,
                    offsets: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Breakpoints of t -> N(t + off) on [lo, hi] for each offset, and the
    count matrix N(t_mid + off) evaluated at segment midpoints."""
    gam = table.ordinates
    events = [np.array([lo, hi])]
    for off in offsets:
        # N(t + off) jumps where t + off crosses an ordinate
        pts = gam - off
        events.append(pts[(pts > lo) & (pts < hi)])
    bp = np.unique(np.concatenate(events))
    mid = 0.5 * (bp[:-1] + bp[1:])
    counts = np.searchsorted(gam, mid[:, None] + offsets[None, :], side="right")
    return bp, counts


def variance_integral(table: OrdinateTable, T: float, h: float, m: float | None = None) -> float:
    """Exact integral over [T, 2T] of (N(t+h) - N(t) - m)^2 dt.

    ``m`` defaults to h log T / 2 pi, the expected count.
    """
    if not h > 0:
        raise DomainError(f"h must be positive, got {h!r}")
    if m is None:
        m = h * math.log(T) / TWO_PI
    table.check_covers(T, 2 * T + h)
    bp, n = _segment_values(table, T, 2 * T, np.array([0.0, h]))
    dev = (n[:, 1] - n[:, 0]) - m
    return float(np.dot(np.diff(bp), dev * dev))


def good_set_measure(table: OrdinateTable, cfg: WindowConfig,
                     grid_step: float | None = None) -> float:
    """Fraction of grid sites t in (T, 2T] whose r window counts all lie in (m/2, 3m/2).

    The grid is t_k = T + k * grid_step, k = 1, 2, ..., default step h/16.
    """
    T, h, m, r = cfg.T, cfg.h, cfg.m, cfg.r
    step = h / 16 if grid_step is None else grid_step
    if not step > 0:
        raise ArgumentError(f"grid_step must be positive, got {grid_step!r}")
    table.check_covers(T, 2 * T + r * h)
    k = int(math.floor(T / step))
    sites = T + step * np.arange(1, k + 1)
    ok = np.ones(sites.size, dtype=bool)
    prev = np.searchsorted(table.ordinates, sites, side="right")
    for j in range(1, r + 1):
        cur = np.searchsorted(table.ordinates, sites + j * h, side="right")
        c = cur - prev
        ok &= (2 * c > m) & (2 * c < 3 * m)
        prev = cur
    return float(np.count_nonzero(ok)) / sites.size


def good_set_measure_exact(table: OrdinateTable, cfg: WindowConfig) -> float:
    """Lebesgue measure of the good set in (T, 2T], divided by T, by event sweep."""
    T, h, m, r = cfg.T, cfg.h, cfg.m, cfg.r
    table.check_covers(T, 2 * T + r * h)
    bp, n = _segment_values(table, T, 2 * T, h * np.arange(r + 1))
    c = np.diff(n, axis=1)
    ok = np.all((2 * c > m) & (2 * c < 3 * m), axis=1)
    return float(np.dot(np.diff(bp), ok)) / T


def _window_gap(gam: np.ndarray, a: float, b: float, h: float, convention: str) -> float:
    inside = gam[np.searchsorted(gam, a, side="right"):np.searchsorted(gam, b, side="right")]
    if convention == "interior":
        return float(np.max(np.diff(inside))) if inside.size > 1 else 0.0
    if convention != "inclusive":
        raise ArgumentError(f"unknown gap convention {convention!r}")
    if inside.size == 0:
        return h
    gap = float(np.max(np.diff(np.concatenate(([a], inside, [b])))))
    # The M + 1 pieces sum to h exactly in real arithmetic; absorb the
    # last-ulp shortfall the subtractions can leave on evenly spaced points.
    floor = h / (inside.size + 1)
    if floor * (1 - 1e-12) <= gap < floor:
        gap = floor
    return gap


def window_moderate_gap(table: OrdinateTable, t: float, cfg: WindowConfig,
                        convention: str = "inclusive") -> WindowReport:
    """Largest gap in each window and whether it reaches 4 pi / (3 log T).

    ``inclusive`` also counts the two stretches between the window edges
    and the nearest ordinates, so the M + 1 pieces of a window with M
    ordinates sum to h and max_gap >= h / (M + 1) always holds.
    ``interior`` uses consecutive ordinates inside the window only (0 when
    fewer than two).
    """
    counts = window_counts(table, t, cfg)
    edges = _edges(t, cfg)
    gaps = tuple(
        _window_gap(table.ordinates, edges[j], edges[j + 1], cfg.h, convention) for j in range(cfg.r)
    )
    thr = cfg.gap_threshold
    return WindowReport(
        float(t), counts, within_bounds(counts, cfg.m), gaps, tuple(g >= thr for g in gaps)
    )


def scan_sites(table: OrdinateTable, cfg: WindowConfig, grid_step: float | None = None,
               convention: str = "inclusive"):
    """Yield a WindowReport for every grid site t in (T, 2T]."""
    step = cfg.h / 16 if grid_step is None else grid_step
    k = int(math.floor(cfg.T / step))
    for i in range(1, k + 1):
        yield window_moderate_gap(table, cfg.T + i * step, cfg, convention)
