"""Critical points of xi on the critical line between consecutive zeros.

On the critical line, i xi'/xi(1/2 + it) is, up to a slowly varying term,
the sum of 1/(t - gamma) over the zeros. The surrogate used here keeps the
zeros with |gamma - center| <= delta (optionally adding the mirror terms
1/(t + gamma)); the window center defaults to t itself. Each term decreases
in t, and with a sliding window a zero can only enter on the right (adding
-1/delta) or leave on the left (removing +1/delta), so the surrogate falls
strictly from +inf to -inf across every gap. Those jumps can step over
zero, though, so root finding freezes the window at the gap midpoint,
which makes the surrogate continuous on the gap with a single simple root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DegenerateIntervalError, DomainError, PoleError
from .zeros import OrdinateTable

POLE_TOL = 1e-12


@dataclass(frozen=True)
class ZeroSumConfig:
    delta: float = 50.0
    include_conjugates: bool = False

    def __post_init__(self):
        if not self.delta >= 1:
            raise ArgumentError(f"window radius must be at least 1, got {self.delta!r}")


@dataclass(frozen=True)
class CriticalPoint:
    n: int
    gamma_star: float
    bracket: tuple[float, float]
    residual: float
    iterations: int

    @property
    def left_distance(self) -> float:
        return self.gamma_star - self.bracket[0]

    @property
    def right_distance(self) -> float:
        return self.bracket[1] - self.gamma_star


@dataclass(frozen=True)
class TjPoint:
    n: int
    gamma_n: float
    T_j: float
    offset: float
    below_next: bool


def default_delta(table: OrdinateTable, t: float) -> float:
    """Fifty mean spacings at height t, clipped to the table's coverage."""
    spacing = 2 * math.pi / max(math.log(t / (2 * math.pi)), 1e-3)
    delta = 50 * spacing
    delta = min(delta, table.height_max - t)
    if table.height_min > 0:
        delta = min(delta, t - table.height_min)
    return max(delta, 1.0)


def _window(table: OrdinateTable, lo: float, hi: float) -> np.ndarray:
    if table.height_min == 0:
        table.check_covers(0.0 if lo < 0 else lo, hi)
    else:
        table.check_covers(lo, hi)
    gam = table.ordinates
    return gam[np.searchsorted(gam, lo, side="left"):np.searchsorted(gam, hi, side="right")]


def _terms(gam: np.ndarray, t: float, cfg: ZeroSumConfig) -> np.ndarray:
    d = t - gam
    if d.size and np.min(np.abs(d)) <= POLE_TOL:
        raise PoleError(f"t={t!r} coincides with an ordinate")
    return d


def xi_surrogate(table: OrdinateTable, t: float, cfg: ZeroSumConfig | None = None,
                 center: float | None = None) -> float:
    """Sum of 1/(t - gamma) over |gamma - center| <= delta (plus 1/(t + gamma) if requested)."""
    center = t if center is None else center
    cfg = cfg or ZeroSumConfig(default_delta(table, center))
    gam = _window(table, center - cfg.delta, center + cfg.delta)
    d = _terms(gam, t, cfg)
    value = float(np.sum(1.0 / d))
    if cfg.include_conjugates:
        value += float(np.sum(1.0 / (t + gam)))
    return value


def xi_surrogate_derivative(table: OrdinateTable, t: float,
                            cfg: ZeroSumConfig | None = None,
                            center: float | None = None) -> float:
    """Term-wise derivative: -sum 1/(t - gamma)^2 over the same window."""
    center = t if center is None else center
    cfg = cfg or ZeroSumConfig(default_delta(table, center))
    gam = _window(table, center - cfg.delta, center + cfg.delta)
    d = _terms(gam, t, cfg)
    value = -float(np.sum(1.0 / d**2))
    if cfg.include_conjugates:
        value -= float(np.sum(1.0 / (t + gam) ** 2))
    return value


def xi_surrogate_many(table: OrdinateTable, ts: np.ndarray, cfg: ZeroSumConfig,
                      center: float | None = None) -> np.ndarray:
    """Vectorized surrogate over many points (used by dense scans).

    With ``center`` given, every point uses the window around it; otherwise
    each point uses its own sliding window.
    """
    ts = np.asarray(ts, dtype=float)
    if center is None:
        gam = _window(table, float(ts.min()) - cfg.delta, float(ts.max()) + cfg.delta)
        inside = np.abs(ts[:, None] - gam[None, :]) <= cfg.delta
    else:
        gam = _window(table, center - cfg.delta, center + cfg.delta)
        inside = np.ones((ts.size, gam.size), dtype=bool)
    d = ts[:, None] - gam[None, :]
    if np.any(np.abs(d) <= POLE_TOL):
        raise PoleError("scan point coincides with an ordinate")
    terms = np.where(inside, 1.0 / np.where(inside, d, 1.0), 0.0)
    if cfg.include_conjugates:
        terms = terms + np.where(inside, 1.0 / (ts[:, None] + gam[None, :]), 0.0)
    return terms.sum(axis=1)


def find_gamma_star(table: OrdinateTable, n: int, cfg: ZeroSumConfig | None = None,
                    tol: float = 1e-12, max_iter: int = 200) -> CriticalPoint:
    """The root of the surrogate strictly between gamma_n and gamma_{n+1}.

    The zero-sum window is frozen around the gap midpoint. Newton steps on
    the analytic derivative, safeguarded by the bracket; falls back to
    bisection whenever a step leaves it. Stops once |surrogate| <= tol or
    the bracket can no longer shrink.
    """
    a0, b0 = table[n], table[n + 1]
    if not b0 > a0:
        raise DegenerateIntervalError(f"gamma_{n} = gamma_{n + 1}: no interior point")
    if not tol > 0:
        raise ArgumentError(f"tol must be positive, got {tol!r}")
    center = 0.5 * (a0 + b0)
    cfg = cfg or ZeroSumConfig(default_delta(table, center))
    a, b = a0, b0
    x = center
    best = (math.inf, x)
    for it in range(1, max_iter + 1):
        fx = xi_surrogate(table, x, cfg, center)
        if abs(fx) < best[0]:
            best = (abs(fx), x)
        if abs(fx) <= tol:
            break
        if fx > 0:
            a = x
        else:
            b = x
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            break  # bracket exhausted at machine precision
        step = fx / xi_surrogate_derivative(table, x, cfg, center)
        x_new = x - step
        x = x_new if a < x_new < b else mid
    residual, x = best
    if not a0 < x < b0:
        raise DomainError(f"root left the open interval ({a0}, {b0})")
    return CriticalPoint(int(n), float(x), (a0, b0), xi_surrogate(table, x, cfg, center), it)


def gamma_star_drift_bound(table: OrdinateTable, n: int, delta_small: float,
                           delta_large: float) -> float:
    """Upper bound on |gamma*(delta_large) - gamma*(delta_small)|.

    Both windows are centered on the gap midpoint c. A zero with
    delta_small < |gamma - c| <= delta_large sits more than
    delta_small - gap/2 away from every point of the gap, so its term is
    smaller than 1/(delta_small - gap/2). The small-window surrogate falls
    across the gap at a rate of at least 8/gap^2 (its two endpoint terms
    alone). For K added zeros the root moves by at most
    K gap^2 / (8 (delta_small - gap/2)).
    """
    a, b = table[n], table[n + 1]
    gap = b - a
    if not delta_small > gap / 2:
        raise ArgumentError("delta_small must exceed half the gap")
    if delta_large < delta_small:
        raise ArgumentError("delta_large must be at least delta_small")
    c = 0.5 * (a + b)
    gam = _window(table, c - delta_large, c + delta_large)
    k = int(np.count_nonzero(np.abs(gam - c) > delta_small))
    return k * gap * gap / (8.0 * (delta_small - gap / 2))


def construct_tj(table: OrdinateTable, n: int, C: float) -> TjPoint:
    """T = gamma_n + (log gamma_n)^(-C), flagged when it stays below gamma_{n+1}."""
    if not C > 2:
        raise ArgumentError(f"need C > 2, got {C!r}")
    g = table[n]
    if not g > math.e:
        raise DomainError(f"need gamma_n > e for a positive logarithm, got {g!r}")
    offset = math.log(g) ** (-C)
    tj = g + offset
    below = n < len(table) and tj < table[n + 1]
    return TjPoint(int(n), g, tj, offset, bool(below))
