"""Montgomery's pair-correlation integral and the conditional run bounds.

``f(alpha)`` is the integral over [0, alpha] of 1 - (sin(pi u)/(pi u))^2.
Under the pair correlation conjecture at most ``r * f(c)`` of the zeros fail
to start a run of r moderate gaps; :func:`solve_cr` finds where that bound
hits zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import sici

from .errors import ArgumentError, ConvergenceError, DomainError

PANEL_ORDER = 12
DEFAULT_TOL = 1e-10
MAX_EVALUATIONS = 2_000_000

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(PANEL_ORDER)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class BoundParams:
    r: int
    c: float
    M: float = 1.0
    delta: float = 3.0

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise ArgumentError(f"r must be a positive integer, got {self.r!r}")
        if not (self.c > 0 and self.M > 0 and self.delta > 0):
            raise ArgumentError("c, M and delta must be positive")
        if not all(map(math.isfinite, (self.c, self.M, self.delta))):
            raise ArgumentError("c, M and delta must be finite")


def pc_integrand(u):
    """1 - (sin(pi u)/(pi u))^2, equal to 0 at u = 0. Vectorized."""
    u_arr = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u_arr)):
        raise DomainError("pc_integrand needs finite u")
    if np.any(u_arr < 0):
        raise DomainError("pc_integrand is defined for u >= 0")
    x = np.pi * u_arr
    small = np.abs(x) < 1e-3
    xs = np.where(small, 1.0, x)
    out = np.where(
        small,
        # Taylor series of 1 - sinc^2 avoids cancellation near 0
        x**2 / 3 - 2 * x**4 / 45 + x**6 / 315,
        1.0 - (np.sin(xs) / xs) ** 2,
    )
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _panel(func, a: float, b: float) -> float:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(np.dot(_GL_WEIGHTS, func(mid + half * _GL_NODES)))


def adaptive_gauss_legendre(func, breakpoints, tol: float,
                            max_evaluations: int = MAX_EVALUATIONS) -> QuadratureResult:
    """Adaptive bisection with a fixed Gauss-Legendre panel rule.

    A panel is accepted when it agrees with the sum of its two halves to
    within its share of ``tol`` (proportional to panel length).
    """
    pts = [float(p) for p in breakpoints]
    total_len = pts[-1] - pts[0]
    if total_len <= 0:
        return QuadratureResult(0.0, 0.0, 1)
    evaluations = 0
    value = 0.0
    err = 0.0
    stack = []
    for a, b in zip(pts[:-1], pts[1:]):
        if b > a:
            stack.append((a, b, _panel(func, a, b)))
            evaluations += PANEL_ORDER
    while stack:
        a, b, whole = stack.pop()
        m = 0.5 * (a + b)
        left = _panel(func, a, m)
        right = _panel(func, m, b)
        evaluations += 2 * PANEL_ORDER
        diff = abs(left + right - whole)
        if diff <= tol * (b - a) / total_len or m in (a, b):
            value += left + right
            err += diff
        else:
            if evaluations > max_evaluations:
                raise ConvergenceError(
                    f"quadrature did not reach tol={tol:g} within {max_evaluations} evaluations"
                )
            stack.append((a, m, left))
            stack.append((m, b, right))
    return QuadratureResult(value, err, evaluations)


TAIL_START = 256.0


@lru_cache(maxsize=4096)
def _f_cached(alpha: float, tol: float) -> QuadratureResult:
    # integer points separate the lobes of sinc^2
    top = min(alpha, TAIL_START)
    pts = list(range(0, int(math.floor(top)) + 1))
    if pts[-1] < top:
        pts.append(top)
    res = adaptive_gauss_legendre(pc_integrand, pts, tol)
    if alpha <= TAIL_START:
        return res
    # past the start the remaining lobes are integrated in closed form:
    # d/du [u - Si(2 pi u)/pi + sin^2(pi u)/(pi^2 u)] = 1 - sinc^2(u)
    (si_hi, si_lo), _ = sici(2 * np.pi * np.array([alpha, TAIL_START]))
    edge = (math.sin(math.pi * alpha) ** 2 / (math.pi**2 * alpha)
            - math.sin(math.pi * TAIL_START) ** 2 / (math.pi**2 * TAIL_START))
    tail = (alpha - TAIL_START) - (si_hi - si_lo) / math.pi + edge
    return QuadratureResult(res.value + tail, res.abs_error_estimate + 1e-15, res.evaluations + 1)


def f(alpha: float, tol: float = DEFAULT_TOL) -> QuadratureResult:
    """Pair-correlation integral f(alpha) by adaptive quadrature."""
    if not math.isfinite(alpha) or alpha < 0:
        raise DomainError(f"f(alpha) needs finite alpha >= 0, got {alpha!r}")
    if not tol > 0:
        raise ArgumentError(f"tol must be positive, got {tol!r}")
    if alpha == 0:
        return QuadratureResult(0.0, 0.0, 1)
    res = _f_cached(float(alpha), float(tol))
    if res.abs_error_estimate > tol:
        raise ConvergenceError(f"f({alpha}) error estimate {res.abs_error_estimate:g} > {tol:g}")
    return res


def f_closed_form(alpha):
    """alpha - Si(2 pi alpha)/pi + sin^2(pi alpha)/(pi^2 alpha).

    Independent of the quadrature path; loses relative accuracy for
    alpha below about 1e-3 through cancellation.
    """
    a = np.asarray(alpha, dtype=float)
    safe = np.where(a > 0, a, 1.0)
    si, _ = sici(2 * np.pi * safe)
    out = np.where(a > 0, safe - si / np.pi + np.sin(np.pi * safe) ** 2 / (np.pi**2 * safe), 0.0)
    return float(out) if out.ndim == 0 else out


def solve_cr(r: int, tol: float = 1e-12) -> float:
    """The threshold c_r > 0 with f(c_r) = 1/r (so that 1 - r f(c_r) = 0)."""
    if int(r) != r or r < 1:
        raise ArgumentError(f"r must be a positive integer, got {r!r}")
    if not tol > 0:
        raise ArgumentError(f"tol must be positive, got {tol!r}")
    target = 1.0 / r
    qtol = min(tol / 10, DEFAULT_TOL)

    def g(c: float) -> float:
        return f(c, qtol).value - target

    lo = min((9.0 / (math.pi**2 * r)) ** (1.0 / 3.0), 1.0 / math.pi)
    while g(lo) > 0:
        lo *= 0.5
    hi = 2.0
    while g(hi) < 0:
        hi *= 2.0
    g_lo, g_hi = g(lo), g(hi)

    # bisection to a narrow bracket, then secant steps kept inside it
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if g_mid < 0:
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid
    c, g_c = (lo, g_lo) if abs(g_lo) < abs(g_hi) else (hi, g_hi)
    for _ in range(100):
        if abs(g_c) <= tol:
            return c
        c_new = lo - g_lo * (hi - lo) / (g_hi - g_lo)
        if not lo < c_new < hi:
            c_new = 0.5 * (lo + hi)
        g_new = g(c_new)
        if g_new < 0:
            lo, g_lo = c_new, g_new
        else:
            hi, g_hi = c_new, g_new
        c, g_c = c_new, g_new
        if hi - lo < 4 * np.finfo(float).eps * hi:
            break
    if abs(g_c) <= tol:
        return c
    raise ConvergenceError(f"solve_cr({r}) stalled at |f - 1/r| = {abs(g_c):g}")


def pcc_lower_bound(p: BoundParams) -> float:
    """1 - r f(c): lower density of run starts under pair correlation."""
    return 1.0 - p.r * f(p.c).value


def wellspacing_lower_bound(p: BoundParams) -> float:
    """1 - r M c^delta: the same bound under a well-spacing hypothesis."""
    return 1.0 - p.r * p.M * p.c**p.delta


def cubic_bound(c: float) -> float:
    """(pi/3)^2 c^3, an upper bound for f(c) on [0, 1/pi]."""
    if not 0 <= c <= 1 / math.pi:
        raise DomainError(f"cubic bound holds for 0 <= c <= 1/pi, got {c!r}")
    return (math.pi / 3) ** 2 * c**3


def corollary_threshold(r: int) -> float:
    """min(1/pi, (3/pi)^(2/3) r^(-1/3)): thresholds below this give 1 - r f(c) > 0."""
    if int(r) != r or r < 1:
        raise ArgumentError(f"r must be a positive integer, got {r!r}")
    return min(1 / math.pi, (3 / math.pi) ** (2 / 3) * r ** (-1 / 3))


def corollary_crossover() -> int:
    """Largest r for which (3/pi)^(2/3) r^(-1/3) >= 1/pi, by direct scan."""
    r = 1
    while (3 / math.pi) ** (2 / 3) * (r + 1) ** (-1 / 3) >= 1 / math.pi:
        r += 1
    return r
