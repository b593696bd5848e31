"""Generate a reference table of zeta-zero ordinates.

Vectorized Riemann-Siegel evaluation of Z(t) with the C0..C3 remainder
terms, a Gram-point scan with Rosser-block completeness checks, and
mpmath refinement at low height. Writes a ZGC1 binary cache.

    python tools/make_reference_zeros.py --tmax 75600 --out data/zeros_1e5.zgc
"""
from __future__ import annotations

import argparse
import math
import sys
import time

import mpmath
import numpy as np

TWO_PI = 2.0 * math.pi


def _psi_taylor(degree: int = 60) -> np.ndarray:
    """Taylor coefficients of cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p) about p = 1/2."""
    mpmath.mp.dps = 60

    def psi(p):
        return mpmath.cos(2 * mpmath.pi * (p * p - p - mpmath.mpf(1) / 16)) / mpmath.cos(2 * mpmath.pi * p)

    coeffs = mpmath.taylor(psi, mpmath.mpf(1) / 2, degree)
    mpmath.mp.dps = 15
    return np.array([float(c) for c in coeffs])


_PSI = _psi_taylor()


def _psi_deriv(k: int, x: np.ndarray) -> np.ndarray:
    poly = np.polynomial.Polynomial(_PSI)
    return poly.deriv(k)(x - 0.5) if k else poly(x - 0.5)


def theta(t):
    t = np.asarray(t, dtype=float)
    return (t / 2 * np.log(t / TWO_PI) - t / 2 - math.pi / 8
            + 1 / (48 * t) + 7 / (5760 * t**3) + 31 / (80640 * t**5))


def siegel_z(t: np.ndarray, chunk: int = 4096) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    for start in range(0, t.size, chunk):
        tc = t[start:start + chunk]
        a = np.sqrt(tc / TWO_PI)
        n_terms = np.floor(a).astype(int)
        nmax = int(n_terms.max())
        ns = np.arange(1, nmax + 1, dtype=float)
        th = theta(tc)
        phase = th[:, None] - tc[:, None] * np.log(ns)[None, :]
        terms = np.cos(phase) / np.sqrt(ns)[None, :]
        terms[ns[None, :] > n_terms[:, None]] = 0.0
        main = 2.0 * terms.sum(axis=1)
        p = a - n_terms
        u = 1.0 / a  # (t / 2pi)^(-1/2)
        pi2 = math.pi**2
        c0 = _psi_deriv(0, p)
        c1 = -_psi_deriv(3, p) / (96 * pi2)
        c2 = _psi_deriv(2, p) / (64 * pi2) + _psi_deriv(6, p) / (18432 * pi2**2)
        c3 = (-_psi_deriv(1, p) / (64 * pi2) - _psi_deriv(5, p) / (3840 * pi2**2)
              - _psi_deriv(9, p) / (5308416 * pi2**3))
        sign = np.where(n_terms % 2 == 1, 1.0, -1.0)
        rem = sign * np.sqrt(u) * (c0 + c1 * u + c2 * u**2 + c3 * u**3)
        out[start:start + chunk] = main + rem
    return out


def gram_points(kmax: int) -> np.ndarray:
    k = np.arange(-1, kmax + 1, dtype=float)
    t = TWO_PI * np.exp(1 + np.log(np.maximum(k + 1.125, 1.0) / math.e))  # crude start
    t = np.maximum(t, 10.0)
    for _ in range(60):
        f = theta(t) - k * math.pi
        t = t - f / (0.5 * np.log(t / TWO_PI))
    return t


def _sign_changes(ts: np.ndarray, zs: np.ndarray) -> list[tuple[float, float]]:
    idx = np.nonzero(np.signbit(zs[:-1]) != np.signbit(zs[1:]))[0]
    return [(ts[i], ts[i + 1]) for i in idx]


def scan(tmax: float, sub: int = 6) -> np.ndarray:
    # Gram index range covering (g_-1, tmax]
    kmax = int(theta(np.array([tmax]))[0] / math.pi) + 2
    g = gram_points(kmax)
    zg = siegel_z(g)
    ks = np.arange(-1, kmax + 1)
    good = (np.where(ks % 2 == 0, 1.0, -1.0) * zg) > 0
    good_idx = np.nonzero(good)[0]
    print(f"gram points: {g.size}, bad: {(~good).sum()}", file=sys.stderr)

    # subsample each Gram interval
    frac = np.arange(1, sub) / sub
    inner = (g[:-1, None] + (g[1:] - g[:-1])[:, None] * frac[None, :]).ravel()
    zin = siegel_z(inner).reshape(-1, sub - 1)

    brackets: list[tuple[float, float]] = []
    for a, b in zip(good_idx[:-1], good_idx[1:]):
        expected = b - a
        ts = [g[a]]
        zs = [zg[a]]
        for k in range(a, b):
            ts.extend(g[k] + (g[k + 1] - g[k]) * frac)
            zs.extend(zin[k])
            ts.append(g[k + 1])
            zs.append(zg[k + 1])
        found = _sign_changes(np.array(ts), np.array(zs))
        level = sub
        while len(found) < expected:
            level *= 8
            if level > 10**6:
                raise RuntimeError(f"block g[{a}]..g[{b}] missing zeros")
            tt = np.linspace(g[a], g[b], (b - a) * level + 1)
            found = _sign_changes(tt, siegel_z(tt))
        if len(found) != expected:
            raise RuntimeError(f"block g[{a}]..g[{b}]: {len(found)} changes vs {expected}")
        brackets.extend(found)
    # zeros below the first good Gram point
    first = g[good_idx[0]]
    tt = np.linspace(10.0, first, 2001)
    head = _sign_changes(tt, siegel_z(tt))
    brackets = head + brackets
    lo = np.array([b[0] for b in brackets])
    hi = np.array([b[1] for b in brackets])
    keep = lo < tmax
    return lo[keep], hi[keep]


def refine(lo: np.ndarray, hi: np.ndarray, iters: int = 80) -> np.ndarray:
    flo, fhi = siegel_z(lo), siegel_z(hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = siegel_z(mid)
        left = np.signbit(fm) == np.signbit(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
        fhi = np.where(left, fhi, fm)
        if np.all(hi - lo < 1e-12 * np.maximum(1.0, lo)):
            break
    return 0.5 * (lo + hi)


def refine_mpmath(t: np.ndarray) -> np.ndarray:
    mpmath.mp.dps = 25
    out = np.array([float(mpmath.findroot(mpmath.siegelz, mpmath.mpf(x))) for x in t])
    mpmath.mp.dps = 15
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tmax", type=float, default=75600.0)
    ap.add_argument("--mp-below", type=float, default=2000.0)
    ap.add_argument("--out", required=True)
    args = ap.parse_args(argv)
    t0 = time.time()
    lo, hi = scan(args.tmax)
    zeros = refine(lo, hi)
    low = zeros < args.mp_below
    zeros[low] = refine_mpmath(zeros[low])
    if np.any(np.diff(zeros) <= 0):
        raise RuntimeError("non-increasing output")
    print(f"{zeros.size} zeros up to {zeros[-1]:.6f} in {time.time() - t0:.1f}s", file=sys.stderr)
    if args.out.endswith(".npy"):
        np.save(args.out, zeros)
    else:
        from zetagaps.zeros import write_cache
        write_cache(args.out, zeros)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
