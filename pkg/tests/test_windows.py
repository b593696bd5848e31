import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zetagaps import windows
from zetagaps.errors import ArgumentError, CoverageError, DomainError
from zetagaps.windows import WindowConfig
from zetagaps.zeros import OrdinateTable, count_upto


def riemann_variance(table, T, h, m, step):
    """Midpoint rule over [T, 2T], evaluated in chunks."""
    n = int(round(T / step))
    total = 0.0
    for start in range(0, n, 1 << 20):
        k = np.arange(start, min(n, start + (1 << 20)))
        t = T + (k + 0.5) * step
        c = (np.searchsorted(table.ordinates, t + h, side="right")
             - np.searchsorted(table.ordinates, t, side="right"))
        total += float(np.sum((c - m) ** 2))
    return total * step


def test_config():
    cfg = WindowConfig(5000.0, 64, 3)
    assert cfg.h == pytest.approx(2 * math.pi * 64 / math.log(5000))
    assert cfg.gap_threshold == pytest.approx(4 * math.pi / (3 * math.log(5000)))
    for bad in (dict(T=1.0, m=1), dict(T=10.0, m=0), dict(T=10.0, m=1, r=0),
                dict(T=10.0, m=1, epsilon=1.0), dict(T=10.0, m=1.5)):
        with pytest.raises((ArgumentError, DomainError)):
            WindowConfig(**bad)


def test_counts_empty_and_telescoping(ref_table, make_table):
    t = make_table([10.0, 50.0], height_max=100.0)
    cfg = WindowConfig(5000.0, 1, 2)
    assert windows.window_counts(t, 20.0, cfg) == (0, 0)
    cfg = WindowConfig(5000.0, 16, 5)
    for site in (1000.0, 3333.3, 7000.0):
        counts = windows.window_counts(ref_table, site, cfg)
        assert sum(counts) == count_upto(ref_table, site + 5 * cfg.h) - count_upto(ref_table, site)


def test_counts_half_open(make_table):
    t = make_table([10.0, 11.0, 12.0], height_max=20.0)
    cfg = WindowConfig(math.exp(2 * math.pi), 1)  # h = 1
    assert windows.window_counts(t, 10.0, cfg) == (1,)  # (10, 11] holds 11 only
    with pytest.raises(CoverageError):
        windows.window_counts(t, 19.5, cfg)


def test_counts_reference_mostly_in_bounds(ref_table):
    cfg = WindowConfig(5000.0, 64, 3)
    sites = 5000.0 + cfg.h / 16 * np.arange(1, 400)
    ok = [windows.within_bounds(windows.window_counts(ref_table, s, cfg), 64) for s in sites]
    assert np.mean(ok) >= 0.9


def test_within_bounds_integer_comparison():
    assert windows.within_bounds([1], 1)
    assert not windows.within_bounds([0], 1)
    assert not windows.within_bounds([2], 1)
    assert not windows.within_bounds([48], 32)  # 3m/2 is excluded
    assert not windows.within_bounds([16], 32)


def test_variance_trivial_cases(make_table):
    T, h = 100.0, 3.0
    empty = make_table([10.0], height_max=300.0)
    assert windows.variance_integral(empty, T, h, 2.0) == pytest.approx(4.0 * T)
    single = make_table([10.0, 150.0], height_max=300.0)
    assert windows.variance_integral(single, T, h, 0.0) == pytest.approx(h, abs=1e-12)


def test_variance_coverage(make_table):
    t = make_table([10.0, 150.0], height_max=201.0)
    with pytest.raises(CoverageError):
        windows.variance_integral(t, 100.0, 3.0, 0.0)
    with pytest.raises(DomainError):
        windows.variance_integral(t, 100.0, 0.0, 0.0)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(1, 600), min_size=1000, max_size=1000),
       st.integers(1024, 8192), st.floats(0, 20))
def test_variance_matches_lattice_riemann_sum(steps, h_units, m):
    # ordinates and h on the 1/1024 lattice: the midpoint rule with that step
    # samples every constant piece of the integrand exactly
    q = 1.0 / 1024
    gam = 1.0 + np.cumsum(steps) * q
    T = float(np.floor(gam[400] * 1024) * q)
    table = OrdinateTable(gam, height_max=float(gam[-1]) + 1e4)
    h = h_units * q
    if 2 * T + h > table.height_max:
        return
    exact = windows.variance_integral(table, T, h, m)
    approx = riemann_variance(table, T, h, m, q)
    assert q <= 1e-3 * h
    assert approx == pytest.approx(exact, rel=1e-6)


def test_variance_matches_riemann_sum_reference(ref_table):
    table = OrdinateTable(ref_table.ordinates[:1000])
    T = 600.0
    h = 2 * math.pi * 4 / math.log(T)
    exact = windows.variance_integral(table, T, h)
    m = h * math.log(T) / (2 * math.pi)
    assert riemann_variance(table, T, h, m, 1e-3 * h) == pytest.approx(exact, rel=1e-3)
    assert riemann_variance(table, T, h, m, 1e-5 * h) == pytest.approx(exact, rel=2e-5)


def test_good_set_trivial(make_table):
    empty = make_table([10.0], height_max=1e5)
    assert windows.good_set_measure(empty, WindowConfig(5000.0, 4)) == 0.0
    assert windows.good_set_measure_exact(empty, WindowConfig(5000.0, 4)) == 0.0
    # m = 1 means exactly one ordinate per window
    lattice = OrdinateTable(np.arange(1, 40000) * (2 * math.pi / math.log(5000.0)))
    cfg = WindowConfig(5000.0, 1, 3)
    assert windows.good_set_measure(lattice, cfg) == 1.0
    assert windows.good_set_measure_exact(lattice, cfg) == pytest.approx(1.0)


def test_good_set_reference(ref_table):
    cfg = WindowConfig(5000.0, 64, 3)
    assert windows.good_set_measure(ref_table, cfg) >= 0.9
    vals = [windows.good_set_measure(ref_table, WindowConfig(5000.0, m, 3)) for m in (8, 16, 32, 64)]
    assert vals == sorted(vals)
    exact = [windows.good_set_measure_exact(ref_table, WindowConfig(5000.0, m, 3)) for m in (8, 16, 32, 64)]
    assert all(abs(a - b) < 0.02 for a, b in zip(vals, exact))


def test_good_set_grid_step_validation(ref_table):
    with pytest.raises(ArgumentError):
        windows.good_set_measure(ref_table, WindowConfig(5000.0, 8), grid_step=0.0)


def test_moderate_gap_empty_window(make_table):
    t = make_table([10.0], height_max=1e4)
    for m in (1, 2, 8):
        cfg = WindowConfig(5000.0, m)
        rep = windows.window_moderate_gap(t, 100.0, cfg)
        assert rep.max_gaps[0] == pytest.approx(cfg.h)
        assert rep.has_moderate_gap == (True,)


def test_moderate_gap_thirds(make_table):
    cfg = WindowConfig(5000.0, 3)
    h = cfg.h
    t0 = 100.0
    t = make_table([t0 + h / 3, t0 + 2 * h / 3, t0 + h], height_max=1e4)
    rep = windows.window_moderate_gap(t, t0, cfg)
    assert h / 3 >= cfg.gap_threshold
    assert rep.counts == (3,)
    assert rep.max_gaps[0] == pytest.approx(h / 3)
    assert rep.has_moderate_gap == (True,)
    interior = windows.window_moderate_gap(t, t0, cfg, convention="interior")
    assert interior.max_gaps[0] == pytest.approx(h / 3)
    with pytest.raises(ArgumentError):
        windows.window_moderate_gap(t, t0, cfg, convention="other")


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0.0, 1.0, exclude_min=True), max_size=30), st.integers(1, 20))
def test_pigeonhole_any_window(points, m):
    cfg = WindowConfig(5000.0, m)
    t0 = 100.0
    gam = sorted(t0 + cfg.h * p for p in points) or [50.0]
    t = OrdinateTable(np.array(gam), height_max=1e4)
    rep = windows.window_moderate_gap(t, t0, cfg)
    assert rep.max_gaps[0] >= cfg.h / (rep.counts[0] + 1)


def test_scan_sites_matches_grid_measure(ref_table):
    cfg = WindowConfig(2000.0, 16, 2)
    step = cfg.h / 4
    reports = list(windows.scan_sites(ref_table, cfg, step))
    frac = np.mean([r.all_within_bounds for r in reports])
    assert frac == windows.good_set_measure(ref_table, cfg, step)
