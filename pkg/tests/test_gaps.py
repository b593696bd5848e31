import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zetagaps import gaps
from zetagaps.errors import ArgumentError, CoverageError, DomainError, ValidationError
from zetagaps.zeros import OrdinateTable, count_upto


def brute_runs(gam, r, thr, n_total):
    """Per-index classification written independently of the vectorized path."""
    runs, sizes = 0, [0] * r
    for n in range(n_total):
        first_fail = None
        for j in range(r):
            if not gam[n + j + 1] - gam[n + j] >= thr:
                first_fail = j
                break
        if first_fail is None:
            runs += 1
        else:
            sizes[first_fail] += 1
    return runs, sizes


def brute_pairs(x, thr):
    count = 0
    for i in range(len(x)):
        for j in range(len(x)):
            if 0 < x[j] - x[i] < thr:
                count += 1
    return count


tables = st.lists(st.integers(0, 40), min_size=3, max_size=80).map(
    lambda steps: OrdinateTable(10.0 + np.cumsum(steps) / 8.0 + 1.0)
)


def test_threshold_examples():
    assert gaps.moderate_threshold(math.exp(2 * math.pi), 1) == pytest.approx(1.0)
    assert gaps.moderate_threshold(math.exp(2 * math.pi), 0.5) == pytest.approx(0.5)
    assert gaps.moderate_threshold(1e4, 1) == pytest.approx(0.68219, abs=1e-5)
    with pytest.raises(DomainError):
        gaps.moderate_threshold(1.0, 1)


def test_runs_small_and_huge_c(ref_table):
    T = 5000.0
    small = gaps.count_runs(ref_table, 1, 1e-12, T)
    assert small.n_runs == small.n_total  # simple zeros: no zero gaps
    huge = gaps.count_runs(ref_table, 1, 1e6, T)
    assert huge.n_runs == 0 and huge.s_sizes == (huge.n_total,)


def test_runs_zero_gaps_excluded(make_table):
    t = make_table([11.0, 12.0, 12.0, 13.0, 14.0, 15.0])
    rep = gaps.count_runs(t, 1, 1e-9, 13.5)
    assert rep.n_total == 4 and rep.n_runs == 3


def test_partition_sj_extremes(ref_table):
    assert gaps.partition_sj(ref_table, 3, 1e-12, 5000.0) == (0, 0, 0)
    n = count_upto(ref_table, 5000.0)
    assert gaps.partition_sj(ref_table, 3, 1e6, 5000.0) == (n, 0, 0)


def test_runs_brute_force_first_1e4(ref_table):
    T = ref_table[10000]
    rep = gaps.count_runs(ref_table, 2, 0.5, T)
    runs, _ = brute_runs(ref_table.ordinates, 2, 2 * math.pi * 0.5 / math.log(T), rep.n_total)
    assert abs(rep.proportion - runs / rep.n_total) <= 0.1
    assert rep.n_runs == runs
    rep3 = gaps.count_runs(ref_table, 3, 0.7, T)
    assert rep3.partition_residual == 0


@settings(max_examples=80, deadline=None)
@given(tables, st.integers(1, 5), st.floats(0.01, 3.0), st.data())
def test_runs_match_brute_force(t, r, c, data):
    last = len(t) - r
    if last < 1:
        return
    T = data.draw(st.sampled_from(list(t.ordinates[:last])))
    if count_upto(t, T) + r > len(t):  # ties at T pull in more ordinates
        return
    rep = gaps.count_runs(t, r, c, T)
    runs, sizes = brute_runs(t.ordinates, r, gaps.moderate_threshold(T, c), rep.n_total)
    assert (rep.n_runs, list(rep.s_sizes)) == (runs, sizes)
    assert rep.partition_residual == 0


def test_literal_convention_misses_first_gap(make_table):
    # every gap below threshold: literal S_j are all empty, so N(T) is not recovered
    t = make_table(11.0 + 0.01 * np.arange(10))
    rep = gaps.count_runs(t, 2, 1.0, 11.05, convention="literal")
    assert rep.n_runs == 0 and sum(rep.s_sizes) == 0
    assert rep.partition_residual == rep.n_total
    with pytest.raises(CoverageError):
        gaps.count_runs(t, 2, 1.0, 11.075, convention="literal")


def test_runs_monotone(ref_table):
    T = 20000.0
    prev = None
    for c in (0.2, 0.4, 0.6, 0.8):
        reps = [gaps.count_runs(ref_table, r, c, T).n_runs for r in (1, 2, 3, 4)]
        assert reps == sorted(reps, reverse=True)
        if prev is not None:
            assert all(a <= b for a, b in zip(reps, prev))
        prev = reps


def test_runs_need_lookahead(make_table):
    t = make_table([11.0, 12.0, 13.0])
    with pytest.raises(CoverageError):
        gaps.count_runs(t, 2, 0.5, 12.5)


def test_runs_validation(make_table):
    t = make_table([11.0, 12.0, 13.0, 14.0])
    with pytest.raises(ArgumentError):
        gaps.count_runs(t, 0, 0.5, 12.0)
    with pytest.raises(DomainError):
        gaps.count_runs(t, 1, 0.0, 12.0)
    with pytest.raises(ArgumentError):
        gaps.count_runs(t, 1, 0.5, 12.0, convention="other")


def test_pair_correlation_examples(make_table):
    t = make_table([100.0, 100.2])
    T = 100.2
    assert gaps.empirical_pair_correlation(t, 1.0, T) == 0.5
    assert gaps.empirical_pair_correlation(t, 1e-9, T) == 0.0
    ties = make_table([100.0, 100.0, 101.0])
    assert gaps.empirical_pair_correlation(ties, 1e-9, 101.0) == 0.0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 30), min_size=1, max_size=300), st.integers(0, 60))
def test_pair_count_matches_quadratic(steps, thr_units):
    x = np.cumsum(steps) / 16.0
    thr = thr_units / 16.0  # exact ties between differences and threshold
    assert gaps.count_close_pairs(x, thr) == brute_pairs(x, thr)


def test_pair_count_reference_2000(ref_table):
    x = ref_table.ordinates[:2000]
    for thr in (0.3, 1.0, 2.5):
        assert gaps.count_close_pairs(x, thr) == brute_pairs(x.tolist(), thr)


def test_pair_correlation_properties(ref_table):
    T = 30000.0
    vals = [gaps.empirical_pair_correlation(ref_table, c, T) for c in (0.25, 0.5, 1.0, 2.0)]
    assert vals == sorted(vals)
    for c in (0.25, 0.5, 1.0, 2.0):
        assert (gaps.empirical_pair_correlation(ref_table, c, T)
                >= gaps.neighbor_spacing_cdf(ref_table, 1, c, T) - 1e-12)


def test_neighbor_cdf_examples(ref_table):
    T = 10000.0
    assert gaps.neighbor_spacing_cdf(ref_table, 1, 0.0, T) == 0.0
    assert gaps.neighbor_spacing_cdf(ref_table, 3, 0.0, T) == 0.0
    assert gaps.neighbor_spacing_cdf(ref_table, 1, 1e6, T) == 1.0


def test_neighbor_cdf_equals_joint_r1(ref_table):
    T = 20000.0
    for c in (0.3, 0.8, 1.4):
        assert gaps.neighbor_spacing_cdf(ref_table, 1, c, T) == gaps.joint_run_probability(
            ref_table, [c], T)


def test_joint_probability(ref_table):
    T = 20000.0
    assert gaps.joint_run_probability(ref_table, [1e6, 1e6], T) == 1.0
    assert gaps.joint_run_probability(ref_table, [0.0, 1.0], T) == 0.0
    cs = [0.8, 1.5, 2.6]
    joint = gaps.joint_run_probability(ref_table, cs, T)
    assert joint <= min(gaps.neighbor_spacing_cdf(ref_table, l + 1, c, T) for l, c in enumerate(cs))
    with pytest.raises(ArgumentError):
        gaps.joint_run_probability(ref_table, [1.2, 0.5], T)
    with pytest.raises(ArgumentError):
        gaps.joint_run_probability(ref_table, [], T)


def test_normalized_gaps(ref_table):
    T = 10000.0
    g = gaps.normalized_gaps(ref_table, T, "global")
    n = count_upto(ref_table, T)
    assert g.size == n
    assert g[0] == pytest.approx((ref_table[2] - ref_table[1]) * math.log(T) / (2 * math.pi))
    loc = gaps.normalized_gaps(ref_table, T, "local")
    assert loc[0] == pytest.approx((ref_table[2] - ref_table[1]) * math.log(ref_table[1]) / (2 * math.pi))
    with pytest.raises(ValidationError):
        gaps.normalized_gaps(ref_table, T, "other")


def test_spacing_distribution(ref_table):
    d = gaps.spacing_distribution(ref_table, 10000.0, np.linspace(0, 4, 41), "local")
    assert d.counts.sum() <= d.n_samples
    assert d.normalization == "local"
    assert np.all(np.diff(d.cdf()) >= 0)
    with pytest.raises(ValidationError):
        gaps.SpacingDistribution(np.array([0.0, 0.0, 1.0]), np.array([1, 2]), 3, "global")


def test_ah_examples(ref_table, make_table):
    assert gaps.ah_rescaled_difference(ref_table, 1) == pytest.approx(4.2313, abs=1e-3)
    assert gaps.ah_bin_index(4.2313) == 8
    assert gaps.ah_bin_index(0.0) == 0
    assert gaps.ah_rescaled_difference(make_table([5.0, 5.0, 6.0]), 1) == 0.0


@given(st.floats(0, 1e6, allow_nan=False))
def test_ah_bins_tile(d):
    k = gaps.ah_bin_index(d)
    assert max(k / 2 - 0.25, 0) <= d < k / 2 + 0.25


def test_ah_boundaries():
    assert gaps.ah_bin_index(0.25) == 1
    assert gaps.ah_bin_index(0.2499999) == 0
    assert gaps.ah_bin_index(0.75) == 2
    with pytest.raises(DomainError):
        gaps.ah_bin_index(-0.1)


def test_ah_binning_sums(ref_table):
    h = gaps.ah_binning(ref_table, 10000.0)
    assert sum(h.bin_counts.values()) == h.n_total == count_upto(ref_table, 10000.0)
    assert sum(h.p_values.values()) == pytest.approx(1.0, abs=1e-12)
