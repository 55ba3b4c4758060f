import math

import numpy as np
import pytest

from etlab.stochastic import (
    McConfig,
    c_values,
    draw_bits,
    histogram_rows,
    limsup_stat,
    pmf_c,
    pmf_enumerated,
    simulate,
)


def test_pmf_examples():
    for m in range(6):
        assert pmf_c(2 * m + 1, m + 1, 1.0) == 1.0
    assert pmf_c(3, 1, 0.5) == pytest.approx(0.375, abs=1e-15)
    assert pmf_c(2, 1, 0.5) == pytest.approx(0.5, abs=1e-15)


def test_pmf_normalized():
    for p in (0.1, 0.25, 0.5, 0.75, 0.9):
        for n in range(65):
            assert abs(sum(pmf_c(n, k, p) for k in range(n + 2)) - 1.0) < 1e-12


def test_pmf_matches_enumeration():
    for p in (0.25, 0.5, 0.75):
        for n in range(10):
            for k in range(n // 2 + 3):
                assert abs(pmf_c(n, k, p) - pmf_enumerated(n, k, p)) < 1e-12


def test_c_values_by_hand():
    bits = np.array([[1, 1, 0, 1, 0, 1]])
    # A = {0, 1, 3, 5}
    assert c_values(bits)[0].tolist() == [1, 1, 1, 1, 1, 1]


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(0.0, 10, 10)
    with pytest.raises(ValueError):
        McConfig(0.5, 10, 0)


def test_certain_membership():
    res = simulate(McConfig(1.0, 30, 50, seed=1))
    for n in range(31):
        assert res.counts[n, n // 2 + 1] == 50
    assert (res.max_stat >= 4).all()


def test_frequency_close_to_pmf():
    res = simulate(McConfig(0.5, 3, 100_000, seed=2024))
    sigma = math.sqrt(0.375 * 0.625 / 1e5)
    assert abs(res.frequency(3, 1) - 0.375) < 4 * sigma


def test_thread_count_does_not_change_results():
    cfg = McConfig(0.5, 25, 20_000, seed=77)
    one = simulate(cfg, threads=1)
    four = simulate(cfg, threads=4)
    assert np.array_equal(one.counts, four.counts)
    assert np.array_equal(one.max_stat, four.max_stat)


def test_streams_depend_only_on_trial_index():
    cfg = McConfig(0.5, 20, 10, seed=3)
    whole = draw_bits(cfg, 0, 10)
    assert np.array_equal(whole[4:7], draw_bits(cfg, 4, 7))
    other = draw_bits(McConfig(0.5, 20, 10, seed=4), 0, 10)
    assert not np.array_equal(whole, other)


def test_limsup_statistic():
    stat = limsup_stat(McConfig(0.75, 512, 1000, seed=12345))
    assert (stat >= 1).mean() > 0.99
    small = limsup_stat(McConfig(0.05, 6, 2000, seed=1))
    assert (small < 1).any()


def test_histogram_rows():
    res = simulate(McConfig(0.5, 4, 1000, seed=0))
    rows = histogram_rows(res, [3])
    assert [r["k"] for r in rows] == [0, 1, 2]
    assert sum(r["count"] for r in rows) == 1000
    assert rows[1]["pmf"] == pytest.approx(0.375)
