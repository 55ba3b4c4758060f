"""Acceptance criteria, one test per criterion; each prints a PASS/FAIL line."""

import itertools
import math
import random
import time

import numpy as np
import pytest

from etlab.combinat import catalan, catalan_asymptotic_ratio, catalan_closed_form
from etlab.golden import D_CORRECTED, D_PRINTED, E_PRINTED, SQRT_GENERIC, d_full_set_ok
from etlab.hemitree import search_bounded
from etlab.poly import (
    Family,
    Poly,
    idempotent_relations,
    is_compliform,
    poly_eval,
    reduce_system,
    var_id,
)
from etlab.profiles import CompiledPoly, SubsetA, pres_counts, rep_counts, sidon_doubling_set
from etlab.series import PolySeries, series_sqrt, series_square
from etlab.stochastic import McConfig, distribution_enumerated, pmf_c, simulate
from etlab.tower import A, TowerCache, c_in_a, etr_reduce

P = Poly.parse


@pytest.fixture
def report(capsys):
    """Call with (number, ok, detail); prints the verdict line uncaptured."""
    t0 = time.perf_counter()

    def emit(number, ok, detail):
        elapsed = time.perf_counter() - t0
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail} ({elapsed:.2f}s)")
        return elapsed

    return emit


def test_criterion_01_golden_d(report):
    t0 = time.perf_counter()
    cache = TowerCache()
    problems = []
    for n, (scale, text) in D_PRINTED.items():
        got = cache.compute_d(n).scale(scale)
        if got == P(text):
            continue
        corrected = P(D_CORRECTED[n][1])
        printed_half = P(text).scale(P(f"1/{scale}").constant_term())
        if n == 4 and got == corrected and d_full_set_ok(n, cache.compute_d(n)) and not d_full_set_ok(n, printed_half):
            continue  # the documented erratum
        problems.append(f"d{n}")
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 5
    report(1, ok, f"d1..d6 exact, erratum only at 2d4; mismatches={problems}")
    assert ok


def test_criterion_02_golden_e(report):
    t0 = time.perf_counter()
    cache = TowerCache()
    bad = [n for n, text in E_PRINTED.items() if str(cache.compute_e(n)) != text]
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5
    report(2, ok, f"e1..e7 verbatim in canonical order; mismatches={bad}")
    assert ok


def test_criterion_03_sqrt(report):
    g = PolySeries.symbolic(Family.B, 16)
    round_trip = series_square(series_sqrt(g)) == g
    f = series_sqrt(PolySeries.symbolic(Family.B, 6))
    table = all(f[n].scale(2) == P(text) for n, text in SQRT_GENERIC.items())
    ok = round_trip and table
    report(3, ok, f"round trip to order 16={round_trip}, 2a1..2a6 table={table}")
    assert ok


def test_criterion_04_exhaustive_sp(report):
    t0 = time.perf_counter()
    cache = TowerCache()
    N = 12
    e = {n: CompiledPoly(cache.compute_e(n)) for n in range(1, N)}
    d = {n: CompiledPoly(cache.compute_d(n)) for n in range(1, N)}
    failures = 0
    count = 0
    for tail in itertools.product((0, 1), repeat=N - 1):
        A_ = SubsetA((1, 1) + tail)
        count += 1
        p = pres_counts(A_, N)
        r = rep_counts(A_, N)
        bits = A_.bits
        for n in range(N + 1):
            mid = 1 if n % 2 == 0 and bits[n // 2] else 0
            failures += r[n] != 2 * p[n] - mid
        for n in range(1, N):
            failures += p[n + 1] != e[n](p) + bits[n + 1]
            failures += r[n + 1] != 2 * bits[n + 1] + d[n](r)
    elapsed = time.perf_counter() - t0
    ok = count == 2048 and failures == 0 and elapsed < 60
    report(4, ok, f"{count} subsets, SP + parity + d-identity, failures={failures}")
    assert ok


def test_criterion_05_bound_one(report):
    t0 = time.perf_counter()
    rep = search_bounded(1, 10, TowerCache())
    elapsed = time.perf_counter() - t0
    ok = rep.max_persistent_length == 5 and elapsed < 1
    report(5, ok, f"B=1, D=10 max persistent length {rep.max_persistent_length}")
    assert ok


def test_criterion_06_zero_divisors(report):
    an = [Poly.var(A(n)) for n in range(2, 11)]
    idem = all(etr_reduce(v * (v - 1)).is_zero() for v in an)
    c2, c3 = c_in_a(2), c_in_a(3)
    quad = etr_reduce((c2 - 1) * (c2 - 2)).is_zero()
    cubic = etr_reduce(c3 * (c3 - 1) * (c3 - 2)).is_zero()
    ok = idem and quad and cubic
    report(6, ok, f"a_n(a_n-1)={idem}, (c2-1)(c2-2)={quad}, c3(c3-1)(c3-2)={cubic}")
    assert ok


def test_criterion_07_reduction_properties(report):
    rng = random.Random(20240607)
    xs = [var_id(Family.X, k) for k in range(1, 6)]
    rels = idempotent_relations(xs)
    failures = 0
    for _ in range(200):
        used = xs[: rng.randint(1, 5)]
        p = Poly()
        for _ in range(rng.randint(1, 8)):
            term = Poly.const(rng.randint(-9, 9))
            for v in used:
                term = term * Poly.var(v) ** rng.randint(0, 4)
            p = p + term
        r = reduce_system(p, rels)
        failures += not is_compliform(r)
        failures += reduce_system(r, rels) != r
        for bits in itertools.product((0, 1), repeat=5):
            sigma = dict(zip(xs, bits))
            failures += poly_eval(r, sigma) != poly_eval(p, sigma)
    ok = failures == 0
    report(7, ok, f"200 random polynomials, failures={failures}")
    assert ok


def test_criterion_08_probability(report):
    t0 = time.perf_counter()
    worst = 0.0
    for p in (0.25, 0.5, 0.75):
        for n in range(13):
            dist = distribution_enumerated(n, p)
            for k in range(len(dist) + 1):
                exact = dist[k] if k < len(dist) else 0.0
                worst = max(worst, abs(pmf_c(n, k, p) - exact))
    trials = 100_000
    res = simulate(McConfig(0.5, 40, trials, seed=12345))
    outside = []
    for n in (2, 3, 9, 10, 21, 40):
        for k in range(7):
            q = pmf_c(n, k, 0.5)
            sigma = math.sqrt(q * (1 - q) / trials)
            if abs(res.frequency(n, k) - q) > 4 * sigma:
                outside.append((n, k))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and not outside and elapsed < 60
    report(8, ok, f"max |pmf - enumeration|={worst:.1e}, bins outside 4 sigma={outside}")
    assert ok


def test_criterion_09_sidon(report):
    t0 = time.perf_counter()
    p = pres_counts(sidon_doubling_set(2000), 2000)
    elapsed = time.perf_counter() - t0
    in_range = set(p) <= {0, 1}
    late = any(p[n] == 1 for n in range(1001, 2001))
    ok = in_range and late and elapsed < 1
    report(9, ok, f"p_n in {{0,1}} to 2000={in_range}, some p_n = 1 past 1000={late}")
    assert ok


def test_criterion_10_catalan(report):
    first = [catalan(k) for k in range(1, 6)] == [1, 1, 2, 5, 14]
    agree = all(catalan(k) == catalan_closed_form(k) for k in range(1, 201))
    gap = abs(catalan_asymptotic_ratio(10**4) - 1 / math.sqrt(math.pi))
    ok = first and agree and gap < 0.01
    report(10, ok, f"first values={first}, closed form to 200={agree}, asymptotic gap={gap:.2e}")
    assert ok
