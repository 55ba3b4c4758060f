import itertools

import pytest

from etlab.profiles import (
    CompiledPoly,
    HorizonExceeded,
    SubsetA,
    check_sp,
    is_basis_prefix,
    parity_violations,
    parse_set,
    pres_counts,
    rep_counts,
    sidon_doubling_set,
)
from etlab.poly import Poly


def S(elems, horizon):
    return SubsetA.from_elements(elems, horizon)


def test_rep_counts_examples():
    assert rep_counts(S([0, 1], 3), 3) == [1, 2, 1, 0]
    assert rep_counts(SubsetA.full(20), 20) == [n + 1 for n in range(21)]
    assert rep_counts(S([0, 1, 2], 4), 4)[4] == 1


def test_pres_counts_examples():
    assert pres_counts(SubsetA.full(20), 20) == [n // 2 + 1 for n in range(21)]
    assert pres_counts(S([0, 1, 3, 5], 5), 5)[2:] == [1, 1, 1, 1]


def test_horizon():
    with pytest.raises(HorizonExceeded):
        rep_counts(S([0, 1], 3), 4)


def test_basis_prefix_examples():
    assert is_basis_prefix(SubsetA.full(30), 30)
    assert not is_basis_prefix(S([0, 1], 5), 5)
    odd = SubsetA.odd(100)
    assert all(is_basis_prefix(odd, N) for N in range(101))


def test_check_sp_examples(cache):
    full = SubsetA.full(12)
    assert pres_counts(full, 12)[:12] == [1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6]
    assert check_sp(full, 11, cache).passed
    pair = S([0, 1], 5)
    assert pres_counts(pair, 5)[3:] == [0, 0, 0]
    assert check_sp(pair, 5, cache).passed
    with pytest.raises(ValueError):
        check_sp(S([0, 2, 3], 6), 6, cache)


def test_exhaustive_small_sets(cache):
    # every A with {0, 1} in A, cut at 10
    cache.compute_e(9)
    for tail in itertools.product((0, 1), repeat=9):
        A = SubsetA((1, 1) + tail)
        assert parity_violations(A, 10) == []
        assert check_sp(A, 10, cache).passed


def test_parity_relation_any_set():
    for mask in range(1 << 9):
        A = SubsetA(tuple((mask >> i) & 1 for i in range(9)))
        assert parity_violations(A, 8) == []


def test_sidon_examples():
    assert sidon_doubling_set(10).elements() == [0, 1, 3, 7]
    assert sidon_doubling_set(0).elements() == [0]
    p = pres_counts(sidon_doubling_set(2000), 2000)
    assert set(p) <= {0, 1}
    assert any(p[n] == 1 for n in range(1001, 2001))


def test_parse_set():
    assert parse_set("0,1,3", 5).elements() == [0, 1, 3]
    assert parse_set("full", 3).elements() == [0, 1, 2, 3]
    assert parse_set("odd", 6).elements() == [0, 1, 3, 5]
    assert parse_set("sidon-doubling", 20).elements() == [0, 1, 3, 7, 15]
    for bad in ("0,x", "-1,0"):
        with pytest.raises(ValueError):
            parse_set(bad, 5)


def test_compiled_poly():
    f = CompiledPoly(Poly.parse("c3*c2 - 1/2*c2 + 1/2"))
    assert f([1, 1, 3, 5]) == 15 - 1
    with pytest.raises(ValueError):
        f([1, 1, 2, 5])
