"""Catalan numbers, compositions (k-indices) and ordinary Bell polynomials."""

from __future__ import annotations

import math
import threading
from typing import Dict, List, Tuple

from .dyadic import ONE
from .poly import Family, Monomial, Poly, var_id

KIndex = Tuple[int, ...]

_catalan_memo: List[int] = [0, 1]
_catalan_lock = threading.Lock()


def catalan(k: int) -> int:
    """C_k with C_1 = 1 and C_k = C_1 C_{k-1} + ... + C_{k-1} C_1 (memoized recurrence)."""
    if k < 1:
        raise ValueError(f"Catalan index must be >= 1, got {k}")
    with _catalan_lock:
        memo = _catalan_memo
        while len(memo) <= k:
            j = len(memo)
            memo.append(sum(memo[i] * memo[j - i] for i in range(1, j)))
        return memo[k]


def catalan_closed_form(k: int) -> int:
    if k < 1:
        raise ValueError(f"Catalan index must be >= 1, got {k}")
    return math.comb(2 * k - 2, k - 1) // k


def catalan_asymptotic_ratio(k: int) -> float:
    """4 C_k k^{3/2} / 4^k computed in floating point via log-gamma; tends to 1/sqrt(pi)."""
    log_ck = math.lgamma(2 * k - 1) - math.lgamma(k) - math.lgamma(k) - math.log(k)
    return math.exp(math.log(4) + log_ck + 1.5 * math.log(k) - k * math.log(4))


def compositions(n: int, k: int) -> List[KIndex]:
    """All ordered k-tuples of positive integers summing to n, lexicographically."""
    if k < 0 or n < 0:
        return []
    if k == 0:
        return [()] if n == 0 else []
    if n < k:
        return []
    out: List[KIndex] = []

    def rec(prefix: List[int], remaining: int, parts_left: int):
        if parts_left == 1:
            out.append(tuple(prefix) + (remaining,))
            return
        for first in range(1, remaining - parts_left + 2):
            prefix.append(first)
            rec(prefix, remaining - first, parts_left - 1)
            prefix.pop()

    rec([], n, k)
    return out


def bell_poly(n: int, k: int, family: Family = Family.B) -> Poly:
    """P_{n,k}[b]: the sum of b_mu over all k-indices mu of weight n.

    Equal monomials are merged while walking the compositions, so the
    multiplicity of a monomial counts its orderings (P_{4,2} has 2*b1*b3).
    """
    if k == 0:
        return Poly.const(1) if n == 0 else Poly()
    if n < k or k < 0:
        return Poly()
    vars_ = {j: var_id(family, j) for j in range(1, n - k + 2)}
    counts: Dict[Monomial, int] = {}

    def rec(remaining: int, parts_left: int, expo: Dict[int, int]):
        if parts_left == 1:
            expo[remaining] = expo.get(remaining, 0) + 1
            m = tuple(sorted((vars_[j], e) for j, e in expo.items()))
            counts[m] = counts.get(m, 0) + 1
            expo[remaining] -= 1
            if not expo[remaining]:
                del expo[remaining]
            return
        for first in range(1, remaining - parts_left + 2):
            expo[first] = expo.get(first, 0) + 1
            rec(remaining - first, parts_left - 1, expo)
            expo[first] -= 1
            if not expo[first]:
                del expo[first]

    rec(n, k, {})
    return Poly({m: c * ONE for m, c in counts.items()})
