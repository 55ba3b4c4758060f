"""Finite subsets of N, their representation counts r_n and presentation counts p_n."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .poly import Poly
from .tower import TowerCache


class HorizonExceeded(ValueError):
    pass


@dataclass(frozen=True)
class SubsetA:
    """Characteristic bits of A intersected with {0..horizon}."""

    bits: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(1 if x else 0 for x in self.bits))

    @property
    def horizon(self) -> int:
        return len(self.bits) - 1

    @classmethod
    def from_elements(cls, elements: Iterable[int], horizon: int) -> "SubsetA":
        bits = [0] * (horizon + 1)
        for e in elements:
            if e < 0:
                raise ValueError(f"negative element {e}")
            if e <= horizon:
                bits[e] = 1
        return cls(tuple(bits))

    @classmethod
    def full(cls, horizon: int) -> "SubsetA":
        return cls((1,) * (horizon + 1))

    @classmethod
    def odd(cls, horizon: int) -> "SubsetA":
        """{0} together with every odd number."""
        return cls(tuple(1 if (n == 0 or n % 2) else 0 for n in range(horizon + 1)))

    def elements(self) -> List[int]:
        return [n for n, bit in enumerate(self.bits) if bit]

    def __contains__(self, n: int) -> bool:
        return 0 <= n <= self.horizon and bool(self.bits[n])

    def contains_zero_one(self) -> bool:
        return self.horizon >= 1 and self.bits[0] == 1 and self.bits[1] == 1

    def __str__(self):
        return "{" + ",".join(map(str, self.elements())) + "}"


def sidon_doubling_set(horizon: int) -> SubsetA:
    """{0, 1, 3, 7, 15, ...}: v_0 = 0, v_{n+1} = 2 v_n + 1, cut at the horizon."""
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    elems = [0]
    v = 1
    while v <= horizon:
        elems.append(v)
        v = 2 * v + 1
    return SubsetA.from_elements(elems, horizon)


def _check_horizon(A: SubsetA, N: int):
    if N > A.horizon:
        raise HorizonExceeded(f"requested N={N} beyond horizon {A.horizon}")
    if N < 0:
        raise ValueError("N must be >= 0")


def rep_counts(A: SubsetA, N: int) -> List[int]:
    """r_n = #{(x, y) in A x A : x + y = n} for n = 0..N (ordered pairs)."""
    _check_horizon(A, N)
    u = np.asarray(A.bits[: N + 1], dtype=np.int64)
    return [int(v) for v in np.convolve(u, u)[: N + 1]]


def pres_counts(A: SubsetA, N: int) -> List[int]:
    """p_n = #{(x, y) in A x A : x + y = n, x <= y} for n = 0..N."""
    _check_horizon(A, N)
    elems = np.asarray([e for e in A.elements() if e <= N], dtype=np.int64)
    p = np.zeros(N + 1, dtype=np.int64)
    for i, x in enumerate(elems):
        sums = x + elems[i:]
        np.add.at(p, sums[sums <= N], 1)
    return [int(v) for v in p]


@dataclass(frozen=True)
class Profile:
    p: Tuple[int, ...]
    r: Tuple[int, ...]


def profile(A: SubsetA, N: int) -> Profile:
    return Profile(tuple(pres_counts(A, N)), tuple(rep_counts(A, N)))


def parity_violations(A: SubsetA, N: int) -> List[int]:
    """Indices n where r_n != 2 p_n - [n/2 in A]."""
    r = rep_counts(A, N)
    p = pres_counts(A, N)
    bad = []
    for n in range(N + 1):
        mid = 1 if (n % 2 == 0 and (n // 2) in A) else 0
        if r[n] != 2 * p[n] - mid:
            bad.append(n)
    return bad


def is_basis_prefix(A: SubsetA, N: int) -> bool:
    return all(r >= 1 for r in rep_counts(A, N))


class CompiledPoly:
    """Fast integer evaluation of a polynomial in one variable family, indexed by position."""

    def __init__(self, poly: Poly):
        self.exp2, raw = poly.integer_form()
        self.terms = [(n, tuple((v.index, e) for v, e in m)) for n, m in raw]

    def __call__(self, values: Sequence[int]) -> int:
        """Evaluate with ``values[k]`` bound to the variable of index k; result must be integral."""
        total = 0
        for n, mono in self.terms:
            prod = n
            for k, e in mono:
                prod *= values[k] if e == 1 else values[k] ** e
            total += prod
        if self.exp2:
            q, rem = divmod(total, 1 << self.exp2)
            if rem:
                raise ValueError(f"value {total}/2^{self.exp2} is not an integer")
            return q
        return total


@dataclass
class SpMismatch:
    n: int
    p_next: int
    e_value: int
    member: int


@dataclass
class SpReport:
    N: int
    mismatches: List[SpMismatch] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def check_sp(A: SubsetA, N: int, cache: TowerCache) -> SpReport:
    """Check p_{n+1} = e_n(p_2..p_n) + [n+1 in A] for 1 <= n < N."""
    if not A.contains_zero_one():
        raise ValueError("check_sp requires 0 and 1 in A")
    p = pres_counts(A, N)
    report = SpReport(N)
    for n in range(1, N):
        e_val = CompiledPoly(cache.compute_e(n))(p)
        member = A.bits[n + 1]
        if p[n + 1] - e_val != member:
            report.mismatches.append(SpMismatch(n, p[n + 1], e_val, member))
    return report


def parse_set(text: str, horizon: int) -> SubsetA:
    """A named generator (full, odd, sidon-doubling) or comma-separated naturals."""
    name = text.strip().lower()
    if name == "full":
        return SubsetA.full(horizon)
    if name == "odd":
        return SubsetA.odd(horizon)
    if name in ("sidon-doubling", "sidon"):
        return sidon_doubling_set(horizon)
    try:
        elems = [int(tok) for tok in name.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"cannot parse set {text!r}: expected full, odd, sidon-doubling or naturals like 0,1,3") from None
    if any(e < 0 for e in elems):
        raise ValueError(f"negative element in set {text!r}")
    return SubsetA.from_elements(elems, horizon)

