"""The algebra tower for bases: square relations, d_n, e_n and a_n in terms of c.

Conventions throughout: a_0 = a_1 = 1, b_1 = 2, c_0 = c_1 = 1.

* ``d_n`` satisfies b_{n+1} = 2 a_{n+1} + d_n(b_2, ..., b_n);
* ``e_n`` satisfies c_{n+1} = a_{n+1} + e_n(c_2, ..., c_n), i.e. the main
  system, whose solution for 0/1 data a_k is the presentation profile.

Both are obtained by the elimination algorithm in :mod:`etlab.poly`, with the
square relations for b_k (resp. c_k) derived from a_k^2 = a_k.
"""

from __future__ import annotations

import threading
from typing import Dict, List

from .poly import (
    Family,
    Poly,
    Relation,
    VarId,
    hat_retraction,
    is_compliform,
    is_multilinear,
    reduce_system,
    substitute_many,
    var_id,
)
from .series import PolySeries, series_sqrt


class WrongFamily(ValueError):
    pass


def A(k: int) -> VarId:
    return var_id(Family.A, k)


def B(k: int) -> VarId:
    return var_id(Family.B, k)


def C(k: int) -> VarId:
    return var_id(Family.C, k)


def etr_reduce(p: Poly) -> Poly:
    """Normal form in Z[a_2, a_3, ...] modulo a_n^2 = a_n."""
    for v in p.variables():
        if v.family is not Family.A:
            raise WrongFamily(f"{v} is not an a-variable")
    return hat_retraction(p)


def a_series(order: int) -> PolySeries:
    """f(t) = 1 + t + a_2 t^2 + ... (a_1 = 1)."""
    return PolySeries.symbolic(Family.A, order, {1: 1})


def b_in_a(n: int) -> Poly:
    """b_n = sum_k a_k a_{n-k} with a_0 = a_1 = 1."""
    return _conv(n, full=True)


def c_in_a(n: int) -> Poly:
    """c_n = sum_{0 <= k <= n/2} a_k a_{n-k} with a_0 = a_1 = 1."""
    return _conv(n, full=False)


def _a(k: int) -> Poly:
    return Poly.const(1) if k <= 1 else Poly.var(A(k))


def _conv(n: int, full: bool) -> Poly:
    acc = Poly()
    top = n if full else n // 2
    for k in range(top + 1):
        acc = acc + _a(k) * _a(n - k)
    return acc


class TowerCache:
    """Incrementally built tables of b/c square relations, d_n, e_n and a_n(c).

    Entries are created in increasing index order on first request.  The
    builder holds a lock, so a cache shared between threads is safe; once an
    entry exists it is never modified.
    """

    def __init__(self):
        self.bsq: Dict[int, Relation] = {}
        self.csq: Dict[int, Relation] = {}
        self.ainc: Dict[int, Poly] = {}
        self.d: Dict[int, Poly] = {}
        self.e: Dict[int, Poly] = {}
        self._two_a: Dict[int, Poly] = {}
        self._sqrt_order = 0
        self._lock = threading.RLock()

    # -- b side ----------------------------------------------------------------

    def two_a_in_b(self, n: int) -> Poly:
        """2 a_n as a polynomial in b_1 = 2, b_2, ..., b_n (unreduced square-root coefficient)."""
        with self._lock:
            if n not in self._two_a:
                order = max(n, 2 * self._sqrt_order, 8)
                f = series_sqrt(PolySeries.symbolic(Family.B, order, {1: 2}))
                for k in range(order + 1):
                    self._two_a[k] = f[k].scale(2)
                self._sqrt_order = order
            return self._two_a[n]

    def b_relations(self, upto: int) -> List[Relation]:
        return [self.b_square_relation(k) for k in range(2, upto + 1)]

    def b_square_relation(self, k: int) -> Relation:
        if k < 2:
            raise ValueError("square relations start at b_2")
        with self._lock:
            if k not in self.bsq:
                lower = [self.b_square_relation(j) for j in range(2, k)]
                big_a = reduce_system(self.two_a_in_b(k), lower)
                # (2 a_k)^2 = 2 (2 a_k); solve for b_k^2.
                excess = big_a * big_a - big_a * 2
                bk = B(k)
                rhs = Poly.var(bk) ** 2 - excess
                self.bsq[k] = Relation(bk, reduce_system(rhs, lower))
            return self.bsq[k]

    def compute_d(self, n: int) -> Poly:
        if n < 1:
            raise ValueError("d_n is defined for n >= 1")
        with self._lock:
            for m in range(1, n + 1):
                if m not in self.d:
                    two_a = self.two_a_in_b(m + 1)
                    dm = reduce_system(Poly.var(B(m + 1)) - two_a, self.b_relations(m))
                    self.d[m] = dm
            return self.d[n]

    # -- c side ------------------------------------------------------------------

    def c_relations(self, upto: int) -> List[Relation]:
        return [self.c_square_relation(k) for k in range(2, upto + 1)]

    def c_square_relation(self, k: int) -> Relation:
        if k < 2:
            raise ValueError("square relations start at c_2")
        with self._lock:
            if k not in self.csq:
                ak = self.a_in_c(k)
                ck = C(k)
                # a_k = c_k - e_{k-1}; impose a_k^2 = a_k and solve for c_k^2.
                excess = ak * ak - ak
                rhs = Poly.var(ck) ** 2 - excess
                self.csq[k] = Relation(ck, reduce_system(rhs, self.c_relations(k - 1)))
            return self.csq[k]

    def a_in_c(self, n: int) -> Poly:
        if n < 2:
            raise ValueError("a_n in terms of c is defined for n >= 2")
        with self._lock:
            if n not in self.ainc:
                self.ainc[n] = Poly.var(C(n)) - self.compute_e(n - 1)
            return self.ainc[n]

    def compute_e(self, n: int) -> Poly:
        if n < 1:
            raise ValueError("e_n is defined for n >= 1")
        with self._lock:
            for m in range(1, n + 1):
                if m not in self.e:
                    self.e[m] = self._build_e(m)
            return self.e[n]

    def _build_e(self, m: int) -> Poly:
        # s_m(a_2..a_m) = c_{m+1} - a_{m+1} = sum_{1 <= k <= (m+1)/2} a_k a_{m+1-k}
        def a_c(k: int) -> Poly:
            return Poly.const(1) if k <= 1 else self.a_in_c(k)

        s = Poly()
        for k in range(1, (m + 1) // 2 + 1):
            s = s + a_c(k) * a_c(m + 1 - k)
        return reduce_system(s, self.c_relations(m))

    def to_c(self, u: Poly) -> Poly:
        """Rewrite a polynomial in a_2, a_3, ... as a compliform polynomial in c_2, c_3, ..."""
        for v in u.variables():
            if v.family is not Family.A:
                raise WrongFamily(f"{v} is not an a-variable")
        top = max((v.index for v in u.variables()), default=1)
        if top < 2:
            return u
        mapping = {A(k): self.a_in_c(k) for k in range(2, top + 1)}
        return reduce_system(substitute_many(u, mapping), self.c_relations(top))

    def to_a(self, u: Poly) -> Poly:
        """Rewrite a polynomial in c_2, c_3, ... as its normal form in a_2, a_3, ..."""
        for v in u.variables():
            if v.family is not Family.C:
                raise WrongFamily(f"{v} is not a c-variable")
        mapping = {v: c_in_a(v.index) for v in u.variables()}
        return etr_reduce(substitute_many(u, mapping))

    # -- bookkeeping -------------------------------------------------------------

    def build(self, d_max: int = 0, e_max: int = 0) -> "TowerCache":
        if d_max:
            self.compute_d(d_max)
        if e_max:
            self.compute_e(e_max)
        return self

    def check_invariants(self) -> List[str]:
        problems = []
        for n, e in sorted(self.e.items()):
            if not is_compliform(e):
                problems.append(f"e{n} is not compliform")
        for n, p in sorted(self.ainc.items()):
            if not is_compliform(p):
                problems.append(f"a{n}(c) is not compliform")
        for n, d in sorted(self.d.items()):
            if not is_multilinear(d):
                problems.append(f"d{n} is not multilinear")
        for k, rel in sorted(self.bsq.items()):
            if rel.rhs.degree_in(rel.var) > 1:
                problems.append(f"b{k}^2 relation not reduced")
        return problems


def b_square_relation(k: int, cache: TowerCache) -> Relation:
    return cache.b_square_relation(k)


def compute_d(n: int, cache: TowerCache) -> Poly:
    return cache.compute_d(n)


def compute_e(n: int, cache: TowerCache) -> Poly:
    return cache.compute_e(n)


def a_in_c(n: int, cache: TowerCache) -> Poly:
    return cache.a_in_c(n)


def scaled(p: Poly) -> tuple:
    """``(2**E, 2**E * p)`` with the smallest E making every coefficient integral."""
    e = p.denominator_exp2()
    return 1 << e, p.scale(1 << e)
