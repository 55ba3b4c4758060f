"""Truncated power series in t with polynomial coefficients.

The square root uses the Catalan--Bell expansion

    a_n = 2 * sum_{k=1..n} (-1)^(k-1) / 4^k * C_k * P_{n,k}[b],

where b = g - 1; ``newton_sqrt`` solves ``g = f^2`` coefficient by coefficient
instead and serves as the cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from .combinat import catalan
from .dyadic import Dyadic
from .poly import Family, Poly, var_id


class SeriesOrderMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PolySeries:
    order: int
    coeffs: Tuple[Poly, ...]

    def __post_init__(self):
        coeffs = tuple(
            p if isinstance(p, Poly) else Poly.const(p) for p in self.coeffs
        )
        if len(coeffs) != self.order + 1:
            raise ValueError(
                f"series of order {self.order} needs {self.order + 1} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def of(cls, coeffs: Sequence) -> "PolySeries":
        return cls(len(coeffs) - 1, tuple(coeffs))

    @classmethod
    def symbolic(cls, family: Family, order: int, fixed: dict | None = None) -> "PolySeries":
        """``1 + v_1 t + v_2 t^2 + ...`` with v the given family; ``fixed`` pins some indices."""
        fixed = fixed or {}
        coeffs = [Poly.const(1)]
        for n in range(1, order + 1):
            if n in fixed:
                coeffs.append(Poly.const(fixed[n]))
            else:
                coeffs.append(Poly.var(var_id(family, n)))
        return cls(order, tuple(coeffs))

    def __getitem__(self, n: int) -> Poly:
        return self.coeffs[n]

    def __eq__(self, other):
        if not isinstance(other, PolySeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def to_json(self) -> list:
        return [str(p) for p in self.coeffs]


def _check_unit(f: PolySeries, name: str):
    if f.coeffs[0] != 1:
        raise ValueError(f"{name} must have constant term 1, got {f.coeffs[0]}")


def _same_order(f: PolySeries, g: PolySeries):
    if f.order != g.order:
        raise SeriesOrderMismatch(f"orders differ: {f.order} vs {g.order}")


def series_square(f: PolySeries) -> PolySeries:
    _check_unit(f, "f")
    n_max = f.order
    out = []
    for n in range(n_max + 1):
        acc = Poly()
        for k in range(n // 2 + 1):
            term = f.coeffs[k] * f.coeffs[n - k]
            acc = acc + (term if 2 * k == n else term * 2)
        out.append(acc)
    return PolySeries(n_max, tuple(out))


def _series_mul(u: Sequence[Poly], v: Sequence[Poly], order: int) -> list:
    out = [Poly() for _ in range(order + 1)]
    for i, ui in enumerate(u):
        if not ui:
            continue
        for j in range(order + 1 - i):
            if v[j]:
                out[i + j] = out[i + j] + ui * v[j]
    return out


def sqrt_weight(k: int) -> Dyadic:
    """The coefficient 2 (-1)^(k-1) C_k / 4^k of P_{n,k} in a_n."""
    sign = 1 if k % 2 else -1
    return Dyadic(sign * catalan(k), 2 * k - 1)


def series_sqrt(g: PolySeries) -> PolySeries:
    _check_unit(g, "g")
    order = g.order
    b = [Poly()] + list(g.coeffs[1:])
    out = [Poly() for _ in range(order + 1)]
    power = list(b)  # b^k, starting at k = 1
    for k in range(1, order + 1):
        w = sqrt_weight(k)
        for n in range(k, order + 1):
            if power[n]:
                out[n] = out[n] + power[n].scale(w)
        if k < order:
            power = _series_mul(power, b, order)
    out[0] = Poly.const(1)
    return PolySeries(order, tuple(out))


def newton_sqrt(g: PolySeries) -> PolySeries:
    """Solve ``f^2 = g`` for f with f_0 = 1 by 2 f_n = g_n - sum_{0<k<n} f_k f_{n-k}."""
    _check_unit(g, "g")
    f = [Poly.const(1)]
    for n in range(1, g.order + 1):
        acc = g.coeffs[n]
        for k in range(1, n):
            acc = acc - f[k] * f[n - k]
        f.append(acc.scale(Dyadic(1, 1)))
    return PolySeries(g.order, tuple(f))


def h_from_f_g(f: PolySeries, g: PolySeries) -> PolySeries:
    """h with 2 h(t) = g(t) + f(t^2)."""
    _same_order(f, g)
    out = []
    for n in range(f.order + 1):
        s = g.coeffs[n]
        if n % 2 == 0:
            s = s + f.coeffs[n // 2]
        out.append(s.scale(Dyadic(1, 1)))
    return PolySeries(f.order, tuple(out))


def c_from_a(f: PolySeries) -> PolySeries:
    """Half-range convolution c_n = sum_{0 <= k <= n/2} a_k a_{n-k}."""
    _check_unit(f, "f")
    out = []
    for n in range(f.order + 1):
        acc = Poly()
        for k in range(n // 2 + 1):
            acc = acc + f.coeffs[k] * f.coeffs[n - k]
        out.append(acc)
    return PolySeries(f.order, tuple(out))
