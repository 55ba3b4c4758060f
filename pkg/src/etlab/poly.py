"""Sparse multivariate polynomials over Z[1/2] in the indexed families a, b, c, x.

A monomial is a tuple of ``(VarId, exponent)`` pairs sorted by variable, with
no zero exponents; the empty tuple is the unit monomial.  A :class:`Poly` maps
monomials to nonzero :class:`~etlab.dyadic.Dyadic` coefficients and is never
mutated after construction.

Canonical term order (used for text and JSON): terms of positive degree
first, by increasing total degree; within a degree, the term whose largest
variable is larger comes first (ties broken by the next largest variable,
and so on); the constant term comes last.  This reproduces the way the
d_n / e_n tables are usually written, e.g. ``2*b5 - 3*b4 + b4*b2 - 1``.
"""

from __future__ import annotations

import re
from enum import IntEnum
from fractions import Fraction
from typing import Dict, Iterable, Mapping, NamedTuple, Sequence, Tuple

from .dyadic import ONE, ZERO, Dyadic


class Family(IntEnum):
    A = 0
    B = 1
    C = 2
    X = 3


class VarId(NamedTuple):
    family: Family
    index: int

    def __str__(self):
        return f"{self.family.name.lower()}{self.index}"


Monomial = Tuple[Tuple[VarId, int], ...]

UNIT: Monomial = ()


class MissingVariable(LookupError):
    def __init__(self, var: VarId):
        super().__init__(f"no value assigned to {var}")
        self.var = var


class IllFormedRelation(ValueError):
    pass


def var_id(family, index: int) -> VarId:
    if isinstance(family, str):
        family = Family[family.upper()]
    if index < 1:
        raise ValueError(f"variable index must be >= 1, got {index}")
    return VarId(Family(family), int(index))


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _order_key(m: Monomial):
    if not m:
        return (1, 0, ())
    expanded = []
    for v, e in reversed(m):
        expanded.extend([(-v.family, -v.index)] * e)
    return (0, len(expanded), tuple(expanded))


def mono_str(m: Monomial) -> str:
    parts = []
    for v, e in reversed(m):
        parts.append(str(v) if e == 1 else f"{v}^{e}")
    return "*".join(parts)


class Poly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: Dict[Monomial, Dyadic] = {}
        if terms:
            for m, c in terms.items():
                c = Dyadic.coerce(c)
                if c:
                    m = tuple(sorted((v, e) for v, e in m if e))
                    if any(e < 0 for _, e in m):
                        raise ValueError("negative exponent")
                    prev = clean.get(m)
                    c = c if prev is None else prev + c
                    if c:
                        clean[m] = c
                    else:
                        del clean[m]
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms: Dict[Monomial, Dyadic]) -> "Poly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, value) -> "Poly":
        c = Dyadic.coerce(value)
        return cls._wrap({UNIT: c} if c else {})

    @classmethod
    def var(cls, v: VarId) -> "Poly":
        return cls._wrap({((v, 1),): ONE})

    @classmethod
    def parse(cls, text: str) -> "Poly":
        """Parse the canonical text form (``"2*b5 - 3/2*b4 + b4*b2^2 - 1"``)."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial text")
        terms: Dict[Monomial, Dyadic] = {}
        pos = 0
        for match in _TERM_RE.finditer(s):
            if match.start() != pos or not match.group(2):
                raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
            pos = match.end()
            coeff = Fraction(-1 if match.group(1) == "-" else 1)
            mono: Dict[VarId, int] = {}
            for factor in match.group(2).split("*"):
                fm = _VAR_RE.fullmatch(factor)
                if fm:
                    v = var_id(fm.group(1), int(fm.group(2)))
                    mono[v] = mono.get(v, 0) + int(fm.group(3) or 1)
                elif re.fullmatch(r"\d+(/\d+)?", factor):
                    coeff *= Fraction(factor)
                else:
                    raise ValueError(f"bad factor {factor!r} in {text!r}")
            m = tuple(sorted(mono.items()))
            terms[m] = terms.get(m, ZERO) + Dyadic.coerce(coeff)
        if pos != len(s):
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        return cls({m: c for m, c in terms.items()})

    # -- inspection ----------------------------------------------------------

    def items(self):
        return self._terms.items()

    def coeff(self, m: Monomial) -> Dyadic:
        return self._terms.get(m, ZERO)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and UNIT in self._terms)

    def constant_term(self) -> Dyadic:
        return self._terms.get(UNIT, ZERO)

    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m}

    def degree_in(self, v: VarId) -> int:
        d = 0
        for m in self._terms:
            for w, e in m:
                if w == v and e > d:
                    d = e
        return d

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self._terms), default=0)

    def max_exponent(self) -> int:
        return max((e for m in self._terms for _, e in m), default=0)

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda mc: _order_key(mc[0]))

    def denominator_exp2(self) -> int:
        return max((c.exp2 for c in self._terms.values()), default=0)

    def split_by(self, v: VarId) -> Dict[int, "Poly"]:
        """Write the polynomial as ``sum_j part[j] * v**j`` with parts free of ``v``."""
        parts: Dict[int, Dict[Monomial, Dyadic]] = {}
        for m, c in self._terms.items():
            j = 0
            rest = m
            for i, (w, e) in enumerate(m):
                if w == v:
                    j = e
                    rest = m[:i] + m[i + 1:]
                    break
            parts.setdefault(j, {})[rest] = c
        return {j: Poly._wrap(t) for j, t in parts.items()}

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        try:
            return Poly.const(other)
        except TypeError:
            return None

    def __add__(self, other):
        other = Poly._coerce(other)
        if other is None:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            prev = out.get(m)
            if prev is None:
                out[m] = c
            else:
                s = prev + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = Poly._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k) -> "Poly":
        k = Dyadic.coerce(k)
        if not k:
            return Poly()
        return Poly._wrap({m: c * k for m, c in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return Poly()
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Monomial, Dyadic] = {}
        get = out.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                prev = get(m)
                out[m] = c if prev is None else prev + c
        return Poly._wrap({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        other = Poly._coerce(other) if not isinstance(other, Poly) else other
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- rendering -------------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            neg = c.num < 0
            mag = -c if neg else c
            if not m:
                body = str(mag)
            elif mag == 1:
                body = mono_str(m)
            else:
                body = f"{mag}*{mono_str(m)}"
            if i == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def to_json(self) -> list:
        return [
            {
                "coeff": c.to_json(),
                "monomial": [[str(v), e] for v, e in reversed(m)],
            }
            for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: list) -> "Poly":
        terms = {}
        for entry in data:
            mono = []
            for name, e in entry["monomial"]:
                fm = _VAR_RE.fullmatch(name)
                if not fm:
                    raise ValueError(f"bad variable name {name!r}")
                mono.append((var_id(fm.group(1), int(fm.group(2))), int(e)))
            terms[tuple(sorted(mono))] = Dyadic.from_json(entry["coeff"])
        return cls(terms)

    # -- evaluation ----------------------------------------------------------

    def integer_form(self) -> Tuple[int, list]:
        """Return ``(E, [(n, monomial), ...])`` with ``self = sum(n * monomial) / 2**E``."""
        big = self.denominator_exp2()
        return big, [(c.num << (big - c.exp2), m) for m, c in self._terms.items()]


_TERM_RE = re.compile(r"([+-]?)([^+-]+)")
_VAR_RE = re.compile(r"([abcxABCX])_?(\d+)(?:\^(\d+))?")


def a(k: int) -> Poly:
    return Poly.var(var_id(Family.A, k))


def b(k: int) -> Poly:
    return Poly.var(var_id(Family.B, k))


def c(k: int) -> Poly:
    return Poly.var(var_id(Family.C, k))


def x(k: int) -> Poly:
    return Poly.var(var_id(Family.X, k))


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_eval(p: Poly, assignment: Mapping[VarId, object]) -> Dyadic:
    big, terms = p.integer_form()
    values: Dict[VarId, int] = {}
    scale = 0
    for v in p.variables():
        if v not in assignment:
            raise MissingVariable(v)
        d = Dyadic.coerce(assignment[v])
        values[v] = d
    # Bring every assigned value to a common power-of-two denominator so the
    # inner loop is pure integer arithmetic.
    if values:
        scale = max(d.exp2 for d in values.values())
    ints = {v: d.num << (scale - d.exp2) for v, d in values.items()}
    total = 0
    max_deg = 0
    for n, m in terms:
        deg = mono_degree(m)
        if deg > max_deg:
            max_deg = deg
    for n, m in terms:
        prod = n
        for v, e in m:
            prod *= ints[v] ** e
        total += prod << (scale * (max_deg - mono_degree(m)))
    return Dyadic(total, big + scale * max_deg)


def poly_substitute(p: Poly, v: VarId, q: Poly) -> Poly:
    parts = p.split_by(v)
    if len(parts) == 1 and 0 in parts:
        return p
    result = Poly()
    for j in sorted(parts):
        result = result + parts[j] * q ** j
    return result


def substitute_many(p: Poly, mapping: Mapping[VarId, Poly]) -> Poly:
    """Simultaneous substitution of several variables."""
    cache: Dict[Tuple[VarId, int], Poly] = {}
    out = Poly()
    for m, coef in p.items():
        keep = []
        term = Poly.const(coef)
        for v, e in m:
            q = mapping.get(v)
            if q is None:
                keep.append((v, e))
                continue
            key = (v, e)
            if key not in cache:
                cache[key] = q ** e
            term = term * cache[key]
        if keep:
            term = term * Poly._wrap({tuple(keep): ONE})
        out = out + term
    return out


def hat_retraction(p: Poly) -> Poly:
    out: Dict[Monomial, Dyadic] = {}
    for m, c in p.items():
        h = tuple((v, 1) for v, _ in m)
        prev = out.get(h)
        out[h] = c if prev is None else prev + c
    return Poly._wrap({m: c for m, c in out.items() if c})


def is_compliform(p: Poly) -> bool:
    return all(e == 1 for m in p._terms for _, e in m) and all(
        c.exp2 == 0 for c in p._terms.values()
    )


def is_multilinear(p: Poly) -> bool:
    """Degree at most 1 in every variable, coefficients unrestricted."""
    return all(e == 1 for m in p._terms for _, e in m)


class Relation:
    """The rewrite rule ``var**2 -> rhs``; ``rhs`` has degree <= 1 in ``var``."""

    __slots__ = ("var", "rhs")

    def __init__(self, var: VarId, rhs: Poly):
        if rhs.degree_in(var) > 1:
            raise IllFormedRelation(f"rhs of {var}^2 has degree > 1 in {var}")
        for w in rhs.variables():
            if w > var:
                raise IllFormedRelation(f"rhs of {var}^2 uses the higher variable {w}")
        self.var = var
        self.rhs = rhs

    @classmethod
    def idempotent(cls, v: VarId) -> "Relation":
        return cls(v, Poly.var(v))

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.var == other.var and self.rhs == other.rhs

    def __hash__(self):
        return hash((self.var, self.rhs))

    def __str__(self):
        return f"{self.var}^2 = {self.rhs}"

    def __repr__(self):
        return f"Relation({self})"


def _power_table(rel: Relation, top: int):
    """Remainders of ``var**j`` modulo ``var**2 - rhs`` as pairs ``(alpha_j, beta_j)``.

    ``var**j == alpha_j + beta_j * var`` with ``alpha_j``, ``beta_j`` free of var.
    """
    parts = rel.rhs.split_by(rel.var)
    t0 = parts.get(0, Poly())
    t1 = parts.get(1, Poly())
    table = [(Poly.const(1), Poly()), (Poly(), Poly.const(1))]
    for _ in range(2, top + 1):
        alpha, beta = table[-1]
        table.append((beta * t0, alpha + beta * t1))
    return table


def reduce_in_var(p: Poly, rel: Relation) -> Poly:
    """Remainder of the division of ``p`` by ``var**2 - rhs`` as a polynomial in ``var``."""
    v = rel.var
    parts = p.split_by(v)
    top = max(parts, default=0)
    if top <= 1:
        return p
    table = _power_table(rel, top)
    vpoly = Poly.var(v)
    low = Poly()
    high = Poly()
    for j, part in parts.items():
        alpha, beta = table[j]
        if alpha:
            low = low + part * alpha
        if beta:
            high = high + part * beta
    return low + high * vpoly


def reduce_system(p: Poly, rels: Sequence[Relation]) -> Poly:
    """Normal form of ``p`` modulo a triangular family of square relations.

    Variables are eliminated from the highest related variable down, each by
    Euclidean division; the result has degree <= 1 in every related variable.
    """
    seen = set()
    for rel in rels:
        if not isinstance(rel, Relation):
            raise IllFormedRelation(f"not a Relation: {rel!r}")
        if rel.var in seen:
            raise IllFormedRelation(f"two relations for {rel.var}")
        seen.add(rel.var)
    for rel in sorted(rels, key=lambda r: r.var, reverse=True):
        p = reduce_in_var(p, rel)
    return p


def idempotent_relations(variables: Iterable[VarId]) -> list:
    return [Relation.idempotent(v) for v in sorted(set(variables))]
