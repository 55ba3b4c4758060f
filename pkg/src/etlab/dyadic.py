"""Exact arithmetic in the ring of dyadic rationals Z[1/2]."""

from __future__ import annotations

from fractions import Fraction
from numbers import Integral, Rational


class NotAnInteger(ValueError):
    """Raised when a dyadic value with a nontrivial denominator is used as an integer."""


def _trailing_zeros(n: int) -> int:
    return (n & -n).bit_length() - 1


class Dyadic:
    """The value ``num / 2**exp2``.

    Instances are always normalized: either ``exp2 == 0`` or ``num`` is odd,
    and zero is stored as ``(0, 0)``.  Field-wise equality is therefore value
    equality.
    """

    __slots__ = ("num", "exp2")

    def __init__(self, num: int = 0, exp2: int = 0):
        if exp2 < 0:
            num <<= -exp2
            exp2 = 0
        if num == 0:
            exp2 = 0
        elif exp2 and not num & 1:
            shift = min(_trailing_zeros(num), exp2)
            num >>= shift
            exp2 -= shift
        self.num = num
        self.exp2 = exp2

    @classmethod
    def coerce(cls, value) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, Integral):
            return cls(int(value))
        if isinstance(value, Rational):
            den = int(value.denominator)
            if den & (den - 1):
                raise ValueError(f"{value} is not a dyadic rational")
            return cls(int(value.numerator), den.bit_length() - 1)
        raise TypeError(f"cannot convert {type(value).__name__} to Dyadic")

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        return cls.coerce(Fraction(text.strip()))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Dyadic):
            try:
                other = Dyadic.coerce(other)
            except TypeError:
                return NotImplemented
        e1, e2 = self.exp2, other.exp2
        if e1 == e2:
            return Dyadic(self.num + other.num, e1)
        if e1 > e2:
            return Dyadic(self.num + (other.num << (e1 - e2)), e1)
        return Dyadic((self.num << (e2 - e1)) + other.num, e2)

    __radd__ = __add__

    def __neg__(self):
        return Dyadic(-self.num, self.exp2)

    def __sub__(self, other):
        if not isinstance(other, Dyadic):
            try:
                other = Dyadic.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Dyadic):
            try:
                other = Dyadic.coerce(other)
            except TypeError:
                return NotImplemented
        return Dyadic(self.num * other.num, self.exp2 + other.exp2)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers leave Z[1/2] unless the value is +-2^j")
        return Dyadic(self.num ** k, self.exp2 * k)

    def half(self) -> "Dyadic":
        return Dyadic(self.num, self.exp2 + 1)

    def shift(self, j: int) -> "Dyadic":
        """Multiply by ``2**j`` (``j`` may be negative)."""
        return Dyadic(self.num, self.exp2 - j)

    # -- comparison and conversion ----------------------------------------

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.num == other.num and self.exp2 == other.exp2
        if isinstance(other, Integral):
            return self.exp2 == 0 and self.num == other
        if isinstance(other, Rational):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        if self.exp2 == 0:
            return hash(self.num)
        return hash(self.to_fraction())

    def __lt__(self, other):
        if isinstance(other, Dyadic):
            other = other.to_fraction()
        return self.to_fraction() < other

    def __bool__(self):
        return self.num != 0

    def is_integer(self) -> bool:
        return self.exp2 == 0

    def as_integer(self) -> int:
        if self.exp2:
            raise NotAnInteger(f"{self} is not an integer")
        return self.num

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp2)

    def __float__(self):
        return float(self.to_fraction())

    def denominator(self) -> int:
        return 1 << self.exp2

    def to_json(self) -> dict:
        return {"num": str(self.num), "exp2": self.exp2}

    @classmethod
    def from_json(cls, obj: dict) -> "Dyadic":
        return cls(int(obj["num"]), int(obj["exp2"]))

    def __str__(self):
        if self.exp2 == 0:
            return str(self.num)
        return f"{self.num}/{1 << self.exp2}"

    def __repr__(self):
        return f"Dyadic({self.num}, {self.exp2})"


ZERO = Dyadic(0)
ONE = Dyadic(1)
HALF = Dyadic(1, 1)


def dyadic_add(x: Dyadic, y: Dyadic) -> Dyadic:
    return x + y


def dyadic_mul(x: Dyadic, y: Dyadic) -> Dyadic:
    return x * y


def dyadic_as_integer(x: Dyadic) -> int:
    return x.as_integer()
