"""Exact scalar arithmetic: dyadic rationals and the quadratic field Q(sqrt 2).

Every comparison in the package bottoms out here, so both types decide order
and equality with integer arithmetic only.  No floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

IntLike = Union[int, "Dyadic"]


class Dyadic:
    """A dyadic rational num / 2**exp in canonical form.

    Canonical means exp == 0, or num is odd.  Dyadics are closed under
    addition, subtraction, multiplication and multiplication by 2**k; they
    are *not* closed under general division, which is deliberately absent.
    """

    __slots__ = ("num", "exp")

    def __init__(self, num: int = 0, exp: int = 0):
        if exp < 0:
            # n / 2**(-k) is the integer n * 2**k
            num <<= -exp
            exp = 0
        while num != 0 and exp > 0 and num % 2 == 0:
            num //= 2
            exp -= 1
        if num == 0:
            exp = 0
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def coerce(value: IntLike) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, int):
            return Dyadic(value, 0)
        if isinstance(value, Fraction):
            return Dyadic.from_fraction(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to Dyadic")

    @staticmethod
    def from_fraction(fr: Fraction) -> "Dyadic":
        q = fr.denominator
        exp = q.bit_length() - 1
        if q != (1 << exp):
            raise ValueError(f"{fr} is not dyadic")
        return Dyadic(fr.numerator, exp)

    @staticmethod
    def parse(text: str) -> "Dyadic":
        """Parse '3/8', '-1/2' or a plain integer string."""
        text = text.strip()
        if "/" in text:
            p, q = text.split("/")
            return Dyadic.from_fraction(Fraction(int(p), int(q)))
        return Dyadic(int(text))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: IntLike) -> "Dyadic":
        o = Dyadic.coerce(other)
        e = max(self.exp, o.exp)
        return Dyadic((self.num << (e - self.exp)) + (o.num << (e - o.exp)), e)

    __radd__ = __add__

    def __sub__(self, other: IntLike) -> "Dyadic":
        return self + (-Dyadic.coerce(other))

    def __rsub__(self, other: IntLike) -> "Dyadic":
        return Dyadic.coerce(other) + (-self)

    def __mul__(self, other: IntLike) -> "Dyadic":
        o = Dyadic.coerce(other)
        return Dyadic(self.num * o.num, self.exp + o.exp)

    __rmul__ = __mul__

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.num, self.exp)

    def ldexp(self, k: int) -> "Dyadic":
        """self * 2**k, exact for any integer k."""
        if k >= 0:
            return Dyadic(self.num << k, self.exp)
        return Dyadic(self.num, self.exp - k)

    def half(self) -> "Dyadic":
        return self.ldexp(-1)

    def floor(self) -> int:
        return self.num >> self.exp

    def frac(self) -> "Dyadic":
        return self - self.floor()

    def is_integer(self) -> bool:
        return self.exp == 0

    # -- order ---------------------------------------------------------

    def _cmp(self, other: IntLike) -> int:
        o = Dyadic.coerce(other)
        lhs = self.num << o.exp
        rhs = o.num << self.exp
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Dyadic, int)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other: IntLike) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: IntLike) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: IntLike) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: IntLike) -> bool:
        return self._cmp(other) >= 0

    def __hash__(self):
        return hash((self.num, self.exp))

    # -- misc ------------------------------------------------------------

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def key(self) -> tuple:
        return (self.num, self.exp)

    def __repr__(self):
        if self.exp == 0:
            return f"Dyadic({self.num})"
        return f"Dyadic({self.num}/2^{self.exp})"

    def __str__(self):
        if self.exp == 0:
            return str(self.num)
        return f"{self.num}/{1 << self.exp}"

    def to_json(self) -> dict:
        # numerators are serialized as decimal strings so arbitrarily deep
        # subdivisions survive a round-trip through JSON readers that only
        # have 53-bit numbers
        return {"num": str(self.num), "den_exp": self.exp}

    @staticmethod
    def from_json(obj: dict) -> "Dyadic":
        return Dyadic(int(obj["num"]), int(obj["den_exp"]))


ZERO = Dyadic(0)
ONE = Dyadic(1)
HALF = Dyadic(1, 1)


def dyadic(num: int, exp: int = 0) -> Dyadic:
    return Dyadic(num, exp)


QuadLike = Union[int, Fraction, "QuadExt"]


class QuadExt:
    """An element a + b*sqrt(2) of Q(sqrt 2) with a, b rational.

    The sign of a + b*sqrt(2) is decided by comparing a**2 with 2*b**2,
    so ordering never touches floating point.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: QuadLike = 0, b=0):
        if isinstance(a, QuadExt):
            if b != 0:
                raise TypeError("cannot add a rational b to a QuadExt seed")
            a, b = a.a, a.b
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @staticmethod
    def coerce(value: QuadLike) -> "QuadExt":
        if isinstance(value, QuadExt):
            return value
        if isinstance(value, (int, Fraction)):
            return QuadExt(value, 0)
        raise TypeError(f"cannot coerce {type(value).__name__} to QuadExt")

    # -- ring operations ------------------------------------------------

    def __add__(self, other: QuadLike) -> "QuadExt":
        o = QuadExt.coerce(other)
        return QuadExt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: QuadLike) -> "QuadExt":
        o = QuadExt.coerce(other)
        return QuadExt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: QuadLike) -> "QuadExt":
        return QuadExt.coerce(other) - self

    def __mul__(self, other: QuadLike) -> "QuadExt":
        o = QuadExt.coerce(other)
        return QuadExt(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __neg__(self) -> "QuadExt":
        return QuadExt(-self.a, -self.b)

    def inverse(self) -> "QuadExt":
        # 1/(a + b sqrt2) = (a - b sqrt2) / (a^2 - 2 b^2); the norm vanishes
        # only at zero because sqrt(2) is irrational
        norm = self.a * self.a - 2 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("inversion of zero in Q(sqrt 2)")
        return QuadExt(self.a / norm, -self.b / norm)

    def __truediv__(self, other: QuadLike) -> "QuadExt":
        return self * QuadExt.coerce(other).inverse()

    def __rtruediv__(self, other: QuadLike) -> "QuadExt":
        return QuadExt.coerce(other) * self.inverse()

    # -- order ------------------------------------------------------------

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: |a| versus |b| sqrt2, squared
        lhs = a * a
        rhs = 2 * b * b
        if a > 0:  # b < 0
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (QuadExt, int, Fraction)):
            return NotImplemented
        o = QuadExt.coerce(other)
        return self.a == o.a and self.b == o.b

    def __lt__(self, other: QuadLike) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: QuadLike) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: QuadLike) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: QuadLike) -> bool:
        return (self - other).sign() >= 0

    def __hash__(self):
        return hash((self.a, self.b))

    def is_rational(self) -> bool:
        return self.b == 0

    def key(self) -> tuple:
        return (self.a.numerator, self.a.denominator, self.b.numerator, self.b.denominator)

    def __repr__(self):
        if self.b == 0:
            return f"QuadExt({self.a})"
        return f"QuadExt({self.a} + {self.b}*sqrt2)"

    def to_json(self) -> dict:
        return {
            "a": [str(self.a.numerator), str(self.a.denominator)],
            "b": [str(self.b.numerator), str(self.b.denominator)],
        }

    @staticmethod
    def from_json(obj: dict) -> "QuadExt":
        a = Fraction(int(obj["a"][0]), int(obj["a"][1]))
        b = Fraction(int(obj["b"][0]), int(obj["b"][1]))
        return QuadExt(a, b)


SQRT2 = QuadExt(0, 1)
