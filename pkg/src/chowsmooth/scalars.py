"""Exact scalars: rationals and points of the projective line.

Cross-ratio values are stored as a pair ``(num : den)``.  ``(0 : 0)`` is a
legitimate value meaning the ratio is not defined on the configuration at
hand; it is not an error.
"""

from enum import Enum
from fractions import Fraction

Rational = Fraction


class Cmp(Enum):
    EQUAL = "equal"
    UNEQUAL = "unequal"
    INCOMPARABLE = "incomparable"


def as_rational(value):
    """Coerce ints, Fractions, strings like '3/4' and mpq to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    # gmpy2.mpq and friends expose numerator/denominator
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is not None and den is not None:
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot interpret {value!r} as a rational")


class ExtScalar:
    """Class of ``(num : den)`` in P^1(Q), plus the undefined value (0 : 0).

    The stored pair is reduced: both entries are integers with gcd 1 and the
    first nonzero entry is positive, so structural equality is projective
    equality on defined values.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        n, d = as_rational(num), as_rational(den)
        # clear denominators, then strip the common integer factor
        scale = n.denominator * d.denominator
        a = int(n * scale)
        b = int(d * scale)
        from math import gcd

        g = gcd(a, b)
        if g:
            a, b = a // g, b // g
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
        object.__setattr__(self, "num", Fraction(a))
        object.__setattr__(self, "den", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("ExtScalar is immutable")

    @classmethod
    def zero(cls):
        return cls(0, 1)

    @classmethod
    def infinity(cls):
        return cls(1, 0)

    @classmethod
    def undefined(cls):
        return cls(0, 0)

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text == "inf":
            return cls.infinity()
        if text == "undef":
            return cls.undefined()
        return cls(Fraction(text))

    @property
    def is_undefined(self):
        return self.num == 0 and self.den == 0

    @property
    def is_infinite(self):
        return self.den == 0 and self.num != 0

    @property
    def is_zero(self):
        return self.num == 0 and self.den != 0

    @property
    def is_finite(self):
        return self.den != 0

    def value(self):
        """The rational value; raises for infinity and undefined."""
        if self.den == 0:
            raise ValueError(f"{self} has no finite value")
        return self.num / self.den

    def normalized(self):
        return ExtScalar(self.num, self.den)

    def __eq__(self, other):
        # structural; use ext_eq for the tri-state comparison
        if not isinstance(other, ExtScalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.is_undefined:
            return "undef"
        if self.den == 0:
            return "inf"
        return str(self.num / self.den)

    def __repr__(self):
        return f"ExtScalar({self.num}:{self.den})"


def ext_mul(a, b):
    """Component-wise product; 0 times infinity lands on undefined."""
    return ExtScalar(a.num * b.num, a.den * b.den)


def ext_inv(a):
    return ExtScalar(a.den, a.num)


def ext_eq(a, b):
    if a.is_undefined or b.is_undefined:
        return Cmp.INCOMPARABLE
    if a.num * b.den - a.den * b.num == 0:
        return Cmp.EQUAL
    return Cmp.UNEQUAL


def ext_from_pair(num, den):
    """Build from a raw (num, den) pair of anything rational-like."""
    return ExtScalar(as_rational(num), as_rational(den))
