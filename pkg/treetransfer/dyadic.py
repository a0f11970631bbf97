#!/usr/bin/env python3

"""
Exact arithmetic over dyadic rationals m / 2^k.

Every length, distance and Gromov product of the compactified tree is a
dyadic rational, so the whole library computes with this type and never
touches floating point except when emitting pixel coordinates.
"""

import re
from fractions import Fraction
from beartype import beartype
from beartype.typing import Union

_DYADIC_RE = re.compile(r'^\s*(-?\d+)\s*/\s*2\s*\^\s*(\d+)\s*$')
_INTEGER_RE = re.compile(r'^\s*(-?\d+)\s*$')


class DyadicParseError(ValueError):
    """
    Raised when a string is not of the form "m/2^k" or a bare integer.
    """


class Dyadic:
    """
    An immutable dyadic rational mantissa / 2^exponent in canonical form.

    Canonical form: the exponent is zero or the mantissa is odd, and zero is
    always 0/2^0. Two values are equal iff their canonical forms are equal.
    """
    __slots__ = ('_mantissa', '_exponent')

    def __init__(self, mantissa: int = 0, exponent: int = 0):
        if exponent < 0:
            raise ValueError(f"Dyadic exponent must be >= 0, got {exponent}")
        if mantissa == 0:
            exponent = 0
        elif exponent:
            # Lowest set bit of the mantissa, works for negatives too.
            shift = min((mantissa & -mantissa).bit_length() - 1, exponent)
            mantissa >>= shift
            exponent -= shift
        object.__setattr__(self, '_mantissa', mantissa)
        object.__setattr__(self, '_exponent', exponent)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic values are immutable")

    def __reduce__(self):
        return (Dyadic, (self._mantissa, self._exponent))

    @property
    def mantissa(self) -> int:
        """The (odd or zero) numerator."""
        return self._mantissa

    @property
    def exponent(self) -> int:
        """The k in m / 2^k."""
        return self._exponent

    @property
    def numerator(self) -> int:
        return self._mantissa

    @property
    def denominator(self) -> int:
        return 1 << self._exponent

    @classmethod
    def power_of_two(cls, power: int) -> 'Dyadic':
        """
        Return 2^power for any integer power, e.g. power_of_two(-3) is 1/8.
        """
        if power >= 0:
            return cls(1 << power, 0)
        return cls(1, -power)

    # Arithmetic.

    def _aligned(self, other: 'Dyadic'):
        exponent = max(self._exponent, other._exponent)
        return (self._mantissa << (exponent - self._exponent),
                other._mantissa << (exponent - other._exponent),
                exponent)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        left, right, exponent = self._aligned(other)
        return Dyadic(left + right, exponent)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        left, right, exponent = self._aligned(other)
        return Dyadic(left - right, exponent)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Dyadic(self._mantissa * other._mantissa,
                      self._exponent + other._exponent)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self._mantissa, self._exponent)

    def __pos__(self):
        return self

    def __abs__(self):
        return Dyadic(abs(self._mantissa), self._exponent)

    def half(self) -> 'Dyadic':
        """Exact division by two."""
        return Dyadic(self._mantissa, self._exponent + 1)

    def scale(self, power: int) -> 'Dyadic':
        """Exact multiplication by 2^power."""
        if power >= 0:
            return Dyadic(self._mantissa << power, self._exponent)
        return Dyadic(self._mantissa, self._exponent - power)

    # Ordering. Comparisons against int and Fraction are exact as well.

    def compare(self, other) -> int:
        """
        Three-way comparison, returning -1, 0 or 1.
        """
        if isinstance(other, Dyadic):
            left, right, _ = self._aligned(other)
        elif isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = Fraction(other)
            left = self._mantissa * other.denominator
            right = other.numerator << self._exponent
        else:
            raise TypeError(f"Cannot compare Dyadic with {type(other)}")
        return (left > right) - (left < right)

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return (self._mantissa == other._mantissa
                    and self._exponent == other._exponent)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.compare(other) == 0
        return NotImplemented

    def __hash__(self):
        if self._exponent == 0:
            return hash(self._mantissa)
        return hash(Fraction(self._mantissa, 1 << self._exponent))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __bool__(self):
        return self._mantissa != 0

    def floor_log2(self) -> int:
        """
        Return floor(log2(self)) for a positive value.
        """
        if self._mantissa <= 0:
            raise ValueError(f"floor_log2 needs a positive value, got {self}")
        return self._mantissa.bit_length() - 1 - self._exponent

    # Conversions.

    def to_fraction(self) -> Fraction:
        return Fraction(self._mantissa, 1 << self._exponent)

    def to_float(self) -> float:
        """
        Nearest float. Only for rendering, never for comparisons.
        """
        return self._mantissa / (1 << self._exponent)

    def to_decimal_string(self) -> str:
        """
        Exact decimal expansion (m / 2^k = m * 5^k / 10^k is finite).
        """
        if self._exponent == 0:
            return str(self._mantissa)
        digits = str(abs(self._mantissa) * 5 ** self._exponent)
        digits = digits.rjust(self._exponent + 1, '0')
        sign = '-' if self._mantissa < 0 else ''
        whole = digits[:-self._exponent]
        frac = digits[-self._exponent:].rstrip('0')
        return f"{sign}{whole}.{frac}"

    def __str__(self):
        return f"{self._mantissa}/2^{self._exponent}"

    def __repr__(self):
        return f"Dyadic('{self}')"

    def to_json(self) -> str:
        return str(self)


ZERO = Dyadic(0)
ONE = Dyadic(1)
TWO = Dyadic(2)
HALF = Dyadic(1, 1)


def _coerce(value):
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Dyadic(value)
    return NotImplemented


@beartype
def normalize(mantissa: int, exponent: int) -> Dyadic:
    """
    Return the canonical dyadic equal to mantissa / 2^exponent.

    @param mantissa Any integer.
    @param exponent A non-negative integer.
    @return The canonical Dyadic.
    """
    return Dyadic(mantissa, exponent)


def add(a: Dyadic, b: Dyadic) -> Dyadic:
    """Exact a + b."""
    return a + b


def sub(a: Dyadic, b: Dyadic) -> Dyadic:
    """Exact a - b."""
    return a - b


def mul(a: Dyadic, b: Dyadic) -> Dyadic:
    """Exact a * b."""
    return a * b


def neg(a: Dyadic) -> Dyadic:
    """Exact -a."""
    return -a


def dabs(a: Dyadic) -> Dyadic:
    """Exact |a|."""
    return abs(a)


def dmin(a: Dyadic, b: Dyadic) -> Dyadic:
    """The smaller of a and b."""
    return a if a <= b else b


def dmax(a: Dyadic, b: Dyadic) -> Dyadic:
    """The larger of a and b."""
    return a if a >= b else b


def compare(a: Dyadic, b: Dyadic) -> int:
    """Three-way comparison consistent with the order of the reals."""
    return a.compare(b)


def floor_log2(value: Union[Dyadic, Fraction, int]) -> int:
    """
    Return floor(log2(value)) for a positive dyadic, rational or integer.
    """
    if isinstance(value, Dyadic):
        return value.floor_log2()
    value = Fraction(value)
    if value <= 0:
        raise ValueError(f"floor_log2 needs a positive value, got {value}")
    estimate = value.numerator.bit_length() - value.denominator.bit_length()
    # The bit length estimate is off by at most one.
    if Fraction(2) ** estimate > value:
        estimate -= 1
    return estimate


@beartype
def parse(text: Union[str, int]) -> Dyadic:
    """
    Parse "m/2^k" (for example "13/2^5") or a bare integer.

    @param text The serialized value.
    @return The canonical Dyadic.
    """
    if isinstance(text, int) and not isinstance(text, bool):
        return Dyadic(text)
    match = _DYADIC_RE.match(text)
    if match:
        return Dyadic(int(match.group(1)), int(match.group(2)))
    match = _INTEGER_RE.match(text)
    if match:
        return Dyadic(int(match.group(1)))
    raise DyadicParseError(
        f"'{text}' is not a dyadic rational of the form 'm/2^k' or an "
        "integer")
