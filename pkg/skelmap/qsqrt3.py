"""
skelmap.qsqrt3
~~~~~~~~~~~~~~

Exact arithmetic in the quadratic field Q(√3).
"""

from fractions import Fraction
from math import isqrt

class QSqrt3:
    """The number a + b√3 with rational a and b."""

    __slots__ = ('a', 'b')

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, QSqrt3):
            return value

        if isinstance(value, (int, Fraction)):
            return cls(value)

        raise TypeError(f'cannot convert {type(value).__name__} to QSqrt3')

    def __add__(self, other):
        other = _coerce(other)

        if other is NotImplemented:
            return other

        return QSqrt3(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt3(-self.a, -self.b)

    def __sub__(self, other):
        other = _coerce(other)

        if other is NotImplemented:
            return other

        return QSqrt3(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        other = _coerce(other)

        if other is NotImplemented:
            return other

        return QSqrt3(self.a * other.a + 3 * self.b * other.b, self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def conjugate(self):
        return QSqrt3(self.a, -self.b)

    def norm(self):
        """a² − 3b², the field norm."""
        return self.a * self.a - 3 * self.b * self.b

    def inverse(self):
        norm = self.norm()

        if norm == 0:
            raise ZeroDivisionError('QSqrt3 division by zero')

        return QSqrt3(self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        other = _coerce(other)

        if other is NotImplemented:
            return other

        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented

        if exponent < 0:
            return self.inverse() ** -exponent

        result = QSqrt3(1)
        base = self

        while exponent:
            if exponent & 1:
                result = result * base

            base = base * base
            exponent >>= 1

        return result

    def __eq__(self, other):
        other = _coerce(other)

        if other is NotImplemented:
            return False

        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * 3 ** 0.5

    def __repr__(self):
        return f'QSqrt3({self.a}, {self.b})'

    def __str__(self):
        if not self.b:
            return str(self.a)

        return f'{self.a} + {self.b}√3'

    @property
    def is_rational(self):
        return self.b == 0

    def sign(self):
        """Sign of the real number a + b√3, computed exactly."""
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)

        if self.a == 0 or (self.a > 0) == (self.b > 0):
            return 1 if (self.a > 0 or (self.a == 0 and self.b > 0)) else -1

        # Opposite signs: compare a² and 3b².
        dominant = 1 if self.a * self.a > 3 * self.b * self.b else -1

        return dominant if self.a > 0 else -dominant

    def to_mpf(self, ctx):
        """Value in an mpmath context."""
        a = ctx.mpf(self.a.numerator) / self.a.denominator
        b = ctx.mpf(self.b.numerator) / self.b.denominator

        return a + b * ctx.sqrt(3)

    def sqrt(self):
        """Square root in the field, raising ValueError if there is none."""
        if not self:
            return QSqrt3()

        if self.b == 0:
            root = _rational_sqrt(self.a)

            if root is not None:
                return QSqrt3(root)

            root = _rational_sqrt(self.a / 3)

            if root is not None:
                return QSqrt3(0, root)

            raise ValueError(f'{self} is not a square in Q(√3)')

        # (c + d√3)² = a + b√3 with c² = (a ± √norm)/2 and d = b/(2c).
        norm_root = _rational_sqrt(self.norm())

        if norm_root is not None:
            for square in ((self.a + norm_root) / 2, (self.a - norm_root) / 2):
                c = _rational_sqrt(square)

                if c:
                    candidate = QSqrt3(c, self.b / (2 * c))

                    if candidate.sign() < 0:
                        candidate = -candidate

                    return candidate

        raise ValueError(f'{self} is not a square in Q(√3)')

def _coerce(value):
    if isinstance(value, QSqrt3):
        return value

    if isinstance(value, (int, Fraction)):
        return QSqrt3(value)

    return NotImplemented

def _rational_sqrt(value):
    value = Fraction(value)

    if value < 0:
        return None

    (numerator, denominator) = (value.numerator, value.denominator)

    (p, q) = (isqrt(numerator), isqrt(denominator))

    if p * p == numerator and q * q == denominator:
        return Fraction(p, q)

    return None

SQRT3 = QSqrt3(0, 1)

# Critical weights x_c = 1/(12√3) = √3/36 and y_c = 1/12.
X_C = QSqrt3(0, Fraction(1, 36))
Y_C = QSqrt3(Fraction(1, 12))
