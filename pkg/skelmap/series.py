"""
skelmap.series
~~~~~~~~~~~~~~

Truncated Laurent series over Q(√3) and exact coefficient extraction of the
generating functions of triangulations, as series in the parameter s of
x = x_c s.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from math import comb

from .qsqrt3 import QSqrt3, SQRT3, X_C, Y_C

logger = logging.getLogger(__name__)

# 1/x_c
GROWTH = 12 * SQRT3

MAX_NEWTON_ITERATIONS = 64

class SeriesError(Exception):
    """Series operation is not defined at the available order."""

class LaurentSeries:
    """Σ c_k s^k for valuation <= k < order, plus O(s^order).

    `order` is the absolute precision: every coefficient of index below it is
    exact, nothing is known above it.
    """

    __slots__ = ('valuation', 'coeffs', 'order')

    def __init__(self, coeffs, valuation=0, order=None):
        coeffs = [QSqrt3.coerce(coeff) for coeff in coeffs]

        if order is None:
            order = valuation + len(coeffs)

        coeffs = coeffs[:max(order - valuation, 0)]

        # Normalize so that the first stored coefficient is nonzero.
        leading = 0

        while leading < len(coeffs) and not coeffs[leading]:
            leading += 1

        if leading == len(coeffs):
            (self.valuation, self.coeffs) = (order, [])
        else:
            (self.valuation, self.coeffs) = (valuation + leading, coeffs[leading:])

        while self.coeffs and not self.coeffs[-1]:
            self.coeffs.pop()

        self.order = order

    @classmethod
    def constant(cls, value, order):
        return cls([value], 0, order)

    @classmethod
    def monomial(cls, degree, order, value=1):
        return cls([value], degree, order)

    def __repr__(self):
        return f'<LaurentSeries valuation={self.valuation} order={self.order}>'

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, degree):
        if degree >= self.order:
            raise SeriesError(f'coefficient {degree} is beyond order {self.order}')

        index = degree - self.valuation

        if 0 <= index < len(self.coeffs):
            return self.coeffs[index]

        return QSqrt3()

    def coefficients(self, start, stop):
        return [self.coefficient(degree) for degree in range(start, stop)]

    def truncate(self, order):
        return LaurentSeries(self.coeffs, self.valuation, min(order, self.order))

    def __neg__(self):
        return LaurentSeries([-coeff for coeff in self.coeffs], self.valuation, self.order)

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.constant(other, self.order)

        order = min(self.order, other.order)
        valuation = min(self.valuation, other.valuation)

        coeffs = [self.coefficient(degree) + other.coefficient(degree)
                  for degree in range(valuation, order)]

        return LaurentSeries(coeffs, valuation, order)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            other = QSqrt3.coerce(other)

            return LaurentSeries([coeff * other for coeff in self.coeffs], self.valuation,
                                 self.order)

        valuation = self.valuation + other.valuation
        order = min(self.order + other.valuation, other.order + self.valuation)

        length = max(order - valuation, 0)
        coeffs = [QSqrt3() for _ in range(length)]

        for (i, a) in enumerate(self.coeffs[:length]):
            for (j, b) in enumerate(other.coeffs[:length - i]):
                coeffs[i + j] = coeffs[i + j] + a * b

        return LaurentSeries(coeffs, valuation, order)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise SeriesError(f'cannot invert a series that vanishes to order {self.order}')

        length = self.order - self.valuation
        c = self.coeffs + [QSqrt3()] * (length - len(self.coeffs))

        head = c[0].inverse()
        coeffs = [head]

        for k in range(1, length):
            total = QSqrt3()

            for i in range(1, min(k, len(self.coeffs) - 1) + 1):
                total = total + c[i] * coeffs[k - i]

            coeffs.append(-head * total)

        return LaurentSeries(coeffs, -self.valuation, self.order - 2 * self.valuation)

    def __truediv__(self, other):
        if not isinstance(other, LaurentSeries):
            return self * QSqrt3.coerce(other).inverse()

        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented

        if exponent < 0:
            return self.inverse() ** -exponent

        if exponent == 0:
            return LaurentSeries.constant(1, self.order - self.valuation)

        result = None
        base = self

        while exponent:
            if exponent & 1:
                result = base if result is None else result * base

            exponent >>= 1

            if exponent:
                base = base * base

        return result

    def sqrt(self):
        """Square root with positive leading coefficient, exact in Q(√3)."""
        if self.is_zero():
            raise SeriesError('square root of a vanishing series')

        if self.valuation % 2:
            raise SeriesError(f'square root of a series with odd valuation {self.valuation}')

        length = self.order - self.valuation
        c = self.coeffs + [QSqrt3()] * (length - len(self.coeffs))

        try:
            head = c[0].sqrt()
        except ValueError as error:
            raise SeriesError(str(error)) from error

        denominator = (2 * head).inverse()
        coeffs = [head]

        for k in range(1, length):
            total = c[k]

            for i in range(1, k):
                total = total - coeffs[i] * coeffs[k - i]

            coeffs.append(total * denominator)

        return LaurentSeries(coeffs, self.valuation // 2, self.order - self.valuation // 2)

def catalan(n):
    return comb(2 * n, n) // (n + 1)

def to_counts(series, n_max, scale=GROWTH):
    """Integer counts a_n = [s^n]series · scale^n for n = 0..n_max."""
    if series.valuation < 0:
        raise SeriesError(f'series has a pole of order {-series.valuation}')

    counts = []
    factor = QSqrt3(1)

    for degree in range(n_max + 1):
        value = series.coefficient(degree) * factor

        if not value.is_rational or value.a.denominator != 1:
            raise SeriesError(f'coefficient {degree} is not an integer: {value}')

        counts.append(int(value.a))

        factor = factor * scale

    return counts

@lru_cache(maxsize=None)
def conjugate_t_series(order):
    """t(s) solving 2t³ − 3t² + s² = 0, as a series to `order`.

    Newton iteration on τ = t/s, which solves 2sτ³ − 3τ² + 1 = 0 with
    τ(0) = 1/√3.
    """
    s = LaurentSeries.monomial(1, order)

    tau = LaurentSeries.constant(SQRT3 / 3, order)

    for _ in range(MAX_NEWTON_ITERATIONS):
        tau_squared = tau * tau

        value = 2 * s * tau_squared * tau - 3 * tau_squared + 1
        slope = 6 * s * tau_squared - 6 * tau

        following = (tau - value / slope).truncate(order)

        if all(following.coefficient(k) == tau.coefficient(k) for k in range(order)):
            break

        tau = following
    else:
        raise SeriesError('Newton iteration for t(s) did not converge')

    return (s * tau).truncate(order)

class ExactSeries:
    """Exact series of the generating functions at a working order.

    Each quantity is a LaurentSeries in s, the coefficient of s^n being
    a_n x_c^n where a_n counts the objects of size n.
    """

    def __init__(self, order):
        self.order = order

        self.s = LaurentSeries.monomial(1, order)
        self.t = conjugate_t_series(order)

        # w = u² = (3 − 2t)/t has a simple pole at s = 0.
        self.w = 3 / self.t - 2
        self.inverse_w = self.w.inverse()

        self._g = [self.inverse_w / 4]
        self._u_squared = {}

    def x(self):
        return self.s * X_C

    def y(self):
        return self.t * Y_C

    def g(self, j):
        """Coefficients of 1 − φ_t(z) = (1 − z)Σ g_j z^j."""
        while len(self._g) <= j:
            k = len(self._g) - 1

            ratio = QSqrt3(Fraction(2 * k + 3, 2 * (k + 3)))

            self._g.append(self._g[-1] * self.inverse_w * ratio)

        return self._g[j]

    def theta_t(self, k):
        """[z^k]φ_t as a series in s."""
        if k == 0:
            return 1 - self.g(0)

        return self.g(k - 1) - self.g(k)

    def u_squared(self, r):
        """U_r(u)², a polynomial in w."""
        if r not in self._u_squared:
            p = [LaurentSeries.constant(1, self.order), LaurentSeries.constant(2, self.order)]

            for k in range(1, r):
                if k % 2:
                    p.append(2 * self.w * p[k] - p[k - 1])
                else:
                    p.append(2 * p[k] - p[k - 1])

            value = p[r] * p[r]

            self._u_squared[r] = value * self.w if r % 2 else value

        return self._u_squared[r]

    def phi_iterate_zero(self, r):
        """φ_t^{r}(0) = 1 − U_r(u)^{−2}."""
        if r == 0:
            return LaurentSeries.constant(0, self.order)

        return 1 - self.u_squared(r).inverse()

    def phi_derivative_at_phi1(self):
        """φ_t'(φ_t(0)) = 8w²(4w − 3)/((2w − 1)(4w − 1)³)."""
        w = self.w

        return 8 * w * w * (4 * w - 3) / ((2 * w - 1) * (4 * w - 1) ** 3)

    def boundary(self, p):
        """T_p(x_c s)."""
        if p == 1:
            discriminant = 1 - 4 * self.x() * self.boundary(2)

            return (1 - discriminant.sqrt()) / 2

        return self.theta_t(p - 2) * self.y() ** (3 - p) / self.x()

    def cap(self, p):
        """K_p(x_c s) = Σ_{k>=1} T_{p+k+1}(x T_2)^k."""
        edge = self.x() * self.boundary(2)

        total = LaurentSeries.constant(0, self.order)
        power = edge
        k = 1

        # (x T_2)^k has valuation k.
        while power.valuation < self.order:
            total = total + self.boundary(p + k + 1) * power
            power = power * edge
            k += 1

        return total

    def bivariate_cap(self, m):
        """K(s, φ_t^{m}(0)), with the removable singularity at m = 1 filled in."""
        phi1 = self.phi_iterate_zero(1)
        phi2 = self.phi_iterate_zero(2)

        prefactor = self.y() ** 2 * phi1

        if m == 0:
            return prefactor * phi2

        if m == 1:
            return prefactor * (phi2 + phi1 * self.phi_derivative_at_phi1())

        phi_m = self.phi_iterate_zero(m)
        phi_next = self.phi_iterate_zero(m + 1)

        return prefactor * (phi_m * phi_next - phi1 * phi2) / (phi_m - phi1)

    def two_point(self, h):
        """G_h(x_c s)."""
        if h == 1:
            return self.bivariate_cap(0)

        return self.bivariate_cap(h - 1) - self.bivariate_cap(h - 2)

    def z_polynomial(self):
        """φ_t as a list of series; [z^k]φ_t vanishes to order k in s."""
        return [self.theta_t(k) for k in range(self.order)]

    def cylinder(self, r, p, q):
        """C_{r,p,q}(x_c s) = p x^p (y_c t)^{q−p} [z^p](φ_t^{r})^q."""
        zero = LaurentSeries.constant(0, self.order)
        one = LaurentSeries.constant(1, self.order)

        phi = self.z_polynomial()

        iterate = [zero] * (p + 1)

        if p >= 1:
            iterate[1] = one

        for _ in range(r):
            iterate = _compose(phi, iterate, p)

        power = [one] + [zero] * p

        for _ in range(q):
            power = _multiply(power, iterate, p)

        return p * self.x() ** p * self.y() ** (q - p) * power[p]

    def cone(self, r, q):
        """Cone generating series, counting every vertex including the apex."""
        if r == 0:
            return self.x() if q == 0 else LaurentSeries.constant(0, self.order)

        upper = self.phi_iterate_zero(r) ** q
        lower = self.phi_iterate_zero(r - 1) ** q

        return self.x() * self.y() ** q * (upper - lower)

def _multiply(a, b, degree):
    zero = a[0] * 0
    product = [zero] * (degree + 1)

    for (i, x) in enumerate(a):
        if x.is_zero():
            continue

        for (j, y) in enumerate(b[:degree + 1 - i]):
            if not y.is_zero():
                product[i + j] = product[i + j] + x * y

    return product

def _compose(outer, inner, degree):
    """outer(inner(z)) truncated to z^degree.

    The outer coefficients must vanish to increasing order in s so that the
    finite list is the whole series at the working order.
    """
    zero = outer[0] * 0
    result = [outer[0]] + [zero] * degree
    power = list(inner)

    for coefficient in outer[1:]:
        for (i, coeff) in enumerate(power):
            result[i] = result[i] + coefficient * coeff

        power = _multiply(power, inner, degree)

    return result

def _extract(build, n_max, pole=0):
    """Run `build(exact)` at increasing working orders until n_max is exact."""
    order = n_max + pole + 4

    while True:
        series = build(ExactSeries(order))

        if series.order > n_max:
            return to_counts(series, n_max)

        logger.debug(f'Working order {order} reached only {series.order}, retrying')

        order += max(n_max + 1 - series.order, 1) + 2

def boundary_counts(p, n_max):
    """|T_{n,p}| for n = 0..n_max inner vertices."""
    return _extract(lambda exact: exact.boundary(p), n_max, pole=p)

def two_point_counts(h, n_max):
    """Number of rooted pointed sphere triangulations with n vertices and the
    marked vertex at distance h, for n = 0..n_max."""
    return _extract(lambda exact: exact.two_point(h), n_max, pole=2 * h + 4)

def cylinder_counts(r, p, q, n_max):
    """p × number of (r, p, q)-cylinders with n vertices, n = 0..n_max."""
    return _extract(lambda exact: exact.cylinder(r, p, q), n_max, pole=p + q)

def cone_counts(r, q, n_max):
    """Number of cones of height r and perimeter q with n vertices."""
    return _extract(lambda exact: exact.cone(r, q), n_max, pole=q + r)

def cap_counts(p, n_max):
    """Number of δ-caps of perimeter p with n vertices off the hole."""
    return _extract(lambda exact: exact.cap(p), n_max, pole=p + 2)
