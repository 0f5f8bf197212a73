"""
skelmap.gf
~~~~~~~~~~

Arbitrary precision evaluation of the generating functions of triangulations
at x = x_c s, and of their distributional consequences.
"""

import logging
from collections import Counter
from fractions import Fraction
from threading import Lock
import mpmath

from .qsqrt3 import QSqrt3
from .pmf import ThetaPmf, NuPmf, SizeBiasedPmf
from . import series

DEFAULT_PRECISION_BITS = 256
DEFAULT_MAX_ORDER = 24

MAX_CAP_TERMS = 1_000_000

FIT_EXPONENTS = (0, 1, Fraction(3, 2), 2, Fraction(5, 2), 3, Fraction(7, 2))
FIT_GRIDS = (('1e-20', '1e-14'), ('1e-19', '1e-15'))
FIT_POINTS = 32
FIT_PRECISION_BITS = 256
FIT_BITS_PER_DISTANCE = 8

logger = logging.getLogger(__name__)

class DomainError(ValueError):
    """Argument outside the domain of a generating function."""

class FitError(Exception):
    """Singular expansion fit is ill-conditioned at the working precision."""

class TruncationError(Exception):
    """Truncated sum failed its tail bound."""

class SeriesContext:
    """Evaluator of the generating functions at a fixed precision.

    Holds a private mpmath context so that evaluators at different precisions
    can be used side by side. Exact coefficients are extracted with
    `skelmap.series` at `max_order`.
    """

    def __init__(self, precision_bits=DEFAULT_PRECISION_BITS, max_order=DEFAULT_MAX_ORDER):
        if precision_bits < 32:
            raise ValueError('precision_bits must be at least 32')

        if max_order < 0:
            raise ValueError('max_order must be nonnegative')

        self.logger = logging.getLogger(__name__)

        self.precision_bits = precision_bits
        self.max_order = max_order

        self.ctx = mpmath.MPContext()
        self.ctx.prec = precision_bits

        ctx = self.ctx

        self.x_c = ctx.sqrt(3) / 36
        self.y_c = ctx.mpf(1) / 12

        self.tolerance = ctx.ldexp(1, 8 - precision_bits)

        self._cache = {}
        self._cache_lock = Lock()

    def __repr__(self):
        return f'<SeriesContext precision_bits={self.precision_bits} max_order={self.max_order}>'

    def mpf(self, value):
        if isinstance(value, Fraction):
            return self.ctx.mpf(value.numerator) / value.denominator

        if isinstance(value, QSqrt3):
            return value.to_mpf(self.ctx)

        return self.ctx.mpf(value)

    def _s(self, s):
        s = self.mpf(s)

        if not 0 <= s <= 1:
            raise DomainError(f'invalid s: {s}')

        return s

    def _t(self, t):
        t = self.mpf(t)

        if not 0 < t <= 1:
            raise DomainError(f'invalid t: {t}')

        return t

    # Parameters

    def conjugate_t(self, s):
        """The root t(s) of 2t³ − 3t² + s² = 0 with t(0) = 0 and t(1) = 1."""
        ctx = self.ctx

        s = self._s(s)

        if s == 0 or s == 1:
            return s

        t = ctx.mpf(1) / 2 - ctx.cos(ctx.pi / 3 + 2 * ctx.asin(s) / 3)

        for _ in range(3):
            if t < 0.5:
                t -= (2 * t ** 3 - 3 * t ** 2 + s ** 2) / (6 * t ** 2 - 6 * t)
            else:
                # 3e² − 2e³ = (1 − s)(1 + s) with e = 1 − t.
                e = 1 - t
                e -= (3 * e ** 2 - 2 * e ** 3 - (1 - s) * (1 + s)) / (6 * e - 6 * e ** 2)
                t = 1 - e

        return t

    def conjugate_t_series(self, order=None):
        """t(s) as an exact series to `order`."""
        return series.conjugate_t_series(self.max_order if order is None else order)

    def a_squared(self, t):
        """(3 − 2t)/t, the radius of convergence of φ_t."""
        t = self._t(t)

        return (3 - 2 * t) / t

    # Offspring generating functions

    def phi_t(self, z, t=1):
        t = self._t(t)
        z = self.mpf(z)

        a2 = (3 - 2 * t) / t

        if z >= a2:
            raise DomainError(f'φ_t is singular at z = {z} >= {a2}')

        ctx = self.ctx

        return 1 - (1 - z) / (a2 * (1 + ctx.sqrt(1 - z / a2)) ** 2)

    def _iterate_parts(self, r, z, t):
        ctx = self.ctx

        t = self._t(t)
        z = self.mpf(z)

        a2 = (3 - 2 * t) / t

        if z >= a2:
            raise DomainError(f'φ_t iterate is singular at z = {z} >= {a2}')

        w = 1 - z

        if t == 1:
            return (w, None, None, None, None)

        b = a2 - 1
        alpha = ctx.acosh(ctx.sqrt(a2))

        return (w, b, ctx.sqrt(1 + w / b), ctx.sinh(r * alpha), ctx.cosh(r * alpha))

    def phi_t_iter(self, r, z, t=1):
        """The r-th iterate of φ_t, from its closed form."""
        if r < 0:
            raise DomainError(f'invalid iterate: {r}')

        if r == 0:
            return self.mpf(z)

        (w, b, a, sinh, cosh) = self._iterate_parts(r, z, t)

        if b is None:
            if w == 0:
                return self.ctx.one

            return 1 - w / (r * self.ctx.sqrt(w) + 1) ** 2

        return 1 - w / (a * sinh + cosh) ** 2

    def phi_t_iter_derivative(self, r, z, t=1):
        """d/dz of the r-th iterate of φ_t."""
        if r == 0:
            return self.ctx.one

        (w, b, a, sinh, cosh) = self._iterate_parts(r, z, t)

        if b is None:
            return 1 / (r * self.ctx.sqrt(w) + 1) ** 3

        denominator = a * sinh + cosh

        return 1 / denominator ** 2 - w * sinh / (b * a * denominator ** 3)

    def phi_iter_zero_cheb(self, r, t=1):
        """φ_t^{r}(0) = 1 − U_r(u)^{−2} with u² = (3 − 2t)/t."""
        ctx = self.ctx

        u = ctx.sqrt(self.a_squared(t))

        return 1 - 1 / ctx.chebyu(r, u) ** 2

    def phi_t_taylor(self, r, degree, t=1):
        """Taylor coefficients of φ_t^{r} at 0 up to z^degree."""
        ctx = self.ctx

        if r == 0:
            return [ctx.zero, ctx.one] + [ctx.zero] * (degree - 1) if degree >= 1 else [ctx.zero]

        t = self._t(t)

        w = [ctx.one, -ctx.one] + [ctx.zero] * (degree - 1)
        w = w[:degree + 1]

        if t == 1:
            denominator = [r * c for c in _taylor_sqrt(w, degree)]
            denominator[0] += 1
        else:
            a2 = (3 - 2 * t) / t
            b = a2 - 1
            alpha = ctx.acosh(ctx.sqrt(a2))

            a = _taylor_sqrt([1 + c / b if index == 0 else c / b for (index, c) in enumerate(w)],
                             degree)

            denominator = [ctx.sinh(r * alpha) * c for c in a]
            denominator[0] += ctx.cosh(r * alpha)

        inverse = _taylor_inverse(denominator, degree)
        quotient = _taylor_mul(w, _taylor_mul(inverse, inverse, degree), degree)

        return [(1 if index == 0 else 0) - c for (index, c) in enumerate(quotient)]

    def psi(self, z):
        """Generating function of ν."""
        ctx = self.ctx

        z = self.mpf(z)

        if z > 1:
            raise DomainError(f'ψ is singular at z = {z} > 1')

        root = ctx.sqrt(1 - z)

        return 1 - 2 * (1 - z) / ((1 + 2 * root) * (1 + root))

    # Offspring laws

    def _cached(self, key, factory):
        with self._cache_lock:
            value = self._cache.get(key)

        if value is not None:
            return value

        # Unlocked: factories call back into _cached.
        value = factory()

        with self._cache_lock:
            return self._cache.setdefault(key, value)

    def theta_law(self, t=1):
        t = self._t(t)

        return self._cached(('theta', t), lambda: ThetaPmf(self.ctx, (3 - 2 * t) / t))

    def nu_law(self):
        return self._cached(('nu',), lambda: NuPmf(self.ctx, self.theta_law()))

    def size_biased_theta_law(self):
        return self._cached(('theta*',), lambda: SizeBiasedPmf(self.theta_law(), 1))

    def size_biased_nu_law(self):
        return self._cached(('nu*',), lambda: SizeBiasedPmf(self.nu_law(), 2))

    def theta_pmf(self, k):
        return self.theta_law()(k)

    def nu_pmf(self, k):
        return self.nu_law()(k)

    def theta_t_pmf(self, k, t):
        return self.theta_law(t)(k)

    # Generating functions of triangulations

    def _point(self, s):
        s = self._s(s)
        t = self.conjugate_t(s)

        return (s, t, self.x_c * s, self.y_c * t)

    def boundary_weight(self, p, s=1):
        """T_p(x_c s)."""
        if p < 1:
            raise DomainError(f'invalid perimeter: {p}')

        (s, t, x, y) = self._point(s)

        if s == 0:
            return self.mpf(series.boundary_counts(p, 0)[0])

        if p == 1:
            edge = self.boundary_weight(2, s)

            return (1 - self.ctx.sqrt(1 - 4 * x * edge)) / 2

        return self.theta_t_pmf(p - 2, t) * y ** (3 - p) / x

    def boundary_counts(self, p, n_max=None):
        return series.boundary_counts(p, self.max_order if n_max is None else n_max)

    def cylinder_gf(self, r, p, q, s=1):
        """C_{r,p,q}(x_c s) = p x^p (y_c t)^{q−p} [z^p](φ_t^{r})^q."""
        if r < 0 or p < 1 or q < 1:
            raise DomainError(f'invalid cylinder: ({r}, {p}, {q})')

        (s, t, x, y) = self._point(s)

        if s == 0:
            return self.ctx.zero

        iterate = self.phi_t_taylor(r, p, t)

        power = [self.ctx.one] + [self.ctx.zero] * p

        for _ in range(q):
            power = _taylor_mul(power, iterate, p)

        return p * x ** p * y ** (q - p) * power[p]

    def cylinder_counts(self, r, p, q, n_max=None):
        return series.cylinder_counts(r, p, q, self.max_order if n_max is None else n_max)

    def cone_gf(self, r, q, s=1):
        """Generating series of triangulations of the cone of height r and perimeter q."""
        if r < 0 or q < 0:
            raise DomainError(f'invalid cone: ({r}, {q})')

        (s, t, x, y) = self._point(s)

        if r == 0:
            return x if q == 0 else self.ctx.zero

        if s == 0:
            return self.ctx.zero

        upper = self.phi_t_iter(r, 0, t) ** q
        lower = self.phi_t_iter(r - 1, 0, t) ** q

        return x * y ** q * (upper - lower)

    def cone_counts(self, r, q, n_max=None):
        return series.cone_counts(r, q, self.max_order if n_max is None else n_max)

    def cap_gf(self, p, s=1):
        """K_p(x_c s), summing (y_c t)^{2−p}/(x_c s) Σ_{k>=1} θ_t(p+k−1)φ_t(0)^k."""
        ctx = self.ctx

        if p < 0:
            raise DomainError(f'invalid perimeter: {p}')

        (s, t, x, y) = self._point(s)

        if s == 0:
            return ctx.zero

        law = self.theta_law(t)
        phi1 = self.phi_t_iter(1, 0, t)

        total = ctx.zero
        power = phi1

        for k in range(1, MAX_CAP_TERMS + 1):
            total += law(p + k - 1) * power
            power *= phi1

            bound = law.survival(p + k) * power / (1 - phi1)

            if bound < self.tolerance * total:
                if self.logger.isEnabledFor(logging.DEBUG):
                    self.logger.debug(f'K_{p} summed with {k} terms, tail bound {bound}')

                return y ** (2 - p) / x * total

        raise TruncationError(f'K_{p} did not converge within {MAX_CAP_TERMS} terms')

    def cap_counts(self, p, n_max=None):
        return series.cap_counts(p, self.max_order if n_max is None else n_max)

    def cap_bivariate(self, s, z):
        """K(s, z) = x_c s Σ_p K_p(x_c s)(y_c t z)^p, from its closed form."""
        (s, t, x, y) = self._point(s)

        z = self.mpf(z)

        phi1 = self.phi_t_iter(1, 0, t)

        if abs(z - phi1) <= self.tolerance:
            return self._bivariate_at_iterate(1, t)

        if s == 0:
            return self.ctx.zero

        phi2 = self.phi_t_iter(2, 0, t)

        return y ** 2 * phi1 * (z * self.phi_t(z, t) - phi1 * phi2) / (z - phi1)

    def _bivariate_at_iterate(self, m, t):
        """K(s, φ_t^{m}(0))."""
        y = self.y_c * t

        phi1 = self.phi_t_iter(1, 0, t)
        phi2 = self.phi_t_iter(2, 0, t)

        if m == 0:
            return y ** 2 * phi1 * phi2

        if m == 1:
            return y ** 2 * phi1 * (phi2 + phi1 * self.phi_t_iter_derivative(1, phi1, t))

        phi_m = self.phi_t_iter(m, 0, t)
        phi_next = self.phi_t_iter(m + 1, 0, t)

        return y ** 2 * phi1 * (phi_m * phi_next - phi1 * phi2) / (phi_m - phi1)

    def two_point_gf(self, h, s=1):
        """G_h(x_c s), pointed sphere triangulations with d(ρ, δ) = h by vertices.

        G_1 = K(s, 0) and G_h = K(s, φ_t^{h−1}(0)) − K(s, φ_t^{h−2}(0)).
        """
        if h < 1:
            raise DomainError(f'invalid distance: {h}')

        (s, t, _, _) = self._point(s)

        if s == 0:
            return self.ctx.zero

        if h == 1:
            return self._bivariate_at_iterate(0, t)

        return self._bivariate_at_iterate(h - 1, t) - self._bivariate_at_iterate(h - 2, t)

    def two_point_counts(self, h, n_max=None):
        return series.two_point_counts(h, self.max_order if n_max is None else n_max)

    def two_point_ratio(self, h, lam):
        """G_h(x_c e^{−λ/h⁴})/G_h(x_c)."""
        ctx = self.ctx

        s = ctx.exp(-self.mpf(lam) / ctx.mpf(h) ** 4)

        return self.two_point_gf(h, s) / self.two_point_gf(h)

    # Horohulls of the infinite triangulation

    def horohull_joint_gf(self, r, s1, s2, method='analytic'):
        """E[s1^{|H_{r+1}|} s2^{|∂H_{r+1}|}] for the horohull of the UIPT.

        Equals (t1 s2/2) φ1 f'(z) at z = s1 s2/t1, where
        f = (φ^{r} φ^{r+1} − φ1 φ2)/(φ^{r} − φ1) and φ = φ_{t1}.
        """
        if r < 1:
            raise DomainError(f'invalid radius: {r}')

        s1 = self._s(s1)
        s2 = self._s(s2)

        if s1 == 0 or s2 == 0:
            return self.ctx.zero

        t1 = self.conjugate_t(s1)
        z = s1 * s2 / t1

        phi1 = self.phi_t_iter(1, 0, t1)
        phi2 = self.phi_t_iter(2, 0, t1)

        if method == 'analytic':
            g = self.phi_t_iter(r, z, t1)
            big = self.phi_t_iter(r + 1, z, t1)
            dg = self.phi_t_iter_derivative(r, z, t1)
            dbig = self.phi_t_iter_derivative(r + 1, z, t1)

            slope = ((dg * big + g * dbig) * (g - phi1) - (g * big - phi1 * phi2) * dg) / (g - phi1) ** 2
        elif method == 'difference':
            def f(value):
                g = self.phi_t_iter(r, value, t1)

                return (g * self.phi_t_iter(r + 1, value, t1) - phi1 * phi2) / (g - phi1)

            step = self.ctx.ldexp(1, -(self.precision_bits // 3))

            slope = self.ctx.diff(f, z, h=step)
        else:
            raise ValueError(f'invalid method: {method}')

        return t1 * s2 / 2 * phi1 * slope

    def horohull_laplace(self, r, lambda1, lambda2, method='analytic'):
        """E[exp(−λ1 |H_r|/r⁴ − λ2 |∂H_r|/r²)] for r >= 2."""
        ctx = self.ctx

        s1 = ctx.exp(-self.mpf(lambda1) / ctx.mpf(r) ** 4)
        s2 = ctx.exp(-self.mpf(lambda2) / ctx.mpf(r) ** 2)

        return self.horohull_joint_gf(r - 1, s1, s2, method)

    def conditional_horohull_gf(self, child_counts, generation_sizes, s1, s2):
        """E[s1^{|H_{r+1}|} s2^{|∂H_{r+1}|} | [Skel]_{r+1}].

        `child_counts` lists c(v) for the root first then every vertex of
        generations 1..r, `generation_sizes` the sizes of generations 1..r+1.
        The ratios per perimeter are cached, so repeated calls at the same s1
        cost one power per distinct child count.
        """
        s1 = self._s(s1)
        s2 = self._s(s2)

        (root, *rest) = child_counts

        vertices = sum(generation_sizes)
        perimeter = generation_sizes[-1]

        value = s2 ** perimeter * s1 ** vertices

        if s1 == 0:
            return value

        value *= self._cached(('cap ratio', root, s1), lambda: self.cap_gf(root, s1) / self.cap_gf(root))

        for (c, multiplicity) in Counter(rest).items():
            ratio = self._cached(('slot ratio', c, s1),
                                 lambda: self.boundary_weight(c + 2, s1) / self.boundary_weight(c + 2))

            value *= ratio ** multiplicity

        return value

    # Singularity analysis

    def singular_expansion_fit(self, h):
        """Coefficients (c0, c1, c3/2) of G_h(x_c s) = c0 + c1 ε + c3/2 ε^{3/2} + ...

        with ε = 1 − s, from least squares fits on two geometric grids
        approaching s = 1. The higher coefficients grow with h, so the fits
        run at a precision growing with h when it exceeds the working one.
        """
        bits = FIT_PRECISION_BITS + FIT_BITS_PER_DISTANCE * h

        fitter = self if bits <= self.precision_bits else SeriesContext(bits, self.max_order)

        fits = [fitter._fit(h, *grid) for grid in FIT_GRIDS]

        agreement = fitter.ctx.mpf('1e-10')

        for (a, b) in zip(*fits):
            if abs(a - b) > agreement * abs(a):
                raise FitError(f'singular expansion of G_{h} is ill-conditioned at '
                               f'{fitter.precision_bits} bits: {a} != {b}')

        return tuple(self.mpf(value) for value in fits[0])

    def _fit(self, h, low, high):
        ctx = self.ctx

        (low, high) = (ctx.mpf(low), ctx.mpf(high))

        ratio = (high / low) ** (ctx.one / (FIT_POINTS - 1))

        rows = []
        values = []

        for index in range(FIT_POINTS):
            epsilon = low * ratio ** index

            rows.append([epsilon ** self.mpf(exponent) for exponent in FIT_EXPONENTS])
            values.append(self.two_point_gf(h, 1 - epsilon))

        (solution, residual) = ctx.qr_solve(ctx.matrix(rows), ctx.matrix(values))

        if self.logger.isEnabledFor(logging.DEBUG):
            self.logger.debug(f'Fit of G_{h} on [{low}, {high}], residual {residual}')

        return (solution[0], solution[1], solution[2])

    def singular_coefficients(self, h):
        """Closed forms of the first three singular expansion coefficients of G_h."""
        ctx = self.ctx

        h = ctx.mpf(h)
        product = h * (h + 1) * (h + 2)

        constant = 1 / (36 * product)
        linear = -(h ** 4 + 4 * h ** 3 + 5 * h ** 2 + 2 * h + 3) / (90 * product)
        singular = (ctx.sqrt(6) / 2835 * (-1 + 16 * h + 80 * h ** 2 + 152 * h ** 3 + 138 * h ** 4
                                          + 60 * h ** 5 + 10 * h ** 6) / product)

        return (constant, linear, singular)

    def expected_sphere_size(self, h):
        """Expected number of vertices at distance h in the UIPT."""
        ctx = self.ctx

        h = ctx.mpf(h)

        polynomial = 10 * h ** 6 + 60 * h ** 5 + 138 * h ** 4 + 152 * h ** 3 + 80 * h ** 2 + 16 * h - 1

        return ctx.mpf(4) / 35 * polynomial / (h * (h + 1) * (h + 2))

    def one_gon_asymptotic(self, n):
        """Asymptotic number of triangulations of the 1-gon with n inner vertices."""
        ctx = self.ctx

        n = ctx.mpf(n)

        return self.x_c ** -n * n ** ctx.mpf(-2.5) / (6 * ctx.sqrt(2 * ctx.pi))

    # Distributional consequences

    def sphere_height_law(self, k):
        """P(H = k) for H = d(ρ, δ) in the pointed Boltzmann triangulation."""
        if k < 1:
            return self.ctx.zero

        return self.ctx.mpf(4) / (k * (k + 1) * (k + 2))

    def sphere_height_cdf(self, k):
        """P(H <= k) = ψ(1 − k^{−2})."""
        if k < 1:
            return self.ctx.zero

        return self.psi(1 - self.ctx.mpf(1) / k ** 2)

    def extinction_cdf(self, k):
        """P(height of a θ tree < k) = φ^{k}(0) = 1 − (k+1)^{−2}, here k >= 0."""
        return self.phi_t_iter(k, 0)

    def two_point_scaling_limit(self, lam):
        ctx = self.ctx

        root = (6 * self.mpf(lam)) ** (ctx.one / 4)

        if root == 0:
            return ctx.one

        return root ** 3 * ctx.cosh(root) / ctx.sinh(root) ** 3

    def horohull_scaling_limit(self, lambda1, lambda2):
        """Limit Laplace transform of (|H_r|/r⁴, |∂H_r|/r²)."""
        ctx = self.ctx

        (lambda1, lambda2) = (self.mpf(lambda1), self.mpf(lambda2))

        if lambda1 == 0:
            return self.perimeter_scaling_limit(lambda2)

        c = (6 * lambda1) ** (ctx.one / 4)
        m = ctx.mpf(2) / 3 + lambda2 / ctx.sqrt(6 * lambda1)

        (sinh, cosh) = (ctx.sinh(c), ctx.cosh(c))

        return (sinh / ctx.sqrt(m) + cosh) / (ctx.sqrt(m) * sinh + cosh) ** 3

    def perimeter_scaling_limit(self, lam):
        return 1 / (1 + self.ctx.sqrt(self.mpf(lam))) ** 3

def _taylor_mul(a, b, degree):
    zero = a[0] * 0
    product = [zero] * (degree + 1)

    for (i, x) in enumerate(a[:degree + 1]):
        if not x:
            continue

        for (j, y) in enumerate(b[:degree + 1 - i]):
            product[i + j] += x * y

    return product

def _taylor_inverse(a, degree):
    head = 1 / a[0]
    inverse = [head]

    for k in range(1, degree + 1):
        total = sum((a[i] * inverse[k - i] for i in range(1, min(k, len(a) - 1) + 1)), a[0] * 0)

        inverse.append(-head * total)

    return inverse

def _taylor_sqrt(a, degree):
    head = a[0] ** 0.5
    root = [head]

    for k in range(1, degree + 1):
        total = a[k] if k < len(a) else a[0] * 0

        for i in range(1, k):
            total -= root[i] * root[k - i]

        root.append(total / (2 * head))

    return root
