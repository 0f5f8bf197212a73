"""
skelmap.pmf
~~~~~~~~~~~

Offspring laws as lazily extended probability tables with exact tails.
"""

import logging
from threading import Lock
import numpy

logger = logging.getLogger(__name__)

INITIAL_SIZE = 64

# Sampling extends the float table up to this size, beyond that it searches
# the closed form survival function directly.
MAX_TABLE_SIZE = 1 << 16

MAX_INT64 = (1 << 63) - 1

class Pmf:
    """Probability table for 0..K with the exact remainder P(X > K).

    Subclasses provide `_terms(start, stop)`, `survival(k)` = P(X >= k) and
    `mean_tail(k)` = Σ_{m >= k} m P(m) in closed form.
    """

    name = 'pmf'

    def __init__(self, ctx):
        self.logger = logging.getLogger(__name__)

        self.ctx = ctx

        self._lock = Lock()
        self._table = []
        self._survival_floats = numpy.ones(1)

    def __repr__(self):
        return f'<{type(self).__name__} size={len(self._table)}>'

    def __len__(self):
        return len(self._table)

    def __call__(self, k):
        return self.probability(k)

    def probability(self, k):
        if k < 0:
            return self.ctx.zero

        if k >= len(self._table):
            self.extend(max(k + 1, 2 * len(self._table), INITIAL_SIZE))

        return self._table[k]

    def extend(self, size):
        with self._lock:
            current = len(self._table)

            if size <= current:
                return

            self._table.extend(self._terms(current, size))

            # P(X >= k) = P(X >= K) + Σ_{k <= m < K} P(m), accumulated from the end.
            end = float(self.survival(size))

            terms = numpy.array([float(term) for term in self._table])

            survival = numpy.append(numpy.cumsum(terms[::-1])[::-1] + end, end)

            self._survival_floats = numpy.minimum(survival, 1.0)

        if self.logger.isEnabledFor(logging.DEBUG):
            self.logger.debug(f'Extended {self.name} table to {size} entries')

    @property
    def table(self):
        return tuple(self._table)

    @property
    def tail_mass(self):
        """P(X >= K) for the current table size K, exact to working precision."""
        return self.survival(len(self._table))

    def mean(self):
        return self.mean_tail(0)

    def survival(self, k):
        raise NotImplementedError

    def mean_tail(self, k):
        raise NotImplementedError

    def _terms(self, start, stop):
        raise NotImplementedError

    def quantile_search(self, v):
        """Smallest n with P(X > n) < v, by exponential search then bisection."""
        low = len(self._table)
        high = max(2 * low, INITIAL_SIZE)

        while self.survival(high + 1) >= v:
            (low, high) = (high, 2 * high)

        while low < high:
            middle = (low + high) // 2

            if self.survival(middle + 1) >= v:
                low = middle + 1
            else:
                high = middle

        return low

    def sample(self, rng, size=None):
        """Draw by inversion: X = #{k >= 1 : P(X >= k) >= v} for v uniform on (0, 1]."""
        count = 1 if size is None else size

        if not self._table:
            self.extend(INITIAL_SIZE)

        v = 1.0 - rng.random(count)

        # Rare draws beyond the table extend it, up to MAX_TABLE_SIZE.
        while True:
            survival = self._survival_floats

            if not (v <= survival[-1]).any() or len(self._table) >= MAX_TABLE_SIZE:
                break

            self.extend(min(2 * len(self._table), MAX_TABLE_SIZE))

        values = numpy.searchsorted(-survival[1:], -v, side='right')

        far = numpy.flatnonzero(v <= survival[-1])

        if far.size:
            quantiles = [self.quantile_search(self.ctx.mpf(float(v[index]))) for index in far]

            if max(quantiles) > MAX_INT64:
                values = values.astype(object)

            values[far] = quantiles

        return int(values[0]) if size is None else values

class ThetaPmf(Pmf):
    """θ_t, the coefficients of φ_t; θ_1 = θ.

    1 − φ_t(z) = (1 − z)Σ g_j z^j with g_j = Cat(j+1)/(4a²)^{j+1}, so that
    θ_t(0) = 1 − g_0, θ_t(k) = g_{k−1} − g_k and P(X >= k) = g_{k−1}.
    """

    name = 'theta'

    def __init__(self, ctx, a_squared):
        super().__init__(ctx)

        self.a_squared = ctx.mpf(a_squared)

        self._g = [1 / (4 * self.a_squared)]

    def g(self, j):
        if j < len(self._g):
            return self._g[j]

        if j > 4 * MAX_TABLE_SIZE:
            return self._g_far(j)

        while len(self._g) <= j:
            k = len(self._g) - 1

            self._g.append(self._g[-1] * (2 * k + 3) / (2 * (k + 3) * self.a_squared))

        return self._g[j]

    def _g_far(self, j):
        ctx = self.ctx

        log_g = (ctx.loggamma(2 * j + 3) - ctx.loggamma(j + 2) - ctx.loggamma(j + 3)
                 - (j + 1) * ctx.log(4 * self.a_squared))

        return ctx.exp(log_g)

    def term(self, k):
        """θ_t(k) without extending the table."""
        if k == 0:
            return 1 - self.g(0)

        a2 = self.a_squared

        return self.g(k - 1) * (2 * (k + 2) * a2 - 2 * k - 1) / (2 * (k + 2) * a2)

    def _terms(self, start, stop):
        return [self.term(k) for k in range(start, stop)]

    def survival(self, k):
        if k <= 0:
            return self.ctx.one

        return self.g(k - 1)

    def g_tail(self, k):
        """Σ_{j >= k} g_j = g_k 2F1(1, k + 3/2; k + 3; 1/a²)."""
        ctx = self.ctx

        return self.g(k) * ctx.hyp2f1(1, k + ctx.mpf(3) / 2, k + 3, 1 / self.a_squared)

    def mean_tail(self, k):
        if k <= 0:
            return self.mean_tail(1)

        return k * self.g(k - 1) + self.g_tail(k)

class NuPmf(Pmf):
    """ν, the coefficients of ψ(z) = 1 − 2(1 − z)/((1 + 2√(1−z))(1 + √(1−z))).

    ν(p) = Σ_{m >= p} θ(m)(3/4)^{m−p+1}, computed by the stable backward
    recurrence ν(p) = (3/4)(θ(p) + ν(p+1)).
    """

    name = 'nu'

    def __init__(self, ctx, theta):
        super().__init__(ctx)

        if theta.a_squared != 1:
            raise ValueError(f'ν needs the critical θ, found a² = {theta.a_squared}')

        self.theta = theta

        # (3/4)^overlap is below the working precision.
        self.overlap = int(ctx.prec * 0.6931471805599453 / 0.2876820724517809) + 8

    def _terms(self, start, stop):
        return self._backward(stop)[start:stop]

    def _backward(self, stop):
        ctx = self.ctx
        quarter = ctx.mpf(3) / 4

        seed = stop + self.overlap

        value = 3 * self.theta.term(seed)
        values = [None] * stop

        for p in range(seed - 1, -1, -1):
            value = quarter * (self.theta.term(p) + value)

            if p < stop:
                values[p] = value

        return values

    def value_far(self, p):
        """ν(p) beyond the table.

        For the critical θ, θ(k + 1)/θ(k) = (k + 1/2)/(k + 3), so the
        geometric sum is (3/4)θ(p) 2F1(1, p + 1/2; p + 3; 3/4).
        """
        ctx = self.ctx

        return 3 * self.theta.term(p) / 4 * ctx.hyp2f1(1, p + ctx.mpf(1) / 2, p + 3, ctx.mpf(3) / 4)

    def _nu(self, p):
        if p < len(self._table):
            return self._table[p]

        return self.value_far(p)

    def survival(self, k):
        if k <= 0:
            return self.ctx.one

        return 3 * (self.theta.survival(k) - self._nu(k))

    def mean_tail(self, k):
        if k <= 0:
            return self.ctx.mpf(2)

        return (3 * self.theta.mean_tail(k) - 9 * self.theta.survival(k)
                + (12 - 3 * k) * self._nu(k))

class SizeBiasedPmf(Pmf):
    """k P(k)/m for a law P of mean m."""

    def __init__(self, base, mean):
        super().__init__(base.ctx)

        self.base = base
        self.mean_value = base.ctx.mpf(mean)

        self.name = f'size-biased {base.name}'

    def _terms(self, start, stop):
        return [k * self.base(k) / self.mean_value for k in range(start, stop)]

    def survival(self, k):
        return self.base.mean_tail(max(k, 0)) / self.mean_value

    def mean_tail(self, k):
        # The size-biased θ law has infinite mean.
        return self.ctx.inf
