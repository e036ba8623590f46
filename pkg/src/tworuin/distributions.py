"""Heavy-tailed claim distributions: exact tails, integrated tails, samplers.

Four parametric families are supported.  Lomax (Pareto Type II), lognormal
and Weibull with shape < 1 are the heavy-tailed claim laws; the exponential
family is light-tailed and exists as a control for the subexponentiality
diagnostics and as an interarrival law.

Analytic methods (`tail`, `pdf`, `cdf`, `tail_area`, ...) accept floats or
numpy arrays.  Samplers are scalar and consume a :class:`~tworuin.rng.PathStream`;
their draw sequence is reproduced bit for bit by the batch kernels.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.integrate import quad

from .errors import NumericalError

_TWO_PI = 6.283185307179586

# Integer codes used by the simulation kernels.
KIND_EXPONENTIAL = 0
KIND_LOMAX = 1
KIND_WEIBULL = 2
KIND_LOGNORMAL = 3

_QUAD_LIMIT = 200  # subinterval cap; ~21 evaluations each, far below 1e6


def _check_nonneg(x):
    if np.any(np.asarray(x) < 0):
        raise ValueError("argument must be >= 0")


class ClaimDistribution:
    """Base class: positive support, finite mean, non-increasing tail."""

    def tail(self, x):
        """Survival function P(X > x) for x >= 0."""
        raise NotImplementedError

    def log_tail(self, x):
        """log of `tail`, finite for all finite x (no premature underflow)."""
        raise NotImplementedError

    def pdf(self, x):
        raise NotImplementedError

    def log_pdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        return 1.0 - self.tail(x)

    def mean(self):
        raise NotImplementedError

    def tail_area(self, x):
        """Uncapped integral of the tail from x to infinity."""
        raise NotImplementedError

    def integrated_tail(self, x):
        """Integrated tail distribution: min(1, integral of tail from x)."""
        _check_nonneg(x)
        return np.minimum(1.0, self.tail_area(x))

    def sample(self, rng):
        """One draw from the law, strictly positive."""
        raise NotImplementedError

    def kernel_params(self):
        """(kind, a, b) triple understood by the simulation kernels."""
        raise NotImplementedError


@dataclass(frozen=True)
class ParetoLomax(ClaimDistribution):
    """Lomax law with tail (1 + x/beta)^(-alpha); alpha > 1 so the mean exists."""

    alpha: float
    beta: float = 1.0

    def __post_init__(self):
        if not self.alpha > 1.0:
            raise ValueError("ParetoLomax requires alpha > 1 (finite mean)")
        if not self.beta > 0.0:
            raise ValueError("ParetoLomax requires beta > 0")

    def tail(self, x):
        _check_nonneg(x)
        return np.exp(self.log_tail(x))

    def log_tail(self, x):
        _check_nonneg(x)
        return -self.alpha * np.log1p(np.asarray(x, dtype=float) / self.beta)

    def pdf(self, x):
        return np.exp(self.log_pdf(x))

    def log_pdf(self, x):
        _check_nonneg(x)
        x = np.asarray(x, dtype=float)
        return (
            math.log(self.alpha / self.beta)
            - (self.alpha + 1.0) * np.log1p(x / self.beta)
        )

    def mean(self):
        return self.beta / (self.alpha - 1.0)

    def tail_area(self, x):
        _check_nonneg(x)
        x = np.asarray(x, dtype=float)
        return self.mean() * np.exp((1.0 - self.alpha) * np.log1p(x / self.beta))

    def sample(self, rng):
        u = rng.uniform()
        return self.beta * ((1.0 - u) ** (-1.0 / self.alpha) - 1.0)

    def kernel_params(self):
        return KIND_LOMAX, self.alpha, self.beta


@dataclass(frozen=True)
class Lognormal(ClaimDistribution):
    """exp(mu + sigma*Z) for standard normal Z."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError("Lognormal requires sigma > 0")

    def _z(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return (np.log(x) - self.mu) / self.sigma

    def tail(self, x):
        _check_nonneg(x)
        # complementary error function keeps relative accuracy deep in the tail
        return 0.5 * special.erfc(self._z(x) / math.sqrt(2.0))

    def log_tail(self, x):
        _check_nonneg(x)
        return special.log_ndtr(-self._z(x))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, np.exp(self.log_pdf(np.maximum(x, 1e-300))), 0.0)

    def log_pdf(self, x):
        _check_nonneg(x)
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            z = (np.log(x) - self.mu) / self.sigma
            out = -np.log(x * self.sigma * math.sqrt(_TWO_PI)) - 0.5 * z * z
        return np.where(x > 0, out, -np.inf)

    def mean(self):
        return math.exp(self.mu + 0.5 * self.sigma**2)

    def tail_area(self, x):
        # E(X - x)^+ = m * Phi((mu + sigma^2 - ln x)/sigma) - x * Phi((mu - ln x)/sigma)
        _check_nonneg(x)
        x = np.asarray(x, dtype=float)
        z = self._z(x)
        val = self.mean() * special.ndtr(self.sigma - z) - x * special.ndtr(-z)
        return np.where(x > 0, val, self.mean())

    def sample(self, rng):
        u1 = rng.uniform()
        u2 = rng.uniform()
        z = math.sqrt(-2.0 * math.log(u1)) * math.cos(_TWO_PI * u2)
        return math.exp(self.mu + self.sigma * z)

    def kernel_params(self):
        return KIND_LOGNORMAL, self.mu, self.sigma


@dataclass(frozen=True)
class Weibull(ClaimDistribution):
    """Weibull with shape in (0, 1): the heavy-tailed (stretched) regime.

    Shapes >= 1 are rejected: the tail is then too light for the class of
    laws this package studies.
    """

    shape: float
    scale: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.shape < 1.0:
            raise ValueError(
                "Weibull shape must lie in (0, 1); "
                f"shape={self.shape} is not heavy-tailed"
            )
        if not self.scale > 0.0:
            raise ValueError("Weibull requires scale > 0")

    def tail(self, x):
        _check_nonneg(x)
        return np.exp(self.log_tail(x))

    def log_tail(self, x):
        _check_nonneg(x)
        x = np.asarray(x, dtype=float)
        return -((x / self.scale) ** self.shape)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, np.exp(self.log_pdf(np.maximum(x, 1e-300))), 0.0)

    def log_pdf(self, x):
        _check_nonneg(x)
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            t = x / self.scale
            out = (
                math.log(self.shape / self.scale)
                + (self.shape - 1.0) * np.log(t)
                - t**self.shape
            )
        return np.where(x > 0, out, -np.inf)

    def mean(self):
        return self.scale * math.gamma(1.0 + 1.0 / self.shape)

    def tail_area(self, x):
        _check_nonneg(x)
        x = np.asarray(x, dtype=float)
        c = 1.0 / self.shape
        return (
            self.scale * c * math.gamma(c) * special.gammaincc(c, (x / self.scale) ** self.shape)
        )

    def sample(self, rng):
        u = rng.uniform()
        return self.scale * (-math.log1p(-u)) ** (1.0 / self.shape)

    def kernel_params(self):
        return KIND_WEIBULL, self.shape, self.scale


@dataclass(frozen=True)
class Exponential(ClaimDistribution):
    """Light-tailed control; also the natural interarrival law."""

    rate: float

    def __post_init__(self):
        if not self.rate > 0.0:
            raise ValueError("Exponential requires rate > 0")

    def tail(self, x):
        _check_nonneg(x)
        return np.exp(-self.rate * np.asarray(x, dtype=float))

    def log_tail(self, x):
        _check_nonneg(x)
        return -self.rate * np.asarray(x, dtype=float)

    def pdf(self, x):
        _check_nonneg(x)
        return self.rate * np.exp(-self.rate * np.asarray(x, dtype=float))

    def log_pdf(self, x):
        _check_nonneg(x)
        return math.log(self.rate) - self.rate * np.asarray(x, dtype=float)

    def mean(self):
        return 1.0 / self.rate

    def tail_area(self, x):
        _check_nonneg(x)
        return np.exp(-self.rate * np.asarray(x, dtype=float)) / self.rate

    def sample(self, rng):
        return -math.log1p(-rng.uniform()) / self.rate

    def kernel_params(self):
        return KIND_EXPONENTIAL, self.rate, 0.0


def _quad_checked(fn, lo, hi, what, points=None):
    val, err, info, *rest = quad(
        fn, lo, hi, epsabs=0.0, epsrel=1e-9, limit=_QUAD_LIMIT,
        points=points, full_output=1,
    )
    if rest:
        raise NumericalError(f"{what}: quadrature did not converge: {rest[0]}")
    return val, err


def sstar_ratio(d, x):
    """Tail self-convolution integral over 2 * mean * tail.

    Tends to 1 for strongly subexponential laws.  Evaluated in log space
    relative to tail(x) so that deep-tail arguments stay finite.
    """
    if not x > 0:
        raise ValueError("x must be > 0")
    lt_x = float(d.log_tail(x))
    if not np.isfinite(lt_x):
        raise NumericalError(f"tail underflows even in log space at x={x}")

    def ratio_integrand(y):
        return math.exp(float(d.log_tail(x - y)) + float(d.log_tail(y)) - lt_x)

    # integrand is symmetric about x/2: integrate half and use val/mean
    val, _ = _quad_checked(ratio_integrand, 0.0, 0.5 * x, "sstar_ratio")
    return val / d.mean()


def subexp_ratio(d, x):
    """Two-fold convolution tail over the tail; tends to 2 iff subexponential."""
    if not x > 0:
        raise ValueError("x must be > 0")
    lt_x = float(d.log_tail(x))
    if not np.isfinite(lt_x):
        raise NumericalError(f"tail underflows even in log space at x={x}")

    def ratio_integrand(y):
        lp = float(d.log_pdf(y))
        if lp == -math.inf:
            return 0.0
        return math.exp(float(d.log_tail(x - y)) + lp - lt_x)

    val, _ = _quad_checked(ratio_integrand, 0.0, x, "subexp_ratio", points=(0.5 * x,))
    return 1.0 + val


_FAMILIES = {
    "lomax": (ParetoLomax, ("alpha", "beta")),
    "lognormal": (Lognormal, ("mu", "sigma")),
    "weibull": (Weibull, ("shape", "scale")),
    "exponential": (Exponential, ("rate",)),
}


def family_names():
    return sorted(_FAMILIES)


def from_family(family, **params):
    """Build a distribution from a `{family, params}` config record."""
    try:
        cls, keys = _FAMILIES[family]
    except KeyError:
        raise ValueError(
            f"unknown family {family!r}; expected one of {family_names()}"
        ) from None
    unknown = set(params) - set(keys)
    if unknown:
        raise ValueError(f"{family}: unexpected parameter(s) {sorted(unknown)}")
    missing = [k for k in keys if k not in params and k not in ("beta", "scale")]
    if missing:
        raise ValueError(f"{family}: missing parameter(s) {missing}")
    return cls(**{k: float(v) for k, v in params.items()})
