"""Renewal-process utilities: expected arrival counts and the Jensen bound.

The arrival count by time T uses the convention N_T = max{n : t_n <= T},
so an arrival landing exactly on the horizon counts.  The expected count
is exact for exponential interarrivals (rate * T) and for deterministic
spacing (floor(T / spacing)); everything else is Monte Carlo.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import backend as _backend_mod
from .distributions import ClaimDistribution, Exponential
from .errors import UnsupportedMethodError
from .simulate import DEFAULT_PER_PATH_CAP

_BATCH = 1 << 17
# decorrelates the internal mean-estimation run from the caller's seed
_MEAN_SEED_OFFSET = 0x517CC1B727220A95


@dataclass(frozen=True)
class RenewalSpec:
    """Interarrival law, either a positive distribution or a fixed spacing."""

    interarrival: Optional[ClaimDistribution] = None
    spacing: Optional[float] = None

    def __post_init__(self):
        if (self.interarrival is None) == (self.spacing is None):
            raise ValueError("provide exactly one of interarrival or spacing")
        if self.spacing is not None and not self.spacing > 0:
            raise ValueError("spacing must be > 0")

    def mean_interarrival(self):
        if self.spacing is not None:
            return self.spacing
        return self.interarrival.mean()


@dataclass(frozen=True)
class RenewalMean:
    """Expected arrival count by a horizon, with its standard error."""

    value: float
    se: float
    method: str  # "exact" or "simulate"


@dataclass(frozen=True)
class LemmaCheck:
    """Both sides of the Jensen-type bound for one configuration.

    lhs = E of the integral of tail(x + slope*t) dt over [0, N_T],
    estimated over n_paths; rhs = the same integral up to E[N_T].  The
    bound says lhs <= rhs, so `satisfied` allows three standard errors
    of estimation noise.
    """

    x: float
    T: float
    slope: float
    lhs: float
    lhs_se: float
    rhs: float
    n_paths: int
    renewal_mean: float

    @property
    def satisfied(self):
        return self.lhs <= self.rhs + 3.0 * self.lhs_se


def _counts(spec, T, n, seed, workers, backend, per_path_cap):
    kern = _backend_mod.get_backend(backend) if not hasattr(backend, "renewal_counts") \
        else backend
    ik, ia, ib = spec.interarrival.kernel_params()
    out = np.empty(n, dtype=np.int64)

    def run(lo, hi):
        kern.renewal_counts(out[lo:hi], seed, lo, ik, ia, ib, T, per_path_cap)

    if workers <= 1 or n < 2 * _BATCH:
        run(0, n)
    else:
        bounds = np.linspace(0, n, workers + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda ab: run(*ab), zip(bounds[:-1], bounds[1:])))
    return out


def renewal_mean(spec, T, method="exact", *, n=None, seed=None, workers=1,
                 backend=None, per_path_cap=DEFAULT_PER_PATH_CAP):
    """Expected number of arrivals in [0, T].

    `method="exact"` covers exponential interarrivals and fixed spacing;
    `method="simulate"` needs `n` and `seed` and averages over n paths.
    """
    if T < 0:
        raise ValueError("T must be >= 0")
    if method == "exact":
        if spec.spacing is not None:
            return RenewalMean(float(math.floor(T / spec.spacing)), 0.0, "exact")
        if isinstance(spec.interarrival, Exponential):
            return RenewalMean(spec.interarrival.rate * T, 0.0, "exact")
        raise UnsupportedMethodError(
            f"no exact mean count for {type(spec.interarrival).__name__} "
            "interarrivals; use method='simulate'"
        )
    if method != "simulate":
        raise ValueError(f"unknown method {method!r}")
    if n is None or seed is None:
        raise ValueError("simulate requires n and seed")
    if spec.spacing is not None:
        # deterministic spacing: every path gives the same count
        return RenewalMean(float(math.floor(T / spec.spacing)), 0.0, "simulate")
    counts = _counts(spec, T, int(n), int(seed), workers, backend, per_path_cap)
    value = float(counts.mean())
    se = float(counts.std(ddof=1) / math.sqrt(len(counts))) if len(counts) > 1 else 0.0
    return RenewalMean(value, se, "simulate")


def _tail_integral_to(d, x, slope, upper):
    """Integral of tail(x + slope*t) dt for t in [0, upper] (uncapped, exact)."""
    if slope == 0.0:
        return float(d.tail(x)) * upper
    return float(d.tail_area(x) - d.tail_area(x + slope * upper)) / slope


def lemma_upper_check(spec, d, x, T, slope, n, seed, *, workers=1,
                      backend=None, per_path_cap=DEFAULT_PER_PATH_CAP):
    """Monte Carlo lhs vs deterministic rhs of the Jensen-type bound.

    The integrand tail(x + slope*t) is evaluated along a linear ramp;
    the path integral up to the random count N_T is an exact function of
    N_T, so the only Monte Carlo ingredient is the count sample.
    """
    if x < 0:
        raise ValueError("x must be >= 0")
    if not T > 0:
        raise ValueError("T must be > 0")
    if slope < 0:
        raise ValueError("slope must be >= 0")
    if n < 1000:
        raise ValueError("n must be >= 1000")

    counts = _counts(spec, T, int(n), int(seed), workers, backend, per_path_cap)
    uniq, mult = np.unique(counts, return_counts=True)
    if slope == 0.0:
        g = float(d.tail(x)) * uniq.astype(float)
    else:
        g = (float(d.tail_area(x)) - np.asarray(d.tail_area(x + slope * uniq))) / slope
    lhs = float(np.average(g, weights=mult))
    var = float(np.average((g - lhs) ** 2, weights=mult)) * n / max(n - 1, 1)
    lhs_se = math.sqrt(var / n)

    try:
        mean_count = renewal_mean(spec, T, "exact").value
    except UnsupportedMethodError:
        mean_count = renewal_mean(
            spec, T, "simulate", n=max(int(n), 10**5),
            seed=(int(seed) + _MEAN_SEED_OFFSET) % (1 << 64),
            workers=workers, backend=backend,
        ).value
    rhs = _tail_integral_to(d, x, slope, mean_count)
    return LemmaCheck(x, T, slope, lhs, lhs_se, rhs, int(n), mean_count)
