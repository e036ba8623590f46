"""Pure-Python reference kernels.

Slow but dependency-free twin of ``tworuin._speedups``: every function here
produces bit-identical output to the compiled version because both consume
the same counter-based streams and apply the same floating-point operations
in the same order.
"""

from math import cos, exp, log, log1p, sqrt

from .errors import ResourceCapError
from .rng import DOMAIN_ARRIVALS, DOMAIN_PATHS, DOMAIN_SAMPLES, PathStream

NAME = "python"

_TWO_PI = 6.283185307179586


def _draw(stream, kind, a, b):
    if kind == 0:  # exponential(rate=a)
        return -log1p(-stream.uniform()) / a
    if kind == 1:  # lomax(alpha=a, beta=b)
        return b * ((1.0 - stream.uniform()) ** (-1.0 / a) - 1.0)
    if kind == 2:  # weibull(shape=a, scale=b)
        return b * (-log1p(-stream.uniform())) ** (1.0 / a)
    # kind == 3: lognormal(mu=a, sigma=b)
    u1 = stream.uniform()
    u2 = stream.uniform()
    z = sqrt(-2.0 * log(u1)) * cos(_TWO_PI * u2)
    return exp(a + b * z)


def run_paths(
    tau_min, tau_max, ov_min, ov_max, n_claims,
    seed, start_id,
    claim_kind, ca, cb,
    inter_kind, ia, ib,
    p1, p2, x1, x2,
    horizon, per_path_cap,
):
    """Simulate len(tau_min) two-line paths with ids start_id, start_id+1, ...

    Outputs are written in place (NaN marks "no ruin").  Returns the total
    number of claim events processed.
    """
    n = len(tau_min)
    nan = float("nan")
    total = 0
    for i in range(n):
        stream = PathStream(seed, start_id + i, DOMAIN_PATHS)
        t = 0.0
        s = 0.0
        k = 0
        tmin = nan
        tmax = nan
        omin = nan
        omax = nan
        while True:
            t = t + _draw(stream, inter_kind, ia, ib)
            if t > horizon:
                break
            s = s + _draw(stream, claim_kind, ca, cb)
            k += 1
            if k > per_path_cap:
                raise ResourceCapError(
                    f"per-path event cap {per_path_cap} exceeded at path "
                    f"{start_id + i}",
                    completed_paths=i,
                    total_events=total + k,
                )
            b1 = x1 + p1 * t
            b2 = x2 + p2 * t
            if tmin != tmin:
                bm = b1 if b1 < b2 else b2
                if s > bm:
                    tmin = t
                    omin = s - bm
            if tmax != tmax:
                bM = b1 if b1 > b2 else b2
                if s > bM:
                    tmax = t
                    omax = s - bM
                    break
        tau_min[i] = tmin
        tau_max[i] = tmax
        ov_min[i] = omin
        ov_max[i] = omax
        n_claims[i] = k
        total += k
    return total


def renewal_counts(out, seed, start_id, inter_kind, ia, ib, horizon, per_path_cap):
    """Arrival counts by `horizon` for len(out) independent paths."""
    n = len(out)
    total = 0
    for i in range(n):
        stream = PathStream(seed, start_id + i, DOMAIN_ARRIVALS)
        t = 0.0
        k = 0
        while True:
            t = t + _draw(stream, inter_kind, ia, ib)
            if t > horizon:
                break
            k += 1
            if k > per_path_cap:
                raise ResourceCapError(
                    f"per-path event cap {per_path_cap} exceeded at path "
                    f"{start_id + i}",
                    completed_paths=i,
                    total_events=total + k,
                )
        out[i] = k
        total += k
    return total


def sample_batch(out, seed, stream_id, kind, a, b):
    """len(out) consecutive draws from one sampling stream."""
    stream = PathStream(seed, stream_id, DOMAIN_SAMPLES)
    for i in range(len(out)):
        out[i] = _draw(stream, kind, a, b)
