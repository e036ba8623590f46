"""Event-driven simulation of the two-line risk process.

The aggregate claim process is compared against the two premium lines
``b1(t) = x1 + p1*t`` and ``b2(t) = x2 + p2*t``.  Ruin of at least one
company is the first strict crossing of the lower envelope, ruin of both
the first crossing of the upper envelope.  Premium income is continuous
and claims are the only upward jumps, so crossings can happen at claim
epochs only; the simulators exploit that and do O(1) work per claim.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import backend as _backend_mod
from .distributions import ClaimDistribution
from .errors import ResourceCapError, TooRareError

DEFAULT_PER_PATH_CAP = 10**7
_BATCH = 1 << 17


@dataclass(frozen=True)
class RiskModel:
    """Two premium lines sharing one claim stream.

    Company 1 has the smaller initial capital and the larger premium rate.
    Validity requires p1 > p2 and the net-profit condition p2 > E[claim] /
    E[interarrival], so both reserves drift to +infinity.  x1 < x2 is the
    generic geometry (the lines cross); x2 <= x1 is accepted only with
    ``allow_degenerate=True`` and reduces each ruin event to a single line.
    """

    claim: ClaimDistribution
    interarrival: ClaimDistribution
    p1: float
    p2: float
    x1: float
    x2: float
    allow_degenerate: bool = False

    def __post_init__(self):
        if not self.p1 > self.p2:
            raise ValueError(f"requires p1 > p2, got p1={self.p1}, p2={self.p2}")
        rho = self.claim.mean() / self.interarrival.mean()
        if not self.p2 > rho:
            raise ValueError(
                f"net-profit condition violated: p2={self.p2} must exceed "
                f"mean claim / mean interarrival = {rho}"
            )
        if not (self.x1 > 0 and self.x2 > 0):
            raise ValueError("initial capitals must be > 0")
        if self.x2 <= self.x1 and not self.allow_degenerate:
            raise ValueError(
                f"x1={self.x1} >= x2={self.x2}: the two lines never cross; "
                "pass allow_degenerate=True for the one-line reduction"
            )

    @classmethod
    def from_ratio(cls, claim, interarrival, p1, p2, ratio, x):
        """Capitals (ratio*x, x) for a fixed split ratio in (0, 1)."""
        if not 0.0 < ratio < 1.0:
            raise ValueError("ratio must lie in (0, 1)")
        return cls(claim, interarrival, p1, p2, ratio * x, x)

    @property
    def degenerate(self):
        return self.x2 <= self.x1

    @property
    def split_ratio(self):
        return self.x1 / self.x2

    def with_capital(self, x):
        """Same model rescaled to capitals (split_ratio * x, x)."""
        return replace(self, x1=self.split_ratio * x, x2=x)


@dataclass(frozen=True)
class PathOutcome:
    """What one simulated path did."""

    tau_min: Optional[float]  # first crossing of the lower envelope
    tau_max: Optional[float]  # first crossing of the upper envelope
    overshoot_min: Optional[float]
    overshoot_max: Optional[float]
    claims_count: int
    ruin_claim_index_min: Optional[int] = None
    ruin_claim_index_max: Optional[int] = None


@dataclass(frozen=True)
class RuinEstimate:
    """Monte Carlo estimate of both ruin probabilities at a finite horizon."""

    psi_min_hat: float
    psi_max_hat: float
    se_min: float
    se_max: float
    n_paths: int
    horizon: float
    seed: int
    wall_time: float


@dataclass(frozen=True)
class PathBatch:
    """Dense per-path outputs for a contiguous block of path ids."""

    start_id: int
    tau_min: np.ndarray
    tau_max: np.ndarray
    overshoot_min: np.ndarray
    overshoot_max: np.ndarray
    claims_count: np.ndarray
    events: int


@dataclass(frozen=True)
class ConditionalRuinSample:
    """Ruin times/overshoots of ruined paths, aligned on the lower-envelope hits.

    ``tau_max``/``overshoot_max`` are NaN on paths that ruined only one
    company.  ``attempts`` is the total number of paths simulated, so the
    conditioning probability is ``len(tau_min) / attempts``.
    """

    tau_min: np.ndarray
    overshoot_min: np.ndarray
    tau_max: np.ndarray
    overshoot_max: np.ndarray
    attempts: int

    @property
    def n_ruined(self):
        return len(self.tau_min)

    @property
    def n_both_ruined(self):
        return int(np.isfinite(self.tau_max).sum())


@dataclass(frozen=True)
class TraceEvent:
    event_time: float
    surplus: float
    b1: float
    b2: float
    event_kind: str


def _scan_events(model, horizon, events, per_path_cap=DEFAULT_PER_PATH_CAP,
                 trace=None):
    """Shared ruin scan over an iterable of (arrival_time, claim_size)."""
    s = 0.0
    k = 0
    tau_min = tau_max = None
    ov_min = ov_max = None
    idx_min = idx_max = None
    last_t = 0.0
    for t, sig in events:
        if t <= last_t:
            raise ValueError("arrival times must be strictly increasing")
        last_t = t
        if t > horizon:
            break
        s += sig
        k += 1
        if k > per_path_cap:
            raise ResourceCapError(
                f"per-path event cap {per_path_cap} exceeded",
                completed_paths=0, total_events=k,
            )
        b1 = model.x1 + model.p1 * t
        b2 = model.x2 + model.p2 * t
        kind = "claim"
        if tau_min is None:
            bm = b1 if b1 < b2 else b2
            if s > bm:
                tau_min, ov_min, idx_min = t, s - bm, k
                kind = "ruin_min"
        if tau_max is None:
            bM = b1 if b1 > b2 else b2
            if s > bM:
                tau_max, ov_max, idx_max = t, s - bM, k
                kind = "ruin_both" if kind == "ruin_min" else "ruin_max"
        if trace is not None:
            trace.append(TraceEvent(t, s, b1, b2, kind))
        if tau_max is not None:
            break
    return PathOutcome(tau_min, tau_max, ov_min, ov_max, k, idx_min, idx_max)


def simulate_path(model, horizon, rng, per_path_cap=DEFAULT_PER_PATH_CAP):
    """Simulate one path, drawing from `rng` (interarrival then claim).

    With ``rng = PathStream(seed, i)`` this reproduces exactly what the
    batch kernels record for path ``i`` of ``estimate_ruin(seed=seed)``.
    """
    if not horizon > 0:
        raise ValueError("horizon must be > 0")

    def gen():
        t = 0.0
        while True:
            t = t + model.interarrival.sample(rng)
            if t > horizon:
                return
            yield t, model.claim.sample(rng)

    return _scan_events(model, horizon, gen(), per_path_cap)


def replay_path(model, horizon, events, per_path_cap=DEFAULT_PER_PATH_CAP):
    """Deterministic replay of explicit (arrival_time, claim_size) events."""
    return _scan_events(model, horizon, iter(events), per_path_cap)


def trace_path(model, horizon, rng, per_path_cap=DEFAULT_PER_PATH_CAP):
    """Like `simulate_path` but returns the per-claim trace rows."""
    rows = []

    def gen():
        t = 0.0
        while True:
            t = t + model.interarrival.sample(rng)
            if t > horizon:
                return
            yield t, model.claim.sample(rng)

    _scan_events(model, horizon, gen(), per_path_cap, trace=rows)
    return rows


def simulate_batch(model, horizon, seed, start_id, n, workers=1,
                   per_path_cap=DEFAULT_PER_PATH_CAP, backend=None):
    """Simulate paths start_id .. start_id+n-1 and return dense outputs.

    Path i depends only on (seed, i), so any chunking of the id range
    yields identical arrays.
    """
    if not horizon > 0:
        raise ValueError("horizon must be > 0")
    kern = backend if hasattr(backend, "run_paths") else _backend_mod.get_backend(backend)
    ck, ca, cb = model.claim.kernel_params()
    ik, ia, ib = model.interarrival.kernel_params()
    tau_min = np.empty(n)
    tau_max = np.empty(n)
    ov_min = np.empty(n)
    ov_max = np.empty(n)
    counts = np.empty(n, dtype=np.int64)

    def run(lo, hi):
        return kern.run_paths(
            tau_min[lo:hi], tau_max[lo:hi], ov_min[lo:hi], ov_max[lo:hi],
            counts[lo:hi], seed, start_id + lo,
            ck, ca, cb, ik, ia, ib,
            model.p1, model.p2, model.x1, model.x2, horizon, per_path_cap,
        )

    if workers <= 1 or n < 2 * _BATCH:
        events = run(0, n)
    else:
        bounds = np.linspace(0, n, workers + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            events = sum(pool.map(lambda ab: run(*ab), zip(bounds[:-1], bounds[1:])))
    return PathBatch(start_id, tau_min, tau_max, ov_min, ov_max, counts, events)


def estimate_ruin(model, horizon, n_paths, seed, workers=1, *,
                  max_total_events=None, per_path_cap=DEFAULT_PER_PATH_CAP,
                  backend=None):
    """Crude Monte Carlo estimate of both ruin probabilities by `horizon`.

    Bitwise reproducible for fixed (seed, n_paths) regardless of `workers`.
    Raises :class:`ResourceCapError` with the completed path count when the
    total event budget is exhausted.
    """
    if n_paths < 1000:
        raise ValueError("n_paths must be >= 1000 for a meaningful estimate")
    t0 = time.perf_counter()
    hits_min = 0
    hits_max = 0
    events = 0
    done = 0
    while done < n_paths:
        n = min(_BATCH * max(workers, 1), n_paths - done)
        batch = simulate_batch(model, horizon, seed, done, n, workers,
                               per_path_cap, backend)
        hits_min += int(np.isfinite(batch.tau_min).sum())
        hits_max += int(np.isfinite(batch.tau_max).sum())
        events += batch.events
        done += n
        if max_total_events is not None and events > max_total_events:
            raise ResourceCapError(
                f"total event cap {max_total_events} exceeded after "
                f"{done} of {n_paths} paths",
                completed_paths=done, total_events=events,
            )
    p_min = hits_min / n_paths
    p_max = hits_max / n_paths
    return RuinEstimate(
        psi_min_hat=p_min,
        psi_max_hat=p_max,
        se_min=math.sqrt(p_min * (1.0 - p_min) / n_paths),
        se_max=math.sqrt(p_max * (1.0 - p_max) / n_paths),
        n_paths=n_paths,
        horizon=horizon,
        seed=seed,
        wall_time=time.perf_counter() - t0,
    )


def conditional_ruin_sample(model, horizon, n_target, seed, workers=1, *,
                            max_attempts=10**8,
                            per_path_cap=DEFAULT_PER_PATH_CAP, backend=None):
    """Collect >= n_target paths that crossed the lower envelope.

    Aborts with :class:`TooRareError` if `max_attempts` paths produced fewer
    than a tenth of the target: at that point ruin is too rare for crude
    sampling and a smaller capital scale should be used.
    """
    if n_target < 1:
        raise ValueError("n_target must be >= 1")
    got = []
    attempts = 0
    collected = 0
    while collected < n_target:
        n = _BATCH * max(workers, 1)
        batch = simulate_batch(model, horizon, seed, attempts, n, workers,
                               per_path_cap, backend)
        ruined = np.isfinite(batch.tau_min)
        if ruined.any():
            got.append((batch.tau_min[ruined], batch.overshoot_min[ruined],
                        batch.tau_max[ruined], batch.overshoot_max[ruined]))
            collected += int(ruined.sum())
        attempts += n
        if attempts >= max_attempts and collected < n_target / 10:
            raise TooRareError(
                f"{attempts} paths yielded only {collected} ruin(s) "
                f"(target {n_target}); ruin is too rare at this capital "
                "scale, rerun with smaller x"
            )
    cols = [np.concatenate(c) for c in zip(*got)]
    return ConditionalRuinSample(cols[0], cols[1], cols[2], cols[3], attempts)
