# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: two-line path simulation, renewal counts, bulk sampling.

Bit-identical twin of ``tworuin._pykernels``; the hot loops release the GIL
so thread workers scale on real cores.
"""

from libc.math cimport cos, exp, log, log1p, pow, sqrt

from .errors import ResourceCapError

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t tworuin_mulhi64(uint64_t a, uint64_t b) {
        return (uint64_t)(((__uint128_t)a * (__uint128_t)b) >> 64);
    }
    """
    unsigned long long tworuin_mulhi64(unsigned long long a, unsigned long long b) nogil


cdef unsigned long long PHILOX_M = 0xD2B74407B1CE6E93ULL
cdef unsigned long long PHILOX_W = 0x9E3779B97F4A7C15ULL
cdef double TWO_PI = 6.283185307179586
cdef double INV_2_52 = 2.2204460492503131e-16  # 2.0 ** -52

cdef int DOMAIN_PATHS = 0
cdef int DOMAIN_ARRIVALS = 1
cdef int DOMAIN_SAMPLES = 2


cdef struct Stream:
    unsigned long long key
    unsigned long long ctr_hi
    unsigned long long block_idx
    unsigned long long buffered
    bint has_buffered


cdef inline void stream_init(Stream* s, unsigned long long seed,
                             unsigned long long stream_id,
                             unsigned long long domain) nogil:
    s.key = seed
    s.ctr_hi = (domain << 56) | stream_id
    s.block_idx = 0
    s.buffered = 0
    s.has_buffered = False


cdef inline unsigned long long next_u64(Stream* s) nogil:
    cdef unsigned long long x0, x1, k, lo, hi
    cdef int r
    if s.has_buffered:
        s.has_buffered = False
        return s.buffered
    x0 = s.block_idx
    x1 = s.ctr_hi
    k = s.key
    for r in range(10):
        hi = tworuin_mulhi64(PHILOX_M, x0)
        lo = PHILOX_M * x0
        x0 = hi ^ k ^ x1
        x1 = lo
        k = k + PHILOX_W
    s.block_idx += 1
    s.buffered = x1
    s.has_buffered = True
    return x0


cdef inline double uniform(Stream* s) nogil:
    return (<double>(next_u64(s) >> 12) + 0.5) * INV_2_52


cdef inline double draw(Stream* s, int kind, double a, double b) nogil:
    cdef double u1, u2, z
    if kind == 0:
        return -log1p(-uniform(s)) / a
    if kind == 1:
        return b * (pow(1.0 - uniform(s), -1.0 / a) - 1.0)
    if kind == 2:
        return b * pow(-log1p(-uniform(s)), 1.0 / a)
    u1 = uniform(s)
    u2 = uniform(s)
    z = sqrt(-2.0 * log(u1)) * cos(TWO_PI * u2)
    return exp(a + b * z)


NAME = "cython"


def run_paths(double[::1] tau_min, double[::1] tau_max,
              double[::1] ov_min, double[::1] ov_max,
              long long[::1] n_claims,
              unsigned long long seed, unsigned long long start_id,
              int claim_kind, double ca, double cb,
              int inter_kind, double ia, double ib,
              double p1, double p2, double x1, double x2,
              double horizon, long long per_path_cap):
    """See ``tworuin._pykernels.run_paths``."""
    cdef Py_ssize_t n = tau_min.shape[0]
    cdef Py_ssize_t i
    cdef Stream stream
    cdef double t, s, tmin, tmax, omin, omax, b1, b2, bm, bM
    cdef double nan = float("nan")
    cdef long long k, total = 0
    cdef long long cap_path = -1
    cdef long long cap_events = 0
    cdef Py_ssize_t cap_i = 0

    with nogil:
        for i in range(n):
            stream_init(&stream, seed, start_id + <unsigned long long>i,
                        <unsigned long long>DOMAIN_PATHS)
            t = 0.0
            s = 0.0
            k = 0
            tmin = nan
            tmax = nan
            omin = nan
            omax = nan
            while True:
                t = t + draw(&stream, inter_kind, ia, ib)
                if t > horizon:
                    break
                s = s + draw(&stream, claim_kind, ca, cb)
                k += 1
                if k > per_path_cap:
                    cap_path = <long long>(start_id + <unsigned long long>i)
                    cap_events = total + k
                    cap_i = i
                    break
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
            if cap_path >= 0:
                break
            tau_min[i] = tmin
            tau_max[i] = tmax
            ov_min[i] = omin
            ov_max[i] = omax
            n_claims[i] = k
            total += k

    if cap_path >= 0:
        raise ResourceCapError(
            f"per-path event cap {per_path_cap} exceeded at path {cap_path}",
            completed_paths=cap_i,
            total_events=cap_events,
        )
    return total


def renewal_counts(long long[::1] out,
                   unsigned long long seed, unsigned long long start_id,
                   int inter_kind, double ia, double ib,
                   double horizon, long long per_path_cap):
    """See ``tworuin._pykernels.renewal_counts``."""
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t i
    cdef Stream stream
    cdef double t
    cdef long long k, total = 0
    cdef long long cap_path = -1
    cdef long long cap_events = 0
    cdef Py_ssize_t cap_i = 0

    with nogil:
        for i in range(n):
            stream_init(&stream, seed, start_id + <unsigned long long>i,
                        <unsigned long long>DOMAIN_ARRIVALS)
            t = 0.0
            k = 0
            while True:
                t = t + draw(&stream, inter_kind, ia, ib)
                if t > horizon:
                    break
                k += 1
                if k > per_path_cap:
                    cap_path = <long long>(start_id + <unsigned long long>i)
                    cap_events = total + k
                    cap_i = i
                    break
            if cap_path >= 0:
                break
            out[i] = k
            total += k

    if cap_path >= 0:
        raise ResourceCapError(
            f"per-path event cap {per_path_cap} exceeded at path {cap_path}",
            completed_paths=cap_i,
            total_events=cap_events,
        )
    return total


def sample_batch(double[::1] out,
                 unsigned long long seed, unsigned long long stream_id,
                 int kind, double a, double b):
    """See ``tworuin._pykernels.sample_batch``."""
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t i
    cdef Stream stream
    stream_init(&stream, seed, stream_id, <unsigned long long>DOMAIN_SAMPLES)
    with nogil:
        for i in range(n):
            out[i] = draw(&stream, kind, a, b)
