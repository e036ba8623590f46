"""Counter-based random streams for reproducible parallel simulation.

Every stream is a pure function of ``(seed, stream_id, domain)``: stream i
of a run yields the same draws no matter how paths are sharded across
workers, which is what makes worker-count-independent results possible.
The generator is a 10-round Philox-style 2x64 block cipher over the
counter ``(block_index, domain<<56 | stream_id)`` keyed by the seed.
"""

M64 = (1 << 64) - 1
PHILOX_M = 0xD2B74407B1CE6E93
PHILOX_W = 0x9E3779B97F4A7C15
ROUNDS = 10

# Stream domains keep draws for unrelated purposes decorrelated even when
# the same (seed, stream_id) pair is reused.
DOMAIN_PATHS = 0
DOMAIN_ARRIVALS = 1
DOMAIN_SAMPLES = 2

_INV_2_52 = 2.0 ** -52


def philox_block(key, c0, c1):
    """One block: two 64-bit words from counter (c0, c1) under `key`."""
    x0, x1, k = c0 & M64, c1 & M64, key & M64
    for _ in range(ROUNDS):
        prod = PHILOX_M * x0
        lo = prod & M64
        hi = prod >> 64
        x0 = (hi ^ k ^ x1) & M64
        x1 = lo
        k = (k + PHILOX_W) & M64
    return x0, x1


class PathStream:
    """Deterministic random stream addressed by (seed, stream_id, domain).

    The compiled kernels reproduce this stream bit for bit; a Python loop
    drawing from ``PathStream(seed, i)`` sees exactly the draws the batch
    kernels use for path ``i``.
    """

    __slots__ = ("key", "ctr_hi", "_block_idx", "_buffered", "_has_buffered")

    def __init__(self, seed, stream_id, domain=DOMAIN_PATHS):
        if not 0 <= int(seed) <= M64:
            raise ValueError("seed must fit in 64 bits")
        if not 0 <= int(stream_id) < (1 << 56):
            raise ValueError("stream_id must fit in 56 bits")
        if not 0 <= int(domain) < (1 << 8):
            raise ValueError("domain must fit in 8 bits")
        self.key = int(seed)
        self.ctr_hi = (int(domain) << 56) | int(stream_id)
        self._block_idx = 0
        self._buffered = 0
        self._has_buffered = False

    def next_u64(self):
        """Next raw 64-bit word of the stream."""
        if self._has_buffered:
            self._has_buffered = False
            return self._buffered
        y0, y1 = philox_block(self.key, self._block_idx, self.ctr_hi)
        self._block_idx += 1
        self._buffered = y1
        self._has_buffered = True
        return y0

    def uniform(self):
        """Uniform double strictly inside (0, 1), 52-bit resolution."""
        return ((self.next_u64() >> 12) + 0.5) * _INV_2_52
