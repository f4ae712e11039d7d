"""Counter-based random streams.

A stream is fully named by (master_seed, stream_id); the bits are Philox4x64-10
blocks keyed on that pair, so any evaluation anywhere in an experiment can be
given its own independent stream and results cannot depend on scheduling or
worker count. Stream ids are derived by hashing structured fields
(domain tag, iteration, candidate index, sample index, ...) with splitmix64.
"""

import numpy as np

from uqdbench import _backend

_MASK64 = 0xFFFFFFFFFFFFFFFF
_KEY_INIT = 0x243F6A8885A308D3  # pi fractional bits

# Domain tags keeping stream families disjoint.
DOMAIN_RUN = 1        # harness: per (task, algo, replication) run seed
DOMAIN_INIT = 2       # solver: initial genotype sampling
DOMAIN_PARENT = 3     # solver: parent selection per iteration
DOMAIN_VARIATION = 4  # solver: per-child variation noise
DOMAIN_EVAL = 5       # solver: per (iteration, candidate, sample) evaluation
DOMAIN_SAMPLE = 6     # evaluate_samples: per-sample child streams
DOMAIN_REEVAL = 7     # corrected-archive reevaluations
DOMAIN_ORACLE = 8     # expected_evaluation Monte-Carlo draws


def _mix64(x):
    x &= _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


def stream_key(*fields):
    """Hash integer fields into a 64-bit stream id (order-sensitive)."""
    h = _KEY_INIT
    for f in fields:
        h = _mix64(h ^ (int(f) & _MASK64))
    return h


def _mix64_np(x):
    x = x.copy()
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    x ^= x >> np.uint64(31)
    return x


def stream_keys(prefix_fields, *index_arrays):
    """Vectorized stream_key: shared prefix fields, then per-element indices.

    Equals stream_key(*prefix_fields, i, j, ...) element by element; index
    arrays broadcast against each other.
    """
    h0 = stream_key(*prefix_fields)
    arrs = np.broadcast_arrays(*[np.asarray(a, dtype=np.uint64) for a in index_arrays])
    h = np.full(arrs[0].shape, h0, dtype=np.uint64)
    for a in arrs:
        h = _mix64_np(h ^ a)
    return h


def fnv1a64(text):
    """Stable 64-bit FNV-1a of a string, for hashing task/algo identifiers."""
    h = 0xCBF29CE484222325
    for b in text.encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & _MASK64
    return h


class RngStream:
    """Deterministic stream of uint64 words / uniforms / normals.

    Words come from consecutive Philox blocks; calls consume the flat word
    sequence, so the draw values depend only on (master_seed, stream_id) and
    the cumulative number of words drawn.
    """

    def __init__(self, master_seed, stream_id):
        self.master_seed = int(master_seed) & _MASK64
        self.stream_id = int(stream_id) & _MASK64
        self._block = 0
        self._leftover = None

    def derive(self, *fields):
        """Child stream: same master seed, id hashed from this id and fields."""
        return RngStream(self.master_seed, stream_key(self.stream_id, *fields))

    def u64(self, n):
        if n < 1:
            raise ValueError("n must be >= 1")
        have = 0 if self._leftover is None else len(self._leftover)
        if have >= n:
            out = self._leftover[:n]
            self._leftover = self._leftover[n:] if have > n else None
            return out
        need = n - have
        n_blocks = -(-need // 4)
        words = _backend.philox_blocks(self.master_seed, self.stream_id,
                                       self._block, n_blocks)
        self._block += n_blocks
        if have:
            words = np.concatenate([self._leftover, words])
        self._leftover = words[n:] if len(words) > n else None
        return words[:n]

    def uniforms(self, n):
        """n doubles uniform on the open interval (0, 1)."""
        return _backend.u64_to_unit(self.u64(n))

    def normals(self, n):
        """n standard-normal doubles."""
        return _backend.gauss_from_unit(_backend.u64_to_unit(self.u64(n)))

    def integers(self, n, bound):
        """n integers uniform on [0, bound)."""
        if bound < 1:
            raise ValueError("bound must be >= 1")
        return (self.uniforms(n) * bound).astype(np.int64)
