"""
Seeded, splittable pseudo-random streams.

Every random draw in the pipeline (cluster vertices, bootstrap resamples,
feature subsets, boosting subsamples, label flips) comes from a SeededRng.
A stream is fully determined by two things:

    origin_seed ∈ [0, 2^64)      the user's seed (``--seed 42``)
    label path                   e.g. "tree/7" or "bootstrap/7"

Construction
────────────
    root  = xoshiro256**( splitmix64-expansion(seed) )
    child = xoshiro256**( splitmix64-expansion( H(seed || path) ) )

where H is the first 8 bytes of SHA-256, the same ``hash(seed || index)``
trick a lazy digest uses to extend a finite seed, applied to labels instead
of indices. Because a child depends only on (origin_seed, path):

- splitting never advances the parent;
- adding a new labelled stream never perturbs existing ones;
- trees trained in any order, on any number of workers, see the same draws.
"""

import hashlib
import math
from typing import List, Optional

import numpy as np

from .errors import InvalidArgumentError

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
TWO_NEG_53 = 2.0 ** -53
TWO_PI = 2.0 * math.pi


def splitmix64(state: int):
    """
    One step of the splitmix64 mixing function.

    :param state: Current 64-bit state.
    :return: ``(next_state, output)``, both 64-bit integers.
    """
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def _expand(key: int) -> List[int]:
    """Expand a 64-bit key into four xoshiro state words."""
    words = []
    state = key
    for _ in range(4):
        state, out = splitmix64(state)
        words.append(out)
    return words


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidArgumentError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise InvalidArgumentError(f"seed must be in [0, 2^64), got {seed}")
    return seed


def _box_muller(u1: float, u2: float):
    # 1 - u1 lies in (0, 1], so the logarithm is finite
    radius = math.sqrt(-2.0 * math.log(1.0 - u1))
    angle = TWO_PI * u2
    return radius * math.cos(angle), radius * math.sin(angle)


class SeededRng:
    """
    A xoshiro256** generator tagged with where it came from.

    Mathematical Type: (seed, path) → [0, 2^64)^∞

    Instances are single-consumer. Hand each parallel worker its own child
    from :meth:`split` before distributing work.
    """

    def __init__(self, origin_seed: int, stream_label: str = "", state=None):
        """
        :param origin_seed: The user seed this stream descends from.
        :param stream_label: Full label path ("" for the root stream).
        :param state: Four 64-bit words; derived from seed and label if omitted.
        """
        self.origin_seed = _check_seed(origin_seed)
        self.stream_label = stream_label
        if state is None:
            state = _expand(self._key())
        self._s = [int(w) & MASK64 for w in state]
        self._spare: Optional[float] = None

    def _key(self) -> int:
        if not self.stream_label:
            return self.origin_seed
        h = hashlib.sha256()
        h.update(self.origin_seed.to_bytes(8, "little"))
        h.update(self.stream_label.encode("utf-8"))
        return int.from_bytes(h.digest()[:8], "little")

    @property
    def state(self) -> tuple:
        """The 256-bit internal state as four 64-bit words."""
        return tuple(self._s)

    def split(self, label: str) -> "SeededRng":
        """
        Derive an independent child stream.

        :param label: Nonempty label appended to this stream's path.
        :return: A fresh generator; this generator is not advanced.
        """
        if not isinstance(label, str) or not label:
            raise InvalidArgumentError("stream label must be a nonempty string")
        path = f"{self.stream_label}/{label}" if self.stream_label else label
        return SeededRng(self.origin_seed, path)

    def _u64_block(self, count: int) -> List[int]:
        s0, s1, s2, s3 = self._s
        out = [0] * count
        for i in range(count):
            r = (s1 * 5) & MASK64
            r = ((r << 7) | (r >> 57)) & MASK64
            out[i] = (r * 9) & MASK64
            t = (s1 << 17) & MASK64
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= t
            s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
        self._s = [s0, s1, s2, s3]
        return out

    def next_u64(self) -> int:
        """Next raw 64-bit output."""
        return self._u64_block(1)[0]

    def next_uniform(self) -> float:
        """Next real in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * TWO_NEG_53

    def next_normal(self) -> float:
        """
        Next standard normal draw (Box–Muller on two uniforms).

        Draws come in pairs; the second of each pair is cached and returned
        by the following call.
        """
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        u1 = self.next_uniform()
        u2 = self.next_uniform()
        z0, z1 = _box_muller(u1, u2)
        self._spare = z1
        return z0

    def _bounded(self, x: int, bound: int) -> int:
        # Lemire's multiply-shift with rejection; unbiased
        m = x * bound
        if (m & MASK64) < bound:
            threshold = ((MASK64 + 1) - bound) % bound
            while (m & MASK64) < threshold:
                m = self.next_u64() * bound
        return m >> 64

    def next_below(self, bound: int) -> int:
        """
        Uniform integer in [0, bound).

        :param bound: Positive exclusive upper bound.
        """
        if bound <= 0:
            raise InvalidArgumentError(f"bound must be positive, got {bound}")
        return self._bounded(self.next_u64(), bound)

    def uniforms(self, n: int) -> np.ndarray:
        """``n`` consecutive :meth:`next_uniform` draws as a float64 array."""
        return np.array(
            [(x >> 11) * TWO_NEG_53 for x in self._u64_block(n)], dtype=np.float64
        )

    def normals(self, n: int) -> np.ndarray:
        """``n`` consecutive :meth:`next_normal` draws as a float64 array."""
        out: List[float] = []
        if n <= 0:
            return np.zeros(0, dtype=np.float64)
        if self._spare is not None:
            out.append(self._spare)
            self._spare = None
        pairs = (n - len(out) + 1) // 2
        raw = self._u64_block(2 * pairs)
        for i in range(pairs):
            z0, z1 = _box_muller(
                (raw[2 * i] >> 11) * TWO_NEG_53, (raw[2 * i + 1] >> 11) * TWO_NEG_53
            )
            out.append(z0)
            out.append(z1)
        if len(out) > n:
            self._spare = out.pop()
        return np.array(out, dtype=np.float64)

    def integers(self, bound: int, size: int) -> np.ndarray:
        """``size`` independent uniform integers in [0, bound), with replacement."""
        if bound <= 0:
            raise InvalidArgumentError(f"bound must be positive, got {bound}")
        raw = self._u64_block(size)
        return np.array([self._bounded(x, bound) for x in raw], dtype=np.intp)

    def sample(self, n: int, k: int) -> np.ndarray:
        """
        Draw ``k`` distinct integers from [0, n) by partial Fisher–Yates.

        :return: The drawn integers in draw order.
        """
        if not 0 <= k <= n:
            raise InvalidArgumentError(f"cannot draw {k} distinct values from {n}")
        pool = list(range(n))
        raw = self._u64_block(k)
        for i in range(k):
            j = i + self._bounded(raw[i], n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return np.array(pool[:k], dtype=np.intp)

    def permutation(self, n: int) -> np.ndarray:
        """A uniformly random permutation of [0, n)."""
        return self.sample(n, n)

    def __repr__(self):
        return (
            f"SeededRng(origin_seed={self.origin_seed}, "
            f"stream_label={self.stream_label!r})"
        )


def rng_from_seed(seed: int) -> SeededRng:
    """
    Root stream for a seed.

    :param seed: 64-bit non-negative integer.
    """
    return SeededRng(seed)


def rng_split(parent: SeededRng, stream_label: str) -> SeededRng:
    """Child stream of ``parent`` under ``stream_label``."""
    return parent.split(stream_label)


def next_uniform(rng: SeededRng) -> float:
    """Next uniform draw in [0, 1) from ``rng``."""
    return rng.next_uniform()


def next_normal(rng: SeededRng) -> float:
    """Next standard normal draw from ``rng``."""
    return rng.next_normal()
