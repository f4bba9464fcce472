"""Seeded pseudo-random numbers for reproducible runs.

Everything random in this package (weight init, shuffles, synthetic data)
draws from :class:`XorShift64`, a vectorized xorshift64* generator. Results
therefore do not depend on the numpy version or global RNG state.
"""

from __future__ import annotations

import numpy as np

_U64 = np.uint64
_MULT = _U64(0x2545F4914F6CDD1D)
_GOLDEN = _U64(0x9E3779B97F4A7C15)


def splitmix64(x: int) -> int:
    """One splitmix64 mixing step; used to expand a seed into stream states."""
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


def mix_seed(*parts: int) -> int:
    """Fold several integers (seed, epoch, stream tag...) into one 64-bit seed."""
    acc = 0x9E3779B97F4A7C15
    for p in parts:
        acc = splitmix64(acc ^ (p & 0xFFFFFFFFFFFFFFFF))
    return acc


class XorShift64:
    """xorshift64* generator over a fixed number of parallel streams.

    The serial xorshift recurrence does not vectorize, so we run `n_streams`
    independent streams (states seeded by splitmix64) and interleave their
    outputs round-robin. The resulting sequence is deterministic for a given
    (seed, n_streams).
    """

    def __init__(self, seed: int, n_streams: int = 64):
        if n_streams < 1:
            raise ValueError("n_streams must be >= 1")
        states = []
        s = seed & 0xFFFFFFFFFFFFFFFF
        for i in range(n_streams):
            s = splitmix64(s ^ i)
            states.append(s if s != 0 else 0x1234567887654321)
        self._state = np.array(states, dtype=_U64)
        self._buf = np.empty(0, dtype=np.float64)
        self._pos = 0

    def _step(self) -> np.ndarray:
        """Advance every stream once; returns n_streams uint64 outputs."""
        x = self._state
        with np.errstate(over="ignore"):
            x ^= x >> _U64(12)
            x ^= (x << _U64(25)) & _U64(0xFFFFFFFFFFFFFFFF)
            x ^= x >> _U64(27)
            out = x * _MULT
        self._state = x
        return out

    def _refill(self, n: int):
        rounds = -(-n // len(self._state))
        blocks = np.empty((rounds, len(self._state)), dtype=_U64)
        for r in range(rounds):
            blocks[r] = self._step()
        # top 53 bits -> float64 in [0, 1)
        self._buf = (blocks.ravel() >> _U64(11)).astype(np.float64) * (2.0 ** -53)
        self._pos = 0

    def uniform(self, size=None, low: float = 0.0, high: float = 1.0):
        """Uniform floats in [low, high). Scalar when size is None."""
        n = 1 if size is None else int(np.prod(size))
        if self._pos + n > len(self._buf):
            leftover = self._buf[self._pos:]
            self._refill(n - len(leftover))
            self._buf = np.concatenate([leftover, self._buf])
        out = self._buf[self._pos:self._pos + n]
        self._pos += n
        out = low + (high - low) * out
        if size is None:
            return float(out[0])
        return out.reshape(size).copy()

    def normal(self, size=None, mean: float = 0.0, std: float = 1.0):
        """Gaussian samples via Box-Muller."""
        n = 1 if size is None else int(np.prod(size))
        half = -(-n // 2)
        u1 = 1.0 - self.uniform(half)  # (0, 1]: keeps log() finite
        u2 = self.uniform(half)
        r = np.sqrt(-2.0 * np.log(u1))
        z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])[:n]
        z = mean + std * z
        if size is None:
            return float(z[0])
        return z.reshape(size)

    def permutation(self, n: int) -> np.ndarray:
        """Deterministic shuffle of range(n) by sorting random keys."""
        keys = self.uniform(n)
        return np.argsort(keys, kind="stable")

    def integers(self, low: int, high: int, size=None):
        """Integers in [low, high)."""
        u = self.uniform(size)
        out = np.floor(low + (high - low) * np.asarray(u)).astype(np.int64)
        out = np.minimum(out, high - 1)
        if size is None:
            return int(out)
        return out


def glorot_uniform(rng: XorShift64, shape, fan_in: int, fan_out: int) -> np.ndarray:
    """Uniform init in +-sqrt(6/(fan_in+fan_out))."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(shape, -limit, limit)
