"""Deterministic 64-bit pseudo-random generator used everywhere randomness is needed.

The generator is SplitMix64 (Steele, Lea & Flood), a member of the xorshift
family of mix-based generators.  It is chosen because the algorithm is tiny,
fully specified by integer arithmetic (so results are identical on every
platform and Python build), and trivially splittable: independent streams are
derived by mixing a stream identifier into the seed.  Fold shuffling and the
random-projection index vectors both rely on this module, which is what makes
serialized artifacts byte-reproducible given the same seed.
"""

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_STREAM_SALT = 0x517CC1B727220A95


def mix64(z: int) -> int:
    """The SplitMix64 finalizer: a bijective avalanche mix of a 64-bit word."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 stream. state advances by the 64-bit golden ratio each draw."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    @classmethod
    def for_stream(cls, seed: int, stream: int) -> "SplitMix64":
        """Independent child stream, e.g. one per feature ID.

        The child seed is mix64(seed) XOR mix64(stream XOR salt), so streams
        with nearby ids are decorrelated.
        """
        return cls(mix64(seed) ^ mix64((stream ^ _STREAM_SALT) & _MASK64))

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n). Plain modulo; the bias is < n / 2**64."""
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next_u64() % n

    def next_float(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle driven by this stream."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, n: int, k: int) -> list:
        """k distinct integers drawn from [0, n), in draw order.

        Implemented as a partial Fisher-Yates over a virtual range so the cost
        is O(k) even when k is close to n.
        """
        if k > n:
            raise ValueError("cannot sample more items than the population")
        state: dict = {}
        out = []
        for i in range(k):
            j = i + self.next_below(n - i)
            vi = state.get(i, i)
            vj = state.get(j, j)
            state[i] = vj
            state[j] = vi
            out.append(vj)
        return out
