"""Deterministic 64-bit generator used for all randomized selection.

The algorithm is pinned (see docs/rng.md) so that any implementation of the
test language produces identical draws for identical seeds:

- seeding: state = splitmix64(seed); a zero state falls back to
  0x9E3779B97F4A7C15 (xorshift has a fixed point at zero).
- step: xorshift64 with shifts 13, 7, 17 (Marsaglia's triple).
- randbelow(n): next_u64() % n.
- unit(): top 53 bits scaled to [0, 1).
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(value: int) -> int:
    """One splitmix64 output for the given input (used only for seeding)."""
    z = (value + _SPLITMIX_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class Xorshift64:
    """Seeded xorshift64 stream; state is exposed for snapshot and replay."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self.state = splitmix64(self.seed) or _SPLITMIX_GAMMA

    def next_u64(self) -> int:
        s = self.state
        s ^= (s << 13) & _MASK64
        s ^= s >> 7
        s ^= (s << 17) & _MASK64
        self.state = s & _MASK64
        return self.state

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randbelow requires n >= 1")
        return self.next_u64() % n

    def unit(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53

    def snapshot(self) -> dict:
        return {"seed": self.seed, "state": self.state}

    @classmethod
    def restore(cls, snapshot: dict) -> "Xorshift64":
        rng = cls(snapshot["seed"])
        rng.state = snapshot["state"] & _MASK64
        return rng


# Sub-seed scrambler for auxiliary streams (e.g. the Bernoulli answer policy),
# keeping them independent of the engine's alternative-draw stream.
POLICY_STREAM_SALT = 0xB5AD4ECEDA1CE2A9


def policy_rng(seed: int) -> Xorshift64:
    return Xorshift64((seed ^ POLICY_STREAM_SALT) & _MASK64)
