"""Counter-based random number streams.

Every sampler in this package takes an explicit RngStream.  Streams are
addressed by a (seed, stream_id) pair of 64-bit integers fed to the Philox
counter-based generator, so equal addresses reproduce draws bit for bit and
distinct addresses give statistically independent streams.  Replicas can
therefore be farmed out in any order (or in parallel) without changing
results.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_MASK64 = (1 << 64) - 1


def _mix64(x: int) -> int:
    # splitmix64 finalizer; decorrelates structured stream ids
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class RngStream:
    """Addressed source of randomness: (seed, stream_id) -> Philox generator."""

    seed: int
    stream_id: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bitgen = np.random.Philox(key=[self.seed & _MASK64, _mix64(self.stream_id)])
        object.__setattr__(self, "_gen", np.random.Generator(bitgen))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def derive(self, child: int) -> "RngStream":
        """Child stream with a deterministically derived id."""
        return RngStream(self.seed, _mix64(self.stream_id * 0x10001 + child + 1))

    def fresh(self) -> "RngStream":
        """Same address, freshly rewound generator."""
        return RngStream(self.seed, self.stream_id)
