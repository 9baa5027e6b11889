"""Counter-based random streams with order-independent per-trial substreams.

Every Monte Carlo trial draws from a substream determined only by
(master seed, trial index), so results do not depend on execution order or
thread count.  Streams are backed by the Philox counter-based generator:
substream ``i`` owns the counter block starting at ``(i + 1) << 192``, giving
each trial 2**192 counter steps of private room.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

_BLOCK_SHIFT = 192
_MAX_SEED = 2**64
_INV_2_53 = 2.0**-53


class SeededStream:
    """Seeded Philox stream; ``substream(i)`` is a pure function of (seed, i)."""

    def __init__(self, seed: int, _block: int = 0):
        seed = int(seed)
        if not 0 <= seed < _MAX_SEED:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self._block = int(_block)
        self._gen = np.random.Generator(
            np.random.Philox(key=seed, counter=self._block << _BLOCK_SHIFT)
        )

    def substream(self, index: int) -> "SeededStream":
        """Independent stream for trial ``index``.  Single-level only."""
        if index < 0:
            raise DomainError(f"substream index must be nonnegative, got {index}")
        if self._block != 0:
            raise DomainError("substreams cannot be derived from a substream")
        return SeededStream(self.seed, index + 1)

    def uniform(self) -> float:
        """One double uniform on [0, 1)."""
        return float(self._gen.random())

    def uniforms(self, n: int) -> np.ndarray:
        """``n`` double uniforms on [0, 1)."""
        return self._gen.random(int(n))

    def uniform_block(self, n_streams: int, draws: int, first: int = 0) -> np.ndarray:
        """Matrix whose row ``i`` equals ``substream(first + i).uniforms(draws)``.

        Fast path for Monte Carlo loops: one Philox instance jumps between the
        per-trial counter blocks instead of being rebuilt per trial.  Only a
        master stream can produce blocks.
        """
        if self._block != 0:
            raise DomainError("uniform_block requires a master stream")
        if n_streams < 0 or draws <= 0 or first < 0:
            raise DomainError("uniform_block needs n_streams >= 0, draws > 0, first >= 0")
        out = np.empty((n_streams, draws))
        if n_streams == 0:
            return out
        bitgen = np.random.Philox(key=self.seed)
        steps = -(-draws // 4)  # Philox emits 4 uint64 per counter step
        position = 0
        for i in range(n_streams):
            target = (first + i + 1) << _BLOCK_SHIFT
            bitgen.advance(target - position)
            raw = bitgen.random_raw(draws)
            position = target + steps
            out[i] = (raw >> 11) * _INV_2_53
        return out
