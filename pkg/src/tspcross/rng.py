"""Seeded random stream used by the GA and the stochastic crossovers.

All randomness in the library flows through :class:`RandomStream` so that a
run is fully determined by its seed.  Only ``randrange`` touches the
underlying generator; shuffling and pair sampling are built on top of it,
which keeps the draw sequence independent of stdlib implementation details.
"""

from __future__ import annotations

import random


class RandomStream:
    """Deterministic source of uniform integers in a range.

    The same seed yields the same draw sequence on every platform.
    """

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def randrange(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n <= 0:
            raise ValueError(f"randrange bound must be positive, got {n}")
        return self._rng.randrange(n)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]`` inclusive."""
        return lo + self.randrange(hi - lo + 1)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle driven by ``randrange``."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def pair(self, n: int) -> tuple[int, int]:
        """Two distinct indices from ``range(n)``, drawn without replacement."""
        if n < 2:
            raise ValueError("need at least 2 items to draw a pair")
        i = self.randrange(n)
        j = self.randrange(n - 1)
        if j >= i:
            j += 1
        return i, j

    def random_permutation(self, n: int) -> tuple[int, ...]:
        """A uniformly random permutation of ``0..n-1``."""
        items = list(range(n))
        self.shuffle(items)
        return tuple(items)
