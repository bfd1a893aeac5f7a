# This module defines the RngOps class, a utility class for seeded, stream-split random generators.
import numpy as np

from DecisionBoot.Core.Utils.errors import ConfigError
from DecisionBoot.Core.Utils.type_ensure import TypeCheck

__all__ = [
    "RngOps",
    "BIT_GENERATORS",
    "STREAM_SPLIT",
    "STREAM_SUBSETS",
    "STREAM_ROUNDS",
    "STREAM_TEST",
    "STREAM_REPEATS",
]

BIT_GENERATORS: dict[str, type] = {
    "philox": np.random.Philox,
    "pcg64": np.random.PCG64,
}
"""Named bit generators accepted in the run config (`rng` key)."""

# Stream tags, so that every consumer of the master seed draws from its own sub-stream
STREAM_SPLIT = 0
STREAM_SUBSETS = 1
STREAM_ROUNDS = 2
STREAM_TEST = 3
STREAM_REPEATS = 4


def _ensure_seed(seed: int) -> None:
    TypeCheck.ensure_int(seed, "seed")
    if seed < 0:
        raise ConfigError(f"Constraint violated: seed >= 0 (got {seed})")


class RngOps:
    """A utility class for reproducible random number generation."""

    @staticmethod
    def make_rng(seed: int, *stream: int, bit_generator: str = "philox") -> np.random.Generator:
        """Makes a generator keyed by the seed and a stream path.

        Identical `(seed, *stream)` give bit-identical draws on every platform, since both bit generators are
        specified by NumPy independent of the machine.

        Args:
            seed (int): The master (or derived) seed.
            *stream (int): Stream tags that select an independent sub-stream.
            bit_generator (str): `philox` (counter-based, default) or `pcg64`.

        Returns:
            A `numpy.random.Generator` instance.

        Raises:
            ConfigError: The seed is negative.
            ValueError: Unknown bit generator name.
        """
        _ensure_seed(seed)
        if bit_generator not in BIT_GENERATORS:
            raise ValueError(f"Unknown bit generator '{bit_generator}' (known: {', '.join(BIT_GENERATORS)})")
        seq = np.random.SeedSequence([int(seed), *map(int, stream)])
        return np.random.Generator(BIT_GENERATORS[bit_generator](seq))

    @staticmethod
    def derive_seed(seed: int, *stream: int) -> int:
        """Derives a non-negative 63-bit sub-seed from a seed and a stream path.

        The result only depends on its arguments, hence sub-seeds of different rounds or repeats do not depend on the
        order in which they are computed.

        Args:
            seed (int): The master seed.
            *stream (int): Stream tags.

        Returns:
            The derived seed.

        Raises:
            ConfigError: The seed is negative.
        """
        _ensure_seed(seed)
        state = np.random.SeedSequence([int(seed), *map(int, stream)]).generate_state(2, dtype=np.uint32)
        return int((int(state[0]) << 31) ^ int(state[1])) & ((1 << 63) - 1)
