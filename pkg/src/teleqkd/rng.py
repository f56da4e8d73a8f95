"""Counter-based uniforms addressed by (seed, round index).

Round i always receives the same block of uniforms no matter how a run is
split into chunks or spread over workers, which is what makes transcripts
reproducible under parallel execution.
"""

from __future__ import annotations

import numpy as np

UNIFORMS_PER_ROUND = 8
# Philox emits four 64-bit words per counter step
_WORDS_PER_STEP = 4


def round_uniforms(seed: int, start: int, stop: int, k: int = UNIFORMS_PER_ROUND) -> np.ndarray:
    """Uniforms in [0, 1) for rounds start..stop-1 as a (stop-start, k) array."""
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed {seed} must be a 64-bit unsigned integer")
    if not 0 <= start <= stop:
        raise ValueError(f"bad round range [{start}, {stop})")
    if k % _WORDS_PER_STEP:
        raise ValueError(f"k = {k} must be a multiple of {_WORDS_PER_STEP}")
    bits = np.random.Philox(key=seed, counter=[start * k // _WORDS_PER_STEP, 0, 0, 0])
    return np.random.Generator(bits).random((stop - start, k))


def stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for trial `index` of a master seed."""
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, index]))
