"""Counter-based random streams keyed by (seed, index).

Every stochastic routine draws from ``stream(seed, index, purpose)``: a
Philox generator whose 128-bit key is ``(seed, index)`` and whose counter
starts at a purpose-specific offset. Results therefore depend only on the
seed and the index of the replica (or block), never on scheduling.
Normal variates use numpy's ziggurat sampler; the Gaussian chain uses
inverse-CDF transforms of uniforms instead.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

# Purpose tags occupy the top word of the 256-bit Philox counter.
INPUT_PAIR = 1
NETWORK = 2
PROJECTED = 3
CHAIN = 4

_MASK64 = (1 << 64) - 1


def stream(seed: int, index: int, purpose: int) -> np.random.Generator:
    if seed < 0 or seed > _MASK64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    key = np.array([seed, index & _MASK64], dtype=np.uint64)
    counter = np.array([0, 0, 0, purpose], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(counter=counter, key=key))


def default_threads() -> int:
    value = os.environ.get("DEPTHDEGEN_THREADS")
    if value:
        return max(1, int(value))
    return 1


def map_blocks(func, n_blocks: int, threads: int | None = None) -> list:
    """Evaluate ``func(b)`` for each block index, returning results in order."""
    threads = threads or default_threads()
    if threads <= 1 or n_blocks <= 1:
        return [func(b) for b in range(n_blocks)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, range(n_blocks)))
