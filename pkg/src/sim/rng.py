"""Order-independent random streams for Monte Carlo blocks.

Trial i lives in block i // block_size at row i % block_size. Each block's
generator is keyed by (master_seed, block_index) only, so a block can be
evaluated by any worker in any order.
"""

from typing import List, Tuple

import numpy as np


def block_generator(master_seed: int, block_index: int) -> np.random.Generator:
    """Generator for one block of trials."""
    return np.random.default_rng(np.random.SeedSequence(entropy=master_seed, spawn_key=(block_index,)))


def locate_trial(trial_index: int, block_size: int) -> Tuple[int, int]:
    """(block index, row) holding a trial."""
    return divmod(trial_index, block_size)


def block_layout(n_trials: int, block_size: int) -> List[Tuple[int, int]]:
    """
    Split a trial count into blocks.

    Returns:
        List of (block index, rows used); only the last block is partial
    """
    full, rest = divmod(n_trials, block_size)
    layout = [(index, block_size) for index in range(full)]
    if rest:
        layout.append((full, rest))
    return layout
