# core/sampler.py
# Samples from interpolating copulas of a discrete joint.
#
# Sample i belongs to block i // SAMPLER_BLOCK_SIZE; every block has its own
# Philox stream keyed by (seed, block), so any index range comes out the same
# whether it is produced in one call, in pieces, or by several threads.

from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from config.settings import SAMPLER_BLOCK_SIZE
from core.copulas import RandomizationScheme
from core.errors import InputError
from core.measures import JointDistribution

_SEED_MASK = (1 << 64) - 1


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Counter-based stream for one block; key = seed | block << 64"""
    key = (int(seed) & _SEED_MASK) | (int(block) << 64)
    return np.random.Generator(np.random.Philox(key=key))


class _Layout:
    """Cell table and cdf offsets of J shared by all blocks"""

    def __init__(self, J: JointDistribution):
        flat = J.pmf.ravel()
        self.n_x, self.n_y = J.shape
        self.cells = np.flatnonzero(flat > 0)
        cum = np.cumsum(flat[self.cells])
        cum[-1] = 1.0
        self.cum = cum
        px = J.pmf.sum(axis=1)
        py = J.pmf.sum(axis=0)
        self.px, self.py = px, py
        self.left_x = np.cumsum(px) - px    # F_X(x-)
        self.left_y = np.cumsum(py) - py


def _sample_block(layout: _Layout, scheme: RandomizationScheme, seed: int, block: int) -> np.ndarray:
    rng = block_generator(seed, block)
    B = SAMPLER_BLOCK_SIZE
    if scheme.mode == "independent":
        draws = rng.random((B, 1 + layout.n_x + layout.n_y))
    else:
        draws = rng.random((B, 3))

    picked = layout.cells[np.searchsorted(layout.cum, draws[:, 0], side="right")]
    xi, yi = np.divmod(picked, layout.n_y)

    # 1 - uniform lies in (0, 1]
    rows = np.arange(B)
    if scheme.mode == "shared":
        t = 1.0 - draws[:, 1]
        w = 1.0 - draws[:, 2]
    elif scheme.mode == "independent":
        t = 1.0 - draws[rows, 1 + xi]
        w = 1.0 - draws[rows, 1 + layout.n_x + yi]
    else:
        t = 1.0 - draws[:, 1]
        w = 1.0 - t

    u = layout.left_x[xi] + layout.px[xi] * t
    v = layout.left_y[yi] + layout.py[yi] * w
    return np.column_stack([u, v])


def interpolating_sample(J: JointDistribution, scheme: RandomizationScheme, n: int, seed: int,
                         start: int = 0, workers: Optional[int] = None) -> np.ndarray:
    """Samples start .. start + n - 1 as an (n, 2) array of (u, v)"""
    if n < 1:
        raise InputError(f"sample size must be >= 1, got {n}")
    if start < 0:
        raise InputError(f"start index must be >= 0, got {start}")
    layout = _Layout(J)
    B = SAMPLER_BLOCK_SIZE
    first, last = start // B, (start + n - 1) // B
    blocks = range(first, last + 1)

    if workers and workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(lambda b: _sample_block(layout, scheme, seed, b), blocks))
    else:
        parts = [_sample_block(layout, scheme, seed, b) for b in blocks]

    out = np.concatenate(parts)
    offset = start - first * B
    return out[offset:offset + n]
