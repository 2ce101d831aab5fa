"""
Seeded impulse-noise generators.

Randomness comes from numpy's PCG64 bit generator.  Per-pixel uniforms are
drawn as one array in row-major order, so a given seed yields the same
image on every platform.
"""
from __future__ import annotations

import numpy as np

from grainstat._validation import check_gray_image


def make_rng(seed=None) -> np.random.Generator:
    """PCG64 generator from an int, a seed sequence entropy tuple, or an
    existing generator (returned as is)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def _check_prob(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


def corrupt_binary(image, p: float, q: float = 0.0, seed=None) -> np.ndarray:
    """Flip 1-pixels to 0 with probability ``p`` and 0-pixels to 1 with
    probability ``q``, independently per pixel."""
    _check_prob("p", p)
    _check_prob("q", q)
    image = np.asarray(image) != 0
    u = make_rng(seed).random(image.shape)
    flip = np.where(image, u < p, u < q)
    return image ^ flip


def corrupt_gray(image, p: float, seed=None) -> np.ndarray:
    """Replace each pixel, with probability ``p``, by a level drawn uniformly
    from {0, ..., 255}."""
    _check_prob("p", p)
    image = check_gray_image(image)
    rng = make_rng(seed)
    hit = rng.random(image.shape) < p
    levels = rng.integers(0, 256, size=image.shape, dtype=np.uint8)
    return np.where(hit, levels, image).astype(np.uint8)
