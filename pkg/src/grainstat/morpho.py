"""
Area opening/closing on binary images and the two-pass impulse-noise filter.

Both colours are handled with 4-connectivity on a plain (non-periodic) grid.
"""
from __future__ import annotations

import numpy as np

from grainstat.ccl import label_components
from grainstat.probcalc import DenoisePlan


def invert(image) -> np.ndarray:
    return np.asarray(image) == 0


def remove_small_components(image, color: int, s: int, boundary: str = "plain") -> np.ndarray:
    """Flip every ``color`` component with fewer than ``s`` pixels.

    Returns a new boolean image; ``s=1`` is the identity.  Components with
    at least ``s`` pixels are never touched.
    """
    if s < 1:
        raise ValueError(f"area threshold must be >= 1, got {s}")
    out = np.asarray(image) != 0
    if s == 1:
        return out.copy()
    comps = label_components(out, color, boundary)
    small = comps.sizes < s
    small[0] = False
    flip = small[comps.labels]
    out = out.copy()
    out[flip] = not color
    return out


def _check_plan(image, plan):
    shape = np.shape(image)
    if shape != plan.shape:
        raise ValueError(f"image shape {shape} does not match plan shape {plan.shape}")


def denoise_binary(image, plan: DenoisePlan) -> np.ndarray:
    """Remove small 0-components (threshold ``plan.s_zeros``), then small
    1-components (threshold ``plan.s_ones``)."""
    _check_plan(image, plan)
    first = remove_small_components(image, 0, plan.s_zeros)
    return remove_small_components(first, 1, plan.s_ones)


def denoise_binary_swapped(image, plan: DenoisePlan) -> np.ndarray:
    """Same passes as :func:`denoise_binary` in the opposite order.

    The two orders do not commute; they differ near component boundaries.
    """
    _check_plan(image, plan)
    first = remove_small_components(image, 1, plan.s_ones)
    return remove_small_components(first, 0, plan.s_zeros)
