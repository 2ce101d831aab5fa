"""
Grey-level impulse-noise removal through threshold decomposition.

A grey image u with levels 0..255 equals the sum of its upper level sets
``u >= lam`` for lam = 1..255.  Impulse noise of density p turns each level
set into a binary image whose 1-pixels drop out with density ``p*lam/256``
and whose 0-pixels light up with density ``p*(1 - lam/256)``.  Every slice
is cleaned with its own pair of area thresholds and the slices are summed
back.  The filtered stack need not stay nested, so the result is not a
morphological filter in the strict sense.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from grainstat._validation import check_gray_image
from grainstat.animals import AnimalTable, default_table
from grainstat.morpho import remove_small_components
from grainstat.probcalc import ThresholdQuery, size_threshold

NUM_LEVELS = 256
LEVELS = np.arange(1, NUM_LEVELS)


def level_densities(p: float) -> tuple[np.ndarray, np.ndarray]:
    """Spurious-zero and spurious-one densities for lam = 1..255."""
    return p * LEVELS / NUM_LEVELS, p * (1.0 - LEVELS / NUM_LEVELS)


@dataclass(frozen=True)
class LevelStack:
    """Binary slices of a grey image, ``slices[lam - 1] = (u >= lam)``.

    ``p`` is the impulse density the stack is to be filtered for, when known.
    """

    slices: np.ndarray
    p: float | None = None

    @property
    def p_levels(self) -> np.ndarray:
        return level_densities(self._require_p())[0]

    @property
    def q_levels(self) -> np.ndarray:
        return level_densities(self._require_p())[1]

    def _require_p(self):
        if self.p is None:
            raise ValueError("this stack carries no noise density")
        return self.p


def decompose(u, p: float | None = None) -> LevelStack:
    """Threshold decomposition into 255 nested binary slices."""
    u = check_gray_image(u)
    return LevelStack(u[None, :, :] >= LEVELS[:, None, None], p)


def reconstruct(stack) -> np.ndarray:
    """Pixelwise sum of the slices (nesting is not required)."""
    slices = stack.slices if isinstance(stack, LevelStack) else np.asarray(stack)
    if slices.shape[0] > NUM_LEVELS - 1:
        raise ValueError(f"at most {NUM_LEVELS - 1} slices, got {slices.shape[0]}")
    return slices.sum(axis=0, dtype=np.int64).astype(np.uint8)


def level_thresholds(
    shape: tuple[int, int],
    p: float,
    eps: float,
    table: AnimalTable | None = None,
    *,
    force: bool = False,
) -> np.ndarray:
    """Array of shape (255, 2): column 0 is the 0-component threshold
    s(p_lam), column 1 the 1-component threshold s(q_lam)."""
    table = default_table() if table is None else table
    height, width = shape
    cache: dict[float, int] = {}

    def s(density):
        if density not in cache:
            query = ThresholdQuery(width, height, float(density), eps)
            cache[density] = size_threshold(query, table, force=force)
        return cache[density]

    p_lev, q_lev = level_densities(p)
    return np.array([[s(a), s(b)] for a, b in zip(p_lev, q_lev)], dtype=np.int64)


def filter_stack(stack: LevelStack, thresholds: np.ndarray, n_jobs: int = 1) -> np.ndarray:
    """Clean every slice with its own thresholds; returns the new slices."""
    slices = stack.slices

    def run(i):
        s0, s1 = thresholds[i]
        # same pass order as morpho.denoise_binary
        first = remove_small_components(slices[i], 0, int(s0))
        return remove_small_components(first, 1, int(s1))

    if n_jobs == 1:
        out = [run(i) for i in range(len(slices))]
    else:
        with ThreadPoolExecutor(max_workers=None if n_jobs < 1 else n_jobs) as pool:
            out = list(pool.map(run, range(len(slices))))
    return np.stack(out) if out else slices.copy()


def denoise_gray(
    v,
    p: float,
    eps: float,
    table: AnimalTable | None = None,
    *,
    n_jobs: int = 1,
    force: bool = False,
    return_stack: bool = False,
):
    """Remove impulse noise of density ``p`` from grey image ``v``.

    Parameters
    ----------
    v : array_like, shape (height, width)
        Levels in [0, 255].
    p : float
        Impulse-noise density, at most ``P_MAX`` unless ``force``.
    eps : float
        Risk level: chance that pure noise survives the filter.
    table : AnimalTable, optional
        Defaults to the cached table up to the enumeration cap.
    n_jobs : int
        Worker threads for the per-level passes (-1: one per core).
    return_stack : bool
        Also return the filtered slices (for :func:`nesting_fraction`).
    """
    stack = decompose(v, p)
    thresholds = level_thresholds(stack.slices.shape[1:], p, eps, table, force=force)
    filtered = filter_stack(stack, thresholds, n_jobs)
    out = reconstruct(filtered)
    return (out, filtered) if return_stack else out


def nesting_fraction(slices) -> float:
    """Fraction of lam in 2..255 whose slice lies pointwise under slice lam-1."""
    slices = slices.slices if isinstance(slices, LevelStack) else np.asarray(slices)
    if len(slices) < 2:
        return 1.0
    nested = ~np.any(slices[1:] & ~slices[:-1], axis=(1, 2))
    return float(nested.mean())
