"""
4-connected component labeling of one colour of a binary image.

Binary images are 2-D numpy arrays (bool or 0/1 integers).  The labeling is
a two-pass union-find (path compression, union by size) compiled with numba;
``boundary="torus"`` adds the wrap-around adjacencies of a periodic grid.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

BOUNDARIES = ("plain", "torus")


@numba.njit(cache=True, nogil=True)
def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@numba.njit(cache=True, nogil=True)
def _union(parent, size, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra == rb:
        return
    if size[ra] < size[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    size[ra] += size[rb]


@numba.njit(cache=True, nogil=True)
def _label_kernel(mask, torus):
    h, w = mask.shape
    npix = h * w
    parent = np.arange(npix, dtype=np.int64)
    size = np.ones(npix, dtype=np.int64)
    for i in range(h):
        for j in range(w):
            if not mask[i, j]:
                continue
            idx = i * w + j
            if j > 0 and mask[i, j - 1]:
                _union(parent, size, idx, idx - 1)
            if i > 0 and mask[i - 1, j]:
                _union(parent, size, idx, idx - w)
    if torus:
        for i in range(h):
            if mask[i, 0] and mask[i, w - 1]:
                _union(parent, size, i * w, i * w + w - 1)
        for j in range(w):
            if mask[0, j] and mask[h - 1, j]:
                _union(parent, size, j, (h - 1) * w + j)

    labels = np.zeros((h, w), dtype=np.int32)
    root_label = np.zeros(npix, dtype=np.int32)
    counts = np.zeros(npix + 1, dtype=np.int64)
    n = 0
    for i in range(h):
        for j in range(w):
            if not mask[i, j]:
                continue
            r = _find(parent, i * w + j)
            lab = root_label[r]
            if lab == 0:
                n += 1
                lab = n
                root_label[r] = lab
            labels[i, j] = lab
            counts[lab] += 1
    return labels, counts[: n + 1].copy(), n


@dataclass(frozen=True)
class ComponentSet:
    """Result of :func:`label_components`.

    Attributes
    ----------
    labels : ndarray of int32
        Component id per pixel, dense in ``1..count``; 0 marks pixels of the
        other colour.
    sizes : ndarray of int64
        ``sizes[label]`` is the pixel count of that component; ``sizes[0]``
        is always 0.
    count : int
    """

    labels: np.ndarray
    sizes: np.ndarray
    count: int

    def size_map(self) -> dict[int, int]:
        return {lab: int(self.sizes[lab]) for lab in range(1, self.count + 1)}


def label_components(image, color: int = 1, boundary: str = "plain") -> ComponentSet:
    """Label the 4-connected components of pixels equal to ``color``.

    Parameters
    ----------
    image : array_like, shape (height, width)
        Binary image.
    color : {0, 1}
        Which colour's components to label.
    boundary : {"plain", "torus"}
        ``"torus"`` joins the first and last rows and columns.  A dimension
        of 1 wraps onto itself and adds no adjacency.
    """
    image = np.asarray(image)
    if image.ndim != 2:
        raise ValueError(f"expected a 2-D image, got shape {image.shape}")
    if color not in (0, 1):
        raise ValueError(f"color must be 0 or 1, got {color!r}")
    if boundary not in BOUNDARIES:
        raise ValueError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")
    torus = boundary == "torus"
    mask = (image != 0) if color else (image == 0)
    if mask.size == 0:
        return ComponentSet(np.zeros(image.shape, np.int32), np.zeros(1, np.int64), 0)
    labels, sizes, count = _label_kernel(np.ascontiguousarray(mask), torus)
    sizes[0] = 0
    return ComponentSet(labels, sizes, int(count))


def component_size_histogram(components: ComponentSet) -> dict[int, int]:
    """Map component size to the number of components of that size."""
    if components.count == 0:
        return {}
    values, freq = np.unique(components.sizes[1:], return_counts=True)
    return {int(v): int(f) for v, f in zip(values, freq)}
