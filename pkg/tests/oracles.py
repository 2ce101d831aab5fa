"""Independent reference implementations used only by the tests."""
from collections import deque
from itertools import combinations

import numpy as np


def _connected(cells):
    cells = set(cells)
    start = next(iter(cells))
    seen = {start}
    queue = deque([start])
    while queue:
        y, x = queue.popleft()
        for nb in ((y + 1, x), (y - 1, x), (y, x + 1), (y, x - 1)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return len(seen) == len(cells)


def _normalize(cells):
    y0 = min(y for y, _ in cells)
    x0 = min(x for _, x in cells)
    return frozenset((y - y0, x - x0) for y, x in cells)


def animals_by_subset_scan(k):
    """Count fixed animals by scanning every k-subset of a k x k box."""
    box = [(y, x) for y in range(k) for x in range(k)]
    found = set()
    for combo in combinations(box, k):
        if _connected(combo):
            found.add(_normalize(combo))
    return len(found)


def animals_by_growth(k_max):
    """Count fixed animals by growing every animal one cell at a time and
    deduplicating normalized shapes (stores every animal)."""
    level = {frozenset([(0, 0)])}
    counts = [1]
    for _ in range(1, k_max):
        nxt = set()
        for shape in level:
            for y, x in shape:
                for nb in ((y + 1, x), (y - 1, x), (y, x + 1), (y, x - 1)):
                    if nb not in shape:
                        nxt.add(_normalize(shape | {nb}))
        level = nxt
        counts.append(len(level))
    return counts


def bfs_component_sizes(image, color, torus):
    """Sorted component sizes of `color` by breadth-first search."""
    img = np.asarray(image) != 0
    h, w = img.shape
    target = img if color else ~img
    seen = np.zeros_like(target)
    sizes = []
    for sy in range(h):
        for sx in range(w):
            if not target[sy, sx] or seen[sy, sx]:
                continue
            seen[sy, sx] = True
            queue = deque([(sy, sx)])
            size = 0
            while queue:
                y, x = queue.popleft()
                size += 1
                for ny, nx in ((y + 1, x), (y - 1, x), (y, x + 1), (y, x - 1)):
                    if torus:
                        ny, nx = ny % h, nx % w
                    elif not (0 <= ny < h and 0 <= nx < w):
                        continue
                    if target[ny, nx] and not seen[ny, nx]:
                        seen[ny, nx] = True
                        queue.append((ny, nx))
            sizes.append(size)
    return sorted(sizes)


def bfs_same_partition(image, color, torus, labels):
    """True when `labels` induces exactly the BFS partition."""
    img = np.asarray(image) != 0
    h, w = img.shape
    target = img if color else ~img
    if np.any(labels[~target] != 0) or np.any(labels[target] == 0):
        return False
    for y in range(h):
        for x in range(w):
            if not target[y, x]:
                continue
            for ny, nx in ((y + 1, x), (y, x + 1)):
                if torus:
                    ny, nx = ny % h, nx % w
                elif ny >= h or nx >= w:
                    continue
                if target[ny, nx] and labels[ny, nx] != labels[y, x]:
                    return False
    return sorted(np.bincount(labels[target])[1:].tolist()) == bfs_component_sizes(image, color, torus)
