"""
Local patterns on diamond-shaped balls and the indices that govern their
appearance in sparse random images.

A pattern is a black-pixel subset of the ball ``B(0, r) = {y : |y0|+|y1| <= r}``.
A local property is any predicate over patterns on one ball.  Its black
index b is the fewest black pixels a satisfying pattern can have; its
meaningful index e counts the satisfying b-pixel black sets up to
translation.  With density ``c * n**(-2/b)`` on an n x n torus the property
appears somewhere with probability tending to ``1 - exp(-e * c**b)``.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable

import numpy as np

from grainstat.exceptions import ParameterError

Offset = tuple[int, int]

# 2**13 entries for r = 2; r = 3 (25 cells) falls back to per-mask calls
TRUTH_TABLE_MAX_CELLS = 16
DEFINITION_SET_MAX_RADIUS = 2
DEFAULT_B_CAP = 5


@dataclass(frozen=True)
class Ball:
    """Diamond of radius ``r``; offsets are ``(row, col)`` pairs in sorted order."""

    radius: int
    offsets: tuple[Offset, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        r = self.radius
        if int(r) != r or r < 0:
            raise ParameterError(f"ball radius must be a non-negative integer, got {r!r}")
        offs = tuple(
            (dy, dx)
            for dy in range(-r, r + 1)
            for dx in range(-r, r + 1)
            if abs(dy) + abs(dx) <= r
        )
        object.__setattr__(self, "offsets", offs)

    def __len__(self):
        return len(self.offsets)

    @cached_property
    def index(self) -> dict[Offset, int]:
        return {o: i for i, o in enumerate(self.offsets)}

    def mask_of(self, black) -> int:
        idx = self.index
        return sum(1 << idx[o] for o in black)

    def black_of(self, mask: int) -> frozenset[Offset]:
        return frozenset(o for i, o in enumerate(self.offsets) if mask >> i & 1)


@dataclass(frozen=True)
class Pattern:
    ball: Ball
    black: frozenset[Offset]

    def __post_init__(self):
        outside = set(self.black) - set(self.ball.offsets)
        if outside:
            raise ParameterError(f"black pixels {sorted(outside)} lie outside the ball")

    @property
    def b(self) -> int:
        return len(self.black)

    @property
    def mask(self) -> int:
        return self.ball.mask_of(self.black)

    def canonical(self) -> tuple[Offset, ...]:
        return canonical_form(self.black)


def canonical_form(black) -> tuple[Offset, ...]:
    """Black set translated so its minimal row and column are 0, sorted."""
    if not black:
        return ()
    y0 = min(y for y, _ in black)
    x0 = min(x for _, x in black)
    return tuple(sorted((y - y0, x - x0) for y, x in black))


class LocalProperty:
    """A translation-invariant assertion about the pixels of one ball.

    Parameters
    ----------
    radius : int
        Radius of the ball the predicate looks at.
    predicate : callable
        ``predicate(pattern) -> bool`` for a :class:`Pattern` on that ball.
    name : str, optional
    b_cap : int
        Largest black count searched when computing the black index.
    """

    def __init__(self, radius: int, predicate: Callable[[Pattern], bool], name=None,
                 b_cap: int = DEFAULT_B_CAP):
        self.ball = Ball(radius)
        self.predicate = predicate
        self.name = name or getattr(predicate, "__name__", "property")
        self.b_cap = b_cap
        self._memo: dict[int, bool] = {}

    def __repr__(self):
        return f"LocalProperty({self.name!r}, r={self.ball.radius})"

    def holds(self, mask: int) -> bool:
        try:
            return self._memo[mask]
        except KeyError:
            value = bool(self.predicate(Pattern(self.ball, self.ball.black_of(mask))))
            self._memo[mask] = value
            return value

    @cached_property
    def truth_table(self) -> np.ndarray | None:
        """Boolean lookup indexed by pattern mask, or None for large balls."""
        if len(self.ball) > TRUTH_TABLE_MAX_CELLS:
            return None
        return np.fromiter((self.holds(m) for m in range(1 << len(self.ball))),
                           dtype=bool, count=1 << len(self.ball))

    @cached_property
    def b(self) -> int:
        return black_index(self, self.b_cap)

    @cached_property
    def meaningful_patterns(self) -> tuple[Pattern, ...]:
        """One satisfying b-pixel pattern per translation class."""
        b = self.b
        classes: dict[tuple, Pattern] = {}
        for combo in combinations(self.ball.offsets, b):
            key = canonical_form(combo)
            if key in classes:
                continue
            mask = self.ball.mask_of(combo)
            if self.holds(mask):
                classes[key] = Pattern(self.ball, frozenset(combo))
        return tuple(classes[k] for k in sorted(classes))

    @property
    def e(self) -> int:
        return len(self.meaningful_patterns)


def black_index(prop: LocalProperty, b_cap: int = DEFAULT_B_CAP) -> int:
    """Fewest black pixels in any pattern satisfying ``prop``.

    Patterns are scanned by increasing black count, stopping at the first hit.
    """
    if prop.holds(0):
        raise ParameterError(f"degenerate property {prop.name!r}: the all-white pattern satisfies it")
    ball = prop.ball
    for b in range(1, min(b_cap, len(ball)) + 1):
        for combo in combinations(range(len(ball)), b):
            if prop.holds(sum(1 << i for i in combo)):
                return b
    raise ParameterError(f"black index of {prop.name!r} exceeds cap {b_cap}")


def meaningful_index(prop: LocalProperty) -> int:
    return prop.e


def definition_set_size(prop: LocalProperty, r_cap: int = DEFINITION_SET_MAX_RADIUS) -> int:
    """Number of patterns on the ball that satisfy ``prop``."""
    if prop.ball.radius > r_cap:
        raise ParameterError(
            f"full pattern enumeration limited to radius {r_cap}, got {prop.ball.radius}"
        )
    return int(prop.truth_table.sum())


def limit_probability(b: int, e: int, c: float) -> float:
    """Limit of P(property appears) under density ``c * n**(-2/b)``."""
    if b < 1 or e < 1:
        raise ParameterError(f"need b >= 1 and e >= 1, got b={b}, e={e}")
    if c <= 0:
        raise ParameterError(f"c must be positive, got {c}")
    return -math.expm1(-e * c**b)


def largest_component(black) -> int:
    """Size of the largest 4-connected subset of ``black``."""
    remaining = set(black)
    best = 0
    while remaining:
        start = remaining.pop()
        queue = deque([start])
        size = 1
        while queue:
            y, x = queue.popleft()
            for nb in ((y + 1, x), (y - 1, x), (y, x + 1), (y, x - 1)):
                if nb in remaining:
                    remaining.remove(nb)
                    queue.append(nb)
                    size += 1
        best = max(best, size)
    return best


def _any_black(pattern):
    return bool(pattern.black)


def _center_black(pattern):
    return (0, 0) in pattern.black


def _horizontal_pair(pattern):
    return any((y, x + 1) in pattern.black for y, x in pattern.black)


def _connected_pair(pattern):
    return any((y, x + 1) in pattern.black or (y + 1, x) in pattern.black
               for y, x in pattern.black)


def component_property(k: int, radius: int | None = None) -> LocalProperty:
    """"Some 4-connected component of at least k black pixels fits in the ball"."""
    if k < 1:
        raise ParameterError(f"component size must be >= 1, got {k}")
    radius = max(1, math.ceil(k / 2)) if radius is None else radius
    return LocalProperty(radius, lambda pat: largest_component(pat.black) >= k,
                         name=f"component-{k}", b_cap=max(DEFAULT_B_CAP, k))


CATALOG = {
    "black-pixel": (_any_black, 1),
    "center-black": (_center_black, 1),
    "horizontal-pair": (_horizontal_pair, 1),
    "connected-pair": (_connected_pair, 1),
}


def get_property(name: str, radius: int | None = None) -> LocalProperty:
    """Look up a built-in property by name.

    Known names are the keys of ``CATALOG`` plus ``component-K`` for any
    positive K.
    """
    if name.startswith("component-"):
        try:
            k = int(name.removeprefix("component-"))
        except ValueError:
            raise ParameterError(f"bad component property name {name!r}") from None
        return component_property(k, radius)
    try:
        predicate, default_r = CATALOG[name]
    except KeyError:
        known = ", ".join(sorted(CATALOG) + ["component-K"])
        raise ParameterError(f"unknown property {name!r}; known: {known}") from None
    return LocalProperty(default_r if radius is None else radius, predicate, name=name)
