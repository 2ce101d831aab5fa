"""
Fixed square-lattice animals (polyominoes counted up to translation).

The counts a_k drive the appearance probability of a k-pixel component in
pure impulse noise.  Exact counts come from Redelmeier's recursive
enumeration; beyond the enumerated range they are extrapolated with an
assumed growth constant, and every value carries an exact/extrapolated flag.
"""
from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

logger = logging.getLogger(__name__)

K_CAP = 14
GROWTH_ASSUMED = 4.06
# rigorous upper bound on the growth constant
GROWTH_UPPER_BOUND = 4.65

_CACHE_MAGIC = "grainstat-animals v1"


def count_all_animals(k_max: int, k_cap: int = K_CAP) -> list[int]:
    """Return ``[a_1, ..., a_{k_max}]`` from a single Redelmeier traversal.

    Parameters
    ----------
    k_max : int
        Largest animal size to count, ``1 <= k_max <= k_cap``.
    k_cap : int
        Enumeration cap; the cost grows like the sum of the a_k.

    Returns
    -------
    list of int
    """
    _check_size(k_max, k_cap)
    counts = [0] * (k_max + 1)
    # Cells live on a flat grid of row width `width`.  The origin is the
    # lowest cell of the bottom row; every cell index below it (the rest of
    # the bottom row to its left) is forbidden, which pins each animal to a
    # unique translate.
    width = 2 * k_max + 3
    origin = k_max + 1
    seen = bytearray(width * (k_max + 2))
    steps = (1, -1, width, -width)
    last = k_max - 1

    def grow(untried: list[int], size: int) -> None:
        while untried:
            cell = untried.pop()
            counts[size + 1] += 1
            if size + 1 == k_max:
                continue
            new = []
            for step in steps:
                nb = cell + step
                if nb >= origin and not seen[nb]:
                    new.append(nb)
            if size + 1 == last:
                # children are exactly one extra cell each
                counts[k_max] += len(untried) + len(new)
                continue
            for nb in new:
                seen[nb] = 1
            grow(untried + new, size + 1)
            for nb in new:
                seen[nb] = 0

    seen[origin] = 1
    grow([origin], 0)
    return counts[1:]


def enumerate_animals(k: int, k_cap: int = K_CAP) -> int:
    """Number of fixed 4-connected animals with exactly ``k`` cells."""
    return count_all_animals(k, k_cap)[-1]


def _check_size(k, k_cap):
    if not isinstance(k, (int,)) or isinstance(k, bool):
        raise TypeError(f"animal size must be an int, got {type(k).__name__}")
    if k < 1 or k > k_cap:
        raise ValueError(
            f"animal size must be in [1, {k_cap}] (enumeration cap K_cap={k_cap}), "
            f"got {k}"
        )


@dataclass(frozen=True)
class AnimalTable:
    """Exact animal counts a_1..a_K plus the extrapolation policy beyond K.

    Attributes
    ----------
    counts : tuple of int
        ``counts[k - 1]`` is a_k for ``k <= k_max_exact``.
    growth_assumed : float
        Ratio used to extend the sequence past the exact range.
    """

    counts: tuple[int, ...]
    growth_assumed: float = GROWTH_ASSUMED

    def __post_init__(self):
        if not self.counts:
            raise ValueError("an animal table needs at least a_1")
        if self.counts[0] != 1:
            raise ValueError(f"a_1 must be 1, got {self.counts[0]}")
        if any(b <= a for a, b in zip(self.counts, self.counts[1:])):
            raise ValueError("animal counts must be strictly increasing")
        if not self.growth_assumed > 1:
            raise ValueError(f"growth_assumed must exceed 1, got {self.growth_assumed}")

    @property
    def k_max_exact(self) -> int:
        return len(self.counts)

    @property
    def growth_sup(self) -> float:
        """Largest a_k^(1/k) over the exact range."""
        return max(a ** (1.0 / k) for k, a in enumerate(self.counts, start=1))

    def is_exact(self, k: int) -> bool:
        return 1 <= k <= self.k_max_exact

    def count(self, k: int) -> float:
        return count_at(self, k)[0]

    def log_count(self, k: int) -> float:
        """Natural log of a_k (exact or extrapolated), safe for large k."""
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if k <= self.k_max_exact:
            return math.log(self.counts[k - 1])
        top = self.k_max_exact
        return math.log(self.counts[top - 1]) + (k - top) * math.log(self.growth_assumed)

    def rows(self, k_last: int | None = None):
        """Yield ``(k, a_k, exact)`` for k = 1..k_last (default: exact range)."""
        k_last = self.k_max_exact if k_last is None else k_last
        for k in range(1, k_last + 1):
            value, exact = count_at(self, k)
            yield k, (self.counts[k - 1] if exact else value), exact


def count_at(table: AnimalTable, k: int) -> tuple[float, bool]:
    """Return ``(a_k, exact)``.

    Past the exact range, ``a_K * growth_assumed**(k - K)`` is returned with
    ``exact=False``.  Because a_k^(1/k) increases towards the growth
    constant this overestimates a_k, which only pushes thresholds upwards.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k <= table.k_max_exact:
        return float(table.counts[k - 1]), True
    return math.exp(table.log_count(k)), False


def default_cache_dir() -> Path:
    env = os.environ.get("GRAINSTAT_CACHE_DIR")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "grainstat"


def format_table(table: AnimalTable, k_last: int | None = None) -> str:
    """Render the cache/TSV form of ``table``."""
    lines = [f"{_CACHE_MAGIC} kmax={table.k_max_exact} growth={table.growth_assumed!r}"]
    for k, value, exact in table.rows(k_last):
        shown = str(value) if exact else repr(float(value))
        lines.append(f"{k}\t{shown}\t{'exact' if exact else 'extrap'}")
    return "\n".join(lines) + "\n"


def parse_table(text: str, growth_assumed: float | None = None) -> AnimalTable:
    """Parse the cache format; raises ``ValueError`` on any inconsistency."""
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty animal table file")
    head = lines[0].split()
    if " ".join(head[:2]) != _CACHE_MAGIC or len(head) != 4:
        raise ValueError(f"bad header line: {lines[0]!r}")
    try:
        kmax = int(head[2].removeprefix("kmax="))
        growth = float(head[3].removeprefix("growth="))
    except ValueError as exc:
        raise ValueError(f"bad header line: {lines[0]!r}") from exc
    counts = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != 3:
            raise ValueError(f"line {lineno}: expected 3 tab-separated fields")
        k, value, flag = fields
        if flag == "extrap":
            continue
        if flag != "exact" or int(k) != len(counts) + 1:
            raise ValueError(f"line {lineno}: unexpected entry {line!r}")
        counts.append(int(value))
    if len(counts) != kmax:
        raise ValueError(f"header says kmax={kmax} but {len(counts)} exact rows found")
    return AnimalTable(tuple(counts), growth if growth_assumed is None else growth_assumed)


def build_table(
    k_max_exact: int = K_CAP,
    growth_assumed: float = GROWTH_ASSUMED,
    *,
    k_cap: int = K_CAP,
    cache_dir: str | os.PathLike | None = None,
    use_cache: bool = True,
) -> AnimalTable:
    """Build (or load from the on-disk cache) an :class:`AnimalTable`.

    The cache file is keyed by ``k_max_exact``.  A corrupt cache file is
    recomputed and overwritten with a warning.
    """
    _check_size(k_max_exact, k_cap)
    if not growth_assumed > 1:
        raise ValueError(f"growth_assumed must exceed 1, got {growth_assumed}")
    if not use_cache:
        return AnimalTable(tuple(count_all_animals(k_max_exact, k_cap)), growth_assumed)

    path = Path(cache_dir or default_cache_dir()) / f"animals-k{k_max_exact}.tsv"
    if path.exists():
        try:
            return parse_table(path.read_text(), growth_assumed)
        except (ValueError, UnicodeDecodeError) as exc:
            logger.warning("corrupt animal cache %s (%s); recomputing", path, exc)
    table = AnimalTable(tuple(count_all_animals(k_max_exact, k_cap)), growth_assumed)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(format_table(table))
    except OSError as exc:
        logger.warning("could not write animal cache %s: %s", path, exc)
    return table


@lru_cache(maxsize=None)
def default_table(k_max_exact: int = K_CAP, growth_assumed: float = GROWTH_ASSUMED) -> AnimalTable:
    """Process-wide memoized :func:`build_table` using the on-disk cache."""
    return build_table(k_max_exact, growth_assumed)
