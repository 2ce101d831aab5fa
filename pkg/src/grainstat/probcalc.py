"""
Appearance probability of a k-pixel component in pure impulse noise and the
area threshold derived from it.

For an m x n image whose pixels are independently "on" with density p, the
probability that some 4-connected component of size k shows up is
approximated by ``PA = 1 - exp(-m n a_k p**k)``.  The area threshold for a
risk level eps is the smallest k with ``PA <= eps``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from grainstat.animals import GROWTH_ASSUMED, AnimalTable
from grainstat.exceptions import ParameterError, ValidityDomainError

# Above this density a_{k+1} p <= a_k can fail and PA stops decreasing in k.
P_MAX = 0.2
SCAN_LIMIT = 10_000


@dataclass(frozen=True)
class ThresholdQuery:
    """Image size, noise density and risk level for one threshold."""

    width: int
    height: int
    p: float
    eps: float

    def __post_init__(self):
        for name in ("width", "height"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ParameterError(f"{name} must be a positive integer, got {value!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"noise density p must lie in [0, 1], got {self.p!r}")
        if not 0.0 < self.eps < 1.0:
            raise ParameterError(f"risk eps must lie in (0, 1), got {self.eps!r}")

    @property
    def area(self) -> int:
        return int(self.width) * int(self.height)


def _log_expected_count(m, n, k, p, table):
    return math.log(m) + math.log(n) + table.log_count(k) + k * math.log(p)


def appearance_probability(m: int, n: int, k: int, p: float, table: AnimalTable) -> float:
    """Approximate probability that a k-pixel component appears in m x n noise.

    The exponent ``m * n * a_k * p**k`` is formed in log space so that
    ``p**k`` underflowing does not matter.
    """
    if k < 1:
        raise ParameterError(f"component size k must be >= 1, got {k}")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p!r}")
    if p == 0.0:
        return 0.0
    log_lam = _log_expected_count(m, n, k, p, table)
    if log_lam > 700.0:
        return 1.0
    return min(1.0, max(0.0, -math.expm1(-math.exp(log_lam))))


def approx_threshold(query: ThresholdQuery, growth: float = GROWTH_ASSUMED) -> float:
    """Closed-form threshold obtained by replacing a_k with growth**k.

    Since ``a_k <= growth**k`` this estimate sits at or above the scanned
    threshold; it is a sanity value, not a substitute.
    """
    if query.p <= 0.0:
        raise ParameterError("approx_threshold needs p > 0")
    if growth * query.p >= 1.0:
        raise ParameterError(
            f"approx_threshold needs growth * p < 1, got {growth} * {query.p}"
        )
    return (math.log(query.eps) - math.log(query.area)) / (math.log(growth) + math.log(query.p))


def check_decreasing(p: float, table: AnimalTable) -> bool:
    """True when ``a_{k+1} p <= a_k`` for every k, so PA decreases with k.

    The exact range is checked entry by entry; the extrapolated tail
    contributes the condition ``growth_assumed * p <= 1``.
    """
    counts = table.counts
    if any(counts[k + 1] * p > counts[k] for k in range(len(counts) - 1)):
        return False
    return table.growth_assumed * p <= 1.0


def size_threshold(query: ThresholdQuery, table: AnimalTable, *, force: bool = False) -> int:
    """Smallest component size k with ``PA(k) <= eps``.

    Parameters
    ----------
    query : ThresholdQuery
    table : AnimalTable
    force : bool
        Allow ``p > P_MAX`` (a warning is issued instead of an error).

    Returns
    -------
    int
        Area threshold s >= 1; components with fewer than s pixels are
        regarded as noise.
    """
    p = query.p
    if p == 0.0:
        return 1
    if p > P_MAX:
        msg = (
            f"p={p} exceeds p_max={P_MAX}; the appearance probability is only "
            "guaranteed to decrease with component size for p <= p_max"
        )
        if not force:
            raise ValidityDomainError(msg)
        warnings.warn(msg, stacklevel=2)
    if table.growth_assumed * p >= 1.0:
        raise ParameterError(
            f"threshold undefined under extrapolation: growth {table.growth_assumed} * p {p} >= 1"
        )
    limit = min(SCAN_LIMIT, max(1, math.ceil(10 * approx_threshold(query, table.growth_assumed))))
    m, n = query.width, query.height
    for k in range(1, limit + 1):
        if appearance_probability(m, n, k, p, table) <= query.eps:
            return k
    raise ParameterError(f"no threshold found up to k={limit} for {query}")


@dataclass(frozen=True)
class DenoisePlan:
    """Area thresholds for both colours of a binary image.

    ``s_zeros`` applies to components of 0-pixels and is computed from the
    density of spurious zeros (``zeros_query.p``); ``s_ones`` likewise for
    1-pixels.  The denoiser cleans 0-components first.
    """

    s_zeros: int
    s_ones: int
    zeros_query: ThresholdQuery
    ones_query: ThresholdQuery

    @property
    def shape(self) -> tuple[int, int]:
        return (self.zeros_query.height, self.zeros_query.width)

    def threshold(self, color: int) -> int:
        return self.s_ones if color else self.s_zeros


def make_plan(
    width: int,
    height: int,
    p: float,
    q: float,
    eps: float,
    table: AnimalTable,
    *,
    force: bool = False,
) -> DenoisePlan:
    """Plan for an image whose 1-pixels drop to 0 with probability ``p`` and
    whose 0-pixels rise to 1 with probability ``q``."""
    zeros_query = ThresholdQuery(width, height, p, eps)
    ones_query = ThresholdQuery(width, height, q, eps)
    return DenoisePlan(
        s_zeros=size_threshold(zeros_query, table, force=force),
        s_ones=size_threshold(ones_query, table, force=force),
        zeros_query=zeros_query,
        ones_query=ones_query,
    )
