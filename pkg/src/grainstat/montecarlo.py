"""
Monte Carlo checks of the Poisson limit for local properties and of the
pure-noise guarantee of the area filter.

Each trial ``t`` draws from its own PCG64 stream seeded with ``(seed, t)``,
so results do not depend on the order (or threads) in which trials run.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from grainstat.animals import AnimalTable, default_table
from grainstat.ccl import label_components
from grainstat.exceptions import ParameterError
from grainstat.patterns import LocalProperty, get_property, limit_probability
from grainstat.probcalc import ThresholdQuery, size_threshold

Z95 = 1.959963984540054
SAMPLING = ("sparse", "dense")


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("need at least one trial")
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def exact_any_black(n: int, p: float) -> float:
    """P(at least one black pixel) in an n x n image of density p."""
    return -math.expm1(n * n * math.log1p(-p)) if p < 1 else 1.0


@dataclass(frozen=True)
class ExperimentSpec:
    """One Monte Carlo configuration: density ``p = c * n**(-2/b)``."""

    n: int
    c: float
    property: LocalProperty | str
    trials: int = 10_000
    seed: int = 0
    boundary: str = "torus"

    def __post_init__(self):
        if isinstance(self.property, str):
            object.__setattr__(self, "property", get_property(self.property))
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")
        if self.c < 0:
            raise ParameterError(f"c must be non-negative, got {self.c}")
        if self.boundary not in ("torus", "plain"):
            raise ParameterError(f"unknown boundary {self.boundary!r}")
        if self.n < 2 * self.property.ball.radius + 2:
            raise ParameterError(
                f"n={self.n} too small for a ball of radius {self.property.ball.radius}"
            )
        if self.p > 1:
            raise ParameterError(f"density c * n**(-2/b) = {self.p} exceeds 1")

    @property
    def b(self) -> int:
        return self.property.b

    @property
    def e(self) -> int:
        return self.property.e

    @property
    def scale(self) -> float:
        """Threshold function n**(-2/b)."""
        return self.n ** (-2.0 / self.b)

    @property
    def p(self) -> float:
        return self.c * self.scale


@dataclass
class EstimateReport:
    name: str
    estimate: float
    trials: int
    half_width: float
    target: float
    tolerance: float
    passed: bool
    extra: dict = field(default_factory=dict)

    def tsv_header(self) -> str:
        return "\t".join(["name", "estimate", "trials", "half_width", "target",
                          "tolerance", "passed", *self.extra])

    def tsv_row(self) -> str:
        cells = [self.name, f"{self.estimate:.6g}", str(self.trials), f"{self.half_width:.4g}",
                 f"{self.target:.6g}", f"{self.tolerance:.4g}", "PASS" if self.passed else "FAIL"]
        cells += [f"{v:.6g}" if isinstance(v, float) else str(v) for v in self.extra.values()]
        return "\t".join(cells)


class PatternScanner:
    """Reads ball patterns out of a sparse binary image on an n x n grid.

    Only balls that contain at least one black pixel are inspected, which
    is enough for any property with positive black index.
    """

    def __init__(self, prop: LocalProperty, n: int, boundary: str = "torus"):
        self.prop = prop
        self.n = n
        self.torus = boundary == "torus"
        r = prop.ball.radius
        offs = np.array(prop.ball.offsets, dtype=np.int64)
        self.dy, self.dx = offs[:, 0], offs[:, 1]
        self.weights = np.int64(1) << np.arange(len(offs), dtype=np.int64)
        self.pad = 0 if self.torus else r
        self.buf = np.zeros((n + 2 * self.pad, n + 2 * self.pad), dtype=bool)

    def _load(self, black):
        ys, xs = np.divmod(np.asarray(black, dtype=np.int64), self.n)
        self.buf[ys + self.pad, xs + self.pad] = True
        return ys, xs

    def _clear(self, ys, xs):
        self.buf[ys + self.pad, xs + self.pad] = False

    def _masks(self, cy, cx):
        rows = cy[:, None] + self.dy[None, :]
        cols = cx[:, None] + self.dx[None, :]
        if self.torus:
            rows %= self.n
            cols %= self.n
        else:
            rows += self.pad
            cols += self.pad
        return self.buf[rows, cols] @ self.weights

    def _centres(self, ys, xs, dy, dx):
        cy = (ys[:, None] - dy[None, :]).ravel()
        cx = (xs[:, None] - dx[None, :]).ravel()
        if self.torus:
            cy %= self.n
            cx %= self.n
        else:
            keep = (cy >= 0) & (cy < self.n) & (cx >= 0) & (cx < self.n)
            cy, cx = cy[keep], cx[keep]
        return cy, cx

    def holds_anywhere(self, black) -> bool:
        if len(black) == 0:
            return bool(self.prop.holds(0))
        ys, xs = self._load(black)
        try:
            cy, cx = self._centres(ys, xs, self.dy, self.dx)
            flat = np.unique(cy * self.n + cx)
            masks = np.unique(self._masks(flat // self.n, flat % self.n))
            table = self.prop.truth_table
            if table is not None:
                return bool(table[masks].any())
            return any(self.prop.holds(int(m)) for m in masks)
        finally:
            self._clear(ys, xs)

    def count_occurrences(self, black) -> int:
        """Occurrences of the meaningful patterns (one per translation class).

        Each pattern is anchored at its first black offset, so every
        (centre, pattern) pair is visited once.
        """
        if len(black) == 0:
            return 0
        ys, xs = self._load(black)
        try:
            total = 0
            for pat in self.prop.meaningful_patterns:
                ay, ax = min(pat.black)
                cy, cx = self._centres(ys, xs, np.array([ay]), np.array([ax]))
                total += int(np.count_nonzero(self._masks(cy, cx) == pat.mask))
            return total
        finally:
            self._clear(ys, xs)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64([seed, trial]))


def sample_black(rng: np.random.Generator, n: int, p: float, sampling: str = "sparse") -> np.ndarray:
    """Flat indices of the black pixels of an n x n image with density p.

    ``"sparse"`` draws the black count from Binomial(n*n, p) and places that
    many pixels uniformly without replacement; ``"dense"`` draws one
    uniform per pixel.  Both give the same distribution.
    """
    if sampling == "sparse":
        count = rng.binomial(n * n, p)
        return rng.choice(n * n, size=count, replace=False)
    if sampling == "dense":
        return np.flatnonzero(rng.random(n * n) < p)
    raise ParameterError(f"sampling must be one of {SAMPLING}, got {sampling!r}")


def _run_trials(make_state, one_trial, trials, seed, n_jobs=1):
    def chunk(bounds):
        state = make_state()
        return [one_trial(state, trial_rng(seed, t)) for t in range(*bounds)]

    if n_jobs == 1 or trials < 2:
        return np.asarray(chunk((0, trials)))
    workers = min(trials, n_jobs if n_jobs > 0 else os.cpu_count() or 1)
    edges = np.linspace(0, trials, workers + 1).astype(int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(chunk, zip(edges[:-1], edges[1:])))
    return np.asarray([v for part in parts for v in part])


def property_hits(spec: ExperimentSpec, sampling: str = "sparse", n_jobs: int = 1) -> np.ndarray:
    """Per-trial booleans: does the property hold somewhere?"""
    n, p = spec.n, spec.p
    return _run_trials(
        lambda: PatternScanner(spec.property, n, spec.boundary),
        lambda sc, rng: sc.holds_anywhere(sample_black(rng, n, p, sampling)),
        spec.trials, spec.seed, n_jobs,
    )


def estimate_property_probability(
    spec: ExperimentSpec, sampling: str = "sparse", n_jobs: int = 1
) -> EstimateReport:
    """Frequency of the property across random images vs. the Poisson limit.

    Passes when the estimate is within ``max(0.02, 3 * Wilson half-width)``
    of ``1 - exp(-e c**b)``.
    """
    hits = property_hits(spec, sampling, n_jobs)
    k = int(hits.sum())
    lo, hi = wilson_interval(k, spec.trials)
    est = k / spec.trials
    target = limit_probability(spec.b, spec.e, spec.c) if spec.c > 0 else 0.0
    half = (hi - lo) / 2
    tol = max(0.02, 3 * half)
    return EstimateReport(
        name=f"theorem1:{spec.property.name}", estimate=est, trials=spec.trials,
        half_width=half, target=target, tolerance=tol, passed=abs(est - target) <= tol,
        extra={"n": spec.n, "c": spec.c, "p": spec.p, "b": spec.b, "e": spec.e,
               "ci_low": lo, "ci_high": hi},
    )


@dataclass(frozen=True)
class SweepRow:
    n: int
    delta: float
    p: float
    estimate: float
    half_width: float


def scaling_sweep(
    prop: LocalProperty | str,
    ns=(32, 64, 128, 256),
    deltas=(-0.25, 0.25),
    trials: int = 2000,
    seed: int = 0,
    n_jobs: int = 1,
) -> list[SweepRow]:
    """Estimate the property probability at ``p = n**(-2/b) * n**delta``.

    Below the threshold function (delta < 0) the probability should fall
    towards 0 as n grows; above it (delta > 0) it should rise towards 1.
    """
    prop = get_property(prop) if isinstance(prop, str) else prop
    rows = []
    for delta in deltas:
        for n in ns:
            p = n ** (-2.0 / prop.b + delta)
            c = p / n ** (-2.0 / prop.b)
            spec = ExperimentSpec(n, c, prop, trials, seed)
            k = int(property_hits(spec, n_jobs=n_jobs).sum())
            lo, hi = wilson_interval(k, trials)
            rows.append(SweepRow(n, delta, p, k / trials, (hi - lo) / 2))
    return rows


def sweep_is_monotone(rows: list[SweepRow], delta: float) -> bool:
    """Nonincreasing in n for negative delta, nondecreasing for positive."""
    est = [r.estimate for r in sorted(rows, key=lambda r: r.n) if r.delta == delta]
    pairs = list(zip(est, est[1:]))
    if delta < 0:
        return all(b <= a for a, b in pairs)
    return all(b >= a for a, b in pairs)


def occurrence_counts(spec: ExperimentSpec, sampling: str = "sparse", n_jobs: int = 1) -> np.ndarray:
    """Per-trial occurrence counts X_n of the meaningful patterns."""
    n, p = spec.n, spec.p
    return _run_trials(
        lambda: PatternScanner(spec.property, n, spec.boundary),
        lambda sc, rng: sc.count_occurrences(sample_black(rng, n, p, sampling)),
        spec.trials, spec.seed, n_jobs,
    )


def exact_first_moment(spec: ExperimentSpec) -> float:
    """E(X_n) = n^2 e p^b (1 - p)^(|ball| - b) on the torus."""
    p, b = spec.p, spec.b
    return spec.n**2 * spec.e * p**b * (1 - p) ** (len(spec.property.ball) - b)


def estimate_factorial_moments(
    spec: ExperimentSpec, l_max: int = 2, rel_tol: float = 0.05, n_jobs: int = 1
) -> list[EstimateReport]:
    """Sample factorial moments E[X(X-1)...(X-l+1)] against (e c^b)^l.

    The l=1 report also carries the exact finite-n mean and whether the
    sample mean lies within three standard errors of it.
    """
    if not 1 <= l_max <= 4:
        raise ParameterError(f"l_max must be in 1..4, got {l_max}")
    x = occurrence_counts(spec, n_jobs=n_jobs).astype(float)
    lam = spec.e * spec.c**spec.b
    reports = []
    falling = np.ones_like(x)
    for l in range(1, l_max + 1):
        falling = falling * (x - (l - 1))
        est = float(falling.mean())
        se = float(falling.std(ddof=1) / math.sqrt(len(x))) if len(x) > 1 else float("inf")
        target = lam**l
        tol = rel_tol * target
        extra = {"l": l, "n": spec.n, "c": spec.c, "std_error": se}
        if l == 1:
            exact = exact_first_moment(spec)
            extra["exact_mean"] = exact
            extra["exact_ok"] = bool(abs(est - exact) <= 3 * se)
        reports.append(EstimateReport(
            name=f"moment{l}:{spec.property.name}", estimate=est, trials=spec.trials,
            half_width=Z95 * se, target=target, tolerance=tol,
            passed=abs(est - target) <= tol, extra=extra,
        ))
    return reports


def pure_noise_rejection(
    n: int,
    p: float,
    eps: float,
    trials: int = 500,
    seed: int = 0,
    table: AnimalTable | None = None,
    n_jobs: int = 1,
) -> EstimateReport:
    """Fraction of pure-noise images wiped clean by the area opening.

    Each trial lights pixels of an empty n x n image with density ``p``
    (plain boundary) and checks that every 1-component is smaller than the
    threshold s(n, p, eps), i.e. that the filter returns the empty image.
    """
    table = default_table() if table is None else table
    s = size_threshold(ThresholdQuery(n, n, p, eps), table)

    def one(_, rng):
        noise = rng.random((n, n)) < p
        return int(label_components(noise, 1).sizes.max(initial=0)) < s

    ok = _run_trials(lambda: None, one, trials, seed, n_jobs)
    k = int(ok.sum())
    lo, hi = wilson_interval(k, trials)
    est = k / trials
    half = (hi - lo) / 2
    tol = max(0.02, 3 * half)
    return EstimateReport(
        name="rejection", estimate=est, trials=trials, half_width=half,
        target=1 - eps, tolerance=tol, passed=est >= 1 - eps - tol,
        extra={"n": n, "p": p, "eps": eps, "s": s},
    )
