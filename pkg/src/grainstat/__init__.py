"""Impulse-noise removal by area openings/closings with statistically chosen
area thresholds, plus a Monte Carlo bench for the underlying Poisson limit."""

from grainstat.animals import AnimalTable, build_table, count_at, enumerate_animals
from grainstat.ccl import ComponentSet, component_size_histogram, label_components
from grainstat.estimators import BinaryAreaDenoiser, GrayAreaDenoiser
from grainstat.grayfilter import (
    LevelStack,
    decompose,
    denoise_gray,
    nesting_fraction,
    reconstruct,
)
from grainstat.morpho import (
    denoise_binary,
    denoise_binary_swapped,
    remove_small_components,
)
from grainstat.noise import corrupt_binary, corrupt_gray
from grainstat.probcalc import (
    DenoisePlan,
    ThresholdQuery,
    appearance_probability,
    approx_threshold,
    check_decreasing,
    make_plan,
    size_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "AnimalTable",
    "BinaryAreaDenoiser",
    "ComponentSet",
    "DenoisePlan",
    "GrayAreaDenoiser",
    "LevelStack",
    "ThresholdQuery",
    "appearance_probability",
    "approx_threshold",
    "build_table",
    "check_decreasing",
    "component_size_histogram",
    "corrupt_binary",
    "corrupt_gray",
    "count_at",
    "decompose",
    "denoise_binary",
    "denoise_binary_swapped",
    "denoise_gray",
    "enumerate_animals",
    "label_components",
    "make_plan",
    "nesting_fraction",
    "reconstruct",
    "remove_small_components",
    "size_threshold",
]
