"""
scikit-learn style wrappers around the binary and grey-level filters.

``fit`` looks only at the image shape: it derives the area thresholds for
that size from the noise densities and the risk level.  ``transform`` then
applies the filter to any image of the same shape.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from grainstat._validation import check_binary_image, check_gray_image, check_probability
from grainstat.animals import GROWTH_ASSUMED, K_CAP, default_table
from grainstat.grayfilter import decompose, filter_stack, level_thresholds, reconstruct
from grainstat.morpho import denoise_binary, denoise_binary_swapped
from grainstat.probcalc import make_plan


class BinaryAreaDenoiser(TransformerMixin, BaseEstimator):
    """Area closing then opening with thresholds chosen for impulse noise.

    Parameters
    ----------
    p : float
        Probability that a 1-pixel was turned into 0.
    q : float
        Probability that a 0-pixel was turned into 1.
    eps : float
        Risk level: pure noise survives with probability at most ``eps``.
    kmax : int
        Exact animal counts used up to this size, extrapolated beyond.
    growth : float
        Growth constant for the extrapolation.
    swapped : bool
        Clean 1-components first instead of 0-components.
    force : bool
        Permit densities above ``P_MAX`` (with a warning).

    Examples
    --------
    >>> import numpy as np
    >>> img = np.zeros((64, 64), bool)
    >>> img[5, 5] = True
    >>> bool(BinaryAreaDenoiser(p=0.05, q=0.05).fit_transform(img).any())
    False
    """

    def __init__(self, p=0.0, q=0.0, eps=1e-2, kmax=K_CAP, growth=GROWTH_ASSUMED,
                 swapped=False, force=False):
        self.p = p
        self.q = q
        self.eps = eps
        self.kmax = kmax
        self.growth = growth
        self.swapped = swapped
        self.force = force

    def fit(self, X, y=None):
        X = check_binary_image(X)
        p = check_probability(self.p, "p")
        q = check_probability(self.q, "q")
        eps = check_probability(self.eps, "eps", open_low=True, open_high=True)
        self.table_ = default_table(self.kmax, self.growth)
        height, width = X.shape
        self.plan_ = make_plan(width, height, p, q, eps, self.table_, force=self.force)
        self.n_features_in_ = width
        return self

    def transform(self, X):
        check_is_fitted(self, "plan_")
        X = check_binary_image(X)
        if self.swapped:
            return denoise_binary_swapped(X, self.plan_)
        return denoise_binary(X, self.plan_)


class GrayAreaDenoiser(TransformerMixin, BaseEstimator):
    """Level-by-level area filtering of a grey image hit by impulse noise.

    Each upper level set ``X >= lam`` gets its own pair of thresholds from
    the densities ``p*lam/256`` (lost pixels) and ``p*(1 - lam/256)``
    (spurious pixels); the cleaned level sets are summed back.
    """

    def __init__(self, p=0.0, eps=1e-3, kmax=K_CAP, growth=GROWTH_ASSUMED, n_jobs=1,
                 force=False):
        self.p = p
        self.eps = eps
        self.kmax = kmax
        self.growth = growth
        self.n_jobs = n_jobs
        self.force = force

    def fit(self, X, y=None):
        X = check_gray_image(X)
        p = check_probability(self.p, "p")
        eps = check_probability(self.eps, "eps", open_low=True, open_high=True)
        self.table_ = default_table(self.kmax, self.growth)
        self.thresholds_ = level_thresholds(X.shape, p, eps, self.table_, force=self.force)
        self.shape_ = X.shape
        self.n_features_in_ = X.shape[1]
        return self

    def filtered_levels(self, X) -> np.ndarray:
        """Cleaned level sets, shape (255, height, width)."""
        check_is_fitted(self, "thresholds_")
        X = check_gray_image(X)
        if X.shape != self.shape_:
            raise ValueError(f"fitted for shape {self.shape_}, got {X.shape}")
        return filter_stack(decompose(X, self.p), self.thresholds_, self.n_jobs)

    def transform(self, X):
        return reconstruct(self.filtered_levels(X))
