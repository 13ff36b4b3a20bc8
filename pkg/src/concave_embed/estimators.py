"""scikit-learn style front ends.

Both estimators take a precomputed distance matrix as ``X`` (like
``MDS(dissimilarity="precomputed")``) and expose ``fit`` / ``fit_transform``.
There is no out-of-sample ``transform``: the coordinates of a point depend
on every other point.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_distance_matrix
from .exceptions import StructuralError
from .fixed_point import SolverConfig, embed
from .frechet import frechet_sigma, frechet_translated
from .metric_core import FiniteMetricSpace, validate
from .norms import NormSpec


def check_metric_input(X, tol=None):
    """Return a validated FiniteMetricSpace built from the distance matrix ``X``."""
    if isinstance(X, FiniteMetricSpace):
        space = X
    else:
        space = FiniteMetricSpace.from_matrix(check_distance_matrix(X))
    result = validate(space, tol)
    if not result.ok:
        v = result.violations[0]
        raise StructuralError(
            f"X is not a metric: {len(result.violations)} violations, first is "
            f"{v.kind} at {v.indices} (by {v.amount:g})"
        )
    return space


class _EmbeddingMixin:
    def fit_transform(self, X, y=None):
        return self.fit(X, y).embedding_

    def transform(self, X=None):
        """Coordinates of the training points; new points cannot be embedded."""
        check_is_fitted(self, "embedding_")
        if X is not None and np.shape(X) != (self.embedding_.shape[0],) * 2:
            raise ValueError("transform only returns the fitted points; pass X=None")
        return self.embedding_


class FrechetEmbedding(_EmbeddingMixin, BaseEstimator):
    """Isometric embedding into ``(R^N, sup norm)``.

    Parameters
    ----------
    translate : bool, default=False
        Shift so the first point is the origin.
    validation_tol : float or None
        Passed to :func:`concave_embed.metric_core.validate`.

    Attributes
    ----------
    embedding_ : ndarray of shape (n_samples, n_samples)
    max_residual_ : float
    """

    def __init__(self, translate=False, validation_tol=None):
        self.translate = translate
        self.validation_tol = validation_tol

    def fit(self, X, y=None):
        space = check_metric_input(X, self.validation_tol)
        emb = frechet_translated(space) if self.translate else frechet_sigma(space)
        self.embedding_ = emb.points
        self.max_residual_ = emb.max_residual
        self.n_features_in_ = space.size
        return self


class ConcaveMetricEmbedding(_EmbeddingMixin, BaseEstimator):
    """Isometric embedding of a strongly concave metric into a near-sup norm.

    Parameters
    ----------
    norm : NormSpec, dict, "sup" or None
        Target norm. A dict is read with :meth:`NormSpec.from_dict`; ``"sup"``
        and ``None`` mean the sup norm of matching dimension.
    eta : float or None
        Cube edge; defaults to the concavity gap.
    max_iter, tol, damping, allow_uncertified_norm
        Solver settings, see :class:`concave_embed.fixed_point.SolverConfig`.

    Attributes
    ----------
    embedding_ : ndarray of shape (n_samples, n_samples)
    perturbation_ : PerturbationState
    n_iter_ : int
    converged_ : bool
    max_residual_ : float
    diagnostics_ : IterationDiagnostics
    """

    def __init__(self, norm=None, eta=None, max_iter=10_000, tol=None, damping=1.0,
                 allow_uncertified_norm=False, validation_tol=None):
        self.norm = norm
        self.eta = eta
        self.max_iter = max_iter
        self.tol = tol
        self.damping = damping
        self.allow_uncertified_norm = allow_uncertified_norm
        self.validation_tol = validation_tol

    def _resolve_norm(self, n):
        if self.norm is None or self.norm == "sup":
            return NormSpec.sup(n)
        if isinstance(self.norm, dict):
            data = {"dimension": n, **self.norm}
            return NormSpec.from_dict(data)
        if isinstance(self.norm, NormSpec):
            return self.norm
        raise ValueError(f"norm must be a NormSpec, dict, 'sup' or None, got {self.norm!r}")

    def fit(self, X, y=None):
        space = check_metric_input(X, self.validation_tol)
        config = SolverConfig(
            max_iterations=self.max_iter,
            tolerance=self.tol,
            damping=self.damping,
            eta=self.eta,
            allow_uncertified_norm=self.allow_uncertified_norm,
        )
        emb = embed(space, self._resolve_norm(space.size), config)
        self.embedding_ = emb.points
        self.norm_ = emb.norm
        self.perturbation_ = emb.state
        self.diagnostics_ = emb.diagnostics
        self.n_iter_ = emb.diagnostics.iterations
        self.converged_ = emb.diagnostics.converged
        self.max_residual_ = emb.max_residual
        self.n_features_in_ = space.size
        return self
