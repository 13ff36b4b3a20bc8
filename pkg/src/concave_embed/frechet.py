"""Fréchet embedding of a bounded finite metric space into (R^N, sup norm)."""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .metric_core import FiniteMetricSpace
from .norms import NormSpec, eval_norm

__all__ = ["Embedding", "pairwise_norm_distances", "frechet_sigma", "frechet_translated"]


def pairwise_norm_distances(points: np.ndarray, norm: NormSpec) -> np.ndarray:
    """Full matrix of ``||p_i - p_j||`` under ``norm``."""
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    out = np.zeros((n, n))
    for i in range(n - 1):
        out[i, i + 1:] = eval_norm(norm, points[i] - points[i + 1:])
    return out + out.T


@dataclass
class Embedding:
    """Coordinates of the embedded points plus how well they realise the metric.

    ``pair_residuals[i, j] = ||p_i - p_j|| - d(x_i, x_j)`` under ``norm``.
    ``state`` and ``diagnostics`` are only set by the fixed-point solver,
    ``extraction`` only by :func:`concave_embed.diagonal.embed_via_c`.
    """

    points: np.ndarray
    norm: NormSpec
    max_residual: float
    labels: Tuple[str, ...] = ()
    pair_residuals: Optional[np.ndarray] = field(default=None, repr=False)
    state: object = None
    diagnostics: object = None
    extraction: object = None

    @classmethod
    def from_points(cls, points, norm, space: FiniteMetricSpace, **kwargs):
        residuals = pairwise_norm_distances(points, norm) - space.dist
        max_residual = float(np.abs(residuals).max()) if residuals.size else 0.0
        return cls(
            np.asarray(points, dtype=float),
            norm,
            max_residual,
            labels=space.labels,
            pair_residuals=residuals,
            **kwargs,
        )

    @property
    def converged(self) -> bool:
        return getattr(self.diagnostics, "converged", True)

    def is_isometric(self, tol: float) -> bool:
        return self.max_residual <= tol

    def to_dict(self) -> dict:
        out = {
            "labels": list(self.labels),
            "points": self.points.tolist(),
            "norm": self.norm.to_dict(),
            "max_residual": self.max_residual,
        }
        if self.state is not None:
            out["eta"] = self.state.eta
            out["eps"] = [[m, n, v] for (m, n), v in self.state.items()]
        if self.diagnostics is not None:
            out["diagnostics"] = self.diagnostics.to_dict()
        if self.extraction is not None:
            out["extraction"] = self.extraction.to_dict()
        return out


def frechet_sigma(space: FiniteMetricSpace) -> Embedding:
    """Row i is ``(d(x_i, x_1), ..., d(x_i, x_N))``.

    Isometric under the sup norm: coordinate k of ``sigma_i - sigma_j`` is at
    most ``d(x_i, x_j)`` by the triangle inequality and equals it at k = j.
    """
    return Embedding.from_points(space.dist.copy(), NormSpec.sup(space.size), space)


def frechet_translated(space: FiniteMetricSpace) -> Embedding:
    """``frechet_sigma`` shifted so the first point sits at the origin."""
    points = space.dist - space.dist[0][None, :]
    return Embedding.from_points(points, NormSpec.sup(space.size), space)
