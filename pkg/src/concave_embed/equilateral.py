"""Finite equilateral sets in norms close to the sup norm."""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ._validation import check_count, check_positive
from .fixed_point import SolverConfig, embed
from .frechet import Embedding, pairwise_norm_distances
from .metric_core import make_discrete
from .norms import NormSpec

__all__ = ["EquilateralVerdict", "equilateral_set", "verify_equilateral"]


@dataclass(frozen=True)
class EquilateralVerdict:
    ok: bool
    offending_pairs: List[Tuple[int, int, float]] = field(default_factory=list)
    max_deviation: float = 0.0

    def __bool__(self):
        return self.ok


def equilateral_set(
    n: int, norm: NormSpec, config: Optional[SolverConfig] = None, lam: float = 1.0
) -> Embedding:
    """``n`` points at pairwise distance ``lam`` under ``norm``.

    Embeds the discrete metric (eta = 1) and scales by ``lam``, so the norm
    must have ``delta <= 1``.
    """
    n = check_count("n", n, minimum=2)
    lam = check_positive("lambda", lam)
    emb = embed(make_discrete(n), norm, config)
    if lam == 1.0:
        return emb
    emb.points = emb.points * lam
    emb.max_residual *= lam
    if emb.pair_residuals is not None:
        emb.pair_residuals = emb.pair_residuals * lam
    return emb


def verify_equilateral(points, norm: NormSpec, lam: float, tol: float) -> EquilateralVerdict:
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] < 2:
        raise ValueError("need a 2-D array of at least two points")
    if points.shape[1] != norm.dimension:
        raise ValueError(
            f"points have dimension {points.shape[1]}, norm has {norm.dimension}"
        )
    dev = pairwise_norm_distances(points, norm) - lam
    iu = np.triu_indices(points.shape[0], k=1)
    dev = dev[iu]
    bad = np.flatnonzero(np.abs(dev) > tol)
    offending = [(int(iu[0][b]), int(iu[1][b]), float(dev[b] + lam)) for b in bad]
    return EquilateralVerdict(not offending, offending, float(np.abs(dev).max()))
