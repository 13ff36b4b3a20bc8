"""Diagonal extraction of a subsequence whose Fréchet rows converge.

Given a bounded sequence ``x_1, x_2, ...`` (presented lazily), pick indices
``n_1 < n_2 < ...`` and nested pools ``A_1 ⊇ A_2 ⊇ ...`` such that each row
``d(x_{n_k}, x_n)`` varies by less than ``tol`` over ``n`` in ``A_k``. The
finite stand-in for "convergent" is "oscillation below tol on the surviving
pool", and the Bolzano-Weierstrass step is value bucketing.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from ._validation import check_count, check_positive
from .exceptions import ExtractionShortfallError, NotStronglyConcaveError
from .fixed_point import SolverConfig, embed
from .frechet import Embedding
from .metric_core import FiniteMetricSpace, concavity_report, validate
from .norms import NormSpec

__all__ = ["LazyMetric", "ExtractionResult", "extract_convergent_subset", "embed_via_c", "FAMILIES"]


class LazyMetric:
    """A countable bounded metric space, enumerated from index 1.

    ``distance(i, j)`` is the only thing the algorithms need; ``point_at`` is
    a handle for display and defaults to the index itself.
    """

    def __init__(self, distance: Callable[[int, int], float], bound: float,
                 point_at: Optional[Callable[[int], object]] = None, name: str = "custom"):
        self._distance = distance
        self.bound = check_positive("bound", bound)
        self._point_at = point_at
        self.name = name

    def _check(self, i):
        if i < 1:
            raise IndexError(f"indices start at 1, got {i}")

    def point_at(self, i):
        self._check(i)
        return self._point_at(i) if self._point_at else i

    def distance(self, i, j) -> float:
        self._check(i)
        self._check(j)
        if i == j:
            return 0.0
        return float(self._distance(i, j))

    def row(self, i, indices) -> np.ndarray:
        return np.array([self.distance(i, j) for j in indices], dtype=float)

    def restrict(self, indices) -> FiniteMetricSpace:
        indices = [int(i) for i in indices]
        dist = np.array([[self.distance(i, j) for j in indices] for i in indices])
        return FiniteMetricSpace(tuple(str(i) for i in indices), dist)

    def spot_check(self, n_points=30, seed=0, horizon=1000):
        """Validate the metric axioms and the bound on a random finite sample."""
        rng = np.random.default_rng(seed)
        idx = np.sort(rng.choice(np.arange(1, horizon + 1), size=min(n_points, horizon), replace=False))
        space = self.restrict(idx)
        result = validate(space)
        over = space.dist.max() - self.bound
        return result.ok and over <= 1e-12 * self.bound

    def __repr__(self):
        return f"LazyMetric(name={self.name!r}, bound={self.bound:g})"

    @classmethod
    def equilateral(cls, lam=1.0):
        lam = check_positive("lambda", lam)
        return cls(lambda i, j: lam, lam, name="equilateral")

    @classmethod
    def discrete(cls):
        return cls(lambda i, j: 1.0, 1.0, name="discrete")

    @classmethod
    def harmonic(cls):
        """``d(x_i, x_j) = |1/i - 1/j| + 1``; row i tends to ``1 + 1/i``."""
        return cls(lambda i, j: abs(1.0 / i - 1.0 / j) + 1.0, 2.0,
                   point_at=lambda i: 1.0 / i, name="harmonic")

    @classmethod
    def two_cluster(cls, within=1.0, cross=1.5):
        """Odd indices form cluster A, even ones cluster B."""
        if not (within > 0 and 0 < cross <= 2 * within):
            raise ValueError("need 0 < within and 0 < cross <= 2 * within")
        return cls(lambda i, j: within if i % 2 == j % 2 else cross, max(within, cross),
                   point_at=lambda i: "AB"[(i + 1) % 2], name="two-cluster")


FAMILIES = {
    "equilateral": LazyMetric.equilateral,
    "discrete": LazyMetric.discrete,
    "harmonic": LazyMetric.harmonic,
    "two-cluster": LazyMetric.two_cluster,
}


@dataclass
class ExtractionResult:
    indices: List[int]
    limits_estimate: List[float]
    tail_oscillation: List[float]
    shortfall: bool = False
    pool: List[int] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "indices": self.indices,
            "limits_estimate": self.limits_estimate,
            "tail_oscillation": self.tail_oscillation,
            "shortfall": self.shortfall,
            "pool_size": len(self.pool),
        }


def _largest_bucket(values, tol):
    buckets = np.floor(values / tol).astype(np.int64)
    labels, counts = np.unique(buckets, return_counts=True)
    # np.unique sorts, so argmax breaks ties towards the lowest bucket
    return buckets == labels[np.argmax(counts)]


def extract_convergent_subset(metric: LazyMetric, count: int, tol: float, horizon: int) -> ExtractionResult:
    """Pick ``count`` indices (starting at 1) whose rows settle within ``tol``.

    Scans indices ``1..horizon``. At each stage the current index's row is
    bucketed (width ``tol``, anchored at 0) over the candidate pool, the most
    populated bucket survives, and the smallest survivor becomes the next
    index. A final stage is run for the last index so that every row has a
    non-trivial tail. If the pool runs dry the result has ``shortfall=True``.

    ``limits_estimate[k]`` is the row value at the largest surviving index,
    and ``tail_oscillation[k]`` the largest deviation from it over the later
    indices and the final pool.
    """
    count = check_count("count", count)
    tol = check_positive("tol", tol)
    horizon = check_count("horizon", horizon)
    if horizon < 2:
        raise ValueError("horizon must be >= 2 for even one extraction stage")

    indices = [1]
    pool = np.arange(2, horizon + 1)
    shortfall = False
    while True:
        if pool.size == 0:
            shortfall = True
            break
        values = metric.row(indices[-1], pool)
        if values.max() > metric.bound * (1 + 1e-12):
            raise ValueError(f"distance {values.max()!r} exceeds the declared bound {metric.bound!r}")
        pool = pool[_largest_bucket(values, tol)]
        if len(indices) == count:
            break
        indices.append(int(pool[0]))
        pool = pool[1:]

    limits, oscillation = [], []
    anchor = int(pool[-1]) if pool.size else None
    for k, idx in enumerate(indices):
        tail = indices[k + 1:] + pool.tolist()
        if not tail:
            limits.append(float("nan"))
            oscillation.append(float("nan"))
            continue
        row = metric.row(idx, tail)
        alpha = metric.distance(idx, anchor if anchor is not None else tail[-1])
        limits.append(alpha)
        oscillation.append(float(np.abs(row - alpha).max()))
    return ExtractionResult(indices, limits, oscillation, shortfall, pool.tolist())


def embed_via_c(
    metric: LazyMetric,
    count: int,
    norm: NormSpec,
    tol: float,
    horizon: int,
    config: Optional[SolverConfig] = None,
) -> Embedding:
    """Extract a settled subsequence and embed it isometrically into ``norm``.

    ``norm.dimension`` must equal ``count``. The extraction is attached to
    the returned embedding as ``embedding.extraction``.
    """
    result = extract_convergent_subset(metric, count, tol, horizon)
    if result.shortfall:
        raise ExtractionShortfallError(
            f"extracted {len(result.indices)} of {count} indices before the horizon ran out",
            result=result,
        )
    space = metric.restrict(result.indices)
    report = concavity_report(space)
    if report.gap <= 0:
        raise NotStronglyConcaveError(
            f"extracted subset has concavity gap {report.gap!r} at triple "
            f"{tuple(result.indices[i] for i in report.witness_triple)}",
            witness=report.witness_triple,
        )
    emb = embed(space, norm, config)
    emb.extraction = result
    return emb
