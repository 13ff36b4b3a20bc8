"""Finite metric spaces, axiom checks, concavity gap and example generators."""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ._validation import check_count, check_distance_matrix, check_positive

__all__ = [
    "FiniteMetricSpace",
    "Violation",
    "ValidationResult",
    "ConcavityReport",
    "validate",
    "concavity_report",
    "is_strongly_concave",
    "snowflake",
    "make_discrete",
    "make_equilateral",
    "make_random_strongly_concave",
]


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A finite set of labelled points with a full symmetric distance matrix.

    Construction only checks structure (square, finite, nonnegative). Use
    :func:`validate` for the metric axioms.
    """

    labels: Tuple[str, ...]
    dist: np.ndarray

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        dist = check_distance_matrix(self.dist, n_labels=len(labels))
        dist.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", dist)

    @classmethod
    def from_matrix(cls, dist, labels: Optional[Sequence] = None):
        dist = check_distance_matrix(dist)
        if labels is None:
            labels = [str(i) for i in range(dist.shape[0])]
        return cls(tuple(labels), dist)

    @property
    def size(self) -> int:
        return self.dist.shape[0]

    def __len__(self):
        return self.size

    @property
    def diameter(self) -> float:
        return float(self.dist.max())

    def restrict(self, indices: Sequence[int]) -> "FiniteMetricSpace":
        idx = np.asarray(indices, dtype=int)
        return FiniteMetricSpace(
            tuple(self.labels[i] for i in idx), self.dist[np.ix_(idx, idx)]
        )

    def __repr__(self):
        return f"FiniteMetricSpace(size={self.size}, diameter={self.diameter:g})"


@dataclass(frozen=True)
class Violation:
    kind: str  # "diagonal" | "symmetry" | "positivity" | "triangle"
    indices: Tuple[int, ...]
    amount: float


@dataclass(frozen=True)
class ValidationResult:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class ConcavityReport:
    """``gap`` is +inf for fewer than three points (no triples exist)."""

    gap: float
    witness_triple: Optional[Tuple[int, int, int]]
    separation: float
    diameter: float


def validate(space: FiniteMetricSpace, tol: Optional[float] = None) -> ValidationResult:
    """Check the metric axioms and report every violation larger than ``tol``.

    ``tol`` defaults to ``1e-12 * diameter``; pass ``0`` for exact checking.
    Triangle violations are reported as ``(i, j, k)`` with
    ``d[i, k] > d[i, j] + d[j, k] + tol`` and ``i < k``.
    """
    d = space.dist
    n = space.size
    if tol is None:
        tol = 1e-12 * space.diameter
    tol = check_positive("tol", tol, allow_zero=True)
    violations = []

    for i in np.flatnonzero(np.abs(np.diag(d)) > tol):
        violations.append(Violation("diagonal", (int(i),), float(d[i, i])))

    asym = np.abs(d - d.T)
    for i, j in zip(*np.nonzero(np.triu(asym > tol, k=1))):
        violations.append(Violation("symmetry", (int(i), int(j)), float(asym[i, j])))

    off = ~np.eye(n, dtype=bool)
    for i, j in zip(*np.nonzero(np.triu((d <= 0) & off, k=1))):
        violations.append(Violation("positivity", (int(i), int(j)), float(d[i, j])))

    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    for j in range(n):
        excess = d - (d[:, j][:, None] + d[j, :][None, :])
        mask = (excess > tol) & upper
        mask[j, :] = False
        mask[:, j] = False
        for i, k in zip(*np.nonzero(mask)):
            violations.append(
                Violation("triangle", (int(i), int(j), int(k)), float(excess[i, k]))
            )
    violations.sort(key=lambda v: (v.kind, v.indices))
    return ValidationResult(violations)


def concavity_report(space: FiniteMetricSpace) -> ConcavityReport:
    """Concavity gap: min of d(x,y) + d(y,z) - d(x,z) over pairwise distinct triples."""
    d = space.dist
    n = space.size
    if n < 2:
        return ConcavityReport(np.inf, None, np.inf, 0.0)
    off = ~np.eye(n, dtype=bool)
    separation = float(d[off].min())
    diameter = float(d.max())
    if n < 3:
        return ConcavityReport(np.inf, None, separation, diameter)

    gap, witness = np.inf, None
    # the expression is symmetric in (x, z), so the ordered minimum equals
    # the minimum over the full matrix for each middle point y
    for y in range(n):
        g = d[:, y][:, None] + d[y, :][None, :] - d
        g[y, :] = np.inf
        g[:, y] = np.inf
        np.fill_diagonal(g, np.inf)
        flat = int(np.argmin(g))
        if g.flat[flat] < gap:
            gap = float(g.flat[flat])
            x, z = divmod(flat, n)
            witness = (int(x), y, int(z))
    return ConcavityReport(gap, witness, separation, diameter)


def is_strongly_concave(space: FiniteMetricSpace, c: float) -> bool:
    c = check_positive("c", c)
    return concavity_report(space).gap >= c


def snowflake(space: FiniteMetricSpace, p: float) -> FiniteMetricSpace:
    """Return the space with every distance raised to the power ``p`` in (0, 1)."""
    if not 0 < p < 1:
        raise ValueError(f"snowflake exponent must lie in (0, 1), got {p!r}")
    return FiniteMetricSpace(space.labels, np.power(space.dist, p))


def make_discrete(n: int) -> FiniteMetricSpace:
    return make_equilateral(n, 1.0)


def make_equilateral(n: int, lam: float) -> FiniteMetricSpace:
    n = check_count("n", n)
    lam = check_positive("lambda", lam)
    dist = np.full((n, n), lam)
    np.fill_diagonal(dist, 0.0)
    return FiniteMetricSpace.from_matrix(dist)


def make_random_strongly_concave(
    n: int, c: float, seed: int, margin: float = 0.05, max_attempts: int = 100
) -> FiniteMetricSpace:
    """Random space with concavity gap at least ``c``.

    Off-diagonal distances are drawn uniformly from ``[s, 2s - c']`` with
    ``c' = c * (1 + margin)`` and a random base scale ``s`` in ``[c', 3c']``.
    Any two distances from that window sum to at least ``2s``, so every
    triangle slack is at least ``c'``; the draw is re-checked and rejected on
    rounding failures.
    """
    n = check_count("n", n)
    c = check_positive("c", c)
    rng = np.random.default_rng(seed)
    c_eff = c * (1.0 + margin)
    for _ in range(max_attempts):
        s = c_eff * rng.uniform(1.0, 3.0)
        upper = np.triu(rng.uniform(s, 2.0 * s - c_eff, size=(n, n)), k=1)
        space = FiniteMetricSpace.from_matrix(upper + upper.T)
        if n < 3 or is_strongly_concave(space, c):
            return space
    raise RuntimeError(f"no strongly concave draw in {max_attempts} attempts")
