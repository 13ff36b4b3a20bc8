"""Isometric embedding into a near-sup norm by perturbing the Fréchet embedding.

Point ``n`` (0-based) gets coordinates

    p_n(eps)[k] = d(x_n, x_k) - d(x_0, x_k) + eps[n, k]     (eps[n, k] = 0 for k >= n)

with ``eps`` in the cube ``K = [0, eta]^pairs``. If the space has concavity
gap at least ``eta`` then ``||p_n - p_m||_inf = d(x_n, x_m) + eps[m, n]``
for every ``n < m``, so the correction map

    phi[m, n](eps) = d(x_n, x_m) + eps[m, n] - ||p_n(eps) - p_m(eps)||

takes values in ``[0, delta / (1 + delta) * (d + eps)]``. A fixed point of
``phi`` gives ``||p_n - p_m|| = d(x_n, x_m)`` exactly. Existence comes from
Schauder's theorem; we search for it by damped Picard iteration.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from .exceptions import (
    IdentityViolationError,
    InadmissibleNormError,
    KInvarianceError,
    NotStronglyConcaveError,
)
from .frechet import Embedding
from .metric_core import FiniteMetricSpace, concavity_report
from .norms import NormSpec, certify_distortion, delta_admissible, eval_norm

__all__ = [
    "PerturbationState",
    "SolverConfig",
    "IterationDiagnostics",
    "perturbed_points",
    "sup_distance_identity",
    "phi_map",
    "solve_fixed_point",
    "embed",
]

logger = logging.getLogger(__name__)

# elements per chunk when materialising pairwise difference vectors
_CHUNK = 1 << 20


class PerturbationState:
    """A point of the cube ``[0, eta]^pairs``, one value per pair ``m > n``.

    Indexing follows the lower triangle: ``state[m, n]`` for ``m > n``;
    reads with ``n >= m`` return 0 and are never stored.
    """

    def __init__(self, eta, n_points, values=None):
        if not eta > 0:
            raise ValueError(f"eta must be > 0, got {eta!r}")
        self.eta = float(eta)
        self.n_points = int(n_points)
        n_pairs = self.n_points * (self.n_points - 1) // 2
        if values is None:
            values = np.zeros(n_pairs)
        values = np.array(values, dtype=float)
        if values.shape != (n_pairs,):
            raise ValueError(f"expected {n_pairs} pair values, got shape {values.shape}")
        self.values = values

    @classmethod
    def zeros(cls, eta, n_points):
        return cls(eta, n_points)

    @classmethod
    def from_dict(cls, eta, n_points, entries):
        """Build from ``{(m, n): value}`` with ``m > n``."""
        state = cls(eta, n_points)
        for (m, n), v in entries.items():
            state.values[state._index(m, n)] = v
        return state

    def _index(self, m, n):
        if not (0 <= n < m < self.n_points):
            raise IndexError(f"pair ({m}, {n}) out of range for {self.n_points} points")
        return m * (m - 1) // 2 + n

    def __getitem__(self, key):
        m, n = key
        if not (0 <= m < self.n_points and 0 <= n < self.n_points):
            raise IndexError(f"pair ({m}, {n}) out of range for {self.n_points} points")
        if n >= m:
            return 0.0
        return float(self.values[self._index(m, n)])

    def items(self):
        rows, cols = np.tril_indices(self.n_points, k=-1)
        for m, n, v in zip(rows, cols, self.values):
            yield (int(m), int(n)), float(v)

    def matrix(self) -> np.ndarray:
        out = np.zeros((self.n_points, self.n_points))
        out[np.tril_indices(self.n_points, k=-1)] = self.values
        return out

    def in_cube(self, tol=0.0) -> bool:
        return bool(np.all(self.values >= -tol) and np.all(self.values <= self.eta + tol))

    def copy(self):
        return PerturbationState(self.eta, self.n_points, self.values.copy())

    def __repr__(self):
        return (
            f"PerturbationState(eta={self.eta:g}, n_points={self.n_points}, "
            f"max={self.values.max(initial=0.0):g})"
        )


@dataclass
class SolverConfig:
    """Settings for :func:`solve_fixed_point`.

    ``tolerance=None`` means ``1e-12 * (diameter + eta)``; ``eta=None`` means
    the concavity gap of the space.
    """

    max_iterations: int = 10_000
    tolerance: Optional[float] = None
    damping: float = 1.0
    eta: Optional[float] = None
    allow_uncertified_norm: bool = False
    enforce_admissibility: bool = True
    adaptive_damping: bool = True

    def __post_init__(self):
        if not 0 < self.damping <= 1:
            raise ValueError(f"damping must lie in (0, 1], got {self.damping!r}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")


@dataclass
class IterationDiagnostics:
    iterations: int = 0
    residual_history: List[float] = field(default_factory=list)
    final_residual: float = np.inf
    converged: bool = False
    bound_violations: int = 0
    tolerance: float = 0.0
    delta: float = 0.0
    eta: float = 0.0
    damping: float = 1.0
    # min over pairs of eta - delta/(1+delta) * (d + eta); >= 0 iff admissible pairwise
    admissibility_slack: float = np.inf
    max_identity_error: float = 0.0
    # over all steps: most negative phi value and largest excess over the upper bound
    min_phi: float = np.inf
    max_bound_excess: float = -np.inf

    def to_dict(self) -> dict:
        return {k: (float(v) if isinstance(v, np.floating) else v) for k, v in asdict(self).items()}


def _check_state(space: FiniteMetricSpace, state: PerturbationState):
    if state.n_points != space.size:
        raise ValueError(
            f"state has {state.n_points} points, space has {space.size}"
        )


def perturbed_points(space: FiniteMetricSpace, state: PerturbationState) -> np.ndarray:
    """Rows ``p_n(eps)``; with ``eps = 0`` this is the translated Fréchet embedding."""
    _check_state(space, state)
    d = space.dist
    return d - d[0][None, :] + state.matrix()


def _pair_norms(points, norm, rows, cols):
    """Sup norm and target norm of ``points[cols] - points[rows]`` per pair."""
    n_pairs = rows.size
    sup = np.empty(n_pairs)
    target = np.empty(n_pairs)
    step = max(1, _CHUNK // max(1, points.shape[1]))
    for start in range(0, n_pairs, step):
        sl = slice(start, start + step)
        diff = points[cols[sl]] - points[rows[sl]]
        sup[sl] = np.abs(diff).max(axis=1)
        if norm.kind == "sup":
            target[sl] = sup[sl]
        else:
            target[sl] = eval_norm(norm, diff)
    return sup, target


def _identity_tol(space, eta):
    return 4.0 * np.spacing(2.0 * (space.diameter + eta))


def sup_distance_identity(space: FiniteMetricSpace, state: PerturbationState, n: int, m: int) -> float:
    """Return ``||p_n - p_m||_inf`` after checking it equals ``d(x_n, x_m) + eps[m, n]``.

    Raises IdentityViolationError naming the coordinate that breaks the
    identity; that happens when the space is not ``eta``-strongly concave or
    the state left the cube.
    """
    if not 0 <= n < m < space.size:
        raise ValueError(f"need 0 <= n < m < {space.size}, got n={n}, m={m}")
    points = perturbed_points(space, state)
    diff = np.abs(points[n] - points[m])
    value = float(diff.max())
    expected = space.dist[n, m] + state[m, n]
    if abs(value - expected) > _identity_tol(space, state.eta):
        k = int(np.argmax(diff))
        raise IdentityViolationError(
            f"sup distance of pair ({n}, {m}) is {value!r}, expected {expected!r}; "
            f"coordinate {k} attains {diff[k]!r}",
            coordinate=k,
        )
    return value


class _Problem:
    """Precomputed pieces shared by every evaluation of phi for one solve."""

    def __init__(self, space, norm, eta, delta):
        self.space = space
        self.norm = norm
        self.eta = eta
        self.delta = delta
        self.rows, self.cols = np.tril_indices(space.size, k=-1)  # rows = m > cols = n
        self.d_pairs = space.dist[self.rows, self.cols]
        self.scale = space.diameter + eta
        self.k_tol = 1e-9 * self.scale
        self.bound_tol = 1e-12 * max(1.0, self.scale)
        self.id_tol = _identity_tol(space, eta)

    def raw_phi(self, state):
        points = perturbed_points(self.space, state)
        sup, target = _pair_norms(points, self.norm, self.rows, self.cols)
        total = self.d_pairs + state.values
        return total - target, np.abs(sup - total).max(initial=0.0)

    def upper_bound(self, state):
        return self.delta / (1.0 + self.delta) * (self.d_pairs + state.values)

    def clip(self, raw):
        if raw.size and (raw.min() < -self.k_tol or raw.max() > self.eta + self.k_tol):
            bad = int(np.argmax(np.maximum(-raw, raw - self.eta)))
            m, n = int(self.rows[bad]), int(self.cols[bad])
            raise KInvarianceError(
                f"phi[{m}, {n}] = {raw[bad]!r} is outside [0, {self.eta!r}]; "
                f"the norm is too far from sup or eta exceeds the concavity gap"
            )
        return np.clip(raw, 0.0, self.eta)


def _resolve(space, norm, config):
    """Check preconditions; return (eta, delta, admissibility_slack)."""
    if norm.dimension != space.size:
        raise ValueError(
            f"norm dimension {norm.dimension} does not match {space.size} points"
        )
    cert = certify_distortion(norm)
    if not cert.certified and not config.allow_uncertified_norm:
        raise InadmissibleNormError(
            "custom norms have no certified distortion; set allow_uncertified_norm"
        )
    if cert.certified and cert.upper_frame > 1.0 + 1e-12:
        raise InadmissibleNormError(
            f"norm exceeds the sup norm (upper frame {cert.upper_frame!r}); "
            "use a rescaled norm"
        )
    delta = cert.delta

    report = concavity_report(space)
    diameter = space.diameter
    if report.gap <= 0:
        raise NotStronglyConcaveError(
            f"concavity gap is {report.gap!r} at triple {report.witness_triple}",
            witness=report.witness_triple,
        )
    if config.eta is not None:
        eta = float(config.eta)
        if not 0 < eta <= report.gap:
            raise NotStronglyConcaveError(
                f"eta={eta!r} must lie in (0, gap={report.gap!r}]",
                witness=report.witness_triple,
            )
    elif np.isfinite(report.gap):
        eta = report.gap
    else:
        # fewer than three points: no triple constrains eta
        eta = max(diameter, delta * diameter) if diameter > 0 else 1.0

    slack = np.inf
    if space.size >= 2:
        rows, cols = np.tril_indices(space.size, k=-1)
        slack = float(
            np.min(eta - delta / (1.0 + delta) * (space.dist[rows, cols] + eta))
        )
        if config.enforce_admissibility and not delta_admissible(delta, eta, diameter):
            raise InadmissibleNormError(
                f"delta={delta!r} is not admissible for eta={eta!r}, "
                f"diameter={diameter!r}"
            )
    return eta, delta, slack


def phi_map(
    space: FiniteMetricSpace,
    norm: NormSpec,
    state: PerturbationState,
    config: Optional[SolverConfig] = None,
) -> PerturbationState:
    """One application of the correction map; the result stays in the cube."""
    _check_state(space, state)
    config = config or SolverConfig(eta=state.eta)
    if config.eta is None:
        config = SolverConfig(**{**asdict(config), "eta": state.eta})
    eta, delta, _ = _resolve(space, norm, config)
    problem = _Problem(space, norm, eta, delta)
    raw, _ = problem.raw_phi(state)
    return PerturbationState(eta, space.size, problem.clip(raw))


def solve_fixed_point(
    space: FiniteMetricSpace, norm: NormSpec, config: Optional[SolverConfig] = None
):
    """Damped Picard iteration ``eps <- (1 - g) eps + g phi(eps)`` from ``eps = 0``.

    Stops when ``max |phi(eps) - eps| <= tolerance``. That residual is exactly
    the largest isometry defect ``| ||p_n - p_m|| - d(x_n, x_m) |`` at the
    current ``eps``, which is the state returned. Non-convergence is reported
    through ``diagnostics.converged``, never raised.

    With ``adaptive_damping`` the step is halved once when the residual keeps
    going up.

    Returns ``(state, diagnostics)``.
    """
    config = config or SolverConfig()
    eta, delta, slack = _resolve(space, norm, config)
    problem = _Problem(space, norm, eta, delta)
    tol = config.tolerance if config.tolerance is not None else 1e-12 * problem.scale
    diag = IterationDiagnostics(
        tolerance=tol, delta=delta, eta=eta, damping=config.damping,
        admissibility_slack=slack,
    )
    state = PerturbationState.zeros(eta, space.size)
    if space.size < 2:
        diag.iterations, diag.final_residual, diag.converged = 1, 0.0, True
        diag.residual_history.append(0.0)
        return state, diag

    gamma = config.damping
    rises = []
    for it in range(1, config.max_iterations + 1):
        raw, id_err = problem.raw_phi(state)
        diag.max_identity_error = max(diag.max_identity_error, float(id_err))
        if id_err > problem.id_tol + 1e-12 * problem.scale:
            raise IdentityViolationError(
                f"sup-distance identity off by {id_err!r} at iteration {it}"
            )
        excess = raw - problem.upper_bound(state)
        diag.min_phi = min(diag.min_phi, float(raw.min()))
        diag.max_bound_excess = max(diag.max_bound_excess, float(excess.max()))
        if raw.min() < -problem.bound_tol or excess.max() > problem.bound_tol:
            diag.bound_violations += 1
        phi = problem.clip(raw)

        residual = float(np.abs(phi - state.values).max())
        diag.residual_history.append(residual)
        diag.iterations = it
        if residual <= tol:
            diag.converged = True
            break

        if config.adaptive_damping and gamma == config.damping and it > 1:
            rises.append(residual > diag.residual_history[-2])
            if sum(rises[-5:]) >= 2:
                gamma = 0.5 * config.damping
                diag.damping = gamma
                logger.debug("residual oscillating at iteration %d; damping -> %g", it, gamma)
        state = PerturbationState(eta, space.size, (1.0 - gamma) * state.values + gamma * phi)

    diag.final_residual = diag.residual_history[-1]
    if not diag.converged:
        logger.info(
            "no fixed point after %d iterations (residual %g)", diag.iterations, diag.final_residual
        )
    return state, diag


def embed(
    space: FiniteMetricSpace, norm: NormSpec, config: Optional[SolverConfig] = None
) -> Embedding:
    """Isometric copy of ``space`` in ``(R^N, norm)``.

    Check ``embedding.converged``: without convergence the points are the
    best state reached and ``max_residual`` says how far off they are.
    """
    state, diag = solve_fixed_point(space, norm, config)
    points = perturbed_points(space, state)
    return Embedding.from_points(points, norm, space, state=state, diagnostics=diag)
