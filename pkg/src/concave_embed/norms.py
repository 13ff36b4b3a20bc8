"""Concrete norms on R^n close to the sup norm, and their distortion certificates.

All parametric norms are normalised so that ``||x|| <= ||x||_inf``; the
distortion ``delta`` is then the smallest number with
``||x||_inf <= (1 + delta) ||x||``.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from ._validation import check_count, check_positive, check_vector
from .exceptions import NormAxiomError

__all__ = [
    "NormSpec",
    "DistortionCertificate",
    "eval_norm",
    "certify_distortion",
    "delta_admissible",
    "weighted_sup_for_delta",
    "sup_plus_l1_for_delta",
]

KINDS = ("sup", "weighted_sup", "sup_plus_l1", "custom")


@dataclass(frozen=True)
class NormSpec:
    """A norm on ``dimension``-dimensional coordinate space.

    Build instances through the classmethods rather than the constructor.
    ``weighted_sup`` weights are divided by their maximum, and
    ``sup_plus_l1`` is divided by ``1 + beta * dimension`` unless
    ``rescaled=False``.
    """

    kind: str
    dimension: int
    weights: Optional[Tuple[float, ...]] = None
    beta: Optional[float] = None
    rescaled: bool = True
    evaluator: Optional[Callable] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}; expected one of {KINDS}")
        check_count("dimension", self.dimension)
        if self.kind == "weighted_sup":
            if self.weights is None or len(self.weights) != self.dimension:
                raise ValueError("weighted_sup needs exactly `dimension` weights")
            if not all(np.isfinite(w) and w > 0 for w in self.weights):
                raise ValueError(f"weights must be finite and > 0, got {self.weights}")
        if self.kind == "sup_plus_l1":
            check_positive("beta", self.beta, allow_zero=True)
        if self.kind == "custom" and not callable(self.evaluator):
            raise ValueError("custom norm needs a callable evaluator")

    @classmethod
    def sup(cls, dimension):
        return cls("sup", dimension)

    @classmethod
    def weighted_sup(cls, weights):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0 or not np.all(w > 0):
            raise ValueError("weights must be a nonempty vector of positive numbers")
        w = w / w.max()
        return cls("weighted_sup", int(w.size), weights=tuple(float(x) for x in w))

    @classmethod
    def sup_plus_l1(cls, dimension, beta, rescaled=True):
        return cls("sup_plus_l1", dimension, beta=float(beta), rescaled=rescaled)

    @classmethod
    def custom(cls, dimension, evaluator):
        """``evaluator`` maps a vector of length ``dimension`` to a float."""
        return cls("custom", dimension, evaluator=evaluator)

    @property
    def certified(self) -> bool:
        return self.kind != "custom"

    def __call__(self, v):
        return eval_norm(self, v)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "dimension": self.dimension}
        if self.weights is not None:
            out["weights"] = list(self.weights)
        if self.beta is not None:
            out["beta"] = self.beta
            out["rescaled"] = self.rescaled
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "NormSpec":
        kind = data.get("kind")
        if kind == "sup":
            return cls.sup(int(data["dimension"]))
        if kind == "weighted_sup":
            spec = cls.weighted_sup(data["weights"])
            if "dimension" in data and int(data["dimension"]) != spec.dimension:
                raise ValueError("dimension: does not match the number of weights")
            return spec
        if kind == "sup_plus_l1":
            return cls.sup_plus_l1(
                int(data["dimension"]), float(data["beta"]), data.get("rescaled", True)
            )
        if kind == "custom":
            raise ValueError("kind: custom norms cannot be loaded from JSON")
        raise ValueError(f"kind: unknown norm kind {kind!r}")

    def with_dimension(self, dimension: int) -> "NormSpec":
        """Same family at another dimension (only for sup and sup_plus_l1)."""
        if self.kind == "sup":
            return NormSpec.sup(dimension)
        if self.kind == "sup_plus_l1":
            return NormSpec.sup_plus_l1(dimension, self.beta, self.rescaled)
        if dimension == self.dimension:
            return self
        raise ValueError(f"cannot change the dimension of a {self.kind} norm")


@dataclass(frozen=True)
class DistortionCertificate:
    """Frames ``lower * ||x||_inf <= ||x|| <= upper * ||x||_inf``.

    ``delta = upper / lower - 1``. For custom norms the frames are sampled,
    so ``delta`` is only a lower bound on the true distortion and
    ``certified`` is False.
    """

    delta: float
    lower_frame: float
    upper_frame: float
    certified: bool


def eval_norm(spec: NormSpec, v) -> float:
    """Evaluate the norm along the last axis of ``v`` (so batches of rows work)."""
    v = check_vector(v, spec.dimension)
    a = np.abs(v)
    if spec.kind == "sup":
        out = a.max(axis=-1)
    elif spec.kind == "weighted_sup":
        out = (a * np.asarray(spec.weights)).max(axis=-1)
    elif spec.kind == "sup_plus_l1":
        out = a.max(axis=-1) + spec.beta * a.sum(axis=-1)
        if spec.rescaled:
            out = out / (1.0 + spec.beta * spec.dimension)
    else:
        if v.ndim == 1:
            return float(spec.evaluator(v))
        flat = v.reshape(-1, spec.dimension)
        out = np.array([spec.evaluator(row) for row in flat]).reshape(v.shape[:-1])
    return float(out) if np.ndim(out) == 0 else out


def certify_distortion(spec: NormSpec, samples: int = 10_000, seed: int = 0) -> DistortionCertificate:
    n = spec.dimension
    if spec.kind == "sup":
        return DistortionCertificate(0.0, 1.0, 1.0, True)
    if spec.kind == "weighted_sup":
        w = np.asarray(spec.weights)
        lo, hi = float(w.min()), float(w.max())
        return DistortionCertificate(hi / lo - 1.0, lo, hi, True)
    if spec.kind == "sup_plus_l1":
        # ||x||_1 ranges over [||x||_inf, n ||x||_inf]; extremes at e_1 and (1,...,1)
        scale = 1.0 + spec.beta * n if spec.rescaled else 1.0
        lo, hi = (1.0 + spec.beta) / scale, (1.0 + spec.beta * n) / scale
        return DistortionCertificate(hi / lo - 1.0, lo, hi, True)

    samples = check_count("samples", samples)
    rng = np.random.default_rng(seed)
    ratios = np.empty(samples)
    for i in range(samples):
        v = rng.standard_normal(n)
        w = rng.standard_normal(n)
        t = rng.uniform(-3.0, 3.0)
        nv, nw = eval_norm(spec, v), eval_norm(spec, w)
        scale = max(nv, nw, 1.0)
        if not nv > 0:
            raise NormAxiomError("norm not positive on a nonzero vector", v)
        if abs(eval_norm(spec, t * v) - abs(t) * nv) > 1e-9 * max(1.0, abs(t)) * scale:
            raise NormAxiomError(f"positive homogeneity fails for t={t}", v)
        if eval_norm(spec, v + w) > nv + nw + 1e-9 * scale:
            raise NormAxiomError("triangle inequality fails", np.stack([v, w]))
        ratios[i] = nv / np.abs(v).max()
    lo, hi = float(ratios.min()), float(ratios.max())
    return DistortionCertificate(hi / lo - 1.0, lo, hi, False)


def delta_admissible(delta: float, eta: float, diameter: float) -> bool:
    """Whether distortion ``delta`` keeps the cube [0, eta]^pairs invariant.

    Sufficient condition ``delta / (1 + delta) * (diameter + eta) <= eta``,
    evaluated without the division.
    """
    check_positive("delta", delta, allow_zero=True)
    check_positive("eta", eta)
    check_positive("diameter", diameter)
    return delta * (diameter + eta) <= eta * (1.0 + delta)


def weighted_sup_for_delta(dimension: int, delta: float) -> NormSpec:
    """Weights falling linearly from 1 (first coordinate) to ``1 / (1 + delta)``."""
    check_count("dimension", dimension)
    check_positive("delta", delta, allow_zero=True)
    if dimension == 1:
        return NormSpec.weighted_sup([1.0])
    t = np.arange(dimension) / (dimension - 1)
    return NormSpec.weighted_sup(1.0 - t * (1.0 - 1.0 / (1.0 + delta)))


def sup_plus_l1_for_delta(dimension: int, delta: float) -> NormSpec:
    """Rescaled sup + beta * l1 whose certified distortion is exactly ``delta``.

    Solves ``beta * (n - 1) / (1 + beta) = delta`` for beta; needs ``delta < n - 1``.
    """
    check_count("dimension", dimension, minimum=2)
    check_positive("delta", delta, allow_zero=True)
    if delta >= dimension - 1:
        raise ValueError(f"sup_plus_l1 in dimension {dimension} cannot reach delta={delta}")
    return NormSpec.sup_plus_l1(dimension, delta / (dimension - 1 - delta))
