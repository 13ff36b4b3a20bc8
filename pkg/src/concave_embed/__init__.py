"""Isometric embeddings of strongly concave metric spaces into near-sup norms."""

from .diagonal import ExtractionResult, LazyMetric, embed_via_c, extract_convergent_subset
from .equilateral import equilateral_set, verify_equilateral
from .estimators import ConcaveMetricEmbedding, FrechetEmbedding
from .exceptions import (
    ConcaveEmbedError,
    ExtractionShortfallError,
    IdentityViolationError,
    InadmissibleNormError,
    KInvarianceError,
    NormAxiomError,
    NotStronglyConcaveError,
    StructuralError,
)
from .fixed_point import (
    IterationDiagnostics,
    PerturbationState,
    SolverConfig,
    embed,
    perturbed_points,
    phi_map,
    solve_fixed_point,
    sup_distance_identity,
)
from .frechet import Embedding, frechet_sigma, frechet_translated
from .metric_core import (
    ConcavityReport,
    FiniteMetricSpace,
    concavity_report,
    is_strongly_concave,
    make_discrete,
    make_equilateral,
    make_random_strongly_concave,
    snowflake,
    validate,
)
from .norms import DistortionCertificate, NormSpec, certify_distortion, delta_admissible, eval_norm

__version__ = "0.1.0"
