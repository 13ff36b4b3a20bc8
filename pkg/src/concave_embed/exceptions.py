"""Exception hierarchy.

Everything derives from ``ValueError`` so callers that only care about
"bad input" can catch the builtin.
"""


class ConcaveEmbedError(ValueError):
    """Base class for all errors raised by this package."""


class StructuralError(ConcaveEmbedError):
    """Input cannot be interpreted as a distance matrix at all."""


class NotStronglyConcaveError(ConcaveEmbedError):
    """The space has concavity gap 0, or a requested eta exceeds the gap."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NormAxiomError(ConcaveEmbedError):
    """A custom norm failed a norm axiom on a sampled vector."""

    def __init__(self, message, vector=None):
        super().__init__(message)
        self.vector = vector


class InadmissibleNormError(ConcaveEmbedError):
    """The norm's distortion is too large for the perturbation cube to be invariant."""


class IdentityViolationError(ConcaveEmbedError):
    """The sup-distance identity failed; ``coordinate`` is the witnessing index."""

    def __init__(self, message, coordinate=None):
        super().__init__(message)
        self.coordinate = coordinate


class KInvarianceError(ConcaveEmbedError):
    """A coordinate of the correction map left the cube [0, eta]."""


class ExtractionShortfallError(ConcaveEmbedError):
    """Horizon exhausted before the requested number of indices was extracted."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
