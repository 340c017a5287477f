"""Exception hierarchy shared by all modules."""


class MaxRigidError(Exception):
    """Base class for errors raised by maxrigid."""


class QuadratureDivergence(MaxRigidError):
    """The truncated spectral integral did not settle within the radius budget."""


class Inconclusive(MaxRigidError):
    """A numerical classifier could not reach a verdict."""


class SingularGram(MaxRigidError):
    """The Gram matrix is too ill-conditioned to solve without regularization."""


class EmbeddingNotPSD(MaxRigidError):
    """Circulant embedding produced significantly negative eigenvalues."""


class NoCertificate(MaxRigidError):
    """The gap-polynomial search exhausted its degree budget."""


class ClusteredZeros(MaxRigidError):
    """Two sign changes could not be separated at the finest refinement."""


class ApproximantFailure(MaxRigidError):
    """A one-dimensional approximant missed its tolerance at the allotted degree."""


class ConfigError(MaxRigidError):
    """An experiment configuration does not validate."""


class BudgetExceeded(MaxRigidError):
    """An experiment schedule exceeds the documented runtime guard."""
