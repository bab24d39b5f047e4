"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the supported range of an evaluation."""


class PoleError(ArithmeticError):
    """A ratio was requested too close to a zero of its denominator."""


class ConvergenceError(RuntimeError):
    """An iterative method did not reach its tolerance."""


class InvalidBodyError(ValueError):
    """Deformation data or epsilon do not describe a valid convex body."""


class ResolutionError(ValueError):
    """Solver window exceeds what the trial basis can resolve."""


class MatchError(RuntimeError):
    """Located eigenvalues could not be matched to the expected modes."""


class ClassificationError(RuntimeError):
    """A verdict could not be backed by a certificate."""


class SpectrumTieError(RuntimeError):
    """Two distinct disk modes agree to within the tie tolerance."""


class SuiteViolation(RuntimeError):
    """A certificate suite produced a verdict contradicting its claim."""

    def __init__(self, message: str, certificates=()):
        super().__init__(message)
        self.certificates = list(certificates)
