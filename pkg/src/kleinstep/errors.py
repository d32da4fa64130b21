"""Exception hierarchy shared by all kleinstep modules."""


class KleinStepError(Exception):
    """Base class for every error raised by this package."""


class DomainError(KleinStepError):
    """Input outside the physical domain (e.g. m <= 0, E <= m, r < 0)."""


class ThresholdError(KleinStepError):
    """Energy too close to a spectral threshold where the formulas are singular."""


class PoleError(KleinStepError):
    """Gamma function evaluated at (or too close to) a non-positive integer."""

    def __init__(self, z, context: str = ""):
        self.z = complex(z)
        self.context = context
        where = f" in {context}" if context else ""
        super().__init__(f"Gamma pole at z={self.z}{where}")


class NonConvergence(KleinStepError):
    """Series failed to converge within the configured term budget."""


class DegenerateParams(KleinStepError):
    """Hypergeometric connection formula degenerate (c-a-b too close to an integer)."""


class RegimeError(KleinStepError):
    """Quantity requested in an energy regime where it is not defined."""


class GridTooCoarse(KleinStepError):
    """Finite-difference grid outside the second-order convergence regime."""


class GridMismatch(KleinStepError):
    """Two sampled fields do not share the same spatial grid."""


class StepUnderflow(KleinStepError):
    """Adaptive ODE integrator step size underflowed."""
