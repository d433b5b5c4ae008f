"""Exception types shared across the package."""


class BarrierDivergenceError(ValueError):
    """Log-barrier quantity requested at a boundary state (a coordinate is 0)."""


class BoundaryApproachError(RuntimeError):
    """A trajectory coordinate fell below the configured boundary floor.

    The conserved quantity keeps exact orbits away from the simplex boundary,
    so a trip of this tripwire indicates integrator inaccuracy, not a model
    event.
    """


class StepUnderflowError(RuntimeError):
    """The adaptive step-size controller drove the step below 1e-14."""


class DegenerateEnsembleError(ValueError):
    """Ensemble cloud has a singular covariance (points not in general position)."""
