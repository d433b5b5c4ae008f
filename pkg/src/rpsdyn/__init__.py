"""Coupled rock-paper-scissors replicator dynamics with environmental feedback."""

from .analysis import (
    RecurrenceConfig,
    RecurrenceReport,
    drift_stats,
    ensemble_spread,
    log_volume_proxy,
    recurrence_scan,
)
from .errors import (
    BarrierDivergenceError,
    BoundaryApproachError,
    DegenerateEnsembleError,
    StepUnderflowError,
)
from .integrate import (
    IntegratorConfig,
    Trajectory,
    accumulated_divergence,
    divergence_fd,
    integrate,
    jacobian_trace_along,
    step_rk4,
)
from .io import read_trajectory, write_trajectory
from .model import (
    ModelParams,
    PayoffMatrix,
    SimplexPoint,
    SystemState,
    TransformedState,
    conserved_quantity,
    favor_matrix,
    fitness,
    inverse_transform,
    inverse_transform_state,
    make_rhs,
    payoff_matrix,
    renormalized_field,
    rps_base_matrix,
    simplex_field,
    transform,
    transform_state,
    transformed_field,
    uniform_state,
)
from .sampling import random_interior_state

__version__ = "0.1.0"

__all__ = [
    "BarrierDivergenceError",
    "BoundaryApproachError",
    "DegenerateEnsembleError",
    "IntegratorConfig",
    "ModelParams",
    "PayoffMatrix",
    "RecurrenceConfig",
    "RecurrenceReport",
    "SimplexPoint",
    "StepUnderflowError",
    "SystemState",
    "Trajectory",
    "TransformedState",
    "accumulated_divergence",
    "conserved_quantity",
    "divergence_fd",
    "drift_stats",
    "ensemble_spread",
    "favor_matrix",
    "fitness",
    "integrate",
    "inverse_transform",
    "inverse_transform_state",
    "jacobian_trace_along",
    "log_volume_proxy",
    "make_rhs",
    "payoff_matrix",
    "random_interior_state",
    "read_trajectory",
    "recurrence_scan",
    "renormalized_field",
    "rps_base_matrix",
    "simplex_field",
    "step_rk4",
    "transform",
    "transform_state",
    "transformed_field",
    "uniform_state",
    "write_trajectory",
]
