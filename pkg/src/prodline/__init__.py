"""Simulator for a single-queue production line whose machine fails at a rate
driven by the workload processed since its last repair.

The line couples a queue, a density transport equation on the processor and a
workload integrator; machine failures and repairs are jumps of a piecewise
deterministic process, sampled exactly by thinning. Monte Carlo ensembles give
expected-quantity curves and repair-count distributions.
"""

__version__ = "0.1.0"

from .model import (
    ConfigurationError,
    ModelParams,
    PiecewiseConstantInflow,
    Scenario,
    SystemState,
    failure_rate,
    mean_time_to_failure,
    repair_rate,
)
from .flow import FlowStepReport, flow_advance, queue_step, upwind_step, workload_step
from .trajectory import (
    JumpEvent,
    TrajectoryRecord,
    accept_candidate,
    apply_jump,
    first_failure_survival_oracle,
    first_failure_time,
    propose_next_candidate,
    rate_bound,
    simulate_trajectory,
)
from .ensemble import EnsembleStats, estimate_moments, repair_count_histogram, run_ensemble

__all__ = [
    "__version__",
    "ConfigurationError",
    "ModelParams",
    "PiecewiseConstantInflow",
    "Scenario",
    "SystemState",
    "failure_rate",
    "repair_rate",
    "mean_time_to_failure",
    "FlowStepReport",
    "queue_step",
    "upwind_step",
    "workload_step",
    "flow_advance",
    "JumpEvent",
    "TrajectoryRecord",
    "rate_bound",
    "propose_next_candidate",
    "accept_candidate",
    "apply_jump",
    "simulate_trajectory",
    "first_failure_time",
    "first_failure_survival_oracle",
    "EnsembleStats",
    "run_ensemble",
    "estimate_moments",
    "repair_count_histogram",
]
