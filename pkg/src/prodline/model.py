"""Domain types and hazard functions for a failure-prone single-processor production line.

The processor occupies the interval (a, b) and transports goods with velocity v
while its capacity is mu = r * c, where the machine status r flips between up (1)
and down (0) at random times. The failure hazard grows with the workload w
accumulated since the last repair (the shape of a scaled Weibull distribution
function between a minimum and a maximum rate); the repair rate is constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

__all__ = [
    "ConfigurationError",
    "ModelParams",
    "SystemState",
    "PiecewiseConstantInflow",
    "Scenario",
    "failure_rate",
    "repair_rate",
    "mean_time_to_failure",
]


class ConfigurationError(ValueError):
    """A parameter set or scenario violates a structural constraint."""


@dataclass(frozen=True)
class ModelParams:
    """Physical and hazard parameters of the line.

    Defaults are the reference experiment: unit velocity, unit-length processor,
    capacity 2, failure rate ramping from 0.1 to 2.0 on the Weibull scale
    theta1=0.1 / shape theta2=5, repair rate 2.
    """

    v: float = 1.0
    a: float = 0.0
    b: float = 1.0
    c: float = 2.0
    lambda_10_min: float = 0.1
    lambda_10_max: float = 2.0
    theta1: float = 0.1
    theta2: float = 5.0
    lambda_01: float = 2.0

    def __post_init__(self):
        if not self.v > 0:
            raise ConfigurationError("v must be > 0")
        if not self.b > self.a:
            raise ConfigurationError("b must be > a")
        if not self.c > 0:
            raise ConfigurationError("c must be > 0")
        if self.lambda_10_min < 0:
            raise ConfigurationError("lambda_10_min must be >= 0")
        if self.lambda_10_max < self.lambda_10_min:
            raise ConfigurationError("lambda_10_max must be >= lambda_10_min")
        if not self.theta1 > 0:
            raise ConfigurationError("theta1 must be > 0")
        if not self.theta2 > 0:
            raise ConfigurationError("theta2 must be > 0")
        # 0 is allowed: a machine that never repairs is a valid degenerate case.
        if self.lambda_01 < 0:
            raise ConfigurationError("lambda_01 must be >= 0")


@dataclass(frozen=True, eq=False)
class SystemState:
    """Instantaneous state (w, r, q, rho) of the line at time t.

    w is the workload processed since the last repair, r the machine status,
    q the queue length in front of the processor, and rho the cell-average
    density grid on (a, b).
    """

    w: float
    r: int
    q: float
    rho: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "rho", np.asarray(self.rho, dtype=float))
        if self.w < 0:
            raise ValueError("workload w must be >= 0")
        if self.q < 0:
            raise ValueError("queue length q must be >= 0")
        if self.r not in (0, 1):
            raise ValueError("machine status r must be 0 or 1")
        if np.any(self.rho < 0):
            raise ValueError("density cells must be >= 0")

    def wip(self, dx: float) -> float:
        """Mass of goods currently inside the processor (rectangle rule)."""
        return dx * float(self.rho.sum())


@dataclass(frozen=True, eq=False)
class PiecewiseConstantInflow:
    """Inflow profile G_in(t): values[i] applies on [times[i], times[i+1]).

    The first breakpoint must be 0; the last value extends to infinity.
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.atleast_1d(np.asarray(self.times, dtype=float))
        values = np.atleast_1d(np.asarray(self.values, dtype=float))
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if times.shape != values.shape or times.ndim != 1 or times.size == 0:
            raise ConfigurationError("inflow times and values must be 1d and equally long")
        if times[0] != 0.0:
            raise ConfigurationError("inflow profile must start at t = 0")
        if np.any(np.diff(times) <= 0):
            raise ConfigurationError("inflow breakpoints must be strictly increasing")
        if np.any(values < 0):
            raise ConfigurationError("inflow values must be >= 0")

    @classmethod
    def constant(cls, value: float) -> "PiecewiseConstantInflow":
        return cls(np.array([0.0]), np.array([float(value)]))

    def __call__(self, t: float) -> float:
        values = self.values
        if values.size == 1:
            return float(values[0])
        i = np.searchsorted(self.times, t, side="right") - 1
        return float(values[i if i >= 0 else 0])


InflowLike = Union[PiecewiseConstantInflow, Callable[[float], float], float]


@dataclass(frozen=True, eq=False)
class Scenario:
    """A complete experiment: parameters, inflow, initial data, horizon, discretization.

    rho0 may be a scalar (uniform initial density) or a per-cell vector of length
    (b - a) / dx. w0 = None starts the workload at the initial processor mass,
    matching the model's stated initial condition; pass 0.0 to start empty.
    """

    params: ModelParams
    inflow: InflowLike
    rho0: Union[float, Sequence[float], np.ndarray] = 0.0
    q0: float = 0.0
    r0: int = 1
    horizon: float = 50.0
    dx: float = 0.1
    dt: float = 0.1
    w0: float | None = None
    output_thinning: int = 1
    n_cells: int = field(init=False)

    def __post_init__(self):
        p = self.params
        if isinstance(self.inflow, (int, float, np.floating)):
            object.__setattr__(self, "inflow", PiecewiseConstantInflow.constant(self.inflow))
        if not self.dx > 0 or not self.dt > 0:
            raise ConfigurationError("dx and dt must be > 0")
        if not self.horizon > 0:
            raise ConfigurationError("horizon must be > 0")
        if p.v * self.dt > self.dx * (1 + 1e-12):
            raise ConfigurationError(
                f"CFL violated: v*dt = {p.v * self.dt:g} exceeds dx = {self.dx:g}"
            )
        n_exact = (p.b - p.a) / self.dx
        n = round(n_exact)
        if n < 1 or abs(n_exact - n) > 1e-9 * max(1.0, n):
            raise ConfigurationError("(b - a) / dx must be a positive integer cell count")
        object.__setattr__(self, "n_cells", int(n))
        rho0 = np.asarray(self.rho0, dtype=float)
        if rho0.ndim == 0:
            rho0 = np.full(self.n_cells, float(rho0))
        if rho0.shape != (self.n_cells,):
            raise ConfigurationError(
                f"rho0 must be a scalar or a vector of {self.n_cells} cells"
            )
        if np.any(rho0 < 0):
            raise ConfigurationError("rho0 cells must be >= 0")
        object.__setattr__(self, "rho0", rho0)
        if self.q0 < 0:
            raise ConfigurationError("q0 must be >= 0")
        if self.r0 not in (0, 1):
            raise ConfigurationError("r0 must be 0 or 1")
        if self.w0 is not None and self.w0 < 0:
            raise ConfigurationError("w0 must be >= 0")
        if not (isinstance(self.output_thinning, int) and self.output_thinning >= 1):
            raise ConfigurationError("output_thinning must be a positive integer")

    def sample_times(self) -> np.ndarray:
        """Uniform output grid: multiples of dt * output_thinning, ending exactly at horizon."""
        stride = self.dt * self.output_thinning
        n = int(math.floor(self.horizon / stride + 1e-9))
        times = np.arange(n + 1) * stride
        if abs(times[-1] - self.horizon) <= 1e-9 * max(1.0, self.horizon):
            times[-1] = self.horizon
        else:
            times = np.append(times, self.horizon)
        return times

    def initial_state(self) -> SystemState:
        w0 = self.dx * float(self.rho0.sum()) if self.w0 is None else float(self.w0)
        return SystemState(w=w0, r=self.r0, q=float(self.q0), rho=self.rho0.copy(), t=0.0)


def failure_rate(w, params: ModelParams):
    """Hazard of an up machine at workload w.

    Equals lambda_10_min at w = 0, rises monotonically, and saturates at
    lambda_10_max; the transition is the Weibull distribution function with
    scale theta1 and shape theta2 evaluated at w.
    """
    arr = np.asarray(w, dtype=float)
    if np.any(arr < 0):
        raise ValueError("workload w must be >= 0")
    p = params
    with np.errstate(over="ignore"):
        lam = p.lambda_10_min - (p.lambda_10_max - p.lambda_10_min) * np.expm1(
            -((p.theta1 * arr) ** p.theta2)
        )
    return float(lam) if np.ndim(w) == 0 else lam


def repair_rate(w, params: ModelParams) -> float:
    """Hazard of a down machine: constant, independent of the workload."""
    return params.lambda_01


def mean_time_to_failure(params: ModelParams) -> float:
    """Expected lifetime Gamma(1 + 1/theta2) / theta1 of the Weibull law.

    Interpreted in workload units: the expected workload accumulated when the
    machine fails, for a hazard that has fully ramped.
    """
    if not (params.theta1 > 0 and params.theta2 > 0):
        raise ValueError("theta1 and theta2 must be > 0")
    return math.gamma(1.0 + 1.0 / params.theta2) / params.theta1
