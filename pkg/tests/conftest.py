import numpy as np
import pytest
from dataclasses import replace

from prodline import ModelParams, PiecewiseConstantInflow, Scenario, flow_advance


@pytest.fixture
def paper_params():
    return ModelParams()


@pytest.fixture
def g1_scenario():
    return Scenario(params=ModelParams(), inflow=0.5)


@pytest.fixture
def g2_scenario():
    return Scenario(params=ModelParams(), inflow=1.5)


def jump_free_params():
    """Paper parameters with all jump rates zeroed."""
    return ModelParams(lambda_10_min=0.0, lambda_10_max=0.0, lambda_01=0.0)


def random_flow_scenario(rng):
    """A random but valid scenario for exercising the deterministic flow."""
    n_cells = int(rng.integers(1, 25))
    b = float(rng.uniform(0.4, 2.0))
    dx = b / n_cells
    v = float(rng.uniform(0.3, 3.0))
    dt = float(rng.uniform(0.25, 1.0)) * dx / v
    params = ModelParams(
        v=v, a=0.0, b=b, c=float(rng.uniform(0.2, 3.0)),
        lambda_10_min=0.0, lambda_10_max=0.0, lambda_01=0.0,
    )
    n_pieces = int(rng.integers(1, 4))
    times = np.concatenate(([0.0], np.cumsum(rng.uniform(0.2, 2.0, n_pieces - 1))))
    inflow = PiecewiseConstantInflow(times, rng.uniform(0.0, 3.0, n_pieces))
    return Scenario(
        params=params,
        inflow=inflow,
        rho0=rng.uniform(0.0, 2.0, n_cells),
        q0=float(rng.uniform(0.0, 2.0)),
        r0=int(rng.integers(0, 2)),
        horizon=8.0,
        dx=dx,
        dt=dt,
    )


def drive_random_r_schedule(scenario, rng, n_segments=8):
    """Advance the flow through random up/down segments; returns all step reports
    with the per-segment mass bound max(1, mass before, mass after)."""
    state = scenario.initial_state()
    checked = []
    t = state.t
    for _ in range(n_segments):
        t += float(rng.uniform(0.05, 1.2))
        mass_before = state.q + state.wip(scenario.dx)
        state, reports = flow_advance(state, t, scenario)
        mass_after = state.q + state.wip(scenario.dx)
        bound = max(1.0, mass_before, mass_after)
        checked.extend((r, bound) for r in reports)
        state = replace(state, r=1 - state.r)
    return state, checked
