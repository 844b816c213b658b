"""Single-path simulation of the production line as a piecewise deterministic process.

Jump times are sampled by thinning: candidate times arrive as an exponential clock
with the uniform rate bound, the deterministic flow is advanced to each candidate,
and the candidate is accepted with probability (current hazard) / bound. A failure
keeps the workload; a repair resets it to zero. Everything is deterministic given
(scenario, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .flow import _advance
from .model import ModelParams, Scenario, SystemState, failure_rate, repair_rate

__all__ = [
    "JumpEvent",
    "TrajectoryRecord",
    "rate_bound",
    "propose_next_candidate",
    "accept_candidate",
    "apply_jump",
    "simulate_trajectory",
    "first_failure_time",
    "first_failure_survival_oracle",
]


@dataclass(frozen=True)
class JumpEvent:
    """One status flip: kind is "failure" (1 -> 0) or "repair" (0 -> 1).

    state_after is the post-jump summary (w, r, q, processor mass).
    """

    time: float
    kind: str
    w_before: float
    state_after: tuple[float, int, float, float]


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """Observables of one simulated path on the uniform output grid plus its jump log."""

    sample_times: np.ndarray
    w_series: np.ndarray
    capacity_series: np.ndarray
    q_series: np.ndarray
    outflow_density_series: np.ndarray
    jumps: tuple[JumpEvent, ...]
    repair_count: int


def rate_bound(params: ModelParams) -> float:
    """Uniform bound on the jump intensity: max of the two rate ceilings."""
    return max(params.lambda_10_max, params.lambda_01)


def propose_next_candidate(t: float, lam: float, rng: np.random.Generator) -> float:
    """Next candidate jump time: t plus an Exp(lam) waiting time, strictly > t."""
    if lam <= 0:
        raise ValueError("candidate proposal needs a positive rate bound")
    u = rng.random()
    while u == 0.0:  # inverse transform; avoid log(0)
        u = rng.random()
    return t - math.log(u) / lam


def accept_candidate(
    state: SystemState, params: ModelParams, lam: float, rng: np.random.Generator
) -> bool:
    """Thinning acceptance: keep the candidate with probability hazard / bound.

    The hazard is the failure rate at the current workload for an up machine and
    the repair rate for a down one; it must not exceed the bound lam.
    """
    psi = failure_rate(state.w, params) if state.r == 1 else repair_rate(state.w, params)
    if psi > lam * (1 + 1e-12):
        raise RuntimeError(f"jump intensity {psi:g} exceeds the rate bound {lam:g}")
    return rng.random() < psi / lam


def apply_jump(state: SystemState) -> SystemState:
    """Flip the machine status; a repair also resets the workload to exactly 0."""
    if state.r == 1:
        return replace(state, r=0)
    return replace(state, w=0.0, r=1)


def simulate_trajectory(scenario: Scenario, seed) -> TrajectoryRecord:
    """Simulate one path on [0, horizon].

    seed is anything np.random.default_rng accepts; ensemble sample i uses
    (master_seed, i). Observables are recorded at the scenario's sample times;
    a sample coinciding with a jump records the post-jump value. Jump times are
    kept exact, the flow takes a shortened step to land on them.
    """
    rng = np.random.default_rng(seed)
    p = scenario.params
    lam = rate_bound(p)
    times = scenario.sample_times()
    m = times.size
    w_series = np.empty(m)
    capacity_series = np.empty(m)
    q_series = np.empty(m)
    outflow_series = np.empty(m)

    start = scenario.initial_state()
    w, r, q, rho = start.w, start.r, start.q, start.rho
    t = 0.0
    horizon = scenario.horizon
    dt, dx, inflow = scenario.dt, scenario.dx, scenario.inflow
    jumps: list[JumpEvent] = []

    def record(i: int) -> None:
        w_series[i] = w
        capacity_series[i] = p.c if r else 0.0
        q_series[i] = q
        outflow_series[i] = rho[-1]

    record(0)
    i = 1
    while True:
        t_cand = propose_next_candidate(t, lam, rng) if lam > 0 else math.inf
        t_stop = t_cand if t_cand < horizon else horizon
        while i < m and times[i] < t_stop:
            w, q = _advance(w, r, q, rho, t, times[i], p, inflow, dt, dx)
            t = times[i]
            record(i)
            i += 1
        w, q = _advance(w, r, q, rho, t, t_stop, p, inflow, dt, dx)
        t = t_stop
        if t_cand >= horizon:
            while i < m:  # only samples at exactly the horizon remain
                record(i)
                i += 1
            break
        state = SystemState(w=w, r=r, q=q, rho=rho, t=t)
        if accept_candidate(state, p, lam, rng):
            w_before = w
            jumped = apply_jump(state)
            w, r = jumped.w, jumped.r
            jumps.append(
                JumpEvent(
                    time=t,
                    kind="failure" if state.r == 1 else "repair",
                    w_before=w_before,
                    state_after=(w, r, q, dx * float(rho.sum())),
                )
            )
        while i < m and times[i] <= t:  # sample exactly at a jump: post-jump value
            record(i)
            i += 1

    repair_count = sum(1 for j in jumps if j.kind == "repair")
    return TrajectoryRecord(
        sample_times=times,
        w_series=w_series,
        capacity_series=capacity_series,
        q_series=q_series,
        outflow_density_series=outflow_series,
        jumps=tuple(jumps),
        repair_count=repair_count,
    )


def first_failure_time(scenario: Scenario, seed) -> float:
    """Time of the first failure jump, or inf if none occurs before the horizon.

    Runs the same thinning loop as simulate_trajectory but stops at the first
    accepted failure, so repairs never enter (the machine must start up).
    """
    if scenario.r0 != 1:
        raise ValueError("first_failure_time requires r0 = 1")
    rng = np.random.default_rng(seed)
    p = scenario.params
    lam = rate_bound(p)
    if lam <= 0:
        return math.inf
    start = scenario.initial_state()
    w, q, rho = start.w, start.q, start.rho
    t = 0.0
    horizon = scenario.horizon
    dt, dx, inflow = scenario.dt, scenario.dx, scenario.inflow
    while True:
        t_cand = propose_next_candidate(t, lam, rng)
        if t_cand >= horizon:
            return math.inf
        w, q = _advance(w, 1, q, rho, t, t_cand, p, inflow, dt, dx)
        t = t_cand
        if rng.random() < failure_rate(w, p) / lam:
            return t


def first_failure_survival_oracle(scenario: Scenario, grid: np.ndarray) -> np.ndarray:
    """Survival curve S(t) of the first failure along the jump-free flow.

    Advances the deterministic dynamics with the machine held up, accumulates
    the failure hazard with the trapezoidal rule on dt steps, and interpolates
    the cumulative hazard onto grid. Independent of the thinning machinery; used
    to cross-check simulated first-failure times.
    """
    if scenario.r0 != 1:
        raise ValueError("the survival oracle requires r0 = 1")
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(grid < 0):
        raise ValueError("grid must be nonempty and nonnegative")
    p = scenario.params
    dt, dx, inflow = scenario.dt, scenario.dx, scenario.inflow
    t_end = float(grid.max())
    n_full = int(t_end / dt + 1e-9)
    rem = t_end - n_full * dt
    if rem <= dt * 1e-9:
        rem = 0.0
    start = scenario.initial_state()
    w, q, rho = start.w, start.q, start.rho
    knots = [0.0]
    hazards = [failure_rate(w, p)]
    t = 0.0
    for k in range(n_full + (1 if rem else 0)):
        h = dt if k < n_full else rem
        w, q = _advance(w, 1, q, rho, t, t + h, p, inflow, dt, dx)
        t += h
        knots.append(t)
        hazards.append(failure_rate(w, p))
    knots_arr = np.asarray(knots)
    hazards_arr = np.asarray(hazards)
    cumhaz = np.concatenate(
        ([0.0], np.cumsum(0.5 * (hazards_arr[1:] + hazards_arr[:-1]) * np.diff(knots_arr)))
    )
    return np.exp(-np.interp(grid, knots_arr, cumhaz))
