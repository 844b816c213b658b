"""Deterministic dynamics between jumps: density transport, queue and workload updates.

The density obeys a conservation law with flux min(v*rho, mu), discretized by the
first-order left-sided upwind scheme; queue and workload are advanced with the
explicit Euler scheme, the workload integral by the rectangle rule. Every update
conserves the discrete mass q + dx * sum(rho) up to the boundary fluxes, which is
what FlowStepReport tracks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ConfigurationError, ModelParams, Scenario, SystemState

__all__ = ["FlowStepReport", "queue_step", "upwind_step", "workload_step", "flow_advance"]


@dataclass(frozen=True)
class FlowStepReport:
    """Boundary bookkeeping of one time step.

    mass_balance_residual is |delta(q + dx*sum(rho)) - h*(G_in - out_flux)| for a
    step of length h; it sits at rounding level for any valid step.
    """

    g_out: float
    out_flux: float
    mass_balance_residual: float


def queue_step(q: float, g_in: float, mu: float, dt: float) -> tuple[float, float]:
    """One explicit Euler queue update; returns (q_new, g_out).

    The realized outflow is min(G_in, mu) while the queue is empty and mu
    otherwise, except that the drain is capped at G_in + q/dt so a single step
    cannot push the queue below zero.
    """
    if q < 0 or g_in < 0 or mu < 0:
        raise ValueError("q, G_in and mu must be >= 0")
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if q > 0:
        g_out = min(mu, g_in + q / dt)
    else:
        g_out = min(mu, g_in)
    q_new = q + dt * (g_in - g_out)
    return (q_new if q_new > 0 else 0.0, g_out)


def upwind_step(
    rho: np.ndarray, mu: float, g_out: float, params: ModelParams, dt: float, dx: float
) -> np.ndarray:
    """Left-sided upwind update of the density grid; returns a new grid.

    Cell i loses flux min(v*rho_i, mu) through its right edge and gains its left
    neighbor's flux; the inlet flux of the first cell is the queue outflow g_out
    (the boundary density is g_out / v). Under v*dt <= dx all cells stay >= 0.
    """
    if params.v * dt > dx * (1 + 1e-12):
        raise ConfigurationError(f"CFL violated: v*dt = {params.v * dt:g} exceeds dx = {dx:g}")
    rho = np.asarray(rho, dtype=float)
    flux = np.minimum(params.v * rho, mu)
    coef = dt / dx
    out = rho - coef * flux
    out[1:] += coef * flux[:-1]
    out[0] += coef * g_out
    low = float(out.min())
    if low < 0:
        if low < -1e-9:
            raise RuntimeError("density went negative; upwind invariant broken")
        np.maximum(out, 0.0, out=out)
    return out


def workload_step(w: float, r: int, rho: np.ndarray, dx: float, dt: float) -> float:
    """Accumulate workload for one step: w + dt * r * (dx * sum(rho))."""
    if w < 0:
        raise ValueError("workload w must be >= 0")
    if not r:
        return w
    return w + dt * dx * float(np.asarray(rho).sum())


def _advance(w, r, q, rho, t, t_target, params, inflow, dt, dx, reports=None):
    """Advance (w, r, q, rho) in place from t to t_target with r held fixed.

    Takes full steps of dt plus one shorter final step. rho is mutated; returns
    (w, q). Appends a FlowStepReport per step when reports is a list.
    """
    span = t_target - t
    if span < 0:
        raise ValueError("t_target must not precede the current time")
    if span == 0.0:
        return w, q
    n_full = int(span / dt + 1e-9)
    rem = span - n_full * dt
    if rem <= dt * 1e-9:
        rem = 0.0
    v = params.v
    mu = params.c if r else 0.0
    n_steps = n_full + (1 if rem else 0)
    for k in range(n_steps):
        h = dt if k < n_full else rem
        g_in = inflow(t + k * dt)
        if q > 0.0:
            g_out = g_in + q / h
            if mu < g_out:
                g_out = mu
        else:
            g_out = g_in if g_in < mu else mu
        rho_sum = float(rho.sum())
        flux = np.minimum(v * rho, mu)
        coef = h / dx
        if reports is not None:
            mass_before = q + dx * rho_sum
            out_flux = float(flux[-1])
        rho -= coef * flux
        rho[1:] += coef * flux[:-1]
        rho[0] += coef * g_out
        low = float(rho.min())
        if low < 0.0:
            if low < -1e-9:
                raise RuntimeError("density went negative; upwind invariant broken")
            np.maximum(rho, 0.0, out=rho)
        if r:
            w += h * dx * rho_sum
        q += h * (g_in - g_out)
        if q < 0.0:
            q = 0.0
        if reports is not None:
            mass_after = q + dx * float(rho.sum())
            reports.append(
                FlowStepReport(
                    g_out=float(g_out),
                    out_flux=out_flux,
                    mass_balance_residual=abs(mass_after - mass_before - h * (g_in - out_flux)),
                )
            )
    return w, q


def flow_advance(
    state: SystemState, t_target: float, scenario: Scenario, collect_reports: bool = True
) -> tuple[SystemState, list[FlowStepReport] | None]:
    """Advance the deterministic dynamics to t_target (no jumps inside the call).

    Each step applies the queue update (outflow computed from the pre-step
    queue), the upwind density update fed by that outflow, and the workload
    update on the pre-step density. The workload never decreases.
    """
    if t_target < state.t:
        raise ValueError("t_target must not precede state.t")
    rho = state.rho.astype(float, copy=True)
    reports: list[FlowStepReport] | None = [] if collect_reports else None
    w, q = _advance(
        state.w, state.r, state.q, rho, state.t, t_target,
        scenario.params, scenario.inflow, scenario.dt, scenario.dx, reports,
    )
    return SystemState(w=w, r=state.r, q=q, rho=rho, t=t_target), reports
