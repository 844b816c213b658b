"""The deterministic part of the line: transport, queue and workload updates.

With jumps switched off the model is a conservation law coupled to a queue.
Goods enter the processor at the queue outflow, travel with velocity v, and
leave at x = b; the workload integrates the in-process mass over time. Each
step reports its boundary fluxes and a mass-balance residual that should sit
at rounding level.
"""

import numpy as np

from prodline import ModelParams, Scenario, flow_advance

params = ModelParams(lambda_10_min=0.0, lambda_10_max=0.0, lambda_01=0.0)

# 1) An empty line filling up under constant inflow 0.5 (uncongested: 0.5 < c).
sc = Scenario(params=params, inflow=0.5)
state = sc.initial_state()
print("filling an empty processor (inflow 0.5, velocity 1):")
for t in (0.3, 0.6, 1.0, 2.0):
    state, reports = flow_advance(state, t, sc)
    print(f"  t={t:4.1f}  rho={np.array2string(state.rho, precision=2)}  "
          f"outflux={reports[-1].out_flux:.2f}")
print("after one transit time the profile is flat at G/v = 0.5 and stays there\n")

# 2) A down machine: the queue absorbs everything, nothing moves inside.
sc_down = Scenario(params=params, inflow=1.5, r0=0, rho0=0.4)
state = sc_down.initial_state()
state, _ = flow_advance(state, 2.0, sc_down)
print(f"down machine for 2 time units at inflow 1.5: q={state.q:.2f}, "
      f"rho stays {np.array2string(state.rho, precision=2)}")

# 3) Mass balance: queue + in-process mass only changes through the boundaries.
sc_mix = Scenario(params=params, inflow=1.2, rho0=0.8, q0=0.5)
state = sc_mix.initial_state()
state, reports = flow_advance(state, 5.0, sc_mix)
worst = max(r.mass_balance_residual for r in reports)
print(f"\nworst mass-balance residual over {len(reports)} steps: {worst:.2e}")

# 4) Workload accrues at the rate of the in-process mass while the machine is up.
print(f"workload after 5 units at steady mass ~1.2: w={state.w:.3f}")
