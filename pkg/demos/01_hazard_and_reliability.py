"""How the machine's failure hazard responds to accumulated workload.

The failure rate starts at lambda_10_min for a freshly repaired machine (w = 0),
ramps along a Weibull distribution function in w, and saturates at
lambda_10_max. The repair rate is a constant: how long a repair takes does not
depend on what the machine produced before breaking.
"""

import numpy as np

from prodline import ModelParams, failure_rate, mean_time_to_failure, repair_rate

params = ModelParams()  # reference parameters

print("workload w   failure rate")
for w in (0.0, 2.0, 5.0, 8.0, 10.0, 12.0, 15.0, 1e6):
    print(f"{w:10.1f}   {failure_rate(w, params):.4f}")

print(f"\nrepair rate at w=0:   {repair_rate(0.0, params):.3f}")
print(f"repair rate at w=100: {repair_rate(100.0, params):.3f}  (same, by design)")

mttf = mean_time_to_failure(params)
print(f"\nmean workload to failure, Gamma(1 + 1/theta2)/theta1 = {mttf:.5f}")

# With a constant inflow G the machine processes roughly G goods per unit time
# once the line is full, so the expected first wear-out sits near mttf / G.
for g_in in (0.5, 1.5):
    print(f"inflow {g_in}: characteristic failure time ~ {mttf / g_in:.1f}")

# The hazard floor matters: even a fresh machine fails at rate lambda_10_min,
# so many lives end well before the Weibull ramp. Survival against the floor
# alone after time t is exp(-lambda_min * t):
t = 10.0
print(f"\nP(no floor failure within {t:.0f} time units) = {np.exp(-params.lambda_10_min * t):.3f}")
