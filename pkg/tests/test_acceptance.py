"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The expensive reference ensembles (10^4 samples per inflow preset) are shared
module-scoped fixtures; run with -s to see the per-criterion lines and timings.
"""

import math
import time

import numpy as np
import pytest
from scipy import stats

from prodline import (
    ModelParams,
    Scenario,
    failure_rate,
    first_failure_survival_oracle,
    first_failure_time,
    flow_advance,
    mean_time_to_failure,
    run_ensemble,
    simulate_trajectory,
)
from prodline.cli import main
from conftest import drive_random_r_schedule, jump_free_params, random_flow_scenario

N_REFERENCE = 10_000
WORKERS = 2
MTTF_INDEPENDENT = 9.181687423997606  # Gamma(1.2) * 10, mpmath at 20 digits


def report(num, passed, detail):
    marker = "PASS" if passed else "FAIL"
    print(f"[criterion {num}] {marker} - {detail}")
    assert passed, f"criterion {num}: {detail}"


@pytest.fixture(scope="module")
def g1_reference():
    sc = Scenario(params=ModelParams(), inflow=0.5)
    t0 = time.perf_counter()
    stats_out = run_ensemble(sc, N_REFERENCE, master_seed=2024, workers=WORKERS)
    return stats_out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def g2_reference():
    sc = Scenario(params=ModelParams(), inflow=1.5)
    t0 = time.perf_counter()
    stats_out = run_ensemble(sc, N_REFERENCE, master_seed=2025, workers=WORKERS)
    return stats_out, time.perf_counter() - t0


def smooth(series, width=5):
    # 0.5-wide moving average at dt = 0.1
    kernel = np.full(width, 1.0 / width)
    return np.convolve(series, kernel, mode="same")


def dip_location(stats_out, lo, hi, margin=1.5):
    t = stats_out.sample_times
    smoothed = smooth(stats_out.mean_capacity)
    window = (t >= lo - margin) & (t <= hi + margin)
    idx = np.flatnonzero(window)
    return float(t[idx[np.argmin(smoothed[idx])]])


def test_criterion_1_deterministic_transport():
    t0 = time.perf_counter()
    sc = Scenario(params=jump_free_params(), inflow=0.5)
    state = sc.initial_state()
    worst_rho = worst_flux = worst_q = 0.0
    for t in sc.sample_times()[1:]:
        state, reports = flow_advance(state, float(t), sc)
        if t > 1.0:
            worst_rho = max(worst_rho, float(np.abs(state.rho - 0.5).max()))
            worst_q = max(worst_q, state.q)
            worst_flux = max(worst_flux, abs(reports[-1].out_flux - 0.5))
    elapsed = time.perf_counter() - t0
    ok = worst_rho <= 1e-10 and worst_q == 0.0 and worst_flux <= 1e-10
    report(1, ok,
           f"max|rho-0.5|={worst_rho:.2e}, max q={worst_q:.2e}, "
           f"max|outflux-0.5|={worst_flux:.2e} after t>1 ({elapsed:.2f}s)")


def test_criterion_2_mass_balance_randomized():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1234)
    worst = 0.0
    steps = 0
    for _ in range(100):
        sc = random_flow_scenario(rng)
        _, checked = drive_random_r_schedule(sc, rng)
        for rep, bound in checked:
            worst = max(worst, rep.mass_balance_residual / bound)
            steps += 1
        assert all(rep.mass_balance_residual <= 1e-12 * bound for rep, bound in checked)
    elapsed = time.perf_counter() - t0
    report(2, worst <= 1e-12,
           f"worst residual/bound = {worst:.2e} over {steps} steps "
           f"of 100 scenarios ({elapsed:.2f}s)")


def test_criterion_3_thinning_exactness_constant_hazard():
    t0 = time.perf_counter()
    params = ModelParams(v=1.0, a=0.0, b=0.2, c=2.0,
                         lambda_10_min=2.0, lambda_10_max=2.0, lambda_01=2.0)
    sc = Scenario(params=params, inflow=0.5, horizon=50.0)
    ups, downs = [], []
    seed = 0
    while len(ups) < N_REFERENCE or len(downs) < N_REFERENCE:
        record = simulate_trajectory(sc, (777, seed))
        seed += 1
        t_prev = 0.0
        for jump in record.jumps:
            (ups if jump.kind == "failure" else downs).append(jump.time - t_prev)
            t_prev = jump.time
    ups = np.array(ups[:N_REFERENCE])
    downs = np.array(downs[:N_REFERENCE])
    p_up = stats.kstest(ups, "expon", args=(0, 0.5)).pvalue
    p_down = stats.kstest(downs, "expon", args=(0, 0.5)).pvalue
    elapsed = time.perf_counter() - t0
    report(3, p_up > 0.01 and p_down > 0.01,
           f"KS p-values: up={p_up:.3f}, down={p_down:.3f} "
           f"(n={N_REFERENCE} each, {elapsed:.1f}s)")


def test_criterion_4_survival_oracle_agreement():
    t0 = time.perf_counter()
    sc = Scenario(params=ModelParams(), inflow=1.5)
    times = np.array([first_failure_time(sc, (4040, i)) for i in range(N_REFERENCE)])
    assert np.isfinite(times).all(), "every sample should fail before the horizon"
    times.sort()
    cdf = 1.0 - first_failure_survival_oracle(sc, times)
    n = times.size
    upper = np.arange(1, n + 1) / n
    lower = np.arange(0, n) / n
    ks = max(np.abs(upper - cdf).max(), np.abs(lower - cdf).max())
    elapsed = time.perf_counter() - t0
    report(4, ks <= 0.03, f"KS distance empirical vs oracle = {ks:.4f} "
                          f"(n={n}, {elapsed:.1f}s)")


def test_criterion_5_characteristic_time_dip_g2(g2_reference):
    s2, t2 = g2_reference
    dip2 = dip_location(s2, 4.6, 7.6)
    report("5 (g2)", 4.6 <= dip2 <= 7.6,
           f"smoothed E[capacity] dips at t={dip2:.2f}, want [4.6, 7.6] "
           f"(ensemble took {t2:.0f}s)")


def test_criterion_5_characteristic_time_dip_g1(g1_reference):
    """Known red: the true dip sits left of the stated window.

    The stated window [16.9, 19.9] brackets the classical-lifetime heuristic
    18.4 for inflow 0.5, but the hazard floor (rate 0.1, mean 10) dominates a
    lifetime that long: most machines fail and reset well before the Weibull
    ramp, and the renewal mixture puts the capacity minimum near t = 15.6. A
    100k-sample run resolves the smoothed curve as strictly rising across the
    whole window (1.855 at 16.9 up to 1.875 at 19.9, pointwise se 0.001), and
    an independent fine-step Bernoulli simulator reproduces the same dip
    location, so the window cannot be attained by these dynamics.
    """
    s1, t1 = g1_reference
    dip1 = dip_location(s1, 16.9, 19.9)
    report("5 (g1)", 16.9 <= dip1 <= 19.9,
           f"smoothed E[capacity] dips at t={dip1:.2f}, want [16.9, 19.9] "
           f"(ensemble took {t1:.0f}s)")


def test_criterion_6_repair_count_modes(g1_reference, g2_reference):
    s1, _ = g1_reference
    s2, _ = g2_reference
    mode1 = max(s1.repair_histogram, key=s1.repair_histogram.get)
    mode2 = max(s2.repair_histogram, key=s2.repair_histogram.get)
    mean1 = sum(k * f for k, f in s1.repair_histogram.items())
    mean2 = sum(k * f for k, f in s2.repair_histogram.items())
    ok = 5 <= mode1 <= 9 and 9 <= mode2 <= 14 and mean2 > mean1
    report(6, ok,
           f"modes: g1={mode1} (want [5,9]), g2={mode2} (want [9,14]); "
           f"means: g1={mean1:.2f} < g2={mean2:.2f}")


def test_criterion_7_mttf_unit_check():
    value = mean_time_to_failure(ModelParams(theta1=0.1, theta2=5.0))
    err = abs(value - MTTF_INDEPENDENT)
    exp_params = ModelParams(theta1=0.4, theta2=1.0)
    exp_err = abs(mean_time_to_failure(exp_params) - 2.5)
    ok = err < 1e-6 and exp_err < 1e-12
    report(7, ok, f"|MTTF - Gamma(1.2)*10| = {err:.2e}; theta2=1 error = {exp_err:.2e}")


def test_criterion_8_reproducibility_across_workers(tmp_path):
    t0 = time.perf_counter()
    outputs = {}
    for workers in (1, 4, 8):
        out = tmp_path / f"w{workers}"
        code = main(["--preset", "paper-g1", "--samples", "240", "--seed", "31",
                     "--workers", str(workers), "--out", str(out)])
        assert code == 0
        outputs[workers] = (
            (out / "moments.csv").read_bytes(),
            (out / "histogram.csv").read_bytes(),
        )
    ok = outputs[1] == outputs[4] == outputs[8]
    elapsed = time.perf_counter() - t0
    report(8, ok, f"moments.csv and histogram.csv byte-identical for "
                  f"workers 1/4/8 ({elapsed:.1f}s)")


def test_criterion_9_flip_frequency_regression():
    t0 = time.perf_counter()
    params = ModelParams(v=1.0, a=0.0, b=0.2, c=2.0)
    w0 = 10.0
    hazard = failure_rate(w0, params)
    deltas = (0.02, 0.01, 0.005)
    n = 200_000
    freqs = []
    for k, delta in enumerate(deltas):
        sc = Scenario(params=params, inflow=0.5, rho0=0.5, w0=w0, horizon=delta)
        stats_out = run_ensemble(sc, n, master_seed=9000 + k, workers=WORKERS)
        freqs.append(1.0 - stats_out.mean_capacity[-1] / params.c)
    x = np.array(deltas) * hazard
    slope, intercept = np.polyfit(x, np.array(freqs), 1)
    elapsed = time.perf_counter() - t0
    report(9, abs(slope - 1.0) <= 0.1,
           f"flip frequency vs delta*hazard: slope={slope:.4f} (want 1 +- 0.1), "
           f"intercept={intercept:.2e} (n={n} per delta, {elapsed:.0f}s)")
