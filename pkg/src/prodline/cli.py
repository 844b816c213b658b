"""Command-line front end: JSON scenario configs, ensemble or single-path runs, CSV output.

Outputs of an ensemble run: moments.csv (per-time means and standard errors),
histogram.csv (repair-count distribution) and meta.json (the fully resolved
config plus run metadata; feeding meta.json back via --config reproduces the
run). A single-trajectory run writes trajectory.csv and jumps.csv instead.
Floats are written with 17 significant digits so identical runs produce
byte-identical data files.
"""

from __future__ import annotations

import argparse
import copy
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .ensemble import run_ensemble
from .model import ConfigurationError, ModelParams, PiecewiseConstantInflow, Scenario
from .trajectory import TrajectoryRecord, simulate_trajectory

__all__ = ["PRESETS", "RunConfig", "load_config", "run", "main"]

# Reference experiments: constant inflow 0.5 or 1.5 into the unit processor,
# capacity 2, horizon 50, grid steps 0.1.
_PAPER_BASE: dict[str, Any] = {
    "params": {
        "v": 1.0,
        "a": 0.0,
        "b": 1.0,
        "c": 2.0,
        "lambda_10_min": 0.1,
        "lambda_10_max": 2.0,
        "theta1": 0.1,
        "theta2": 5.0,
        "lambda_01": 2.0,
    },
    "rho0": 0.0,
    "q0": 0.0,
    "r0": 1,
    "w0": None,
    "horizon": 50.0,
    "dx": 0.1,
    "dt": 0.1,
}

PRESETS: dict[str, dict[str, Any]] = {
    "paper-g1": {**copy.deepcopy(_PAPER_BASE), "inflow": 0.5},
    "paper-g2": {**copy.deepcopy(_PAPER_BASE), "inflow": 1.5},
}

_PARAM_KEYS = frozenset(
    ("v", "a", "b", "c", "lambda_10_min", "lambda_10_max", "theta1", "theta2", "lambda_01")
)
_SCENARIO_KEYS = frozenset(
    ("params", "inflow", "rho0", "q0", "r0", "w0", "horizon", "dx", "dt")
)
_RUN_KEYS = frozenset(
    ("n_samples", "master_seed", "workers", "output_thinning", "output_dir")
)


@dataclass(frozen=True)
class RunConfig:
    """A validated scenario plus run settings (sample count, seed, workers, output)."""

    params: ModelParams
    inflow: PiecewiseConstantInflow
    rho0: Any
    q0: float
    r0: int
    w0: float | None
    horizon: float
    dx: float
    dt: float
    n_samples: int = 1000
    master_seed: int = 0
    workers: int = 1
    output_thinning: int = 1
    output_dir: str = "out"

    def scenario(self) -> Scenario:
        return Scenario(
            params=self.params,
            inflow=self.inflow,
            rho0=self.rho0,
            q0=self.q0,
            r0=self.r0,
            horizon=self.horizon,
            dx=self.dx,
            dt=self.dt,
            w0=self.w0,
            output_thinning=self.output_thinning,
        )

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigurationError("config must be a JSON object")
        data = copy.deepcopy(raw)
        preset = data.pop("preset", None)
        if preset is not None:
            if preset not in PRESETS:
                raise ConfigurationError(
                    f"unknown preset {preset!r}; available: {', '.join(sorted(PRESETS))}"
                )
            base = copy.deepcopy(PRESETS[preset])
            base_params = base["params"]
            override_params = data.pop("params", {})
            if not isinstance(override_params, dict):
                raise ConfigurationError("params must be a JSON object")
            base_params.update(override_params)
            base.update(data)
            base["params"] = base_params
            data = base
        unknown = set(data) - _SCENARIO_KEYS - _RUN_KEYS
        if unknown:
            raise ConfigurationError(f"unknown config key: {sorted(unknown)[0]}")
        missing = {"params", "inflow"} - set(data)
        if missing:
            raise ConfigurationError(f"missing config key: {sorted(missing)[0]}")
        params_dict = data["params"]
        if not isinstance(params_dict, dict):
            raise ConfigurationError("params must be a JSON object")
        unknown = set(params_dict) - _PARAM_KEYS
        if unknown:
            raise ConfigurationError(f"unknown config key: params.{sorted(unknown)[0]}")
        params = ModelParams(**{k: float(v) for k, v in params_dict.items()})
        inflow = _parse_inflow(data["inflow"])
        for key in ("n_samples", "master_seed", "workers", "output_thinning"):
            if key in data and not isinstance(data[key], int):
                raise ConfigurationError(f"{key} must be an integer")
        if "n_samples" in data and data["n_samples"] < 1:
            raise ConfigurationError("n_samples must be >= 1")
        if "workers" in data and data["workers"] < 1:
            raise ConfigurationError("workers must be >= 1")
        w0 = data.get("w0")
        config = cls(
            params=params,
            inflow=inflow,
            rho0=data.get("rho0", 0.0),
            q0=float(data.get("q0", 0.0)),
            r0=int(data.get("r0", 1)),
            w0=None if w0 is None else float(w0),
            horizon=float(data.get("horizon", 50.0)),
            dx=float(data.get("dx", 0.1)),
            dt=float(data.get("dt", 0.1)),
            n_samples=int(data.get("n_samples", 1000)),
            master_seed=int(data.get("master_seed", 0)),
            workers=int(data.get("workers", 1)),
            output_thinning=int(data.get("output_thinning", 1)),
            output_dir=str(data.get("output_dir", "out")),
        )
        config.scenario()  # validate CFL, grid and positivity constraints eagerly
        return config

    def to_dict(self) -> dict[str, Any]:
        """Fully resolved config; from_dict(to_dict()) reproduces the run."""
        inflow = self.inflow
        if inflow.values.size == 1:
            inflow_out: Any = float(inflow.values[0])
        else:
            inflow_out = {
                "times": [float(t) for t in inflow.times],
                "values": [float(v) for v in inflow.values],
            }
        rho0 = np.asarray(self.rho0, dtype=float)
        rho0_out: Any
        if rho0.ndim == 0 or np.all(rho0 == rho0.flat[0]):
            rho0_out = float(rho0.flat[0]) if rho0.size else 0.0
        else:
            rho0_out = [float(x) for x in rho0]
        return {
            "params": {
                "v": self.params.v,
                "a": self.params.a,
                "b": self.params.b,
                "c": self.params.c,
                "lambda_10_min": self.params.lambda_10_min,
                "lambda_10_max": self.params.lambda_10_max,
                "theta1": self.params.theta1,
                "theta2": self.params.theta2,
                "lambda_01": self.params.lambda_01,
            },
            "inflow": inflow_out,
            "rho0": rho0_out,
            "q0": self.q0,
            "r0": self.r0,
            "w0": self.w0,
            "horizon": self.horizon,
            "dx": self.dx,
            "dt": self.dt,
            "n_samples": self.n_samples,
            "master_seed": self.master_seed,
            "workers": self.workers,
            "output_thinning": self.output_thinning,
            "output_dir": self.output_dir,
        }


def _parse_inflow(value: Any) -> PiecewiseConstantInflow:
    if isinstance(value, (int, float)):
        return PiecewiseConstantInflow.constant(value)
    if isinstance(value, dict):
        unknown = set(value) - {"times", "values"}
        if unknown:
            raise ConfigurationError(f"unknown config key: inflow.{sorted(unknown)[0]}")
        if "times" not in value or "values" not in value:
            raise ConfigurationError("inflow object needs 'times' and 'values'")
        return PiecewiseConstantInflow(value["times"], value["values"])
    raise ConfigurationError("inflow must be a number or {times, values}")


def load_config(path) -> RunConfig:
    """Parse and validate a JSON config file; meta.json files are accepted too."""
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON ({exc})") from exc
    if isinstance(raw, dict) and "config" in raw:
        raw = raw["config"]  # meta.json from an earlier run
    return RunConfig.from_dict(raw)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_moments_csv(stats, path: Path) -> None:
    cols = (
        stats.sample_times,
        stats.mean_w, stats.stderr_w,
        stats.mean_capacity, stats.stderr_capacity,
        stats.mean_q, stats.stderr_q,
        stats.mean_outflow_density, stats.stderr_outflow_density,
    )
    lines = ["t,mean_w,se_w,mean_capacity,se_capacity,mean_q,se_q,mean_rho_b,se_rho_b"]
    for row in zip(*cols):
        lines.append(",".join(_fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n")


def _write_histogram_csv(histogram: dict[int, float], path: Path) -> None:
    lines = ["repairs,frequency"]
    for k in sorted(histogram):
        lines.append(f"{k},{_fmt(histogram[k])}")
    path.write_text("\n".join(lines) + "\n")


def _write_trajectory_csv(record: TrajectoryRecord, path: Path) -> None:
    lines = ["t,w,capacity,q,rho_b"]
    for row in zip(
        record.sample_times,
        record.w_series,
        record.capacity_series,
        record.q_series,
        record.outflow_density_series,
    ):
        lines.append(",".join(_fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n")


def _write_jumps_csv(record: TrajectoryRecord, path: Path) -> None:
    lines = ["time,kind,w_before,w_after,r_after,q_after,processor_mass"]
    for j in record.jumps:
        w_after, r_after, q_after, mass = j.state_after
        lines.append(
            f"{_fmt(j.time)},{j.kind},{_fmt(j.w_before)},{_fmt(w_after)},"
            f"{r_after},{_fmt(q_after)},{_fmt(mass)}"
        )
    path.write_text("\n".join(lines) + "\n")


def run(config: RunConfig, single_trajectory: bool = False) -> int:
    """Execute a run and write its output files; returns 0 on success.

    Ensemble mode writes moments.csv and histogram.csv; single-trajectory mode
    (the rng stream of ensemble sample 0) writes trajectory.csv and jumps.csv.
    Both write meta.json.
    """
    t_start = time.perf_counter()
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    scenario = config.scenario()
    if single_trajectory:
        record = simulate_trajectory(scenario, (config.master_seed, 0))
        _write_trajectory_csv(record, out_dir / "trajectory.csv")
        _write_jumps_csv(record, out_dir / "jumps.csv")
    else:
        stats = run_ensemble(scenario, config.n_samples, config.master_seed, config.workers)
        _write_moments_csv(stats, out_dir / "moments.csv")
        _write_histogram_csv(stats.repair_histogram, out_dir / "histogram.csv")
    meta = {
        "config": config.to_dict(),
        "master_seed": config.master_seed,
        "n_samples": config.n_samples,
        "single_trajectory": single_trajectory,
        "version": __version__,
        "wall_time_s": time.perf_counter() - t_start,
    }
    (out_dir / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # config errors exit 1, not argparse's default 2
        raise ConfigurationError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="prodline",
        description="Simulate a single-queue production line with workload-driven machine failures.",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", metavar="PATH", help="JSON config file (or meta.json of a run)")
    source.add_argument("--preset", choices=sorted(PRESETS), help="built-in experiment")
    parser.add_argument("--samples", type=int, metavar="N", help="number of Monte Carlo samples")
    parser.add_argument("--seed", type=int, metavar="S", help="master seed")
    parser.add_argument("--workers", type=int, metavar="W", help="worker processes")
    parser.add_argument("--out", metavar="DIR", help="output directory (default: out)")
    parser.add_argument("--thin", type=int, metavar="K", help="output stride in dt units")
    parser.add_argument(
        "--w0-zero", action="store_true",
        help="start the workload at 0 instead of the initial processor mass",
    )
    parser.add_argument(
        "--single-trajectory", action="store_true",
        help="write one trajectory and its jump log instead of ensemble statistics",
    )
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config is not None:
            config = load_config(args.config)
        else:
            config = RunConfig.from_dict({"preset": args.preset})
        overrides: dict[str, Any] = config.to_dict()
        if args.samples is not None:
            overrides["n_samples"] = args.samples
        if args.seed is not None:
            overrides["master_seed"] = args.seed
        if args.workers is not None:
            overrides["workers"] = args.workers
        if args.out is not None:
            overrides["output_dir"] = args.out
        if args.thin is not None:
            overrides["output_thinning"] = args.thin
        if args.w0_zero:
            overrides["w0"] = 0.0
        config = RunConfig.from_dict(overrides)
    except ConfigurationError as exc:
        print(f"prodline: config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"prodline: config error: {exc}", file=sys.stderr)
        return 1
    try:
        return run(config, single_trajectory=args.single_trajectory)
    except Exception as exc:
        print(f"prodline: runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
