"""Command-line interface: scan | estimate | campaign | oracle-check.

Every command is a pure function of (config, seed): rerunning with the same
seed reproduces the data files byte for byte.  Timestamps live only in the
campaign manifest.  Config files are single JSON documents with unknown
keys rejected; see the README for the schemas.

Exit codes: 0 success, 1 oracle residual violation, 2 config parse error,
3 domain/data error.
"""

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone

import numpy as np

import orthoae
from orthoae.circuit import (
    ancillary_equivalence_residual,
    build_sum_circuit,
    grover_equivalence_residual,
    random_circuit,
    verify_ancillary_identity,
)
from orthoae.experiment import RANDOM_PER_TRIAL, ExperimentConfig, error_curve
from orthoae.likelihood import EstimatorConfig, likelihood_scan, mle_estimate
from orthoae.model import HALF_PI, Schedule
from orthoae.sampling import CountData, TrueModelSpec, expected_counts, sample_counts

__all__ = ["main", "ConfigError"]

EXIT_OK = 0
EXIT_RESIDUAL = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3

THREADS_ENV_VAR = "ORTHOAE_THREADS"
ORACLE_THRESHOLD = 1e-10


class ConfigError(Exception):
    """Malformed or inconsistent run configuration."""


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def _check_keys(obj, where, required, optional=()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"{where} has unknown keys: {sorted(unknown)}")
    missing = set(required) - set(obj)
    if missing:
        raise ConfigError(f"{where} is missing keys: {sorted(missing)}")
    return obj


def _parse_schedule(obj):
    _check_keys(obj, "schedule", required=("m", "n_shot", "n_shot_prime"))
    try:
        return Schedule(tuple(obj["m"]), int(obj["n_shot"]), int(obj["n_shot_prime"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"schedule: {exc}") from exc


def _parse_true_model(obj):
    _check_keys(obj, "true_model", required=("theta",), optional=("kappa", "beta", "readout_bias"))
    try:
        return TrueModelSpec(
            theta=float(obj["theta"]),
            beta=tuple(obj["beta"]) if "beta" in obj else None,
            kappa=float(obj["kappa"]) if "kappa" in obj else None,
            readout_bias=float(obj.get("readout_bias", 0.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"true_model: {exc}") from exc


def _parse_estimator(obj):
    if obj is None:
        return EstimatorConfig()
    _check_keys(obj, "estimator", required=(), optional=("grid_points", "refine_tolerance"))
    try:
        return EstimatorConfig(
            grid_points=int(obj.get("grid_points", 10_000)),
            refine_tolerance=float(obj.get("refine_tolerance", 1e-4)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"estimator: {exc}") from exc


def _parse_c(value, schedule, where="c"):
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"{where} must be a list of reals in [0, 1]")
    c = [float(v) for v in value]
    if len(c) != len(schedule):
        raise ConfigError(
            f"{where} length {len(c)} does not match schedule length {len(schedule)}"
        )
    for v in c:
        if not 0.0 <= v <= 1.0:
            raise ConfigError(f"{where} entries must lie in [0, 1], got {v}")
    return tuple(c)


def _parse_grid(obj):
    _check_keys(obj, "grid", required=("lo", "hi", "points"))
    try:
        return float(obj["lo"]), float(obj["hi"]), int(obj["points"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"grid: {exc}") from exc


def _effective_seed(cfg, args, key):
    if getattr(args, "seed", None) is not None:
        cfg[key] = int(args.seed)
    if key not in cfg:
        raise ConfigError(f"config needs a {key!r} (or pass --seed)")
    return int(cfg[key])


def _effective_threads(args):
    threads = getattr(args, "threads", None) or 1
    cap = os.environ.get(THREADS_ENV_VAR)
    if cap is not None:
        try:
            cap = int(cap)
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {cap!r}") from exc
        if cap < 1:
            raise ConfigError(f"{THREADS_ENV_VAR} must be >= 1, got {cap}")
        threads = min(threads, cap)
    return max(1, threads)


def _write_json(path, payload):
    with open(path, "w", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _counts_to_dict(counts):
    def _num(v):
        return int(v) if float(v).is_integer() else float(v)

    return {
        "schedule": {
            "m": list(counts.schedule.m),
            "n_shot": counts.schedule.n_shot,
            "n_shot_prime": counts.schedule.n_shot_prime,
        },
        "grover_ones": [_num(v) for v in counts.grover_ones],
        "ancillary_ones": [None if v is None else _num(v) for v in counts.ancillary_ones],
    }


def _counts_from_file(path, schedule):
    """Counts-file errors are data errors (exit 3), not config errors."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read counts file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"counts file {path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ValueError("counts file must be a JSON object")
    for key in ("schedule", "grover_ones", "ancillary_ones"):
        if key not in obj:
            raise ValueError(f"counts file is missing {key!r}")
    sched_obj = obj["schedule"]
    file_sched = Schedule(
        tuple(sched_obj["m"]), int(sched_obj["n_shot"]), int(sched_obj["n_shot_prime"])
    )
    if file_sched != schedule:
        raise ValueError("counts file schedule does not match the config schedule")
    ancillary = tuple(None if v is None else v for v in obj["ancillary_ones"])
    return CountData(schedule, tuple(obj["grover_ones"]), ancillary)


def _cmd_scan(args):
    cfg = _load_json(args.config)
    _check_keys(
        cfg,
        "scan config",
        required=("schedule", "true_model", "c", "grid"),
        optional=("data", "seed"),
    )
    schedule = _parse_schedule(cfg["schedule"])
    true_model = _parse_true_model(cfg["true_model"])
    c = _parse_c(cfg["c"], schedule)
    lo, hi, points = _parse_grid(cfg["grid"])
    data_mode = cfg.get("data", "sampled")
    if data_mode not in ("sampled", "expected"):
        raise ConfigError(f"data must be 'sampled' or 'expected', got {data_mode!r}")
    if data_mode == "sampled":
        seed = _effective_seed(cfg, args, "seed")
        counts = sample_counts(true_model, schedule, seed)
    else:
        counts = expected_counts(true_model, schedule)
    rows = likelihood_scan(counts, c, lo, hi, points)
    lines = ["theta,loglik"]
    lines.extend(f"{theta!r},{value!r}" for theta, value in rows)
    with open(args.output, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    if not args.no_figure:
        from orthoae.plotting import save_scan_figure

        save_scan_figure(rows, _figure_path(args.output), target_theta=true_model.theta)
    return EXIT_OK


def _figure_path(output):
    root, _ = os.path.splitext(output)
    return root + ".png"


def _cmd_estimate(args):
    cfg = _load_json(args.config)
    _check_keys(
        cfg,
        "estimate config",
        required=("schedule", "c"),
        optional=("estimator", "true_model", "seed"),
    )
    schedule = _parse_schedule(cfg["schedule"])
    c = _parse_c(cfg["c"], schedule)
    estimator = _parse_estimator(cfg.get("estimator"))
    seed = None
    if args.simulate:
        if "true_model" not in cfg:
            raise ConfigError("--simulate needs a true_model in the config")
        true_model = _parse_true_model(cfg["true_model"])
        seed = _effective_seed(cfg, args, "seed")
        counts = sample_counts(true_model, schedule, seed)
    else:
        counts = _counts_from_file(args.counts, schedule)
    result = mle_estimate(counts, c, estimator)
    payload = {
        "theta_hat": result.theta_hat,
        "loglik": result.log_likelihood_at_max,
        "degenerate": result.degenerate,
        "seed": seed,
        "config": cfg,
    }
    _write_json(args.output, payload)
    return EXIT_OK


def _cmd_campaign(args):
    cfg = _load_json(args.config)
    _check_keys(
        cfg,
        "campaign config",
        required=("schedule", "true_model", "fit_c", "trials", "master_seed"),
        optional=("estimator", "query_accounting", "seed"),
    )
    schedule = _parse_schedule(cfg["schedule"])
    true_model = _parse_true_model(cfg["true_model"])
    if isinstance(cfg["fit_c"], str):
        if cfg["fit_c"] != RANDOM_PER_TRIAL:
            raise ConfigError(f"fit_c must be a vector or {RANDOM_PER_TRIAL!r}")
        fit_c = RANDOM_PER_TRIAL
    else:
        fit_c = _parse_c(cfg["fit_c"], schedule, where="fit_c")
    if getattr(args, "seed", None) is not None:
        cfg["master_seed"] = int(args.seed)
    mode = cfg.get("query_accounting", "paper")
    if mode not in ("paper", "strict"):
        raise ConfigError(f"query_accounting must be 'paper' or 'strict', got {mode!r}")
    try:
        config = ExperimentConfig(
            true_model=true_model,
            schedule=schedule,
            fit_c=fit_c,
            trials=int(cfg["trials"]),
            master_seed=int(cfg["master_seed"]),
            estimator=_parse_estimator(cfg.get("estimator")),
            query_mode=mode,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"campaign config: {exc}") from exc
    threads = _effective_threads(args)
    os.makedirs(args.output, exist_ok=True)
    curve = error_curve(config, threads=threads)
    csv_path = os.path.join(args.output, "error_curve.csv")
    curve.to_csv(csv_path)
    figure_path = None
    if not args.no_figure:
        from orthoae.plotting import save_error_curve_figure

        figure_path = os.path.join(args.output, "error_curve.png")
        save_error_curve_figure(curve, figure_path, target_theta=true_model.theta)
    manifest = {
        "tool": "orthoae",
        "version": orthoae.__version__,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "master_seed": config.master_seed,
        "threads": threads,
        "query_accounting": config.query_mode,
        "config": cfg,
        "outputs": {
            "error_curve": os.path.basename(csv_path),
            "figure": None if figure_path is None else os.path.basename(figure_path),
        },
    }
    _write_json(os.path.join(args.output, "manifest.json"), manifest)
    return EXIT_OK


def _cmd_oracle_check(args):
    if args.n < 1 or args.n > 6:
        raise ConfigError(f"--n must lie in [1, 6], got {args.n}")
    if not 0.0 <= args.lam <= 1.0:
        raise ConfigError(f"--lambda must lie in [0, 1], got {args.lam}")
    if args.m_max < 2:
        raise ConfigError(f"--m-max must be >= 2, got {args.m_max}")
    size = 2 ** args.n
    f_values = [math.sin(math.pi * j / 10.0) ** 2 for j in range(size)]
    r_values = [1.0 / size] * size
    circuits = {
        "sum": build_sum_circuit(args.n, f_values, r_values),
        "random": random_circuit(args.n, seed=args.seed if args.seed is not None else 7),
    }
    if args.corrupt:
        import dataclasses

        corrupted = circuits["sum"].op_r.copy()
        idx = np.unravel_index(np.argmax(np.abs(corrupted)), corrupted.shape)
        corrupted[idx] *= np.exp(0.3j)
        circuits["sum"] = dataclasses.replace(circuits["sum"], op_r=corrupted)
    worst = 0.0
    for name, circuit in circuits.items():
        res_g = grover_equivalence_residual(circuit, args.lam, args.m_max)
        res_a = ancillary_equivalence_residual(circuit, args.lam, args.m_max)
        res_id = max(verify_ancillary_identity(circuit, m) for m in range(2, args.m_max + 1))
        print(f"{name}: grover equivalence residual  {res_g:.3e}")
        print(f"{name}: ancillary equivalence residual {res_a:.3e}")
        print(f"{name}: ancillary identity residual   {res_id:.3e}")
        worst = max(worst, res_g, res_a, res_id)
    print(f"worst residual {worst:.3e} (threshold {ORACLE_THRESHOLD:.0e})")
    return EXIT_OK if worst < ORACLE_THRESHOLD else EXIT_RESIDUAL


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="orthoae",
        description="Amplitude estimation studies with orthogonalized noise nuisances.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the config seed")
    common.add_argument(
        "--threads",
        type=int,
        default=1,
        help=f"worker processes for trials (capped by ${THREADS_ENV_VAR})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", parents=[common], help="export a likelihood landscape CSV")
    p_scan.add_argument("--config", required=True, help="scan config JSON")
    p_scan.add_argument("--output", required=True, help="output CSV path")
    p_scan.add_argument("--no-figure", action="store_true", help="skip the landscape figure")
    p_scan.set_defaults(func=_cmd_scan)

    p_est = sub.add_parser("estimate", parents=[common], help="run one profile MLE")
    p_est.add_argument("--config", required=True, help="estimate config JSON")
    group = p_est.add_mutually_exclusive_group(required=True)
    group.add_argument("--counts", help="counts record JSON")
    group.add_argument("--simulate", action="store_true", help="sample counts from true_model")
    p_est.add_argument("--output", required=True, help="output JSON path")
    p_est.set_defaults(func=_cmd_estimate)

    p_camp = sub.add_parser("campaign", parents=[common], help="run a Monte Carlo error curve")
    p_camp.add_argument("--config", required=True, help="campaign config JSON")
    p_camp.add_argument("--output", required=True, help="output directory")
    p_camp.add_argument("--no-figure", action="store_true", help="skip the error-curve figure")
    p_camp.set_defaults(func=_cmd_campaign)

    p_oracle = sub.add_parser(
        "oracle-check", parents=[common], help="validate the analytic model against the simulator"
    )
    p_oracle.add_argument("--n", type=int, default=1, help="index qubits (<= 6)")
    p_oracle.add_argument("--lambda", dest="lam", type=float, default=0.01, help="channel strength")
    p_oracle.add_argument("--m-max", type=int, default=16, help="largest amplification count")
    p_oracle.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p_oracle.set_defaults(func=_cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
