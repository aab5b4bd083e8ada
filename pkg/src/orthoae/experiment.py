"""Seeded Monte Carlo campaigns: repeated estimation trials and error curves.

Each trial samples one count record from the true model and runs the
profile maximizer.  Error curves additionally re-estimate every trial on
each schedule prefix (reusing the trial's sampled counts, the way a single
experiment's record would be truncated) and report RMSE against the truth
next to the analytic reference bounds.

Trials derive their randomness from the master seed through explicit spawn
keys, so campaigns are reproducible and order-insensitive; trials may run
in parallel worker processes.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from orthoae.fisher import classical_crlb, crlb_theta, fisher_matrix, noiseless_crlb, query_count
from orthoae.likelihood import EstimationResult, EstimatorConfig, mle_estimate
from orthoae.model import Schedule
from orthoae.sampling import CountData, TrueModelSpec, sample_counts

__all__ = [
    "RANDOM_PER_TRIAL",
    "ExperimentConfig",
    "TrialOutcome",
    "ErrorCurveRow",
    "ErrorCurve",
    "run_trials",
    "error_curve",
]

RANDOM_PER_TRIAL = "random-per-trial"

# Spawn-key namespaces under (trial,): counts substreams and the per-trial
# c draw must never collide.
_COUNTS_NS = 0
_C_NS = 1


@dataclass(frozen=True)
class ExperimentConfig:
    true_model: TrueModelSpec
    schedule: Schedule
    fit_c: tuple[float, ...] | str
    trials: int
    master_seed: int
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    query_mode: str = "paper"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if isinstance(self.fit_c, str):
            if self.fit_c != RANDOM_PER_TRIAL:
                raise ValueError(f"fit_c must be a vector or {RANDOM_PER_TRIAL!r}")
        else:
            c = tuple(float(v) for v in self.fit_c)
            if len(c) != len(self.schedule):
                raise ValueError(
                    f"fit_c length {len(c)} does not match schedule length {len(self.schedule)}"
                )
            for v in c:
                if not 0.0 <= v <= 1.0:
                    raise ValueError(f"fit_c entries must lie in [0, 1], got {v}")
            object.__setattr__(self, "fit_c", c)
        if self.query_mode not in ("paper", "strict"):
            raise ValueError(f"query_mode must be 'paper' or 'strict', got {self.query_mode!r}")
        self.true_model.beta_for(self.schedule)  # fail fast on length mismatch


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    c: tuple[float, ...]
    result: EstimationResult


@dataclass(frozen=True)
class ErrorCurveRow:
    prefix: int
    n_queries: int
    rmse: float
    crlb_model: float
    crlb_classical: float
    crlb_noiseless: float
    n_trials: int
    n_degenerate: int


@dataclass(frozen=True)
class ErrorCurve:
    rows: tuple[ErrorCurveRow, ...]
    query_mode: str

    FIELDS = (
        "prefix",
        "n_queries",
        "rmse",
        "crlb_model",
        "crlb_classical",
        "crlb_noiseless",
        "n_trials",
        "n_degenerate",
    )

    def to_csv(self, path) -> None:
        def fmt(value):
            if isinstance(value, int):
                return repr(value)
            return repr(float(value))

        lines = [",".join(self.FIELDS)]
        for row in self.rows:
            lines.append(",".join(fmt(getattr(row, name)) for name in self.FIELDS))
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")


def _trial_counts(config: ExperimentConfig, trial: int) -> CountData:
    return sample_counts(
        config.true_model,
        config.schedule,
        config.master_seed,
        spawn_prefix=(trial, _COUNTS_NS),
    )


def _trial_c(config: ExperimentConfig, trial: int) -> tuple[float, ...]:
    if config.fit_c != RANDOM_PER_TRIAL:
        return config.fit_c
    rng = np.random.default_rng(
        np.random.SeedSequence(config.master_seed, spawn_key=(trial, _C_NS))
    )
    return tuple(rng.uniform(0.0, 1.0, size=len(config.schedule)).tolist())


def _single_trial(config: ExperimentConfig, trial: int) -> TrialOutcome:
    counts = _trial_counts(config, trial)
    c = _trial_c(config, trial)
    result = mle_estimate(counts, c, config.estimator)
    return TrialOutcome(trial=trial, c=c, result=result)


def _prefix_trial(config: ExperimentConfig, trial: int):
    """theta_hat and degenerate flag for every schedule prefix of one trial."""
    counts = _trial_counts(config, trial)
    c = _trial_c(config, trial)
    rows = []
    for length in range(1, len(config.schedule) + 1):
        result = mle_estimate(counts.prefix(length), c[:length], config.estimator)
        rows.append((result.theta_hat, result.degenerate))
    return rows


def _map_trials(worker, config: ExperimentConfig, threads: int):
    trials = range(config.trials)
    if threads <= 1 or config.trials == 1:
        return [worker(config, t) for t in trials]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        chunk = max(1, config.trials // (threads * 4))
        return list(pool.map(worker, [config] * config.trials, trials, chunksize=chunk))


def run_trials(config: ExperimentConfig, threads: int = 1) -> list[TrialOutcome]:
    """Run the campaign on the full schedule; one outcome per trial."""
    outcomes = _map_trials(_single_trial, config, threads)
    return sorted(outcomes, key=lambda o: o.trial)


def _rmse(errors) -> float:
    if not errors:
        return float("nan")
    return math.sqrt(sum(e * e for e in errors) / len(errors))


def error_curve(config: ExperimentConfig, threads: int = 1) -> ErrorCurve:
    """RMSE and reference bounds per schedule prefix.

    The model bound is the information of the fitting family at the true
    parameters; the classical bound is 1/(4 N_q) at the matched query
    count; the noiseless bound uses the combined per-entry shot budget
    (n_shot + n_shot'), the convention that makes the comparison fair.
    Degenerate trials are excluded from RMSE and counted.
    """
    per_trial = _map_trials(_prefix_trial, config, threads)
    theta_true = config.true_model.theta
    betas_true = config.true_model.beta_for(config.schedule)
    rows = []
    for length in range(1, len(config.schedule) + 1):
        prefix_sched = config.schedule.prefix(length)
        estimates = [trial_rows[length - 1] for trial_rows in per_trial]
        errors = [th - theta_true for th, degenerate in estimates if not degenerate]
        n_degenerate = sum(1 for _, degenerate in estimates if degenerate)
        n_queries = query_count(prefix_sched, config.query_mode)
        crlb_model = crlb_theta(fisher_matrix(theta_true, betas_true[:length], prefix_sched))
        rows.append(
            ErrorCurveRow(
                prefix=length,
                n_queries=n_queries,
                rmse=_rmse(errors),
                crlb_model=crlb_model,
                crlb_classical=classical_crlb(n_queries),
                crlb_noiseless=noiseless_crlb(
                    prefix_sched, config.schedule.n_shot + config.schedule.n_shot_prime
                ),
                n_trials=len(errors),
                n_degenerate=n_degenerate,
            )
        )
    return ErrorCurve(rows=tuple(rows), query_mode=config.query_mode)
