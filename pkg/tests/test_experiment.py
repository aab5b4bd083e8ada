import math

import numpy as np
import pytest

from orthoae.experiment import (
    RANDOM_PER_TRIAL,
    ErrorCurve,
    ExperimentConfig,
    error_curve,
    run_trials,
)
from orthoae.fisher import classical_crlb, query_count
from orthoae.likelihood import EstimatorConfig, mle_estimate
from orthoae.model import Schedule
from orthoae.sampling import TrueModelSpec, sample_counts

SMALL_SCHEDULE = Schedule((1, 2, 4), 50, 50)
SMALL_MODEL = TrueModelSpec(theta=0.35, kappa=0.01)
FAST_ESTIMATOR = EstimatorConfig(grid_points=2000, refine_tolerance=1e-5)


def small_config(**overrides):
    base = dict(
        true_model=SMALL_MODEL,
        schedule=SMALL_SCHEDULE,
        fit_c=(0.3, 0.3, 0.3),
        trials=6,
        master_seed=99,
        estimator=FAST_ESTIMATOR,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def test_single_trial_composes_sampling_and_estimation():
    config = small_config(trials=1)
    outcomes = run_trials(config)
    assert len(outcomes) == 1
    counts = sample_counts(SMALL_MODEL, SMALL_SCHEDULE, 99, spawn_prefix=(0, 0))
    direct = mle_estimate(counts, (0.3, 0.3, 0.3), FAST_ESTIMATOR)
    assert outcomes[0].result == direct
    assert outcomes[0].c == (0.3, 0.3, 0.3)


def test_run_trials_deterministic():
    config = small_config()
    assert run_trials(config) == run_trials(config)


def test_random_per_trial_c_is_seeded_and_recorded():
    config = small_config(fit_c=RANDOM_PER_TRIAL)
    outcomes = run_trials(config)
    assert outcomes == run_trials(config)
    cs = {o.c for o in outcomes}
    assert len(cs) == len(outcomes)
    for c in cs:
        assert len(c) == 3 and all(0.0 <= v <= 1.0 for v in c)


def test_error_curve_structure_and_consistency():
    config = small_config(trials=8)
    curve = error_curve(config)
    assert len(curve.rows) == 3
    assert [row.prefix for row in curve.rows] == [1, 2, 3]
    n_queries = [row.n_queries for row in curve.rows]
    assert n_queries == sorted(n_queries) and len(set(n_queries)) == 3
    # full-prefix RMSE agrees with an independent reduction of run_trials
    outcomes = run_trials(config)
    errors = [o.result.theta_hat - 0.35 for o in outcomes if not o.result.degenerate]
    rmse = math.sqrt(sum(e * e for e in errors) / len(errors))
    assert curve.rows[-1].rmse == pytest.approx(rmse, rel=1e-12)
    assert curve.rows[-1].n_trials == len(errors)
    assert curve.rows[-1].n_degenerate == 0


def test_error_curve_reference_columns():
    config = small_config(trials=4)
    curve = error_curve(config)
    for row in curve.rows:
        prefix_sched = SMALL_SCHEDULE.prefix(row.prefix)
        assert row.n_queries == query_count(prefix_sched, "paper")
        assert row.crlb_classical == classical_crlb(row.n_queries)
        assert row.crlb_model > 0.0
        assert row.crlb_noiseless > 0.0


def test_model_crlb_monotone_in_prefix():
    config = small_config(trials=1, schedule=Schedule((1, 2, 4, 8, 16), 50, 50),
                          fit_c=(0.3,) * 5)
    curve = error_curve(config)
    bounds = [row.crlb_model for row in curve.rows]
    assert all(b2 <= b1 * (1 + 1e-12) for b1, b2 in zip(bounds, bounds[1:]))


def test_query_mode_changes_axis():
    paper = error_curve(small_config(trials=2))
    strict = error_curve(small_config(trials=2, query_mode="strict"))
    for row_p, row_s in zip(paper.rows, strict.rows):
        assert row_s.n_queries > row_p.n_queries
        assert row_s.rmse == row_p.rmse


def test_parallel_trials_match_serial():
    config = small_config(trials=6)
    assert run_trials(config, threads=2) == run_trials(config, threads=1)
    assert error_curve(config, threads=2) == error_curve(config, threads=1)


def test_error_curve_csv_round_trip(tmp_path):
    curve = error_curve(small_config(trials=3))
    path = tmp_path / "curve.csv"
    curve.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "prefix,n_queries,rmse,crlb_model,crlb_classical,crlb_noiseless,n_trials,n_degenerate"
    assert len(lines) == 1 + len(curve.rows)
    first = lines[1].split(",")
    assert int(first[0]) == 1
    assert float(first[2]) == curve.rows[0].rmse


def test_config_validation():
    with pytest.raises(ValueError):
        small_config(trials=0)
    with pytest.raises(ValueError):
        small_config(fit_c=(0.3,))
    with pytest.raises(ValueError):
        small_config(fit_c=(1.2, 0.3, 0.3))
    with pytest.raises(ValueError):
        small_config(fit_c="sometimes-random")
    with pytest.raises(ValueError):
        small_config(query_mode="both")
    with pytest.raises(ValueError):
        small_config(true_model=TrueModelSpec(theta=0.3, beta=(0.5, 0.5)))
