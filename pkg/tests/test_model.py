import math

import numpy as np
import pytest

from orthoae.model import (
    HALF_PI,
    DepolarizingSpec,
    NoiseVector,
    Schedule,
    ancillary_prob,
    depolarizing_beta,
    grover_prob,
)


def test_grover_prob_quarter_pi_kills_signal():
    assert grover_prob(math.pi / 4, 0.7, 0) == pytest.approx(0.5, abs=1e-15)


def test_grover_prob_fully_mixed_is_half():
    assert grover_prob(0.3, 0.0, 5) == 0.5


def test_grover_prob_noiseless_m0_is_sin_squared():
    assert grover_prob(0.35, 1.0, 0) == pytest.approx(math.sin(0.35) ** 2, rel=1e-14)


def test_grover_prob_matches_ideal_oscillation_on_grid():
    # beta = 1 must reproduce sin^2((2m+1) theta) to machine precision
    thetas = np.linspace(0.0, HALF_PI, 701)
    for m in range(0, 65, 4):
        probs = np.array([grover_prob(t, 1.0, m) for t in thetas])
        ideal = np.sin((2 * m + 1) * thetas) ** 2
        assert np.abs(probs - ideal).max() < 1e-12


@pytest.mark.parametrize(
    "theta,beta,m",
    [(-0.1, 0.5, 1), (HALF_PI + 0.1, 0.5, 1), (0.3, -0.2, 1), (0.3, 1.2, 1), (0.3, 0.5, -1)],
)
def test_grover_prob_domain_errors(theta, beta, m):
    with pytest.raises(ValueError):
        grover_prob(theta, beta, m)


def test_ancillary_m2_equals_grover_m0():
    theta, beta = 0.42, 0.8
    assert ancillary_prob(theta, beta, 2) == grover_prob(theta, beta, 0)


def test_ancillary_m1_equals_m2_by_evenness():
    theta, beta = 0.27, 0.55
    assert ancillary_prob(theta, beta, 1) == pytest.approx(ancillary_prob(theta, beta, 2), rel=1e-15)


def test_ancillary_fully_mixed_is_half():
    assert ancillary_prob(0.1, 0.0, 3) == 0.5


def test_ancillary_rejects_m0():
    with pytest.raises(ValueError):
        ancillary_prob(0.3, 0.5, 0)


def test_ancillary_is_phase_delayed_grover():
    # same oscillation evaluated at iteration index m - 2 for m >= 2
    rng = np.random.default_rng(5)
    for _ in range(200):
        theta = rng.uniform(0.0, HALF_PI)
        beta = rng.uniform(0.0, 1.0)
        m = int(rng.integers(2, 40))
        assert ancillary_prob(theta, beta, m) == pytest.approx(
            grover_prob(theta, beta, m - 2), rel=1e-14, abs=1e-14
        )


def test_probabilities_stay_in_signal_band():
    rng = np.random.default_rng(6)
    for _ in range(500):
        theta = rng.uniform(0.0, HALF_PI)
        beta = rng.uniform(0.0, 1.0)
        m = int(rng.integers(0, 65))
        p = grover_prob(theta, beta, m)
        lo, hi = (1.0 - beta) / 2.0, (1.0 + beta) / 2.0
        assert lo - 1e-15 <= p <= hi + 1e-15
        if m >= 1:
            q = ancillary_prob(theta, beta, m)
            assert lo - 1e-15 <= q <= hi + 1e-15


def test_depolarizing_beta_trivial_cases():
    assert depolarizing_beta(DepolarizingSpec(0.0), 17) == 1.0
    assert depolarizing_beta(DepolarizingSpec(0.01), 0) == 1.0
    assert depolarizing_beta(DepolarizingSpec(0.01), 1) == pytest.approx(math.exp(-0.01), rel=1e-15)
    assert depolarizing_beta(0.02, 3) == pytest.approx(math.exp(-0.06), rel=1e-15)


def test_depolarizing_beta_is_multiplicative():
    spec = DepolarizingSpec(0.013)
    rng = np.random.default_rng(7)
    for _ in range(100):
        m1 = int(rng.integers(0, 200))
        m2 = int(rng.integers(0, 200))
        assert spec.beta(m1 + m2) == pytest.approx(spec.beta(m1) * spec.beta(m2), rel=1e-12)


def test_depolarizing_rejects_negative_kappa():
    with pytest.raises(ValueError):
        DepolarizingSpec(-0.1)


def test_schedule_validation():
    with pytest.raises(ValueError):
        Schedule((), 50, 50)
    with pytest.raises(ValueError):
        Schedule((1, -1), 50, 50)
    with pytest.raises(ValueError):
        Schedule((1, 2), 0, 50)
    with pytest.raises(ValueError):
        Schedule((1, 2), 50, 0)
    with pytest.raises(ValueError):
        Schedule((1.5,), 50, 50)


def test_schedule_allows_zero_entries_and_prefix():
    sched = Schedule((0, 1, 2), 10, 20)
    assert len(sched) == 3
    assert not sched.has_ancillary(0)
    assert sched.has_ancillary(1)
    assert sched.prefix(2).m == (0, 1)
    assert sched.prefix(2).n_shot_prime == 20
    with pytest.raises(ValueError):
        sched.prefix(0)
    with pytest.raises(ValueError):
        sched.prefix(4)


def test_power_of_two_schedule():
    sched = Schedule.power_of_two(8, 50, 50)
    assert sched.m == (1, 2, 4, 8, 16, 32, 64, 128)


def test_noise_vector_validation():
    assert len(NoiseVector((0.0, 0.5, 1.0))) == 3
    with pytest.raises(ValueError):
        NoiseVector((1.2,))
    with pytest.raises(ValueError):
        NoiseVector(())
    sched = Schedule((0, 3), 10, 10)
    nv = NoiseVector.from_depolarizing(DepolarizingSpec(0.1), sched)
    assert nv.beta == pytest.approx((1.0, math.exp(-0.3)))
