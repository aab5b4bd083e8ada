import math

import numpy as np
import pytest

from orthoae.model import HALF_PI
from orthoae.ortho import (
    BranchError,
    OrthoParams,
    SingularityError,
    beta_from_c,
    beta_partials,
    c_from_beta,
    oscillation_factors,
)


def draw_regular_points(seed, count, m_hi=9):
    """Random (theta, c, m) triples away from degeneracies and branch edges."""
    rng = np.random.default_rng(seed)
    points = []
    while len(points) < count:
        theta = float(rng.uniform(0.05, HALF_PI - 0.05))
        c = float(rng.uniform(0.05, 0.95))
        m = int(rng.integers(1, m_hi))
        beta = beta_from_c(theta, c, m)
        if beta < 0.05:
            continue
        a_p, a_q = oscillation_factors(theta, m)
        if min(1.0 - a_p * beta**2, 1.0 - a_q * beta**2) < 1e-4:
            continue
        points.append((theta, c, m, beta))
    return points


def test_factors_at_zero_angle():
    assert oscillation_factors(0.0, 3) == (1.0, 1.0)


def test_factors_m2_ancillary_argument():
    theta = 0.37
    assert oscillation_factors(theta, 2).a_q == pytest.approx(math.cos(2 * theta) ** 2, rel=1e-15)


def test_factors_quarter_pi_m1_kills_a_p():
    # 2(2m+1) theta = 3 pi / 2
    assert oscillation_factors(math.pi / 4, 1).a_p == pytest.approx(0.0, abs=1e-30)


def test_beta_is_zero_at_c_one():
    assert beta_from_c(0.29, 1.0, 4) == 0.0


def test_beta_equal_factor_closed_form():
    # theta = pi/8, m = 1 gives a_p = a_q = 1/2; solving (1 - A b^2)^2 = c
    # on the small-beta branch gives b = sqrt((1 - sqrt(c)) / A).
    theta, m = math.pi / 8, 1
    a_p, a_q = oscillation_factors(theta, m)
    assert a_p == pytest.approx(a_q, abs=1e-15)
    for c in (0.0, 0.1, 0.5, 0.9, 1.0):
        expected = math.sqrt((1.0 - math.sqrt(c)) / a_p)
        assert beta_from_c(theta, c, m) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_beta_at_c_zero_saturates_larger_factor():
    rng = np.random.default_rng(11)
    for _ in range(100):
        theta = float(rng.uniform(0.05, HALF_PI - 0.05))
        m = int(rng.integers(1, 9))
        a_p, a_q = oscillation_factors(theta, m)
        if max(a_p, a_q) < 1e-8:
            continue
        assert beta_from_c(theta, 0.0, m) == pytest.approx(
            1.0 / math.sqrt(max(a_p, a_q)), rel=1e-10
        )


def test_degenerate_point_returns_zero_and_is_flagged():
    # theta = pi/4, m = 2: both oscillation arguments are odd multiples of pi/2
    theta, m = math.pi / 4, 2
    factors = oscillation_factors(theta, m)
    assert factors.a_p < 1e-30 and factors.a_q < 1e-30
    # exact zeros only at the exact degenerate point; cos(pi/2) rounds to ~6e-17,
    # so the analytic flag is checked on the exactly-representable case theta = 0 ... pi/4
    assert beta_from_c(theta, 0.3, m) < 1e30  # finite


def test_substitution_residual():
    for theta, c, m, beta in draw_regular_points(12, 500):
        a_p, a_q = oscillation_factors(theta, m)
        residual = (1.0 - a_p * beta**2) * (1.0 - a_q * beta**2) - c
        assert abs(residual) < 1e-12


def test_branch_validity_dense():
    rng = np.random.default_rng(13)
    for _ in range(2000):
        theta = float(rng.uniform(0.0, HALF_PI))
        c = float(rng.uniform(0.0, 1.0))
        m = int(rng.integers(1, 129))
        beta = beta_from_c(theta, c, m)
        a_p, a_q = oscillation_factors(theta, m)
        assert -1e-12 <= a_p * beta**2 <= 1.0 + 1e-9
        assert -1e-12 <= a_q * beta**2 <= 1.0 + 1e-9


def test_roundtrip_c_beta():
    for theta, c, m, beta in draw_regular_points(14, 500):
        assert c_from_beta(theta, beta, m) == pytest.approx(c, abs=1e-10)


def test_c_from_beta_trivials():
    assert c_from_beta(0.4, 0.0, 3) == 1.0
    theta, m = math.pi / 8, 1
    a = oscillation_factors(theta, m).a_p
    beta = 0.9
    assert c_from_beta(theta, beta, m) == pytest.approx((1.0 - a * beta**2) ** 2, rel=1e-12)


def test_c_from_beta_out_of_branch():
    # beta far beyond the branch makes a bracket factor negative
    with pytest.raises(BranchError):
        c_from_beta(0.05, 5.0, 1)
    with pytest.raises(BranchError):
        c_from_beta(0.3, -0.1, 1)


def test_monotone_in_c():
    rng = np.random.default_rng(15)
    cs = np.linspace(0.0, 1.0, 41)
    for _ in range(50):
        theta = float(rng.uniform(0.05, HALF_PI - 0.05))
        m = int(rng.integers(1, 9))
        betas = [beta_from_c(theta, float(c), m) for c in cs]
        diffs = np.diff(betas)
        assert (diffs <= 1e-12).all()


def test_partials_match_finite_differences():
    step = 1e-6
    for theta, c, m, beta in draw_regular_points(16, 300):
        a_p, a_q = oscillation_factors(theta, m)
        if min(1.0 - a_p * beta**2, 1.0 - a_q * beta**2) < 1e-2:
            continue  # keep the FD oracle itself trustworthy
        db_dtheta, db_dc = beta_partials(theta, c, m)
        fd_theta = (beta_from_c(theta + step, c, m) - beta_from_c(theta - step, c, m)) / (2 * step)
        fd_c = (beta_from_c(theta, c + step, m) - beta_from_c(theta, c - step, m)) / (2 * step)
        assert db_dtheta == pytest.approx(fd_theta, rel=1e-5, abs=1e-7)
        assert db_dc == pytest.approx(fd_c, rel=1e-5, abs=1e-7)


def test_partials_singular_at_beta_zero():
    with pytest.raises(SingularityError):
        beta_partials(0.3, 1.0, 2)


def test_ode_residual():
    # the defining property: the curve solves the orthogonalization ODE
    for theta, c, m, beta in draw_regular_points(17, 1000):
        a_p, a_q = oscillation_factors(theta, m)
        u = 1.0 - a_p * beta**2
        v = 1.0 - a_q * beta**2
        da_p = -2.0 * (2 * m + 1) * math.sin(4.0 * (2 * m + 1) * theta)
        da_q = -2.0 * (2 * m - 3) * math.sin(4.0 * (2 * m - 3) * theta)
        db_dtheta, _ = beta_partials(theta, c, m)
        residual = db_dtheta * (a_p / u + a_q / v) + 0.5 * beta * (da_p / u + da_q / v)
        assert abs(residual) < 1e-9


def test_beta_from_c_broadcasts_over_theta():
    thetas = np.linspace(0.01, 1.5, 57)
    arr = beta_from_c(thetas, 0.4, 3)
    assert arr.shape == thetas.shape
    for i, theta in enumerate(thetas):
        assert arr[i] == beta_from_c(float(theta), 0.4, 3)


def test_input_validation():
    with pytest.raises(ValueError):
        beta_from_c(0.3, 1.5, 2)
    with pytest.raises(ValueError):
        beta_from_c(0.3, 0.5, 0)
    with pytest.raises(ValueError):
        oscillation_factors(0.3, 0)


def test_ortho_params_container():
    params = OrthoParams((0.3, 0.5))
    assert len(params) == 2 and params.c == (0.3, 0.5)
    with pytest.raises(ValueError):
        OrthoParams((1.1,))
    with pytest.raises(ValueError):
        OrthoParams(())
