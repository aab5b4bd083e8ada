"""Joint log-likelihood and its one-dimensional orthogonalized profile.

The joint likelihood of a count record factorizes over entries and
circuits into binomial terms; binomial coefficients are dropped (constant
in the parameters).  Substituting the orthogonalized damping curve
``beta_k = beta_from_c(theta, c_k, m_k)`` turns it into a function of theta
alone, which is maximized by a dense grid scan over [0, pi/2] followed by
golden-section refinement inside the winning bracket.
"""

import math
from dataclasses import dataclass

import numpy as np

from orthoae.model import HALF_PI, NoiseVector
from orthoae.ortho import OrthoParams, beta_from_c
from orthoae.sampling import CountData

__all__ = [
    "PROB_EPS",
    "EstimationResult",
    "EstimatorConfig",
    "log_likelihood",
    "ortho_log_likelihood",
    "likelihood_scan",
    "mle_estimate",
]

# Probabilities are clamped to [PROB_EPS, 1 - PROB_EPS] before logs so the
# objective stays finite at boundary angles; at double precision this does
# not move any interior argmax.
PROB_EPS = 1e-12

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_DEGENERATE_SPAN = 1e-12


@dataclass(frozen=True)
class EstimatorConfig:
    """Grid density and refinement tolerance of the profile maximizer.

    grid_points should resolve the fastest oscillation: at least
    4 * (2 * max(m) + 1) points over [0, pi/2].
    """

    grid_points: int = 10_000
    refine_tolerance: float = 1e-4

    def __post_init__(self):
        if self.grid_points < 2:
            raise ValueError(f"grid_points must be >= 2, got {self.grid_points}")
        if self.refine_tolerance <= 0.0:
            raise ValueError(f"refine_tolerance must be positive, got {self.refine_tolerance}")


@dataclass(frozen=True)
class EstimationResult:
    theta_hat: float
    log_likelihood_at_max: float
    scan_resolution: float
    refined: bool
    degenerate: bool


def _as_beta_list(beta, n_entries):
    if isinstance(beta, NoiseVector):
        beta = beta.beta
    beta = [float(b) for b in beta]
    if len(beta) != n_entries:
        raise ValueError(f"beta length {len(beta)} does not match schedule length {n_entries}")
    return beta


def _as_c_list(c, n_entries):
    if isinstance(c, OrthoParams):
        c = c.c
    c = [float(v) for v in c]
    if len(c) != n_entries:
        raise ValueError(f"c length {len(c)} does not match schedule length {n_entries}")
    for v in c:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"c entries must lie in [0, 1], got {v}")
    return c


def _accumulate(counts: CountData, theta, betas):
    """Sum of binomial log-likelihood terms; betas[k] broadcasts with theta."""
    sched = counts.schedule
    total = np.zeros_like(theta)
    for k, m in enumerate(sched.m):
        b = betas[k]
        p = np.clip(0.5 - 0.5 * b * np.cos(2.0 * (2 * m + 1) * theta), PROB_EPS, 1.0 - PROB_EPS)
        h = counts.grover_ones[k]
        total = total + h * np.log(p) + (sched.n_shot - h) * np.log(1.0 - p)
        ell = counts.ancillary_ones[k]
        if ell is not None:
            q = np.clip(
                0.5 - 0.5 * b * np.cos(2.0 * (2 * m - 3) * theta), PROB_EPS, 1.0 - PROB_EPS
            )
            total = total + ell * np.log(q) + (sched.n_shot_prime - ell) * np.log(1.0 - q)
    return total


def log_likelihood(counts: CountData, theta, beta):
    """Joint log-likelihood at (theta, beta); binomial coefficients omitted.

    ``beta`` is one damping amplitude per entry.  Values above 1 are
    accepted (the orthogonalized branch produces them where the oscillation
    factors are small); the bracket constraints keep probabilities valid.
    ``theta`` may be a scalar or an ndarray.
    """
    betas = _as_beta_list(beta, len(counts.schedule))
    th = np.asarray(theta, dtype=float)
    out = _accumulate(counts, th, betas)
    if th.ndim == 0:
        return float(out)
    return out


def ortho_log_likelihood(counts: CountData, theta, c):
    """Profile objective: log_likelihood at beta_k = beta_from_c(theta, c_k, m_k).

    Requires every schedule entry to have m >= 1 (the orthogonalized curve
    is defined through the circuit pair).  ``theta`` may be a scalar or an
    ndarray.
    """
    sched = counts.schedule
    cs = _as_c_list(c, len(sched))
    for k, m in enumerate(sched.m):
        if m < 1:
            raise ValueError(
                f"orthogonalized likelihood needs m >= 1 at every entry; entry {k} has m=0"
            )
    th = np.asarray(theta, dtype=float)
    betas = [beta_from_c(th, cs[k], m) for k, m in enumerate(sched.m)]
    out = _accumulate(counts, th, betas)
    if th.ndim == 0:
        return float(out)
    return out


def likelihood_scan(counts: CountData, c, lo: float, hi: float, points: int):
    """Profile objective on a uniform grid; returns [(theta, value), ...]."""
    if not (0.0 <= lo < hi <= HALF_PI):
        raise ValueError(f"need 0 <= lo < hi <= pi/2, got lo={lo}, hi={hi}")
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")
    thetas = np.linspace(lo, hi, points)
    values = ortho_log_likelihood(counts, thetas, c)
    return list(zip(thetas.tolist(), values.tolist()))


def mle_estimate(counts: CountData, c, config: EstimatorConfig | None = None) -> EstimationResult:
    """Profile maximum-likelihood estimate of theta.

    Dense grid over [0, pi/2] (global argmax, ties to the smallest theta),
    then golden-section refinement inside the winning bracket.  If the grid
    span of the objective is below 1e-12 the landscape is flat (e.g. c == 1
    everywhere) and the flagged midpoint is returned.
    """
    if config is None:
        config = EstimatorConfig()
    thetas = np.linspace(0.0, HALF_PI, config.grid_points)
    values = ortho_log_likelihood(counts, thetas, c)
    resolution = HALF_PI / (config.grid_points - 1)
    v_max = float(values.max())
    if v_max - float(values.min()) < _DEGENERATE_SPAN:
        return EstimationResult(
            theta_hat=HALF_PI / 2.0,
            log_likelihood_at_max=v_max,
            scan_resolution=resolution,
            refined=False,
            degenerate=True,
        )
    i = int(np.argmax(values))
    best_x = float(thetas[i])
    best_f = float(values[i])
    a = float(thetas[max(i - 1, 0)])
    b = float(thetas[min(i + 1, config.grid_points - 1)])
    while b - a > config.refine_tolerance:
        x1 = b - _INV_PHI * (b - a)
        x2 = a + _INV_PHI * (b - a)
        f1, f2 = ortho_log_likelihood(counts, np.array([x1, x2]), c)
        if f1 > best_f:
            best_x, best_f = x1, float(f1)
        if f2 > best_f:
            best_x, best_f = x2, float(f2)
        if f1 >= f2:
            b = x2
        else:
            a = x1
    return EstimationResult(
        theta_hat=best_x,
        log_likelihood_at_max=best_f,
        scan_resolution=resolution,
        refined=True,
        degenerate=False,
    )
