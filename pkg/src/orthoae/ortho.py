"""Analytic orthogonalized coordinates for the damping nuisance parameters.

Both circuit probabilities of a schedule entry depend on the damping
amplitude ``beta`` only through ``a_p * beta^2`` and ``a_q * beta^2``, where
``a_p = cos^2(2(2m+1) theta)`` and ``a_q = cos^2(2(2m-3) theta)``.  Holding

    (1 - a_p beta^2) (1 - a_q beta^2) = c

for a constant ``c in [0, 1]`` defines a curve ``beta(theta; c)`` along
which the likelihood score for ``theta`` decouples from the nuisance
coordinates.  This module evaluates the curve on its valid branch (the one
with ``0 <= a_p beta^2 <= 1`` and ``0 <= a_q beta^2 <= 1``), its inverse,
and its partial derivatives.

The branch is evaluated in the rationalized form

    beta^2 = 2 (1 - c) / (a_p + a_q + sqrt((a_p - a_q)^2 + 4 a_p a_q c))

which is free of subtractive cancellation and stays finite when one of the
factors vanishes.  Note ``beta`` may exceed 1 on this branch (both bracket
factors remain in [0, 1], so the probabilities stay valid).
"""

import math
from typing import NamedTuple

import numpy as np

__all__ = [
    "OscillationFactors",
    "OrthoParams",
    "oscillation_factors",
    "beta_from_c",
    "c_from_beta",
    "beta_partials",
    "BranchError",
    "SingularityError",
]

HALF_PI = math.pi / 2.0


class BranchError(ValueError):
    """A beta value lies outside the valid solution branch."""


class SingularityError(ValueError):
    """Partial derivatives are undefined at this point (beta = 0)."""


class OscillationFactors(NamedTuple):
    """Squared cosines of the two oscillation arguments at one entry."""

    a_p: float
    a_q: float

    @property
    def degenerate(self) -> bool:
        """Both factors vanish: the probabilities are flat in beta."""
        return self.a_p == 0.0 and self.a_q == 0.0


class OrthoParams:
    """Free constants c = (c_1, ..., c_M), one per schedule entry, in [0, 1].

    Any choice gives a valid orthogonal coordinate system; the constants are
    identified with the nuisance coordinates themselves.
    """

    __slots__ = ("c",)

    def __init__(self, c):
        c = tuple(float(v) for v in c)
        if not c:
            raise ValueError("need at least one entry")
        for v in c:
            _check_c(v)
        self.c = c

    def __len__(self):
        return len(self.c)

    def __repr__(self):
        return f"OrthoParams({self.c!r})"

    def __eq__(self, other):
        return isinstance(other, OrthoParams) and self.c == other.c


def _check_c(c):
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"c must lie in [0, 1], got {c}")


def _check_m(m):
    if int(m) != m or m < 1:
        raise ValueError(f"iteration count must be an integer >= 1, got {m}")


def _factor_arrays(theta, m):
    a_p = np.cos(2.0 * (2 * m + 1) * theta) ** 2
    a_q = np.cos(2.0 * (2 * m - 3) * theta) ** 2
    return a_p, a_q


def oscillation_factors(theta: float, m: int) -> OscillationFactors:
    """Evaluate a_p = cos^2(2(2m+1) theta) and a_q = cos^2(2(2m-3) theta)."""
    _check_m(m)
    return OscillationFactors(
        math.cos(2.0 * (2 * m + 1) * theta) ** 2,
        math.cos(2.0 * (2 * m - 3) * theta) ** 2,
    )


def beta_from_c(theta, c: float, m: int):
    """Damping amplitude on the orthogonalized curve at (theta, c).

    Accepts a scalar or ndarray ``theta`` and broadcasts.  At the degenerate
    points where both oscillation factors vanish the probabilities do not
    depend on beta at all; 0 is returned there (use ``oscillation_factors``
    to detect them).
    """
    _check_c(c)
    _check_m(m)
    th = np.asarray(theta, dtype=float)
    a_p, a_q = _factor_arrays(th, m)
    disc = (a_p - a_q) ** 2 + 4.0 * a_p * a_q * c
    denom = a_p + a_q + np.sqrt(disc)
    with np.errstate(divide="ignore", invalid="ignore"):
        beta_sq = np.where(denom > 0.0, 2.0 * (1.0 - c) / denom, 0.0)
    beta = np.sqrt(beta_sq)
    if th.ndim == 0:
        return float(beta)
    return beta


def c_from_beta(theta: float, beta: float, m: int) -> float:
    """Evaluate (1 - a_p beta^2)(1 - a_q beta^2); inverse of beta_from_c.

    Raises BranchError if either bracket factor is negative, i.e. beta is
    too large for the valid branch at this theta.
    """
    _check_m(m)
    if beta < 0.0:
        raise BranchError(f"beta must be non-negative, got {beta}")
    a_p, a_q = oscillation_factors(theta, m)
    u = 1.0 - a_p * beta * beta
    v = 1.0 - a_q * beta * beta
    if u < -1e-12 or v < -1e-12:
        raise BranchError(
            f"beta={beta} is outside the valid branch at theta={theta}, m={m}: "
            f"bracket factors ({u}, {v})"
        )
    return u * v


def beta_partials(theta: float, c: float, m: int) -> tuple[float, float]:
    """Partial derivatives (d beta/d theta, d beta/d c) on the curve.

    Obtained by implicit differentiation of
    F(theta, beta, c) = (1 - a_p beta^2)(1 - a_q beta^2) - c = 0,
    using d a_p/d theta = -2(2m+1) sin(4(2m+1) theta) and the analogous
    expression for a_q.  Undefined at beta = 0 (c = 1 is the constant
    solution beta == 0; treat its partials as zero at the call site).
    """
    _check_c(c)
    _check_m(m)
    beta = beta_from_c(theta, c, m)
    if beta == 0.0:
        raise SingularityError(
            f"partials are singular at beta = 0 (theta={theta}, c={c}, m={m})"
        )
    a_p, a_q = oscillation_factors(theta, m)
    u = 1.0 - a_p * beta * beta
    v = 1.0 - a_q * beta * beta
    da_p = -2.0 * (2 * m + 1) * math.sin(4.0 * (2 * m + 1) * theta)
    da_q = -2.0 * (2 * m - 3) * math.sin(4.0 * (2 * m - 3) * theta)
    df_dbeta = -2.0 * beta * (a_p * v + a_q * u)
    if df_dbeta == 0.0:
        raise SingularityError(
            f"dF/dbeta vanishes at theta={theta}, c={c}, m={m}"
        )
    df_dtheta = -beta * beta * (da_p * v + da_q * u)
    return -df_dtheta / df_dbeta, 1.0 / df_dbeta
