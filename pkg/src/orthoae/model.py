"""Closed-form hit probabilities for the amplified and unamplified circuits.

A schedule entry with amplification count ``m`` and damping amplitude
``beta`` yields outcome "1" with probability

    p = 1/2 - (beta/2) * cos(2*(2m+1)*theta)

on the amplified circuit, and with the phase-delayed argument ``2m - 3``
instead of ``2m + 1`` on the unamplified companion circuit.  ``beta = 1``
recovers the ideal oscillation ``sin^2((2m+1)*theta)``; ``beta = 0`` is the
fully mixed limit.  Angles are radians throughout, ``theta in [0, pi/2]``.
"""

import math
from dataclasses import dataclass

HALF_PI = math.pi / 2.0

__all__ = [
    "HALF_PI",
    "Schedule",
    "NoiseVector",
    "DepolarizingSpec",
    "grover_prob",
    "ancillary_prob",
    "depolarizing_beta",
]


def _check_theta(theta):
    if not 0.0 <= theta <= HALF_PI:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta}")


def _check_beta(beta):
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")


def _check_count(m, minimum):
    if int(m) != m or m < minimum:
        raise ValueError(f"iteration count must be an integer >= {minimum}, got {m}")


@dataclass(frozen=True)
class Schedule:
    """Amplification schedule plus per-circuit shot budgets.

    ``m[k]`` is the number of Grover applications for entry ``k``.  Entries
    with ``m[k] == 0`` are classical-sampling baselines and carry no
    unamplified companion circuit.  ``n_shot`` shots are taken on each
    amplified circuit, ``n_shot_prime`` on each unamplified one.
    """

    m: tuple[int, ...]
    n_shot: int
    n_shot_prime: int

    def __post_init__(self):
        m = tuple(self.m)
        if not m:
            raise ValueError("schedule needs at least one entry")
        for v in m:
            _check_count(v, minimum=0)
        object.__setattr__(self, "m", tuple(int(v) for v in m))
        if self.n_shot < 1:
            raise ValueError(f"n_shot must be positive, got {self.n_shot}")
        if self.n_shot_prime < 1:
            raise ValueError(f"n_shot_prime must be positive, got {self.n_shot_prime}")

    def __len__(self):
        return len(self.m)

    def has_ancillary(self, k: int) -> bool:
        """True if entry ``k`` carries an unamplified companion circuit."""
        return self.m[k] >= 1

    def prefix(self, length: int) -> "Schedule":
        """Schedule truncated to its first ``length`` entries."""
        if not 1 <= length <= len(self.m):
            raise ValueError(f"prefix length must be in [1, {len(self.m)}], got {length}")
        return Schedule(self.m[:length], self.n_shot, self.n_shot_prime)

    @classmethod
    def power_of_two(cls, depth: int, n_shot: int, n_shot_prime: int) -> "Schedule":
        """The doubling schedule m_k = 2^(k-1) for k = 1..depth."""
        return cls(tuple(2 ** k for k in range(depth)), n_shot, n_shot_prime)


@dataclass(frozen=True)
class NoiseVector:
    """One damping amplitude per schedule entry, each in [0, 1]."""

    beta: tuple[float, ...]

    def __post_init__(self):
        beta = tuple(float(b) for b in self.beta)
        if not beta:
            raise ValueError("noise vector needs at least one entry")
        for b in beta:
            _check_beta(b)
        object.__setattr__(self, "beta", beta)

    def __len__(self):
        return len(self.beta)

    @classmethod
    def from_depolarizing(cls, spec: "DepolarizingSpec", schedule: Schedule) -> "NoiseVector":
        return cls(tuple(spec.beta(m) for m in schedule.m))


@dataclass(frozen=True)
class DepolarizingSpec:
    """Uniform depolarizing decay with rate ``kappa`` per amplification step."""

    kappa: float

    def __post_init__(self):
        if self.kappa < 0.0:
            raise ValueError(f"kappa must be non-negative, got {self.kappa}")

    def beta(self, m: int) -> float:
        _check_count(m, minimum=0)
        return math.exp(-self.kappa * m)


def grover_prob(theta: float, beta: float, m: int) -> float:
    """Probability of outcome "1" on the amplified circuit G^m.

    Equals ``1/2 - (beta/2) cos(2(2m+1) theta)``; reduces to
    ``sin^2((2m+1) theta)`` at ``beta = 1``.
    """
    _check_theta(theta)
    _check_beta(beta)
    _check_count(m, minimum=0)
    return 0.5 - 0.5 * beta * math.cos(2.0 * (2 * m + 1) * theta)


def ancillary_prob(theta: float, beta: float, m: int) -> float:
    """Probability of outcome "1" on the unamplified circuit R G^(m-1).

    The oscillation argument is ``2m - 3``; cosine evenness covers the
    ``m = 1`` case where it is negative.  Requires ``m >= 1``: the circuit
    needs one operator slot for R.
    """
    _check_theta(theta)
    _check_beta(beta)
    _check_count(m, minimum=1)
    return 0.5 - 0.5 * beta * math.cos(2.0 * (2 * m - 3) * theta)


def depolarizing_beta(spec, m: int) -> float:
    """Damping amplitude ``exp(-kappa * m)`` after ``m`` noisy applications."""
    if not isinstance(spec, DepolarizingSpec):
        spec = DepolarizingSpec(float(spec))
    return spec.beta(m)
