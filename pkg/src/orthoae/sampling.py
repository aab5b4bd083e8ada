"""Seeded generation of measurement records.

Counts are the sufficient statistics: per schedule entry we keep the number
of "1" outcomes on the amplified circuit and (where it exists) on the
unamplified companion.  The true model generating the data may differ from
the model later used for fitting, which is what makes model-mismatch
studies possible.

Substreams are derived from the master seed with explicit spawn keys
(``SeedSequence(seed, spawn_key=(..., entry, circuit))``), so results are
identical regardless of evaluation order or parallelism.
"""

import math
from dataclasses import dataclass

import numpy as np

from orthoae.model import HALF_PI, DepolarizingSpec, Schedule, ancillary_prob, grover_prob

__all__ = ["CountData", "TrueModelSpec", "sample_counts", "expected_counts"]


@dataclass(frozen=True)
class CountData:
    """Per-entry counts of outcome "1" for both circuit families.

    ``ancillary_ones[k]`` is None exactly where ``schedule.m[k] == 0``.
    Values are integers for sampled records and reals for expected (noise
    free) records.
    """

    schedule: Schedule
    grover_ones: tuple[float, ...]
    ancillary_ones: tuple[float | None, ...]

    def __post_init__(self):
        g = tuple(self.grover_ones)
        a = tuple(self.ancillary_ones)
        object.__setattr__(self, "grover_ones", g)
        object.__setattr__(self, "ancillary_ones", a)
        sched = self.schedule
        if len(g) != len(sched) or len(a) != len(sched):
            raise ValueError(
                f"count lengths ({len(g)}, {len(a)}) do not match schedule length {len(sched)}"
            )
        for k, ones in enumerate(g):
            if not 0 <= ones <= sched.n_shot:
                raise ValueError(f"grover count {ones} outside [0, {sched.n_shot}] at entry {k}")
        for k, ones in enumerate(a):
            if sched.m[k] == 0:
                if ones is not None:
                    raise ValueError(f"entry {k} has m=0 and must have no ancillary count")
            else:
                if ones is None:
                    raise ValueError(f"entry {k} has m>=1 and needs an ancillary count")
                if not 0 <= ones <= sched.n_shot_prime:
                    raise ValueError(
                        f"ancillary count {ones} outside [0, {sched.n_shot_prime}] at entry {k}"
                    )

    def prefix(self, length: int) -> "CountData":
        """Counts truncated to the first ``length`` schedule entries."""
        return CountData(
            self.schedule.prefix(length),
            self.grover_ones[:length],
            self.ancillary_ones[:length],
        )


@dataclass(frozen=True)
class TrueModelSpec:
    """Data-generating model: encoded angle, damping law, optional readout bias.

    Exactly one of ``beta`` (an explicit per-entry damping curve) or
    ``kappa`` (depolarizing decay ``exp(-kappa m)``) must be given.
    ``readout_bias`` is a symmetric outcome-flip probability b in [0, 0.5):
    the recorded hit probability becomes ``(1-b) p + b (1-p)``.  This is the
    simplest effect the per-entry damping model cannot absorb, since it
    shifts the offset rather than the amplitude.
    """

    theta: float
    beta: tuple[float, ...] | None = None
    kappa: float | None = None
    readout_bias: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= HALF_PI:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta}")
        if (self.beta is None) == (self.kappa is None):
            raise ValueError("give exactly one of beta or kappa")
        if self.beta is not None:
            beta = tuple(float(b) for b in self.beta)
            for b in beta:
                if not 0.0 <= b <= 1.0:
                    raise ValueError(f"beta entries must lie in [0, 1], got {b}")
            object.__setattr__(self, "beta", beta)
        if self.kappa is not None and self.kappa < 0.0:
            raise ValueError(f"kappa must be non-negative, got {self.kappa}")
        if not 0.0 <= self.readout_bias < 0.5:
            raise ValueError(f"readout_bias must lie in [0, 0.5), got {self.readout_bias}")

    def beta_for(self, schedule: Schedule) -> tuple[float, ...]:
        """The damping amplitude per schedule entry."""
        if self.kappa is not None:
            spec = DepolarizingSpec(self.kappa)
            return tuple(spec.beta(m) for m in schedule.m)
        if len(self.beta) != len(schedule):
            raise ValueError(
                f"beta length {len(self.beta)} does not match schedule length {len(schedule)}"
            )
        return self.beta

    def probabilities(self, schedule: Schedule):
        """Per-entry hit probabilities (p_k, q_k or None), bias applied."""
        betas = self.beta_for(schedule)
        b = self.readout_bias
        ps = []
        qs = []
        for k, m in enumerate(schedule.m):
            p = grover_prob(self.theta, betas[k], m)
            ps.append((1.0 - b) * p + b * (1.0 - p))
            if m >= 1:
                q = ancillary_prob(self.theta, betas[k], m)
                qs.append((1.0 - b) * q + b * (1.0 - q))
            else:
                qs.append(None)
        return ps, qs


def _substream(seed, spawn_prefix, entry, circuit):
    key = (*spawn_prefix, entry, circuit)
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def sample_counts(
    spec: TrueModelSpec,
    schedule: Schedule,
    seed: int,
    *,
    spawn_prefix: tuple[int, ...] = (),
) -> CountData:
    """Draw one measurement record from the true model.

    Each count is the number of uniform draws below the circuit probability,
    taken from its own substream, so the record is deterministic in
    (seed, spawn_prefix) and independent of evaluation order.
    """
    ps, qs = spec.probabilities(schedule)
    grover = []
    ancillary = []
    for k in range(len(schedule)):
        rng = _substream(seed, spawn_prefix, k, 0)
        grover.append(int((rng.random(schedule.n_shot) < ps[k]).sum()))
        if qs[k] is None:
            ancillary.append(None)
        else:
            rng = _substream(seed, spawn_prefix, k, 1)
            ancillary.append(int((rng.random(schedule.n_shot_prime) < qs[k]).sum()))
    return CountData(schedule, tuple(grover), tuple(ancillary))


def expected_counts(spec: TrueModelSpec, schedule: Schedule) -> CountData:
    """Noise-free record: real-valued counts n_shot * p and n_shot' * q."""
    ps, qs = spec.probabilities(schedule)
    grover = tuple(schedule.n_shot * p for p in ps)
    ancillary = tuple(None if q is None else schedule.n_shot_prime * q for q in qs)
    return CountData(schedule, grover, ancillary)
