"""Fisher information matrices and Cramer-Rao bounds.

In the original coordinates (theta, beta_1, ..., beta_M) the information
matrix is arrow-structured: beta_j and beta_k never co-occur in any
circuit, so the only off-diagonal entries sit in the first row and column.
The bound on theta then has the O(M) Schur-complement form

    crlb = 1 / (J_11 - sum_k J_{1,k+1}^2 / J_{k+1,k+1})

which is also what full inversion of the arrow matrix gives.  Transforming
to the orthogonalized coordinates (theta, c_1, ..., c_M) annihilates the
first-row off-diagonals without changing the bound.
"""

import math
from dataclasses import dataclass

import numpy as np

from orthoae.model import Schedule
from orthoae.ortho import beta_from_c, beta_partials

__all__ = [
    "FisherMatrix",
    "fisher_matrix",
    "fisher_orthogonalized",
    "crlb_theta",
    "classical_crlb",
    "noiseless_crlb",
    "query_count",
    "DivergentInformationError",
    "NonIdentifiableError",
]

# Per-shot information of the m=0, beta=1 circuit (p = sin^2 theta) is 4
# for every theta, the classical-sampling reference rate.
_CLASSICAL_UNIT = 4.0

_BOUNDARY_EPS = 1e-14


class DivergentInformationError(ValueError):
    """A circuit probability sits at 0 or 1; the information diverges."""


class NonIdentifiableError(ValueError):
    """The information matrix carries no (or negative) margin on theta."""


@dataclass(frozen=True)
class FisherMatrix:
    """(M+1) x (M+1) symmetric information matrix, ordering (theta, nuisances)."""

    entries: np.ndarray
    structure: str = "arrow"

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"entries must be square, got shape {entries.shape}")
        if self.structure not in ("arrow", "dense"):
            raise ValueError(f"structure must be 'arrow' or 'dense', got {self.structure!r}")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _slot_terms(theta, beta, m, schedule):
    """(shots, factor, phase) pairs contributing at one schedule entry."""
    pairs = [(schedule.n_shot, 2 * m + 1)]
    if m >= 1:
        pairs.append((schedule.n_shot_prime, 2 * m - 3))
    return [(shots, fac, 2.0 * fac * theta) for shots, fac in pairs]


def fisher_matrix(theta: float, beta, schedule: Schedule) -> FisherMatrix:
    """Information matrix of the joint count record at (theta, beta).

    Per-shot binomial information: J_ab = (d_a p)(d_b p) / (p (1 - p)) with
    p = 1/2 - (beta/2) cos(phase), summed over entries, circuits and shots.
    Raises DivergentInformationError if any included circuit probability is
    at the boundary (1 - beta^2 cos^2 = 0).
    """
    from orthoae.model import NoiseVector

    if isinstance(beta, NoiseVector):
        beta = beta.beta
    betas = [float(b) for b in beta]
    if len(betas) != len(schedule):
        raise ValueError(
            f"beta length {len(betas)} does not match schedule length {len(schedule)}"
        )
    n = len(schedule)
    entries = np.zeros((n + 1, n + 1))
    for k, m in enumerate(schedule.m):
        b = betas[k]
        for shots, fac, phase in _slot_terms(theta, b, m, schedule):
            cos_p = math.cos(phase)
            sin_p = math.sin(phase)
            margin = 1.0 - b * b * cos_p * cos_p
            if margin < -1e-12:
                raise ValueError(
                    f"beta={b} puts the entry {k} probability outside [0, 1]"
                )
            if margin <= _BOUNDARY_EPS:
                raise DivergentInformationError(
                    f"probability at entry {k} (m={m}) sits at the boundary; "
                    "information diverges"
                )
            entries[0, 0] += 4.0 * shots * b * b * fac * fac * sin_p * sin_p / margin
            entries[0, k + 1] += -2.0 * shots * b * fac * sin_p * cos_p / margin
            entries[k + 1, k + 1] += shots * cos_p * cos_p / margin
        entries[k + 1, 0] = entries[0, k + 1]
    return FisherMatrix(entries, "arrow")


def fisher_orthogonalized(theta: float, c, schedule: Schedule) -> FisherMatrix:
    """Information matrix in the coordinates (theta, c_1, ..., c_M).

    Computed as T^t J T with J the matrix at beta_k = beta_from_c and T the
    Jacobian of the coordinate change: first column (1, d beta_k/d theta),
    nuisance columns single entries d beta_k/d c_k.  Entries with c_k = 1
    ride the constant solution beta == 0 and get zero partials.

    The first-row off-diagonals vanish only for balanced shot budgets
    (n_shot == n_shot_prime): the analytic curve solves the equal-weight
    balance equation.  Unbalanced schedules still give a valid coordinate
    change, just not an orthogonal one.
    """
    from orthoae.ortho import OrthoParams

    if isinstance(c, OrthoParams):
        c = c.c
    cs = [float(v) for v in c]
    if len(cs) != len(schedule):
        raise ValueError(f"c length {len(cs)} does not match schedule length {len(schedule)}")
    for k, m in enumerate(schedule.m):
        if m < 1:
            raise ValueError(
                f"orthogonalized coordinates need m >= 1 at every entry; entry {k} has m=0"
            )
    n = len(schedule)
    betas = [beta_from_c(theta, cs[k], m) for k, m in enumerate(schedule.m)]
    base = fisher_matrix(theta, betas, schedule)
    jac = np.zeros((n + 1, n + 1))
    jac[0, 0] = 1.0
    for k, m in enumerate(schedule.m):
        if cs[k] == 1.0:
            continue
        db_dtheta, db_dc = beta_partials(theta, cs[k], m)
        jac[k + 1, 0] = db_dtheta
        jac[k + 1, k + 1] = db_dc
    entries = jac.T @ base.entries @ jac
    return FisherMatrix(entries, "arrow")


def crlb_theta(matrix: FisherMatrix) -> float:
    """Variance lower bound (J^-1)_{1,1} for the angle, per experiment.

    Arrow-structured inputs use the Schur-complement closed form; dense
    inputs fall back to full inversion (the test oracle path).
    """
    entries = matrix.entries
    if matrix.structure == "dense":
        try:
            value = float(np.linalg.inv(entries)[0, 0])
        except np.linalg.LinAlgError as exc:
            raise NonIdentifiableError(f"matrix is singular: {exc}") from exc
        if value <= 0.0:
            raise NonIdentifiableError(f"(J^-1)_11 = {value} is not positive")
        return value
    j11 = float(entries[0, 0])
    schur = j11
    for k in range(1, matrix.dim):
        diag = float(entries[k, k])
        off = float(entries[0, k])
        if diag <= 0.0:
            if off == 0.0:
                continue
            raise NonIdentifiableError(
                f"nuisance entry {k} has zero information but couples to theta"
            )
        schur -= off * off / diag
    if schur <= 1e-12 * max(abs(j11), 1.0):
        raise NonIdentifiableError(f"Schur complement {schur} leaves theta unidentifiable")
    return 1.0 / schur


def classical_crlb(n_queries: int) -> float:
    """Variance bound 1/(4 n) of classical random sampling with n queries."""
    if n_queries < 1:
        raise ValueError(f"n_queries must be positive, got {n_queries}")
    return 1.0 / (_CLASSICAL_UNIT * n_queries)


def noiseless_crlb(schedule: Schedule, shots_per_k: int) -> float:
    """Variance bound of the undamped amplified model, Grover circuits only.

    Each entry contributes per-shot information 4 (2m+1)^2, independent of
    theta, giving 1 / (4 shots sum_k (2 m_k + 1)^2).
    """
    if shots_per_k < 1:
        raise ValueError(f"shots_per_k must be positive, got {shots_per_k}")
    total = sum((2 * m + 1) ** 2 for m in schedule.m)
    return 1.0 / (_CLASSICAL_UNIT * shots_per_k * total)


def query_count(schedule: Schedule, mode: str = "paper") -> int:
    """Total oracle queries of the schedule.

    "paper" counts amplified circuits only: sum_k n_shot (2 m_k + 1).
    "strict" adds the unamplified circuits at 2 m_k - 1 equivalent
    applications each: + sum_{m_k >= 1} n_shot' (2 m_k - 1).
    """
    if mode not in ("paper", "strict"):
        raise ValueError(f"mode must be 'paper' or 'strict', got {mode!r}")
    total = sum(schedule.n_shot * (2 * m + 1) for m in schedule.m)
    if mode == "strict":
        total += sum(schedule.n_shot_prime * (2 * m - 1) for m in schedule.m if m >= 1)
    return total
