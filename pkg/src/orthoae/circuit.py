"""Exact density-matrix oracle for the amplified/unamplified circuit pair.

Builds the state-preparation operator A on n+1 qubits (n index qubits plus
the objective qubit, kept as the last tensor factor), composes

    G = -A U0 A' Uf        R = -A U0 A'

with U0 the reflection about the all-zero state and Uf = I (x) sigma_z, and
evolves density matrices under a whole-register depolarizing channel
applied once per G or R application:

    rho -> (1 - lam) U rho U' + lam I / 2^(n+1)

This is the coarsest channel consistent with exponential amplitude decay
per application; it is a validation fixture, not a performance path, so
the register is capped at n <= 6 (128 x 128).
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_INDEX_QUBITS",
    "CircuitModel",
    "DensityState",
    "build_sum_circuit",
    "random_circuit",
    "evolve",
    "hit_probability",
    "verify_ancillary_identity",
    "grover_equivalence_residual",
    "ancillary_equivalence_residual",
]

MAX_INDEX_QUBITS = 6
_UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class DensityState:
    """Trace-one Hermitian positive-semidefinite matrix."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        object.__setattr__(self, "rho", rho)
        if abs(np.trace(rho).real - 1.0) > 1e-12 or abs(np.trace(rho).imag) > 1e-12:
            raise ValueError(f"trace must be 1, got {np.trace(rho)}")
        if np.abs(rho - rho.conj().T).max() > 1e-12:
            raise ValueError("state is not Hermitian")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            raise ValueError("state has a significantly negative eigenvalue")

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


@dataclass(frozen=True)
class CircuitModel:
    """State preparation A and the derived operators on n+1 qubits."""

    n: int
    op_a: np.ndarray
    op_g: np.ndarray
    op_r: np.ndarray
    op_uf: np.ndarray
    op_u0: np.ndarray
    theta_encoded: float

    @property
    def dim(self) -> int:
        return 2 ** (self.n + 1)


def _projector_one(n):
    """Projector onto outcome "1" of the last qubit."""
    return np.kron(np.eye(2 ** n), np.diag([0.0, 1.0])).astype(complex)


def _check_unitary(op, name):
    dim = op.shape[0]
    if np.abs(op @ op.conj().T - np.eye(dim)).max() > _UNITARY_TOL:
        raise ValueError(f"{name} is not unitary to {_UNITARY_TOL}")


def _assemble(n, op_a) -> CircuitModel:
    if not 1 <= n <= MAX_INDEX_QUBITS:
        raise ValueError(f"n must lie in [1, {MAX_INDEX_QUBITS}], got {n}")
    dim = 2 ** (n + 1)
    op_a = np.asarray(op_a, dtype=complex)
    if op_a.shape != (dim, dim):
        raise ValueError(f"A must be {dim}x{dim}, got {op_a.shape}")
    _check_unitary(op_a, "A")
    u0 = np.eye(dim, dtype=complex)
    u0[0, 0] = -1.0
    uf = np.kron(np.eye(2 ** n), np.diag([1.0, -1.0])).astype(complex)
    a_dag = op_a.conj().T
    op_r = -op_a @ u0 @ a_dag
    op_g = op_r @ uf
    psi = op_a[:, 0]
    amp = float(np.linalg.norm(_projector_one(n) @ psi))
    theta = math.asin(min(max(amp, 0.0), 1.0))
    return CircuitModel(n, op_a, op_g, op_r, uf, u0, theta)


def build_sum_circuit(n: int, f_values, r_values) -> CircuitModel:
    """Preparation A = T (P (x) I) encoding the weighted sum of f under r.

    P loads the distribution sqrt(r_j) onto the index register; T rotates
    the objective qubit to sqrt(f_j)|1> + sqrt(1-f_j)|0> controlled on j.
    The encoded angle satisfies sin^2(theta) = sum_j f(j) r(j).
    """
    size = 2 ** n
    f = np.asarray(f_values, dtype=float)
    r = np.asarray(r_values, dtype=float)
    if f.shape != (size,) or r.shape != (size,):
        raise ValueError(f"f and r must have length {size}")
    if f.min() < 0.0 or f.max() > 1.0:
        raise ValueError("f values must lie in [0, 1]")
    if r.min() < 0.0 or abs(r.sum() - 1.0) > 1e-12:
        raise ValueError("r must be a probability vector")
    amps = np.sqrt(r)
    # Householder reflection mapping e_0 to the amplitude vector.
    u = np.zeros(size)
    u[0] = 1.0
    u = u - amps
    norm_sq = float(u @ u)
    if norm_sq < 1e-28:
        op_p = np.eye(size)
    else:
        op_p = np.eye(size) - 2.0 * np.outer(u, u) / norm_sq
    blocks = np.zeros((size, 2, 2))
    phis = np.arcsin(np.sqrt(f))
    blocks[:, 0, 0] = np.cos(phis)
    blocks[:, 0, 1] = -np.sin(phis)
    blocks[:, 1, 0] = np.sin(phis)
    blocks[:, 1, 1] = np.cos(phis)
    op_t = np.zeros((2 * size, 2 * size))
    for j in range(size):
        op_t[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = blocks[j]
    op_a = op_t @ np.kron(op_p, np.eye(2))
    return _assemble(n, op_a)


def random_circuit(n: int, seed: int) -> CircuitModel:
    """Preparation drawn Haar-like from the unitary group (QR of a Ginibre matrix)."""
    dim = 2 ** (n + 1)
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return _assemble(n, q)


def evolve(circuit: CircuitModel, sequence, lam: float) -> DensityState:
    """Apply tagged operators to A|0> under per-application depolarizing noise.

    Tags "G" and "R" apply the channel with strength lam; "Uf" is applied
    noiselessly (it serves as an algebraic probe, not a noisy operation).
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lam must lie in [0, 1], got {lam}")
    ops = {"G": circuit.op_g, "R": circuit.op_r, "Uf": circuit.op_uf}
    psi = circuit.op_a[:, 0]
    rho = np.outer(psi, psi.conj())
    mixed = np.eye(circuit.dim, dtype=complex) / circuit.dim
    for tag in sequence:
        if tag not in ops:
            raise ValueError(f"unknown operator tag {tag!r}")
        op = ops[tag]
        rho = op @ rho @ op.conj().T
        if tag != "Uf":
            rho = (1.0 - lam) * rho + lam * mixed
    return DensityState(rho)


def hit_probability(state) -> float:
    """Probability of measuring "1" on the last qubit."""
    rho = state.rho if isinstance(state, DensityState) else np.asarray(state, dtype=complex)
    size = rho.shape[0] // 2
    p = float(np.trace(rho @ _projector_one(int(math.log2(size)))).real)
    return min(max(p, 0.0), 1.0)


def verify_ancillary_identity(circuit: CircuitModel, m: int) -> float:
    """Operator-norm residual of R G^(m-1) = Uf G^(m-2), m >= 2.

    The identity follows from R Uf = G and U0^2 = I; a nonzero residual
    flags a broken operator construction.
    """
    if int(m) != m or m < 2:
        raise ValueError(f"m must be an integer >= 2, got {m}")
    lhs = circuit.op_r @ np.linalg.matrix_power(circuit.op_g, m - 1)
    rhs = circuit.op_uf @ np.linalg.matrix_power(circuit.op_g, m - 2)
    return float(np.linalg.norm(lhs - rhs, 2))


def grover_equivalence_residual(circuit: CircuitModel, lam: float, m_max: int) -> float:
    """Max |simulated - analytic| hit probability over G^m, m = 0..m_max.

    The analytic side is the closed form with damping (1 - lam)^m at the
    circuit's own encoded angle.
    """
    from orthoae.model import grover_prob

    worst = 0.0
    theta = circuit.theta_encoded
    psi = circuit.op_a[:, 0]
    rho = np.outer(psi, psi.conj())
    mixed = np.eye(circuit.dim, dtype=complex) / circuit.dim
    worst = abs(hit_probability(rho) - grover_prob(theta, 1.0, 0))
    for m in range(1, m_max + 1):
        rho = circuit.op_g @ rho @ circuit.op_g.conj().T
        rho = (1.0 - lam) * rho + lam * mixed
        analytic = grover_prob(theta, (1.0 - lam) ** m, m)
        worst = max(worst, abs(hit_probability(rho) - analytic))
    return worst


def ancillary_equivalence_residual(circuit: CircuitModel, lam: float, m_max: int) -> float:
    """Max |simulated - analytic| hit probability over R G^(m-1), m = 1..m_max."""
    from orthoae.model import ancillary_prob

    worst = 0.0
    theta = circuit.theta_encoded
    for m in range(1, m_max + 1):
        state = evolve(circuit, ["G"] * (m - 1) + ["R"], lam)
        analytic = ancillary_prob(theta, (1.0 - lam) ** m, m)
        worst = max(worst, abs(hit_probability(state) - analytic))
    return worst
