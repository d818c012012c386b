"""Dense state-vector primitives for few-qubit simulation.

Everything here is a pure function on small immutable values.  States are
dense complex vectors of dimension at most 2^8 = 256; qubit 1 is the most
significant bit of the basis index, so ``|q1 q2 q3 q4>`` reads left to right.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Default tolerance for analytic identities.  The constructions in this
# package use closed-form coefficients, so deviations beyond this indicate
# a real bug rather than accumulated rounding.
ATOL = 1e-10

MAX_QUBITS = 8


class SizeError(ValueError):
    """Raised when an operation would exceed the supported qubit count."""


def _as_amplitudes(amplitudes) -> np.ndarray:
    a = np.asarray(amplitudes, dtype=complex)
    if a.ndim != 1:
        raise ValueError(f"amplitudes must be a vector, got shape {a.shape}")
    n = a.size.bit_length() - 1
    if a.size != 2**n:
        raise ValueError(f"length {a.size} is not a power of two")
    if n < 1 or n > MAX_QUBITS:
        raise SizeError(f"supported qubit counts are 1..{MAX_QUBITS}, got {n}")
    return a


@dataclass(frozen=True)
class QuantumState:
    """Unit vector over n qubits, qubit 1 = most significant index bit."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = _as_amplitudes(self.amplitudes)
        nrm = np.linalg.norm(a)
        if abs(nrm - 1.0) > ATOL:
            raise ValueError(f"state norm {nrm} deviates from 1 by more than {ATOL}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    def density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "QuantumState") -> complex:
        return complex(self.amplitudes.conj() @ other.amplitudes)


@dataclass(frozen=True)
class Unitary2:
    """A 2x2 unitary, the elementary collective rotation."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got {m.shape}")
        if np.linalg.norm(m.conj().T @ m - np.eye(2)) > ATOL:
            raise ValueError("matrix is not unitary within 1e-10")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "Unitary2":
        return cls(np.eye(2))


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, unit-trace, positive semidefinite operator on n qubits."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got {m.shape}")
        n = m.shape[0].bit_length() - 1
        if m.shape[0] != 2**n or n < 1 or n > MAX_QUBITS:
            raise SizeError(f"dimension {m.shape[0]} is not 2^n with n in 1..{MAX_QUBITS}")
        if np.linalg.norm(m - m.conj().T) > ATOL:
            raise ValueError("matrix is not Hermitian within 1e-10")
        if abs(np.trace(m).real - 1.0) > ATOL:
            raise ValueError(f"trace {np.trace(m)} deviates from 1")
        if np.linalg.eigvalsh(m).min() < -ATOL:
            raise ValueError("matrix has an eigenvalue below -1e-10")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_qubits(self) -> int:
        return self.matrix.shape[0].bit_length() - 1


def basis_state(bits) -> QuantumState:
    """Computational basis state from a bit string like "0101" or a bit sequence."""
    bits = [int(b) for b in bits]
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")
    amplitudes = np.zeros(2 ** len(bits), dtype=complex)
    index = 0
    for b in bits:
        index = (index << 1) | b
    amplitudes[index] = 1.0
    return QuantumState(amplitudes)


def tensor(a: QuantumState, b: QuantumState) -> QuantumState:
    """Kronecker product; a's qubits become the most significant ones."""
    if a.n_qubits + b.n_qubits > MAX_QUBITS:
        raise SizeError(
            f"tensor of {a.n_qubits}+{b.n_qubits} qubits exceeds {MAX_QUBITS}"
        )
    return QuantumState(np.kron(a.amplitudes, b.amplitudes))


def permute_qubits(s: QuantumState, perm) -> QuantumState:
    """Reorder qubits: output qubit k carries input qubit perm[k-1] (1-based).

    ``perm`` must be a bijection of {1..n}; a transposition such as
    (1, 3, 2, 4) swaps qubits 2 and 3.
    """
    n = s.n_qubits
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"perm {perm} is not a bijection of 1..{n}")
    axes = [p - 1 for p in perm]
    reshaped = s.amplitudes.reshape((2,) * n).transpose(axes)
    return QuantumState(reshaped.reshape(-1))


def _apply_one_qubit(amplitudes: np.ndarray, u: np.ndarray, qubit: int, n: int) -> np.ndarray:
    t = amplitudes.reshape((2,) * n)
    t = np.moveaxis(t, qubit - 1, 0)
    t = np.tensordot(u, t, axes=([1], [0]))
    t = np.moveaxis(t, 0, qubit - 1)
    return t.reshape(-1)


def apply_collective(s: QuantumState, u: Unitary2, wing: str = "all") -> QuantumState:
    """Apply the same single-qubit unitary to every qubit of the chosen wing.

    ``wing`` is one of "all", "alice" (qubits 1-4), "bob" (qubits 5-8); the
    named wings are only defined for 8-qubit states.
    """
    n = s.n_qubits
    if wing == "all":
        qubits = range(1, n + 1)
    elif wing in ("alice", "bob"):
        if n != 8:
            raise ValueError(f"wing '{wing}' requires an 8-qubit state, got {n}")
        qubits = range(1, 5) if wing == "alice" else range(5, 9)
    else:
        raise ValueError(f"unknown wing {wing!r}")
    amplitudes = s.amplitudes
    for q in qubits:
        amplitudes = _apply_one_qubit(amplitudes, u.matrix, q, n)
    return QuantumState(amplitudes)


def haar_su2(rng: np.random.Generator) -> Unitary2:
    """Haar-random element of SU(2).

    Parameters
    ----------
    rng : numpy.random.Generator
        Seeded stream; the draw consumes exactly four normal variates.

    Notes
    -----
    Uses the quaternion parametrization: a point (a, b, c, d) drawn uniformly
    on the 3-sphere (four independent standard normals, normalized) maps to

        [[a + i b,  c + i d],
         [-c + i d, a - i b]],

    which has unit determinant a^2 + b^2 + c^2 + d^2 = 1.  Uniformity on S^3
    is exactly the Haar measure of SU(2).
    """
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    a, b, c, d = q
    return Unitary2(np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]]))


def partial_trace(state_or_rho, keep) -> DensityOperator:
    """Trace out all qubits not in ``keep`` (1-based labels, ascending output order)."""
    if isinstance(state_or_rho, QuantumState):
        rho = np.outer(state_or_rho.amplitudes, state_or_rho.amplitudes.conj())
        n = state_or_rho.n_qubits
    elif isinstance(state_or_rho, DensityOperator):
        rho = state_or_rho.matrix
        n = state_or_rho.n_qubits
    else:
        raise TypeError("expected QuantumState or DensityOperator")
    keep = sorted(int(k) for k in keep)
    if not keep:
        raise ValueError("keep set must be nonempty")
    if keep[0] < 1 or keep[-1] > n or len(set(keep)) != len(keep):
        raise ValueError(f"keep {keep} is not a subset of 1..{n}")
    t = rho.reshape((2,) * (2 * n))
    # contract row and column axes of every traced-out qubit
    for q in reversed(range(1, n + 1)):
        if q in keep:
            continue
        m = t.ndim // 2
        t = np.trace(t, axis1=q - 1, axis2=m + q - 1)
    return DensityOperator(t.reshape(2 ** len(keep), 2 ** len(keep)))


def measure_projective(s: QuantumState, projectors) -> np.ndarray:
    """Born-rule outcome distribution for a list of orthogonal projectors.

    Returns an array of length ``len(projectors) + 1``; the last entry is the
    probability of the residual "null" outcome (complement of the projector
    sum).  Projectors must be pairwise orthogonal with sum at most identity.
    """
    mats = [np.asarray(p, dtype=complex) for p in projectors]
    dim = s.amplitudes.size
    total = np.zeros((dim, dim), dtype=complex)
    for i, p in enumerate(mats):
        if p.shape != (dim, dim):
            raise ValueError(f"projector {i} has shape {p.shape}, expected {(dim, dim)}")
        for q in mats[i + 1:]:
            if np.abs(p @ q).max() > ATOL:
                raise ValueError("projectors are not pairwise orthogonal")
        total += p
    if np.linalg.eigvalsh(total).max() > 1.0 + ATOL:
        raise ValueError("projector sum exceeds identity")
    probs = np.array([np.real(s.amplitudes.conj() @ p @ s.amplitudes) for p in mats])
    out = np.append(probs, max(0.0, 1.0 - probs.sum()))
    return out
