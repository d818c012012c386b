"""Four-qubit singlet-sector states and the rank-2 observables built on them.

The total-spin-zero subspace of four qubits is two dimensional.  We use the
orthonormal basis

    |phi0> = (|0101> - |0110> - |1001> + |1010>) / 2
    |phi1> = (2|0011> - |0101> - |0110> - |1001> - |1010> + 2|1100>) / (2 sqrt 3)

i.e. |phi0> is the product of singlets on pairs (1,2) and (3,4).  Every state
in this span is invariant under U x U x U x U for U in SU(2), which is what
makes all constructions here immune to collective rotations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qcore import ATOL, QuantumState, Unitary2, apply_collective, tensor

_SQRT3 = math.sqrt(3.0)


class SubspaceError(ValueError):
    """Input state does not lie in the singlet-sector span; carries the residual."""

    def __init__(self, residual_norm: float):
        super().__init__(
            f"state lies outside span{{phi0, phi1}}: residual norm {residual_norm:.3e}"
        )
        self.residual_norm = residual_norm


def singlet() -> QuantumState:
    """Two-qubit singlet (|01> - |10>) / sqrt 2."""
    return QuantumState(np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0))


def make_phi0() -> QuantumState:
    """Singlet-pair basis state: singlet(1,2) x singlet(3,4)."""
    a = np.zeros(16)
    a[0b0101], a[0b0110], a[0b1001], a[0b1010] = 0.5, -0.5, -0.5, 0.5
    return QuantumState(a)


def make_phi1() -> QuantumState:
    """The state completing the spin-zero basis, orthogonal to |phi0>."""
    a = np.zeros(16)
    a[0b0011] = a[0b1100] = 1.0 / _SQRT3
    for idx in (0b0101, 0b0110, 0b1001, 0b1010):
        a[idx] = -0.5 / _SQRT3
    return QuantumState(a)


def make_psi0() -> QuantumState:
    """|phi0> with qubits 2 and 3 exchanged; equals (|phi0> + sqrt3 |phi1>)/2."""
    a = np.zeros(16)
    a[0b0011], a[0b0110], a[0b1001], a[0b1100] = 0.5, -0.5, -0.5, 0.5
    return QuantumState(a)


def make_psi1() -> QuantumState:
    """|phi1> with qubits 2 and 3 exchanged; equals (sqrt3 |phi0> - |phi1>)/2."""
    a = np.zeros(16)
    a[0b0101] = a[0b1010] = 1.0 / _SQRT3
    for idx in (0b0011, 0b0110, 0b1001, 0b1100):
        a[idx] = -0.5 / _SQRT3
    return QuantumState(a)


def make_eta() -> QuantumState:
    """Eight-qubit two-wing resource state (|phi0 phi0> + sqrt3 |phi0 phi1> + sqrt3 |phi1 phi0>)/sqrt 7.

    The |phi1 phi1> component is absent by construction; that single missing
    term is what forbids the (+1, +1) outcome when both wings measure F.
    """
    phi0, phi1 = make_phi0(), make_phi1()
    a = (
        np.kron(phi0.amplitudes, phi0.amplitudes)
        + _SQRT3 * np.kron(phi0.amplitudes, phi1.amplitudes)
        + _SQRT3 * np.kron(phi1.amplitudes, phi0.amplitudes)
    ) / math.sqrt(7.0)
    return QuantumState(a)


@dataclass(frozen=True)
class DfsVector:
    """A singlet-sector state given by its two coefficients in the (phi0, phi1) basis."""

    c0: complex
    c1: complex

    def __post_init__(self):
        nrm = math.hypot(abs(self.c0), abs(self.c1))
        if abs(nrm - 1.0) > ATOL:
            raise ValueError(f"coefficient norm {nrm} deviates from 1")

    @classmethod
    def from_angle(cls, omega: float) -> "DfsVector":
        return cls(math.cos(omega), math.sin(omega))


def dfs_embed(v: DfsVector) -> QuantumState:
    """c0 |phi0> + c1 |phi1> as a 16-dimensional vector."""
    a = v.c0 * make_phi0().amplitudes + v.c1 * make_phi1().amplitudes
    return QuantumState(a)


def dfs_project(s: QuantumState) -> DfsVector:
    """Coefficients of a 4-qubit state in the (phi0, phi1) basis.

    Raises SubspaceError when the component outside the span has norm
    >= 1e-8; the threshold is looser than the analytic tolerance so that
    states surviving repeated rotations still project cleanly.
    """
    if s.n_qubits != 4:
        raise ValueError("dfs_project expects a 4-qubit state")
    phi0, phi1 = make_phi0(), make_phi1()
    c0 = complex(phi0.amplitudes.conj() @ s.amplitudes)
    c1 = complex(phi1.amplitudes.conj() @ s.amplitudes)
    residual = s.amplitudes - c0 * phi0.amplitudes - c1 * phi1.amplitudes
    residual_norm = float(np.linalg.norm(residual))
    if residual_norm >= 1e-8:
        raise SubspaceError(residual_norm)
    return DfsVector(c0, c1)


@dataclass(frozen=True)
class Observable:
    """Hermitian observable given by its non-null eigenpairs.

    Only the listed eigenvectors produce labelled outcomes; the orthogonal
    complement is the explicit "null" outcome, kept so that "null never
    occurs" is a testable statement rather than an assumption.
    """

    eigenpairs: tuple
    label: str = "custom"

    def __post_init__(self):
        pairs = tuple((float(val), vec) for val, vec in self.eigenpairs)
        vecs = [vec.amplitudes for _, vec in pairs]
        for i, v in enumerate(vecs):
            for j, w in enumerate(vecs):
                want = 1.0 if i == j else 0.0
                if abs(v.conj() @ w - want) > ATOL:
                    raise ValueError("eigenvectors are not orthonormal")
        object.__setattr__(self, "eigenpairs", pairs)

    def eigenvalues(self) -> tuple:
        return tuple(val for val, _ in self.eigenpairs)

    def eigenvector(self, value: float) -> QuantumState:
        for val, vec in self.eigenpairs:
            if val == value:
                return vec
        raise KeyError(f"no eigenvalue {value} in observable {self.label}")

    def rotated(self, u: Unitary2) -> "Observable":
        """Same spectrum, eigenvectors conjugated by the collective rotation U^(x4)."""
        pairs = tuple(
            (val, apply_collective(vec, u, "all")) for val, vec in self.eigenpairs
        )
        return Observable(pairs, label=self.label)

    def to_matrix(self) -> np.ndarray:
        dim = self.eigenpairs[0][1].amplitudes.size
        m = np.zeros((dim, dim), dtype=complex)
        for val, vec in self.eigenpairs:
            m += val * np.outer(vec.amplitudes, vec.amplitudes.conj())
        return m


def make_f() -> Observable:
    """Observable distinguishing the (1,2)(3,4) singlet pairing: -1 on phi0, +1 on phi1."""
    return Observable(((-1.0, make_phi0()), (+1.0, make_phi1())), label="F")


def make_g() -> Observable:
    """Observable distinguishing the (1,3)(2,4) pairing: -1 on psi0, +1 on psi1."""
    return Observable(((-1.0, make_psi0()), (+1.0, make_psi1())), label="G")


def dfs_observable(alpha: float, label: str | None = None) -> Observable:
    """Rank-2 observable whose -1 eigenvector is cos(a)|phi0> + sin(a)|phi1>.

    alpha = 0 reproduces F up to an eigenvector sign; alpha = pi/3 reproduces
    G exactly, since |psi0> = cos(pi/3)|phi0> + sin(pi/3)|phi1>.
    """
    minus = DfsVector(math.cos(alpha), math.sin(alpha))
    plus = DfsVector(math.sin(alpha), -math.cos(alpha))
    return Observable(
        ((-1.0, dfs_embed(minus)), (+1.0, dfs_embed(plus))),
        label=label or f"dfs({alpha:.6f})",
    )
