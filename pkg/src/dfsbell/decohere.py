"""Collective rotation noise and which states survive it.

The noise model applies the same random SU(2) element to every qubit in
scope: either one draw for the whole register, or independent draws for the
two wings.  Singlet-sector states are exactly invariant under either scope,
so their fidelity with the noisy state is 1 for every draw, not just on
average.  Reference states outside the sector (a computational basis word, a
GHZ state) lose most of their fidelity, which calibrates the comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dfs_states
from .qcore import (DensityOperator, QuantumState, apply_collective,
                    basis_state, haar_su2, partial_trace)

IMMUNITY_ATOL = 1e-9

_SCOPES = ("global", "per-wing")


@dataclass(frozen=True)
class CollectiveChannel:
    """Random collective rotations, averaged over ``n_samples`` Haar draws.

    scope "global" rotates every qubit by one common element; "per-wing"
    draws independently for the first and second half of the register.
    """

    n_samples: int = 1000
    scope: str = "global"

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be positive")
        if self.scope not in _SCOPES:
            raise ValueError(f"scope must be one of {_SCOPES}")


def _collective_matrix(u, n: int) -> np.ndarray:
    out = np.array([[1.0 + 0.0j]])
    for _ in range(n):
        out = np.kron(out, u.matrix)
    return out


def _rotate_once(state, channel: CollectiveChannel, rng):
    """One noisy copy of a pure state or a density operator."""
    if isinstance(state, DensityOperator):
        if channel.scope != "global":
            raise ValueError("density operators support only the global scope")
        big = _collective_matrix(haar_su2(rng), state.n_qubits)
        return DensityOperator(big @ state.matrix @ big.conj().T)
    if channel.scope == "global":
        return apply_collective(state, haar_su2(rng))
    out = apply_collective(state, haar_su2(rng), wing="alice")
    return apply_collective(out, haar_su2(rng), wing="bob")


def apply_channel(state, channel: CollectiveChannel, seed=0) -> DensityOperator:
    """Sample average of the rotated state's density operator."""
    rng = np.random.default_rng(seed)
    if isinstance(state, DensityOperator):
        acc = np.zeros_like(state.matrix)
        for _ in range(channel.n_samples):
            acc += _rotate_once(state, channel, rng).matrix
    else:
        acc = np.zeros((state.amplitudes.size,) * 2, dtype=complex)
        for _ in range(channel.n_samples):
            amps = _rotate_once(state, channel, rng).amplitudes
            acc += np.outer(amps, amps.conj())
    return DensityOperator(acc / channel.n_samples)


def state_fidelity(a, b) -> float:
    """Fidelity between states or density operators (squared-overlap form).

    Eigenvalues below 1e-12 are treated as exact zeros in the mixed-mixed
    branch; the square root otherwise amplifies their noise past the
    immunity tolerance.
    """
    if isinstance(a, QuantumState) and isinstance(b, QuantumState):
        return min(1.0, float(abs(a.overlap(b)) ** 2))
    if isinstance(a, QuantumState):
        v = a.amplitudes
        return min(1.0, float(np.real(v.conj() @ b.matrix @ v)))
    if isinstance(b, QuantumState):
        return state_fidelity(b, a)
    # Uhlmann: (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2
    def _chop(w):
        return np.where(w < 1e-12, 0.0, w)

    w, u = np.linalg.eigh(a.matrix)
    root = (u * np.sqrt(_chop(w))) @ u.conj().T
    inner = root @ b.matrix @ root
    ev = np.linalg.eigvalsh(inner)
    return min(1.0, float(np.sum(np.sqrt(_chop(ev))) ** 2))


def fidelity_samples(state, channel: CollectiveChannel, seed=0) -> np.ndarray:
    """Per-draw fidelity between a state (pure or mixed) and its rotated copy."""
    rng = np.random.default_rng(seed)
    out = np.empty(channel.n_samples)
    for i in range(channel.n_samples):
        out[i] = state_fidelity(state, _rotate_once(state, channel, rng))
    return out


@dataclass(frozen=True)
class StateImmunity:
    name: str
    scope: str
    n_samples: int
    min_fidelity: float
    mean_fidelity: float
    immune: bool


@dataclass(frozen=True)
class ImmunityReport:
    entries: tuple

    def entry(self, name: str) -> StateImmunity:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def all_protected_immune(self) -> bool:
        return all(e.immune for e in self.entries if e.name.startswith("sector"))


def _ghz4() -> QuantumState:
    amps = np.zeros(16, dtype=complex)
    amps[0b0000] = amps[0b1111] = 1.0 / np.sqrt(2.0)
    return QuantumState(amps)


def immunity_report(n_samples: int = 1000, seed=0) -> ImmunityReport:
    """Fidelity statistics for the protected states and two references.

    The four sector basis states face the global channel; the two-wing state
    faces independent per-wing rotations, the stricter scope it must survive.
    A state counts as immune when the smallest sampled fidelity stays within
    IMMUNITY_ATOL of 1.  The references (a basis word and a GHZ state, mean
    fidelity 1/5 each under the global channel) show what failure looks like.
    """
    cases = [
        ("sector phi0", dfs_states.make_phi0(), "global"),
        ("sector phi1", dfs_states.make_phi1(), "global"),
        ("sector psi0", dfs_states.make_psi0(), "global"),
        ("sector psi1", dfs_states.make_psi1(), "global"),
        ("sector reduced density",
         partial_trace(dfs_states.make_eta(), keep=(1, 2, 3, 4)), "global"),
        ("sector two-wing eta", dfs_states.make_eta(), "per-wing"),
        ("reference basis word 0101", basis_state((0, 1, 0, 1)), "global"),
        ("reference GHZ", _ghz4(), "global"),
    ]
    entries = []
    for i, (name, state, scope) in enumerate(cases):
        channel = CollectiveChannel(n_samples=n_samples, scope=scope)
        fids = fidelity_samples(state, channel,
                                seed=np.random.SeedSequence((seed, i)))
        entries.append(StateImmunity(
            name=name, scope=scope, n_samples=n_samples,
            min_fidelity=float(fids.min()), mean_fidelity=float(fids.mean()),
            immune=bool(fids.min() > 1.0 - IMMUNITY_ATOL)))
    return ImmunityReport(entries=tuple(entries))
