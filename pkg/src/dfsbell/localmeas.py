"""Individual-qubit realization of the F and G measurements.

Instead of projecting onto 16-dimensional eigenvectors, each wing measures
every qubit separately: two qubits along a common direction and the other two
along a perpendicular one.  The 16-outcome word then classifies the wing's
state.  For the F pairing, qubits (1,2) share the z axis and (3,4) the x
axis; a word means outcome -1 (the singlet-pair state) exactly when bits 1,2
differ and bits 3,4 differ.  The G protocol is the same table with qubits 2
and 3 exchanging roles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dfs_states import make_eta
from .qcore import QuantumState, Unitary2, haar_su2

# Word probabilities analytically equal to zero come out of floating-point
# amplitude algebra at ~1e-32; clipping below this threshold keeps
# impossible events impossible in sampled statistics.
_PROB_CLIP = 1e-20

_SETTING_PAIRS = (("F", "F"), ("F", "G"), ("G", "F"), ("G", "G"))


@dataclass(frozen=True)
class ProductBasisSpec:
    """Per-qubit measurement directions as x-z plane angles (z axis at 0, x at pi/4)."""

    thetas: tuple
    z_pair: tuple
    x_pair: tuple

    def __post_init__(self):
        if len(self.thetas) != 4:
            raise ValueError("exactly four qubit angles required")


PROTOCOLS = {
    "F": ProductBasisSpec(thetas=(0.0, 0.0, math.pi / 4, math.pi / 4),
                          z_pair=(1, 2), x_pair=(3, 4)),
    "G": ProductBasisSpec(thetas=(0.0, math.pi / 4, 0.0, math.pi / 4),
                          z_pair=(1, 3), x_pair=(2, 4)),
}


def _spec(protocol: str) -> ProductBasisSpec:
    try:
        return PROTOCOLS[protocol]
    except KeyError:
        raise ValueError(f"unknown protocol {protocol!r}") from None


def _axis_rows(theta: float) -> np.ndarray:
    """Rows are the two basis bras for one qubit measured at angle theta."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]])


def _wing_matrix(protocol: str, rotation: Unitary2 | None) -> np.ndarray:
    """(16, 16) matrix whose row w is the bra of outcome word w."""
    spec = _spec(protocol)
    out = np.array([[1.0 + 0j]])
    for theta in spec.thetas:
        rows = _axis_rows(theta).astype(complex)
        if rotation is not None:
            rows = rows @ rotation.matrix.conj().T
        out = np.kron(out, rows)
    return out


def classify_outcome(word, protocol: str) -> int:
    """Map a 4-bit outcome word to -1 (singlet-pair class) or +1."""
    spec = _spec(protocol)
    bits = tuple(int(b) for b in word)
    if len(bits) != 4 or any(b not in (0, 1) for b in bits):
        raise ValueError(f"word must be four bits, got {word!r}")
    i, j = spec.z_pair
    k, l = spec.x_pair
    if bits[i - 1] != bits[j - 1] and bits[k - 1] != bits[l - 1]:
        return -1
    return +1


def _class_signs(protocol: str) -> np.ndarray:
    """Vectorized classify_outcome over word indices 0..15."""
    return np.array([
        classify_outcome(((w >> 3) & 1, (w >> 2) & 1, (w >> 1) & 1, w & 1), protocol)
        for w in range(16)
    ])


def wing_distribution(state: QuantumState, protocol: str,
                      rotation: Unitary2 | None = None) -> np.ndarray:
    """Exact 16-word Born distribution for one wing's product measurement."""
    if state.n_qubits != 4:
        raise ValueError("wing_distribution expects a 4-qubit state")
    amps = _wing_matrix(protocol, rotation) @ state.amplitudes
    return np.abs(amps) ** 2


def wing_outcome_distribution(state: QuantumState, protocol: str,
                              rotation: Unitary2 | None = None) -> dict:
    """Exact induced distribution over {-1, +1} after classification."""
    probs = wing_distribution(state, protocol, rotation)
    signs = _class_signs(protocol)
    return {-1: float(probs[signs == -1].sum()), +1: float(probs[signs == +1].sum())}


def sample_wing(state: QuantumState, protocol: str,
                rotation: Unitary2 | None, rng: np.random.Generator) -> tuple:
    """Draw one outcome word from the (optionally rotated) product basis."""
    probs = wing_distribution(state, protocol, rotation)
    probs = np.where(probs < _PROB_CLIP, 0.0, probs)
    probs /= probs.sum()
    w = int(rng.choice(16, p=probs))
    return ((w >> 3) & 1, (w >> 2) & 1, (w >> 1) & 1, w & 1)


@dataclass(frozen=True)
class ExperimentRecord:
    """Tallies from a simulated two-wing run; counts[(sa, sb)][(oa, ob)]."""

    n_rounds: int
    settings_policy: str
    rotations_policy: str
    seed: int
    counts: dict

    def setting_total(self, pair) -> int:
        return sum(self.counts[tuple(pair)].values())

    def frequency(self, pair, outcome_pair) -> float:
        total = self.setting_total(pair)
        if total == 0:
            return float("nan")
        return self.counts[tuple(pair)][tuple(outcome_pair)] / total

    def to_dict(self) -> dict:
        return {
            "n_rounds": self.n_rounds,
            "settings_policy": self.settings_policy,
            "rotations_policy": self.rotations_policy,
            "seed": self.seed,
            "counts": {
                f"{sa},{sb}": {
                    f"{oa:+d},{ob:+d}": self.counts[(sa, sb)][(oa, ob)]
                    for oa in (-1, +1) for ob in (-1, +1)
                }
                for sa, sb in _SETTING_PAIRS
            },
        }


def _joint_word_probs(rot_a: Unitary2 | None, rot_b: Unitary2 | None,
                      amp16: np.ndarray, proto_a: str, proto_b: str) -> np.ndarray:
    ba = _wing_matrix(proto_a, rot_a)
    bb = _wing_matrix(proto_b, rot_b)
    amp = ba @ amp16 @ bb.T
    p = np.abs(amp.ravel()) ** 2
    p = np.where(p < _PROB_CLIP, 0.0, p)
    return p / p.sum()


def _sample_fresh_rotations(amp16, proto_a, proto_b, n, rng, chunk=2048):
    """Word-pair samples with an independent Haar rotation per wing per round."""
    spec_rows = {
        p: [_axis_rows(t).astype(complex) for t in _spec(p).thetas]
        for p in (proto_a, proto_b)
    }

    def batched_wing(proto, us):
        out = None
        for rows in spec_rows[proto]:
            r = np.einsum("ab,ncb->nac", rows, us.conj())
            out = r if out is None else np.einsum(
                "nab,ncd->nacbd", out, r
            ).reshape(len(us), out.shape[1] * 2, out.shape[2] * 2)
        return out

    draws = np.empty(n, dtype=np.int64)
    done = 0
    while done < n:
        m = min(chunk, n - done)
        ua = np.stack([haar_su2(rng).matrix for _ in range(m)])
        ub = np.stack([haar_su2(rng).matrix for _ in range(m)])
        ba = batched_wing(proto_a, ua)
        bb = batched_wing(proto_b, ub)
        amp = np.einsum("nwi,ij,nvj->nwv", ba, amp16, bb)
        p = np.abs(amp.reshape(m, 256)) ** 2
        p = np.where(p < _PROB_CLIP, 0.0, p)
        p /= p.sum(axis=1, keepdims=True)
        r = rng.random(m)
        draws[done:done + m] = (np.cumsum(p, axis=1) < r[:, None]).sum(axis=1)
        done += m
    return draws


def run_experiment(n_rounds: int, settings_policy="random",
                   rotations_policy: str = "identity", seed: int = 0) -> ExperimentRecord:
    """Simulate n_rounds of the two-wing experiment on the shared state.

    Parameters
    ----------
    n_rounds : int
        Number of prepared copies; must be >= 1.
    settings_policy : "random" or a pair like ("G", "G")
        Either each wing picks F or G uniformly at random, or both settings
        are fixed for every round.
    rotations_policy : "identity" or "fresh"
        With "fresh", each wing's product basis gets an independent
        Haar-random common rotation every round; the tallied statistics must
        not change, which is the alignment-free claim.
    seed : int
        Root seed for settings, rotations, and outcome draws.

    Returns
    -------
    ExperimentRecord
        Outcome-pair counts per setting pair after classification.
    """
    if n_rounds < 1:
        raise ValueError("n_rounds must be >= 1")
    if rotations_policy not in ("identity", "fresh"):
        raise ValueError(f"unknown rotations_policy {rotations_policy!r}")
    rng = np.random.default_rng(seed)
    amp16 = make_eta().amplitudes.reshape(16, 16)

    if settings_policy == "random":
        sa = rng.integers(0, 2, size=n_rounds)
        sb = rng.integers(0, 2, size=n_rounds)
        policy_name = "random"
    else:
        pa, pb = settings_policy
        if pa not in ("F", "G") or pb not in ("F", "G"):
            raise ValueError(f"bad fixed settings {settings_policy!r}")
        sa = np.full(n_rounds, 0 if pa == "F" else 1)
        sb = np.full(n_rounds, 0 if pb == "F" else 1)
        policy_name = f"fixed:{pa},{pb}"

    signs = {p: _class_signs(p) for p in ("F", "G")}
    counts = {pair: {(oa, ob): 0 for oa in (-1, 1) for ob in (-1, 1)}
              for pair in _SETTING_PAIRS}
    for pa_i, pa in enumerate(("F", "G")):
        for pb_i, pb in enumerate(("F", "G")):
            n_pair = int(np.sum((sa == pa_i) & (sb == pb_i)))
            if n_pair == 0:
                continue
            if rotations_policy == "identity":
                p = _joint_word_probs(None, None, amp16, pa, pb)
                draws = rng.choice(256, size=n_pair, p=p)
            else:
                draws = _sample_fresh_rotations(amp16, pa, pb, n_pair, rng)
            fa = signs[pa][draws >> 4]
            fb = signs[pb][draws & 15]
            cell = 2 * (fa > 0) + (fb > 0)
            binned = np.bincount(cell, minlength=4)
            for oa_i, oa in enumerate((-1, 1)):
                for ob_i, ob in enumerate((-1, 1)):
                    counts[(pa, pb)][(oa, ob)] += int(binned[2 * oa_i + ob_i])
    return ExperimentRecord(
        n_rounds=n_rounds,
        settings_policy=policy_name,
        rotations_policy=rotations_policy,
        seed=seed,
        counts=counts,
    )
