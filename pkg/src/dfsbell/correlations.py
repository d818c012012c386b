"""Exact joint and conditional outcome probabilities on the two-wing state.

Alice holds qubits 1-4, Bob qubits 5-8.  Each wing measures a rank-2
observable (F or G, possibly conjugated by a collective rotation of that
wing); outcomes are -1, +1, or "null" for the 14-dimensional complement.
All probabilities here are computed analytically from amplitudes, never
sampled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dfs_states import Observable, make_eta, make_f, make_g
from .qcore import QuantumState, Unitary2, haar_su2

NULL = "null"
OUTCOMES = (-1, +1, NULL)

# Probability below which conditioning is treated as conditioning on a
# zero-probability event.
_ZERO_EVENT = 1e-12


class UndefinedConditionalError(ValueError):
    """Conditioning event has probability (numerically) zero."""


@dataclass(frozen=True)
class LocalRotation:
    """Collective rotation of one wing's observable: each eigenvector gets U^(x4)."""

    u: Unitary2
    wing: str

    def __post_init__(self):
        if self.wing not in ("alice", "bob"):
            raise ValueError(f"wing must be 'alice' or 'bob', got {self.wing!r}")


@dataclass(frozen=True)
class Setting:
    """One wing's measurement choice: an observable plus an optional rotation."""

    observable: Observable
    rotation: LocalRotation | None = None


def _wing_vectors(setting: Setting, wing: str):
    """Outcome -> 16-dim eigenvector array for one wing, rotation applied."""
    obs = setting.observable
    if setting.rotation is not None:
        if setting.rotation.wing != wing:
            raise ValueError(
                f"rotation is for wing {setting.rotation.wing!r}, used on {wing!r}"
            )
        obs = obs.rotated(setting.rotation.u)
    return {int(val): vec.amplitudes for val, vec in obs.eigenpairs}


def joint_distribution(state: QuantumState, a: Setting, b: Setting) -> dict:
    """All nine outcome-pair probabilities for settings (a on Alice, b on Bob)."""
    if state.n_qubits != 8:
        raise ValueError("joint_distribution expects an 8-qubit state")
    m = state.amplitudes.reshape(16, 16)
    va = _wing_vectors(a, "alice")
    vb = _wing_vectors(b, "bob")
    dist = {}
    # labelled x labelled blocks from amplitudes, null rows/columns from
    # marginals so the nine entries sum to 1 exactly.
    pa = {la: float(np.linalg.norm(v.conj() @ m) ** 2) for la, v in va.items()}
    pb = {lb: float(np.linalg.norm(m @ v.conj()) ** 2) for lb, v in vb.items()}
    for la, u in va.items():
        for lb, v in vb.items():
            dist[(la, lb)] = float(abs(u.conj() @ m @ v.conj()) ** 2)
    for la in va:
        dist[(la, NULL)] = max(0.0, pa[la] - sum(dist[(la, lb)] for lb in vb))
    for lb in vb:
        dist[(NULL, lb)] = max(0.0, pb[lb] - sum(dist[(la, lb)] for la in va))
    covered = sum(pa.values()) + sum(pb.values()) - sum(
        dist[(la, lb)] for la in va for lb in vb
    )
    dist[(NULL, NULL)] = max(0.0, 1.0 - covered)
    return dist


def joint_probability(state: QuantumState, a: Setting, b: Setting,
                      outcome_a, outcome_b) -> float:
    """Born probability of one outcome pair; outcomes are -1, +1 or NULL."""
    for o in (outcome_a, outcome_b):
        if o not in OUTCOMES:
            raise ValueError(f"unknown outcome {o!r}")
    return joint_distribution(state, a, b)[(outcome_a, outcome_b)]


def wing_marginal(state: QuantumState, setting: Setting, wing: str) -> dict:
    """Single-wing outcome distribution, other wing unmeasured."""
    m = state.amplitudes.reshape(16, 16)
    vecs = _wing_vectors(setting, wing)
    if wing == "alice":
        probs = {la: float(np.linalg.norm(v.conj() @ m) ** 2) for la, v in vecs.items()}
    else:
        probs = {lb: float(np.linalg.norm(m @ v.conj()) ** 2) for lb, v in vecs.items()}
    probs[NULL] = max(0.0, 1.0 - sum(probs.values()))
    return probs


def conditional_probability(state: QuantumState, target, given) -> float:
    """P(target | given) where target and given are (setting, outcome, wing) triples.

    The two triples must name different wings.  Conditioning on an event of
    probability below 1e-12 raises UndefinedConditionalError rather than
    returning 0/0.
    """
    t_setting, t_outcome, t_wing = target
    g_setting, g_outcome, g_wing = given
    if {t_wing, g_wing} != {"alice", "bob"}:
        raise ValueError("target and given must be on opposite wings")
    if t_wing == "alice":
        dist = joint_distribution(state, t_setting, g_setting)
        p_joint = dist[(t_outcome, g_outcome)]
        p_given = sum(dist[(o, g_outcome)] for o in OUTCOMES)
    else:
        dist = joint_distribution(state, g_setting, t_setting)
        p_joint = dist[(g_outcome, t_outcome)]
        p_given = sum(dist[(g_outcome, o)] for o in OUTCOMES)
    if p_given < _ZERO_EVENT:
        raise UndefinedConditionalError(
            f"conditioning event has probability {p_given:.3e}"
        )
    return p_joint / p_given


# The four correlation facts the whole construction rests on, with their
# closed-form values on the two-wing state.
EXPECTED_CORRELATIONS = {
    "joint_ff_plus_plus": 0.0,
    "cond_fa_given_gb": 1.0,
    "cond_fb_given_ga": 1.0,
    "joint_gg_plus_plus": 9.0 / 112.0,
}


@dataclass(frozen=True)
class CorrelationSuiteResult:
    """Identity-rotation values plus worst-case deviation over rotation samples."""

    identity_values: dict
    max_deviation: dict
    n_samples: int
    max_null_probability: float

    def max_identity_error(self) -> float:
        return max(
            abs(self.identity_values[k] - v) for k, v in EXPECTED_CORRELATIONS.items()
        )


def _four_quantities(state, rot_fa=None, rot_ga=None, rot_fb=None, rot_gb=None):
    f, g = make_f(), make_g()
    fa = Setting(f, rot_fa)
    ga = Setting(g, rot_ga)
    fb = Setting(f, rot_fb)
    gb = Setting(g, rot_gb)
    return {
        "joint_ff_plus_plus": joint_probability(state, fa, fb, +1, +1),
        "cond_fa_given_gb": conditional_probability(
            state, (fa, +1, "alice"), (gb, +1, "bob")
        ),
        "cond_fb_given_ga": conditional_probability(
            state, (fb, +1, "bob"), (ga, +1, "alice")
        ),
        "joint_gg_plus_plus": joint_probability(state, ga, gb, +1, +1),
    }


def verify_correlation_suite(n_rotation_samples: int = 100,
                             seed=0) -> CorrelationSuiteResult:
    """Recompute the four correlation quantities under random rotation tuples.

    Each sample draws four independent Haar rotations (one per wing per
    observable) and records the worst deviation from the closed-form values.
    Also tracks the largest null-outcome probability seen, which must stay
    at zero for spin-zero states.
    """
    state = make_eta()
    identity = _four_quantities(state)
    rng = np.random.default_rng(seed)
    max_dev = {k: 0.0 for k in EXPECTED_CORRELATIONS}
    max_null = max(
        wing_marginal(state, Setting(make_f()), "alice")[NULL],
        wing_marginal(state, Setting(make_g()), "bob")[NULL],
    )
    for _ in range(n_rotation_samples):
        rot = {
            "fa": LocalRotation(haar_su2(rng), "alice"),
            "ga": LocalRotation(haar_su2(rng), "alice"),
            "fb": LocalRotation(haar_su2(rng), "bob"),
            "gb": LocalRotation(haar_su2(rng), "bob"),
        }
        vals = _four_quantities(state, rot["fa"], rot["ga"], rot["fb"], rot["gb"])
        for k, expected in EXPECTED_CORRELATIONS.items():
            max_dev[k] = max(max_dev[k], abs(vals[k] - expected))
        max_null = max(
            max_null,
            wing_marginal(state, Setting(make_f(), rot["fa"]), "alice")[NULL],
        )
    return CorrelationSuiteResult(
        identity_values=identity,
        max_deviation=max_dev,
        n_samples=n_rotation_samples,
        max_null_probability=max_null,
    )
