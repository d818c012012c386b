"""Which singlet-sector state pairs can fixed product measurements tell apart.

A pair is parametrized by omega: |psi> = cos(w)|phi0> + sin(w)|phi1> together
with its orthogonal complement.  Each qubit k is measured along an x-z plane
direction theta_k (basis |0_k> = cos t|0> + sin t|1>, |1_k> = sin t|0> -
cos t|1>).  The pair is reliably distinguishable iff the two states have
disjoint supports over the 16 product-basis words.

The restriction to x-z plane axes is an assumption recorded here, not a
proven reduction.  Fixing theta_a = 0 in the scans, however, loses nothing:
rotating all four axes by a common angle is a collective SU(2) rotation,
which leaves every singlet-sector state exactly invariant, so the component
table depends only on the angle differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .dfs_states import make_phi0, make_phi1

SUPPORT_TOL = 1e-8

_DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class DistinguishInstance:
    """One candidate: pair angle omega plus the four measurement angles."""

    omega: float
    thetas: tuple

    def __post_init__(self):
        if len(self.thetas) != 4:
            raise ValueError("exactly four measurement angles required")
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))


def _axis_rows(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]])


def _product_components(state4: np.ndarray, thetas) -> np.ndarray:
    """Components of a 4-qubit vector in the product basis with the given angles."""
    t = state4.reshape(2, 2, 2, 2)
    ms = [_axis_rows(th) for th in thetas]
    return np.einsum("ai,bj,ck,dl,ijkl->abcd", *ms, t).reshape(16)


def pair_states(omega: float):
    """Amplitude vectors of |psi> and its orthogonal complement |psi_perp>."""
    phi0 = make_phi0().amplitudes.real
    phi1 = make_phi1().amplitudes.real
    c, s = math.cos(omega), math.sin(omega)
    return c * phi0 + s * phi1, s * phi0 - c * phi1


def component_table(inst: DistinguishInstance) -> np.ndarray:
    """(16, 2) array: column 0 components of |psi>, column 1 of |psi_perp>."""
    psi, perp = pair_states(inst.omega)
    return np.stack([
        _product_components(psi, inst.thetas),
        _product_components(perp, inst.thetas),
    ], axis=1)


def support_overlap(inst: DistinguishInstance) -> float:
    """max over basis words of min(|psi component|, |perp component|).

    Zero (below SUPPORT_TOL) means disjoint supports: every word identifies
    at most one of the two states.
    """
    table = np.abs(component_table(inst))
    return float(np.min(table, axis=1).max())


def is_distinguishing(inst: DistinguishInstance, tol: float = SUPPORT_TOL) -> bool:
    """True iff no basis word carries both states above the support tolerance."""
    return support_overlap(inst) <= tol


def omega_from_thetas(theta_a: float, theta_b: float,
                      theta_c: float, theta_d: float):
    """cot(omega) required to zero the first (and last) component, or None.

    Returns None in the degenerate cases theta_a = theta_b or theta_c =
    theta_d (mod pi), where the all-zeros word has no component for any
    omega and the condition is empty.
    """
    sab = math.sin(theta_a - theta_b)
    scd = math.sin(theta_c - theta_d)
    if abs(sab) < _DEGENERATE_TOL or abs(scd) < _DEGENERATE_TOL:
        return None
    num = math.cos(theta_a + theta_b - theta_c - theta_d) \
        - math.cos(theta_a - theta_b) * math.cos(theta_c - theta_d)
    return num / (math.sqrt(3.0) * sab * scd)


def _front_contractions(resolution: int):
    """Shared einsum prefix of the grid scans: contract qubits a, b, c.

    Returns the theta grid and, per basis state, an array indexed by
    (theta_b, theta_c, word bits a b c, qubit-d state index).
    """
    thetas = np.arange(resolution) * (math.pi / resolution)
    mb = np.stack([_axis_rows(t) for t in thetas])
    ma = _axis_rows(0.0)

    def front(state4):
        x = np.einsum("ai,ijkl->ajkl", ma, state4.reshape(2, 2, 2, 2))
        x = np.einsum("rbj,ajkl->rabkl", mb, x)
        return np.einsum("sck,rabkl->rsabcl", mb, x)

    phi0 = make_phi0().amplitudes.real
    phi1 = make_phi1().amplitudes.real
    return thetas, mb, front(phi0), front(phi1)


def _refine(omega0, thetas0):
    """Polish a candidate by minimizing the summed squared support products."""
    psi_parts = (make_phi0().amplitudes.real, make_phi1().amplitudes.real)

    def objective(p):
        w, tb, tc, td = p
        a = _product_components(psi_parts[0], (0.0, tb, tc, td))
        b = _product_components(psi_parts[1], (0.0, tb, tc, td))
        c = math.cos(w) * a + math.sin(w) * b
        cp = math.sin(w) * a - math.cos(w) * b
        return float(np.sum((c * cp) ** 2))

    res = minimize(objective, [omega0, *thetas0], method="Nelder-Mead",
                   options=dict(xatol=1e-12, fatol=1e-26, maxiter=5000))
    return res.x, res.fun


def scan_distinguishable_omegas(resolution: int = 200, refine_tol: float = 1e-3,
                                omega_range=None) -> list:
    """All omega (mod pi) admitting a distinguishing product basis.

    Grid search over (theta_b, theta_c, theta_d) with theta_a = 0 (exact
    reduction, see module docstring), ``resolution`` points per angle on
    [0, pi).  For each tuple the best omega is closed-form: a word splits the
    pair iff sin(2w) (A^2 - B^2) = cos(2w) 2AB where (A, B) are the word's
    components of (phi0, phi1), so all words must agree on 2w mod pi; the
    smallest eigenvalue of the 2x2 moment matrix of the vectors
    (A^2 - B^2, 2AB) measures the disagreement and its eigenvector gives the
    candidate omega.  Survivors are polished by local minimization, validated
    against the disjoint-support test, and clustered within refine_tol.

    Since a pair and its omega + pi/2 partner are the same two states with
    roles swapped, every validated omega contributes both representatives.

    Parameters
    ----------
    resolution : int
        Grid points per angle; at least 100.
    refine_tol : float
        Cluster width for merging validated omega values.
    omega_range : (lo, hi) or None
        If given, keep only omegas inside the closed interval.
    """
    if resolution < 100:
        raise ValueError("resolution must be at least 100 points per angle")
    thetas, mb, f0, f1 = _front_contractions(resolution)
    r = resolution
    bins = {}
    chunk = max(1, min(16, r))
    for lo in range(0, r, chunk):
        md = mb[lo:lo + chunk]
        a = np.einsum("rsabcl,tdl->rstabcd", f0, md).reshape(r, r, -1, 16)
        b = np.einsum("rsabcl,tdl->rstabcd", f1, md).reshape(r, r, -1, 16)
        x = a * a - b * b
        y = 2.0 * a * b
        sxx = np.einsum("rstj,rstj->rst", x, x)
        sxy = np.einsum("rstj,rstj->rst", x, y)
        syy = np.einsum("rstj,rstj->rst", y, y)
        disc = np.sqrt(np.maximum((sxx - syy) ** 2 + 4.0 * sxy ** 2, 0.0))
        lam = 0.5 * (sxx + syy - disc)
        # eigenvector (u0, u1) = (sin 2w, -cos 2w) for the small eigenvalue
        cand = np.argwhere(lam < 1e-5)
        for i, j, k in cand:
            u0, u1 = sxy[i, j, k], lam[i, j, k] - sxx[i, j, k]
            if u0 == 0.0 and u1 == 0.0:
                u0 = 1.0
            w = 0.5 * (math.atan2(u0, -u1) % math.pi)
            key = round(w / 0.02)
            val = (lam[i, j, k], w, thetas[i], thetas[j], thetas[lo + k])
            if key not in bins or val[0] < bins[key][0]:
                bins[key] = val
    validated = []
    for _, (_, w0, tb, tc, td) in sorted(bins.items()):
        p, fun = _refine(w0, (tb, tc, td))
        if fun > 1e-20:
            continue
        inst = DistinguishInstance(p[0], (0.0, p[1], p[2], p[3]))
        if is_distinguishing(inst):
            for rep in (p[0], p[0] + math.pi / 2):
                rep %= math.pi
                if math.pi - rep < refine_tol:
                    rep = 0.0
                validated.append(rep)
    validated.sort()
    merged = []
    for w in validated:
        if merged and w - merged[-1][-1] < refine_tol:
            merged[-1].append(w)
        else:
            merged.append([w])
    omegas = [float(np.mean(c)) for c in merged]
    if omega_range is not None:
        lo, hi = omega_range
        omegas = [w for w in omegas if lo <= w <= hi]
    return omegas


def grid_min_support_overlap(omega: float, resolution: int = 200) -> float:
    """Smallest support overlap achievable at fixed omega over the theta grid.

    A value far above SUPPORT_TOL certifies that no grid basis distinguishes
    the pair at this omega.
    """
    if resolution < 100:
        raise ValueError("resolution must be at least 100 points per angle")
    _, mb, f0, f1 = _front_contractions(resolution)
    r = resolution
    c, s = math.cos(omega), math.sin(omega)
    best = math.inf
    chunk = max(1, min(16, r))
    for lo in range(0, r, chunk):
        md = mb[lo:lo + chunk]
        a = np.einsum("rsabcl,tdl->rstabcd", f0, md).reshape(r, r, -1, 16)
        b = np.einsum("rsabcl,tdl->rstabcd", f1, md).reshape(r, r, -1, 16)
        psi = np.abs(c * a + s * b)
        perp = np.abs(s * a - c * b)
        overlap = np.minimum(psi, perp).max(axis=-1)
        best = min(best, float(overlap.min()))
    return best


def find_distinguishing_thetas(omega: float, resolution: int = 100):
    """A theta tuple making the pair at omega distinguishable, or None.

    Seeds a local polish (omega held fixed) from the best grid tuple.
    """
    if resolution < 100:
        raise ValueError("resolution must be at least 100 points per angle")
    thetas, mb, f0, f1 = _front_contractions(resolution)
    r = resolution
    c, s = math.cos(omega), math.sin(omega)
    best = (math.inf, None)
    chunk = max(1, min(16, r))
    for lo in range(0, r, chunk):
        md = mb[lo:lo + chunk]
        a = np.einsum("rsabcl,tdl->rstabcd", f0, md).reshape(r, r, -1, 16)
        b = np.einsum("rsabcl,tdl->rstabcd", f1, md).reshape(r, r, -1, 16)
        obj = np.sum(((c * a + s * b) * (s * a - c * b)) ** 2, axis=-1)
        i, j, k = np.unravel_index(np.argmin(obj), obj.shape)
        if obj[i, j, k] < best[0]:
            best = (float(obj[i, j, k]), (thetas[i], thetas[j], thetas[lo + k]))
    phi0 = make_phi0().amplitudes.real
    phi1 = make_phi1().amplitudes.real

    def objective(p):
        a = _product_components(phi0, (0.0, *p))
        b = _product_components(phi1, (0.0, *p))
        return float(np.sum(((c * a + s * b) * (s * a - c * b)) ** 2))

    res = minimize(objective, list(best[1]), method="Nelder-Mead",
                   options=dict(xatol=1e-12, fatol=1e-26, maxiter=5000))
    inst = DistinguishInstance(omega, (0.0, *res.x))
    if is_distinguishing(inst):
        return inst.thetas
    return None
