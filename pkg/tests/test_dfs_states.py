import math

import numpy as np
import pytest

from dfsbell.dfs_states import (DfsVector, Observable, SubspaceError,
                                dfs_embed, dfs_observable, dfs_project,
                                make_eta, make_f, make_g, make_phi0, make_phi1,
                                make_psi0, make_psi1, singlet)
from dfsbell.qcore import (apply_collective, basis_state, haar_su2,
                           permute_qubits, tensor)

R3 = math.sqrt(3.0)


def test_phi0_amplitudes():
    a = make_phi0().amplitudes
    expect = np.zeros(16)
    expect[0b0101] = expect[0b1010] = 0.5
    expect[0b0110] = expect[0b1001] = -0.5
    assert np.allclose(a, expect)


def test_phi0_is_two_singlet_pairs():
    assert abs(make_phi0().overlap(tensor(singlet(), singlet())) - 1.0) < 1e-12


def test_phi1_amplitudes():
    a = make_phi1().amplitudes
    expect = np.zeros(16)
    expect[0b0011] = expect[0b1100] = 2.0
    for w in (0b0101, 0b0110, 0b1001, 0b1010):
        expect[w] = -1.0
    expect /= 2.0 * R3
    assert np.allclose(a, expect)


def test_psi_states_are_qubit23_swaps():
    assert np.allclose(permute_qubits(make_phi0(), (1, 3, 2, 4)).amplitudes,
                       make_psi0().amplitudes)
    assert np.allclose(permute_qubits(make_phi1(), (1, 3, 2, 4)).amplitudes,
                       make_psi1().amplitudes)


def test_psi_states_in_phi_basis():
    # psi0 = (phi0 + sqrt(3) phi1)/2, psi1 = (sqrt(3) phi0 - phi1)/2
    phi0, phi1 = make_phi0().amplitudes, make_phi1().amplitudes
    assert np.allclose(make_psi0().amplitudes, (phi0 + R3 * phi1) / 2.0)
    assert np.allclose(make_psi1().amplitudes, (R3 * phi0 - phi1) / 2.0)


def test_sector_bases_orthonormal():
    for a, b in ((make_phi0(), make_phi1()), (make_psi0(), make_psi1())):
        assert abs(a.overlap(a) - 1.0) < 1e-12
        assert abs(b.overlap(b) - 1.0) < 1e-12
        assert abs(a.overlap(b)) < 1e-12


def test_eta_expansion_coefficients():
    eta = make_eta()
    phi = (make_phi0(), make_phi1())
    psi = (make_psi0(), make_psi1())
    n = 1.0 / math.sqrt(7.0)

    def coef(left, right):
        return tensor(left, right).overlap(eta)

    # in the phi (x) phi basis: (1, sqrt3, sqrt3, 0)/sqrt7
    want = {(0, 0): n, (0, 1): R3 * n, (1, 0): R3 * n, (1, 1): 0.0}
    for (i, j), c in want.items():
        assert abs(coef(phi[i], phi[j]) - c) < 1e-12
    # in the phi (x) psi basis: (4, 0, sqrt3, 3)/(2 sqrt7)
    want = {(0, 0): 4, (0, 1): 0, (1, 0): R3, (1, 1): 3}
    for (i, j), c in want.items():
        assert abs(coef(phi[i], psi[j]) - c / (2 * math.sqrt(7))) < 1e-12


def test_collective_rotation_invariance():
    rng = np.random.default_rng(21)
    states = [make_phi0(), make_phi1(), make_psi0(), make_psi1()]
    for _ in range(20):
        u = haar_su2(rng)
        for s in states:
            assert abs(s.overlap(apply_collective(s, u)) - 1.0) < 1e-12


def test_eta_invariant_under_independent_wing_rotations():
    rng = np.random.default_rng(22)
    eta = make_eta()
    for _ in range(10):
        out = apply_collective(eta, haar_su2(rng), wing="alice")
        out = apply_collective(out, haar_su2(rng), wing="bob")
        assert abs(eta.overlap(out) - 1.0) < 1e-12


def test_dfs_embed_project_roundtrip():
    rng = np.random.default_rng(23)
    for _ in range(10):
        w = rng.uniform(0, 2 * math.pi)
        v = DfsVector.from_angle(w)
        back = dfs_project(dfs_embed(v))
        assert abs(back.c0 - v.c0) < 1e-12 and abs(back.c1 - v.c1) < 1e-12


def test_dfs_project_rejects_outside_states():
    with pytest.raises(SubspaceError) as err:
        dfs_project(basis_state("0000"))
    # the state is entirely outside the sector
    assert err.value.residual_norm > 0.99


def test_dfs_vector_validation():
    with pytest.raises(ValueError):
        DfsVector(1.0, 1.0)
    v = DfsVector.from_angle(0.3)
    assert abs(v.c0 - math.cos(0.3)) < 1e-15
    assert abs(v.c1 - math.sin(0.3)) < 1e-15


def test_observable_lookup_and_matrix():
    f = make_f()
    assert f.eigenvalues() == (-1.0, +1.0)
    assert abs(f.eigenvector(-1.0).overlap(make_phi0()) - 1.0) < 1e-12
    with pytest.raises(KeyError):
        f.eigenvector(0.5)
    m = f.to_matrix()
    assert np.allclose(m, m.conj().T)
    v = make_phi1().amplitudes
    assert np.allclose(m @ v, v)


def test_observable_requires_orthonormal_eigenvectors():
    with pytest.raises(ValueError):
        Observable(((-1.0, make_phi0()), (+1.0, make_phi0())))


def test_rotated_observable_matches_conjugation():
    rng = np.random.default_rng(24)
    u = haar_su2(rng)
    g = make_g()
    big = np.array([[1.0 + 0j]])
    for _ in range(4):
        big = np.kron(big, u.matrix)
    assert np.allclose(g.rotated(u).to_matrix(),
                       big @ g.to_matrix() @ big.conj().T, atol=1e-10)


def test_g_is_f_conjugated_by_qubit23_swap():
    f, g = make_f(), make_g()
    for val in (-1.0, +1.0):
        swapped = permute_qubits(f.eigenvector(val), (1, 3, 2, 4))
        assert abs(swapped.overlap(g.eigenvector(val)) - 1.0) < 1e-12


def test_dfs_observable_angles():
    # angle 0 reproduces the fixed observable's matrix
    assert np.allclose(dfs_observable(0.0).to_matrix(), make_f().to_matrix())
    # the sector image of the rotated minus-eigenvector is (cos a, sin a)
    obs = dfs_observable(0.7)
    v = dfs_project(obs.eigenvector(-1.0))
    assert abs(v.c0 - math.cos(0.7)) < 1e-12
    assert abs(v.c1 - math.sin(0.7)) < 1e-12
