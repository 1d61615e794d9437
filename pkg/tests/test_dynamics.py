import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from chimera_dynamics.dynamics import (eigendecompose, evolve, fidelity_trace, jacobi_eigh,
                                       localized_state, rk4_evolve, rk4_trajectory,
                                       superposition_state)
from chimera_dynamics.hamiltonian import CONSTANT, DIPOLE, HamiltonianMatrix, build_hamiltonian, j_min
from chimera_dynamics.topology import Builtin, builtin_network

from helpers import weighted_automorphisms


def two_level(J):
    return HamiltonianMatrix.from_dense([[0.0, J], [J, 0.0]])


def builtin_H(kind, mode):
    return build_hamiltonian(builtin_network(kind), mode)


def test_localized_state():
    assert np.array_equal(localized_state(8, 0), np.eye(8)[0])
    assert np.array_equal(localized_state(2, 1), [0, 1])
    with pytest.raises(IndexError):
        localized_state(3, 3)


@given(st.integers(1, 64))
def test_state_norms(n):
    assert np.vdot(superposition_state(n), superposition_state(n)).real == pytest.approx(1.0, abs=1e-14)
    assert np.linalg.norm(localized_state(n, n - 1)) == 1.0


def test_superposition_state():
    psi = superposition_state(8)
    np.testing.assert_allclose(np.abs(psi) ** 2, 0.125, atol=1e-15)
    assert superposition_state(1).tolist() == [1.0]
    with pytest.raises(ValueError):
        superposition_state(0)


def test_two_level_spectrum():
    spec = eigendecompose(two_level(1.0))
    np.testing.assert_allclose(spec.eigenvalues, [-1, 1], atol=1e-15)
    v = spec.eigenvectors
    assert abs(abs(v[0, 0]) - 2 ** -0.5) < 1e-15
    assert v[0, 0] * v[1, 0] < 0 and v[0, 1] * v[1, 1] > 0


def test_zero_matrix_spectrum():
    spec = eigendecompose(np.zeros((4, 4)))
    assert np.all(spec.eigenvalues == 0)
    np.testing.assert_allclose(spec.eigenvectors.T @ spec.eigenvectors, np.eye(4), atol=1e-15)


def test_cycle_spectrum():
    spec = eigendecompose(builtin_H(Builtin.MAX_LENGTHS, CONSTANT))
    expected = np.sort(2 * np.cos(2 * np.pi * np.arange(8) / 8))
    np.testing.assert_allclose(spec.eigenvalues, expected, atol=1e-12)


def test_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        eigendecompose(np.array([[0.0, 1.0], [2.0, 0.0]]))


symmetric = arrays(np.float64, (6, 6), elements=st.floats(-1, 1)).map(lambda a: (a + a.T) / 2)


@settings(max_examples=60, deadline=None)
@given(symmetric)
def test_jacobi_invariants(A):
    spec = eigendecompose(A, method="jacobi")
    V, E = spec.eigenvectors, spec.eigenvalues
    assert np.all(np.diff(E) >= 0)
    assert np.max(np.abs(V @ np.diag(E) @ V.T - A)) <= 1e-9
    assert np.max(np.abs(V.T @ V - np.eye(6))) <= 1e-10
    np.testing.assert_allclose(E, np.linalg.eigvalsh(A), atol=1e-12)


@pytest.mark.parametrize("kind", list(Builtin))
@pytest.mark.parametrize("mode", [CONSTANT, DIPOLE])
def test_builtin_spectra(kind, mode):
    H = builtin_H(kind, mode)
    spec = eigendecompose(H)
    V, E = spec.eigenvectors, spec.eigenvalues
    assert np.max(np.abs(V @ np.diag(E) @ V.T - H.entries)) <= 1e-9
    assert np.max(np.abs(V.T @ V - np.eye(8))) <= 1e-10
    again = eigendecompose(H)
    assert np.array_equal(again.eigenvalues, E) and np.array_equal(again.eigenvectors, V)
    lapack = eigendecompose(H, method="lapack")
    np.testing.assert_allclose(lapack.eigenvalues, E, atol=1e-12)


def test_evolve_t0_identity():
    spec = eigendecompose(builtin_H(Builtin.MID_LENGTHS, DIPOLE))
    for psi0 in (localized_state(8, 3), superposition_state(8)):
        assert np.max(np.abs(evolve(spec, psi0, 0.0) - psi0)) <= 1e-12


def test_evolve_dimension_mismatch():
    with pytest.raises(ValueError):
        evolve(eigendecompose(two_level(1.0)), localized_state(3, 0), 1.0)


@pytest.mark.parametrize("J", [1.0, 0.5, 0.1])
def test_two_level_transfer(J):
    spec = eigendecompose(two_level(J))
    ts = np.linspace(0, 3 * np.pi / J, 97)
    f1 = np.abs(evolve(spec, localized_state(2, 0), ts)[:, 1]) ** 2
    np.testing.assert_allclose(f1, np.sin(J * ts) ** 2, atol=1e-12)
    assert abs(evolve(spec, localized_state(2, 0), np.pi / (2 * J))[1]) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_uniform_ring_is_eigenstate():
    spec = eigendecompose(builtin_H(Builtin.MAX_LENGTHS, CONSTANT))
    u = superposition_state(8)
    for t in (0.3, 1.0, 7.0):
        np.testing.assert_allclose(evolve(spec, u, t), np.exp(-2j * t) * u, atol=1e-12)


ALL_CELLS = [(k, m, init) for k in Builtin for m in (CONSTANT, DIPOLE) for init in ("localized", "superposition")]


def _psi0(kind, init):
    net = builtin_network(kind)
    if init == "localized":
        return localized_state(8, net.index_of(net.injection))
    return superposition_state(8)


@pytest.mark.parametrize("kind,mode,init", ALL_CELLS)
def test_conservation_and_reversibility(kind, mode, init):
    H = builtin_H(kind, mode)
    spec = eigendecompose(H)
    psi0 = _psi0(kind, init)
    tmax = 1 / j_min(H)
    ts = np.linspace(0, tmax, 201)
    psi = evolve(spec, psi0, ts)
    assert np.max(np.abs(np.sum(np.abs(psi) ** 2, axis=1) - 1)) <= 1e-9
    energy = np.einsum("ti,ij,tj->t", psi.conj(), H.entries, psi).real
    assert np.max(np.abs(energy - energy[0])) <= 1e-9
    t1, t2 = 0.37 * tmax, 0.41 * tmax
    back = evolve(spec, evolve(spec, psi0, t1), -t1)
    assert np.max(np.abs(back - psi0)) <= 1e-9
    composed = evolve(spec, evolve(spec, psi0, t1), t2)
    assert np.max(np.abs(composed - evolve(spec, psi0, t1 + t2))) <= 1e-9


@pytest.mark.parametrize("kind,mode,init", ALL_CELLS)
def test_automorphism_symmetry(kind, mode, init):
    net = builtin_network(kind)
    trace = fidelity_trace(build_hamiltonian(net, mode), _psi0(kind, init), samples=401)
    site = net.index_of(net.injection)
    autos = weighted_automorphisms(net, mode)
    assert len(autos) >= 2
    for g in autos:
        if init == "localized" and g[site] != site:
            continue
        perm = [g[i] for i in range(8)]
        assert np.max(np.abs(trace.fidelities[:, perm] - trace.fidelities)) <= 1e-9


@pytest.mark.parametrize("kind,mode", [(k, m) for k in Builtin for m in (CONSTANT, DIPOLE)])
def test_static_state_criterion(kind, mode):
    H = builtin_H(kind, mode)
    u = superposition_state(8).real
    Hu = H.entries @ u
    lam = u @ Hu
    trace = fidelity_trace(H, superposition_state(8))
    dev = np.max(np.abs(trace.fidelities - 1 / 8))
    if np.max(np.abs(Hu - lam * u)) <= 1e-12:
        assert dev <= 1e-9
    else:
        assert dev > 1e-6


def test_fidelity_trace_grid():
    H = builtin_H(Builtin.MIN_MAX, DIPOLE)
    trace = fidelity_trace(H, localized_state(8, 0), samples=11)
    assert trace.t_max == 1 / j_min(H)
    assert trace.times[0] == 0 and trace.times[-1] == trace.t_max
    assert trace.samples == 11 and np.all(np.diff(trace.times) > 0)
    assert np.all((trace.fidelities >= 0) & (trace.fidelities <= 1))
    np.testing.assert_allclose(trace.fidelities.sum(axis=1), 1, atol=1e-9)
    assert trace.initial == "localized:2" and trace.initial_site == 0
    with pytest.raises(ValueError):
        fidelity_trace(H, localized_state(8, 0), samples=1)
    with pytest.raises(ValueError):
        fidelity_trace(H, 2 * localized_state(8, 0))


def test_max_lengths_constant_neighbours_overlay():
    net = builtin_network(Builtin.MAX_LENGTHS)
    trace = fidelity_trace(build_hamiltonian(net, CONSTANT), localized_state(8, 0))
    assert np.max(np.abs(trace.column(7) - trace.column(19))) <= 1e-9


def test_max_lengths_dipole_transfer():
    net = builtin_network(Builtin.MAX_LENGTHS)
    trace = fidelity_trace(build_hamiltonian(net, DIPOLE), localized_state(8, 0))
    early = trace.times <= 0.2 * trace.t_max
    assert trace.column(7)[early].max() >= 0.9
    assert trace.column(19)[early].max() <= 0.05


def test_mid_lengths_constant_superposition_classes():
    net = builtin_network(Builtin.MID_LENGTHS)
    trace = fidelity_trace(build_hamiltonian(net, CONSTANT), superposition_state(8))
    assert np.max(np.abs(trace.fidelities - 0.125)) > 0.01
    deg3 = [trace.column(n) for n in (4, 7, 12, 15)]
    deg2 = [trace.column(n) for n in (1, 3, 8, 10)]
    for group in (deg3, deg2):
        assert all(np.max(np.abs(c - group[0])) <= 1e-9 for c in group)
    assert np.max(np.abs(deg3[0] - deg2[0])) > 1e-3


def test_rk4_basics():
    H = two_level(1.0)
    psi0 = localized_state(2, 0)
    assert np.array_equal(rk4_evolve(H, psi0, 0.0, 0.01), psi0)
    for t in (0.5, 1.3, np.pi / 2):
        psi = rk4_evolve(H, psi0, t, 1e-3)
        assert abs(abs(psi[1]) ** 2 - np.sin(t) ** 2) <= 1e-8
    with pytest.raises(ValueError):
        rk4_evolve(H, psi0, 1.0, 0.0)
    with pytest.raises(ValueError):
        rk4_evolve(H, psi0, -1.0, 0.1)


def test_rk4_trajectory_matches_single_calls():
    H = builtin_H(Builtin.MID_LENGTHS, CONSTANT)
    psi0 = localized_state(8, 0)
    ts = [0.0, 0.25, 0.5, 0.77]
    traj = rk4_trajectory(H, psi0, ts, 1e-3)
    for t, row in zip(ts, traj):
        np.testing.assert_allclose(row, rk4_evolve(H, psi0, t, 1e-3), atol=1e-14)


def test_rk4_agrees_with_eigen_expansion():
    H = builtin_H(Builtin.MID_LENGTHS, DIPOLE)
    psi0 = localized_state(8, 0)
    tmax = 1 / j_min(H)
    got = rk4_evolve(H, psi0, tmax, tmax / 1e5)
    assert np.max(np.abs(got - evolve(eigendecompose(H), psi0, tmax))) <= 1e-6
