import numpy as np
import pytest
from hypothesis import given, strategies as st

from chimera_dynamics.hamiltonian import (CONSTANT, DIPOLE, Coupling, CouplingMode, HamiltonianMatrix,
                                          build_hamiltonian, coupling_weight, j_min)
from chimera_dynamics.topology import Builtin, adjacency, builtin_network, generate_chimera, make_network


@pytest.mark.parametrize("length,expected", [(2.174, 0.0973), (4.592, 0.0103), (1.392, 0.3708)])
def test_dipole_weights_against_tables(length, expected):
    assert coupling_weight(length, 1.0, DIPOLE) == pytest.approx(expected, abs=1e-4)


@given(st.floats(1.0, 50.0))
def test_constant_ignores_length(length):
    assert coupling_weight(length, 1.0, CONSTANT) == 1.0


def test_shortest_has_unit_weight():
    assert coupling_weight(1.0, 1.0, DIPOLE) == 1.0
    assert coupling_weight(2.0, 2.0, CouplingMode(Coupling.DIPOLE, 0.5)) == 0.5


@pytest.mark.parametrize("args", [(0.0, 1.0), (-1.0, 1.0), (0.5, 1.0)])
def test_bad_lengths(args):
    with pytest.raises(ValueError):
        coupling_weight(*args, mode=DIPOLE)


@pytest.mark.parametrize("j0", [0.0, -0.1, 1.5])
def test_j0_range(j0):
    with pytest.raises(ValueError):
        CouplingMode(Coupling.CONSTANT, j0)


@given(st.floats(1.0, 20.0), st.floats(1.0, 20.0))
def test_dipole_monotone(l1, l2):
    w1, w2 = coupling_weight(l1, 1.0, DIPOLE), coupling_weight(l2, 1.0, DIPOLE)
    if l1 < l2:
        assert w1 > w2
    elif l1 == l2:
        assert w1 == w2


def test_max_lengths_constant():
    H = build_hamiltonian(builtin_network(Builtin.MAX_LENGTHS), CONSTANT)
    assert H.n == 8
    off = H.entries[H.entries != 0]
    assert off.size == 16 and np.all(off == 1.0)


def test_max_lengths_dipole_multiset():
    H = build_hamiltonian(builtin_network(Builtin.MAX_LENGTHS), DIPOLE)
    upper = sorted(H.entries[np.triu_indices(8, 1)][H.entries[np.triu_indices(8, 1)] != 0])
    expected = sorted([1.0] * 4 + [(1 / 2.174) ** 3] * 2 + [(1 / 2.920) ** 3] * 2)
    np.testing.assert_allclose(upper, expected, rtol=0, atol=1e-15)
    assert (1 / 2.174) ** 3 == pytest.approx(0.0973, abs=1e-4)
    assert (1 / 2.920) ** 3 == pytest.approx(0.0402, abs=1e-4)


def test_two_node():
    net = make_network([0, 1], [(0, 1)], lengths=[1.0])
    assert build_hamiltonian(net, DIPOLE).entries.tolist() == [[0, 1], [1, 0]]


@pytest.mark.parametrize("kind", list(Builtin) + ["chimera"])
@pytest.mark.parametrize("mode", [CONSTANT, DIPOLE, CouplingMode(Coupling.DIPOLE, 0.3)])
def test_structure(kind, mode):
    net = generate_chimera(2, 2) if kind == "chimera" else builtin_network(kind)
    H = build_hamiltonian(net, mode)
    M = H.entries
    assert np.array_equal(M, M.T)
    assert np.all(np.diag(M) == 0)
    A = adjacency(net)
    assert np.array_equal(M != 0, A == 1)
    assert np.all(M[A == 1] > 0) and np.all(M[A == 1] <= mode.j0)
    if mode.kind is Coupling.CONSTANT:
        assert np.array_equal(M, mode.j0 * A)


def test_equal_lengths_bitwise_equal_weights():
    net = builtin_network(Builtin.MID_LENGTHS)
    H = build_hamiltonian(net, DIPOLE)
    by_length = {}
    for e in net.edges:
        w = H.entries[net.index_of(e.a), net.index_of(e.b)]
        by_length.setdefault(e.length, set()).add(w)
    assert all(len(ws) == 1 for ws in by_length.values())


@pytest.mark.parametrize("kind,mode,expected", [
    (Builtin.MAX_LENGTHS, CONSTANT, 1.0),
    (Builtin.MIN_MAX, DIPOLE, (1 / 6.168) ** 3),
    (Builtin.MID_LENGTHS, DIPOLE, (1 / 4.064) ** 3),
])
def test_j_min(kind, mode, expected):
    assert j_min(build_hamiltonian(builtin_network(kind), mode)) == pytest.approx(expected, rel=1e-14)


def test_j_min_values_match_tables():
    assert (1 / 6.168) ** 3 == pytest.approx(0.004, abs=5e-4)
    assert (1 / 4.064) ** 3 == pytest.approx(0.015, abs=5e-4)


def test_j_min_zero_matrix():
    with pytest.raises(ValueError):
        j_min(HamiltonianMatrix.from_dense(np.zeros((3, 3))))


def test_rejects_asymmetric():
    with pytest.raises(ValueError):
        HamiltonianMatrix.from_dense([[0, 1], [0.5, 0]])


def test_entries_read_only():
    H = build_hamiltonian(builtin_network(Builtin.MIN_MAX))
    with pytest.raises(ValueError):
        H.entries[0, 1] = 5
