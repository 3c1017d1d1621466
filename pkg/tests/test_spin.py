import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dfgate import spin
from conftest import random_hermitian, random_unitary


def test_site_one_is_most_significant():
    assert np.allclose(spin.pauli_op("z", 1, 2), np.diag([1, 1, -1, -1]))
    assert np.allclose(spin.pauli_op("z", 2, 2), np.diag([1, -1, 1, -1]))


def test_pauli_algebra():
    x, y, z = (spin.PAULI[a] for a in "xyz")
    assert np.allclose(x @ y, 1j * z)
    assert np.allclose(spin.LADDER["+"], (x + 1j * y) / 2)


def test_bad_sites():
    with pytest.raises(IndexError):
        spin.pauli_op("x", 4, 3)
    with pytest.raises(ValueError):
        spin.exchange_op(2, 2, 3)
    with pytest.raises(ValueError):
        spin.pauli_op("w", 1, 2)
    with pytest.raises(ValueError):
        spin.single_site_op(spin.IDENTITY, 1, spin.MAX_QUBITS + 1)


def test_exchange_singlet_and_triplets():
    e = spin.exchange_op(1, 2, 2)
    singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
    assert np.allclose(e @ singlet, -3 * singlet)
    for t in (np.array([1, 0, 0, 0]), np.array([0, 1, 1, 0]) / np.sqrt(2), np.array([0, 0, 0, 1])):
        assert np.allclose(e @ t, t)
    assert np.allclose(np.linalg.eigvalsh(e), [-3, 1, 1, 1])


def test_exchange_is_symmetric_in_sites():
    assert np.allclose(spin.exchange_op(1, 3, 3), spin.exchange_op(3, 1, 3))


def test_full_exchange_period_on_triplets():
    u = spin.evolve(spin.exchange_op(1, 2, 2), 2 * np.pi)
    t0 = np.array([0, 1, 1, 0]) / np.sqrt(2)
    assert np.allclose(u @ t0, t0, atol=1e-12)


def test_non_hermitian_generator_rejected():
    with pytest.raises(ValueError):
        spin.Propagator(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        spin.Propagator(np.ones((2, 3)))


def test_total_spin_squared_pair():
    s2 = spin.total_spin_squared_op((1, 2), 2)
    # 4 S(S+1) in Pauli units: 0 for the singlet, 8 for the triplets.
    assert np.allclose(np.linalg.eigvalsh(s2), [0, 8, 8, 8])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-7, 7), st.floats(-7, 7))
def test_evolution_group_law(seed, t1, t2):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, 8)
    u1, u2 = spin.evolve(h, t1), spin.evolve(h, t2)
    assert np.linalg.norm(u1 @ u2 - spin.evolve(h, t1 + t2)) < 1e-11
    assert spin.is_unitary(u1, 1e-11)
    assert np.linalg.norm(u1 @ spin.evolve(h, -t1) - np.eye(8)) < 1e-12


def test_propagator_matches_scipy_expm():
    from scipy.linalg import expm

    h = random_hermitian(np.random.default_rng(3), 16)
    assert np.allclose(spin.evolve(h, 0.7), expm(-0.7j * h), atol=1e-12)


@pytest.mark.parametrize("pair", [(1, 2), (2, 4), (1, 4)])
def test_exchange_commutes_with_collective_spin(pair):
    n, sites = 4, (1, 2, 4)
    e = spin.exchange_op(*pair, n)
    ops = [spin.collective_spin_op(a, sites, n) for a in "xyz+-"]
    ops.append(spin.total_spin_squared_op(sites, n))
    if set(pair) <= set(sites):
        for op in ops:
            assert np.max(np.abs(e @ op - op @ e)) < 1e-12
    else:
        assert np.max(np.abs(e @ ops[2] - ops[2] @ e)) > 1e-3


def test_supercoherent_spectrum():
    h = spin.supercoherent_hamiltonian(1.0, (1, 2, 3, 4), 4)
    ev = np.linalg.eigvalsh(h)
    expected = np.array([-6] * 2 + [-2] * 9 + [6] * 5, dtype=float)
    assert np.max(np.abs(ev - expected)) < 1e-12
    with pytest.raises(ValueError):
        spin.supercoherent_hamiltonian(1.0, (1, 2, 3), 4)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.permutations([1, 2, 3, 4, 5]), st.integers(1, 3))
def test_apply_on_sites_matches_embedded_matrix(seed, perm, m):
    rng = np.random.default_rng(seed)
    n = 5
    sites = tuple(perm[:m])
    op = random_unitary(rng, 2**m)
    states = rng.standard_normal((2**n, 3)) + 0j
    dense = spin.embed(op, sites, n)
    assert np.allclose(spin.apply_on_sites(op, sites, states, n), dense @ states, atol=1e-12)
    assert np.allclose(spin.apply_on_sites(op, sites, states[:, 0], n), dense @ states[:, 0])


def test_embed_single_site_agrees_with_kron():
    x = spin.PAULI["x"]
    assert np.allclose(spin.embed(x, (2,), 3), spin.pauli_op("x", 2, 3))
    cx = np.kron(x, x)
    assert np.allclose(spin.embed(cx, (3, 1), 3), spin.pauli_op("x", 1, 3) @ spin.pauli_op("x", 3, 3))
