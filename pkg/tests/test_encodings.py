import numpy as np
import pytest

from dfgate import encodings, spin
from dfgate.encodings import EncodingKind, EncodingLayout


def test_default_layouts(layout4, layout3):
    assert layout4.n == 8 and layout4.dim == 256
    assert layout4.gate_sites == (1, 5, 6, 2)
    assert layout3.n == 6 and layout3.gate_sites == (1, 4, 5, 2)
    assert layout4.pair_a == (1, 2) and layout4.pair_b == (5, 6)


@pytest.mark.parametrize("gate", [(1, 2, 5, 6, 7), (1, 2, 3, 5), (1, 1, 5, 6)])
def test_layout_rejects_bad_gate_sites(gate):
    with pytest.raises(ValueError):
        EncodingLayout(EncodingKind.FOUR, (1, 2, 3, 4), (5, 6, 7, 8), gate)


def test_layout_rejects_overlap():
    with pytest.raises(ValueError):
        EncodingLayout(EncodingKind.THREE, (1, 2, 3), (3, 4, 5), (1, 3, 4, 2))


def test_four_qubit_states_are_orthonormal_singlets():
    zero, one = encodings.four_qubit_states()
    assert abs(np.vdot(zero, one)) < 1e-15
    assert np.isclose(np.linalg.norm(zero), 1) and np.isclose(np.linalg.norm(one), 1)
    for axis in "xyz":
        s = spin.collective_spin_op(axis, (1, 2, 3, 4), 4)
        assert np.linalg.norm(s @ zero) < 1e-12 and np.linalg.norm(s @ one) < 1e-12


def test_logical_value_is_pair_singlet_content(layout4):
    basis = encodings.logical_basis_four(layout4)
    e = spin.exchange_op(1, 2, 4)
    zero, one = basis.columns.T
    assert np.allclose(e @ zero, -3 * zero)
    assert np.allclose(e @ one, one)
    with pytest.raises(ValueError):
        encodings.logical_basis_four(encodings.default_layout(EncodingKind.THREE))


def test_three_qubit_states_quantum_numbers(layout3):
    basis = encodings.logical_basis_three(layout3)
    sz = spin.collective_spin_op("z", (1, 2, 3), 3)
    s2 = spin.total_spin_squared_op((1, 2, 3), 3)
    pair = spin.total_spin_squared_op((1, 2), 3)
    assert np.allclose(basis.columns.conj().T @ basis.columns, np.eye(4))
    for col, label in zip(basis.columns.T, basis.labels):
        x, gauge = label.split(",")
        assert np.allclose(sz @ col, int(gauge) * col)
        assert np.allclose(s2 @ col, 3 * col)  # spin 1/2
        assert np.allclose(pair @ col, (0 if x == "0" else 8) * col)
    with pytest.raises(ValueError):
        encodings.logical_basis_three(encodings.default_layout(EncodingKind.FOUR))


@pytest.mark.parametrize("kind, k", [(EncodingKind.FOUR, 4), (EncodingKind.THREE, 16)])
def test_pair_basis_orthonormal(kind, k):
    b = encodings.pair_basis(encodings.default_layout(kind))
    assert b.k == k
    assert np.max(np.abs(b.columns.conj().T @ b.columns - np.eye(k))) < 1e-12


def test_gauge_blocks_partition_pair_basis(layout3):
    cols = np.hstack([encodings.gauge_block_basis(layout3, lbl).columns
                      for lbl in encodings.GAUGE_LABELS])
    assert np.max(np.abs(cols.conj().T @ cols - np.eye(16))) < 1e-12
    p_blocks = cols @ cols.conj().T
    assert np.allclose(p_blocks, encodings.pair_basis(layout3).projector())
    with pytest.raises(ValueError):
        encodings.gauge_block_basis(layout3, (2, 0))
    with pytest.raises(ValueError):
        encodings.gauge_block_basis(encodings.default_layout(EncodingKind.FOUR), (1, 1))


def test_gauge_block_total_spin(layout3):
    # The gauge indices of the two qubits combine to total (S, m) of the gauge spins.
    sz = spin.collective_spin_op("z", range(1, 7), 6)
    for (s, m) in encodings.GAUGE_LABELS:
        cols = encodings.gauge_block_basis(layout3, (s, m)).columns
        assert np.allclose(sz @ cols, 2 * m * cols)


def test_leakage_identity_and_flip(layout4):
    basis = encodings.pair_basis(layout4)
    assert encodings.leakage(np.eye(256), basis) < 1e-14
    flip = spin.evolve(spin.pauli_op("x", layout4.gate_sites[0], 8), np.pi / 2)
    assert encodings.leakage(flip, basis) > 0.5
    with pytest.raises(ValueError):
        encodings.project_to_logical(np.eye(64), basis)


def test_leakage_of_unitary_block_is_zero():
    u = np.linalg.qr(np.random.default_rng(0).standard_normal((4, 4)))[0]
    assert encodings.leakage_from_block(u, 4) < 1e-14
    assert np.isclose(encodings.leakage_from_block(0.5 * u, 4), 0.75)


def test_four_qubit_states_from_three_qubit_states():
    assert encodings.three_in_four_residual() < 1e-12
    # the + sign combination is orthogonal to the logical state
    zero = encodings.four_qubit_states()[0]
    assert abs(np.vdot(zero, encodings.four_from_three(0, sign=+1))) < 1e-12


def test_in_full_space_reorders(layout4):
    b = encodings.logical_basis_four(layout4, "b")
    with pytest.raises(ValueError):
        b.in_full_space(8)
    local = encodings.LogicalBasis(np.eye(4)[:, [1]], ("01",), (2, 1))
    assert np.allclose(local.in_full_space()[:, 0], [0, 0, 1, 0])


def test_logical_basis_selection(layout4, layout3):
    assert encodings.logical_basis(layout4).k == 4
    assert encodings.logical_basis(layout3).metadata["gauge"] == (1, 1)
