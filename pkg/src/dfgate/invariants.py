"""Makhlin local invariants and calibration of the local frame around CZ."""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

SQRT_HALF = 1.0 / np.sqrt(2.0)

# Bell ("magic") basis change.
Q = SQRT_HALF * np.array([
    [1, 0, 0, 1j],
    [0, 1j, 1, 0],
    [0, 1j, -1, 0],
    [1, 0, 0, -1j],
], dtype=complex)

IDENTITY4 = np.eye(4, dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
SQRT_SWAP = np.array([
    [1, 0, 0, 0],
    [0, (1 + 1j) / 2, (1 - 1j) / 2, 0],
    [0, (1 - 1j) / 2, (1 + 1j) / 2, 0],
    [0, 0, 0, 1],
], dtype=complex)


@dataclass(frozen=True)
class MakhlinPair:
    m1: complex
    m2: complex

    def as_array(self):
        return np.array([self.m1, self.m2])


def bell_basis_transform(m):
    """``Q^dagger M Q``."""
    return Q.conj().T @ np.asarray(m) @ Q


def makhlin_invariants(m):
    """(m1, m2) of a 4x4 gate.

    ``m1 = (tr mb)^2 / 16 det M^dagger`` and
    ``m2 = ((tr mb)^2 - tr(mb^2)) / 4 det M^dagger``, with ``mb = M_B^T M_B``.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"need a 4x4 matrix, got {m.shape}")
    mb = bell_basis_transform(m)
    big = mb.T @ mb
    det_dag = np.linalg.det(m.conj().T)
    tr = np.trace(big)
    return MakhlinPair(tr**2 / 16 * det_dag, (tr**2 - np.trace(big @ big)) / 4 * det_dag)


CZ_INVARIANTS = makhlin_invariants(CZ)


def fm_objective(m):
    """Distance ``|m1(CZ) - m1(M)| + |m2(CZ) - m2(M)|`` to the CZ class."""
    mk = makhlin_invariants(m)
    return float(abs(CZ_INVARIANTS.m1 - mk.m1) + abs(CZ_INVARIANTS.m2 - mk.m2))


class CalibrationError(ValueError):
    pass


@dataclass(frozen=True)
class LocalFrame:
    """Fixed frame mapping a calibrated gate onto CZ.

    ``apply(U) = e^{i phi} V^dagger U V D``. ``V`` diagonalises the
    noiseless gate; the diagonal ``D`` absorbs residual single-qubit Z
    phases left over when the noiseless spectrum is not exactly
    ``{1, 1, 1, -1}`` up to a global phase.
    """

    V: np.ndarray
    phi: float
    D: np.ndarray

    def apply(self, u):
        return np.exp(1j * self.phi) * (self.V.conj().T @ u @ self.V @ self.D)

    def residual(self, u0):
        return float(np.linalg.norm(self.apply(u0) - CZ))


def _best_assignment(eigvals):
    """Choose the eigenvalue playing -1 and the global phase.

    Returns (index_of_minus_one, phi, max_phase_mismatch).
    """
    best = None
    for k in range(4):
        targets = np.where(np.arange(4) == k, -eigvals, eigvals)
        z = targets.sum()
        phi = -np.angle(z) if abs(z) > 0 else 0.0
        mismatch = np.max(np.abs(np.angle(np.exp(1j * phi) * targets)))
        if best is None or mismatch < best[2] - 1e-15:
            best = (k, float(phi), float(mismatch))
    return best


def calibrate_local_frame(u0, fm_tol=1e-8, unitary_tol=1e-8):
    """Frame (V, phi, D) with ``e^{i phi} V^dagger U0 V D = CZ``.

    ``U0`` must be unitary and in the CZ local-equivalence class.
    """
    u0 = np.asarray(u0, dtype=complex)
    if u0.shape != (4, 4):
        raise CalibrationError(f"need a 4x4 gate, got {u0.shape}")
    if np.linalg.norm(u0.conj().T @ u0 - IDENTITY4) > unitary_tol:
        raise CalibrationError("gate is not unitary (leaky projection?)")
    fm = fm_objective(u0)
    if fm > fm_tol:
        raise CalibrationError(f"gate is not locally equivalent to CZ (f_m = {fm:.3g})")
    # Schur form of a normal matrix is diagonal with a unitary basis, even
    # inside degenerate eigenspaces.
    t, z = schur(u0, output="complex")
    eig = np.diag(t)
    k, phi, _ = _best_assignment(eig)
    order = [j for j in range(4) if j != k] + [k]
    v = z[:, order]
    diag = np.exp(1j * phi) * eig[order]
    d = np.diag(np.diag(CZ) / diag)
    # Wrap phi into (-pi, pi].
    phi = float(np.angle(np.exp(1j * phi)))
    return LocalFrame(v, phi, d)
