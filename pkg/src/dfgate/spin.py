"""Spin-1/2 operators on n qubits and unitary evolution.

Sites are numbered from 1. Site 1 is the most significant bit of the
computational-basis index, so ``pauli_op("z", 1, 2)`` is ``Z (x) I``.
All operators are dense ``complex128`` arrays.
"""
from functools import reduce
from itertools import combinations

import numpy as np

HERMITIAN_TOL = 1e-10
MAX_QUBITS = 10

IDENTITY = np.eye(2, dtype=complex)
PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
# sigma_pm = (sigma_x +- i sigma_y) / 2
LADDER = {
    "+": np.array([[0, 1], [0, 0]], dtype=complex),
    "-": np.array([[0, 0], [1, 0]], dtype=complex),
}


def _check_sites(sites, n):
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")
    for s in sites:
        if not 1 <= s <= n:
            raise IndexError(f"site {s} out of range for {n} qubits")
    if len(set(sites)) != len(sites):
        raise ValueError(f"sites must be distinct, got {tuple(sites)}")


def single_site_op(matrix, site, n):
    """Embed a 2x2 matrix acting on ``site`` into the n-qubit space."""
    _check_sites([site], n)
    factors = [matrix if k == site else IDENTITY for k in range(1, n + 1)]
    return reduce(np.kron, factors)


def pauli_op(axis, site, n):
    """Pauli matrix ``sigma_axis`` on one site, identity elsewhere."""
    if axis not in PAULI:
        raise ValueError(f"unknown Pauli axis {axis!r}")
    return single_site_op(PAULI[axis], site, n)


def exchange_op(i, j, n):
    """Heisenberg exchange ``E_ij = X_i X_j + Y_i Y_j + Z_i Z_j``.

    Eigenvalue -3 on the singlet of (i, j) and +1 on the triplets.
    """
    if i == j:
        raise ValueError(f"exchange needs two distinct sites, got ({i}, {j})")
    _check_sites([i, j], n)
    return sum(pauli_op(a, i, n) @ pauli_op(a, j, n) for a in "xyz")


def collective_spin_op(axis, sites, n):
    """Sum of single-site Paulis (or ladder operators) over ``sites``.

    ``axis`` is one of ``x, y, z, +, -``.
    """
    sites = tuple(sites)
    if not sites:
        raise ValueError("collective spin needs at least one site")
    _check_sites(sites, n)
    if axis in PAULI:
        m = PAULI[axis]
    elif axis in LADDER:
        m = LADDER[axis]
    else:
        raise ValueError(f"unknown spin axis {axis!r}")
    return sum(single_site_op(m, s, n) for s in sites)


def total_spin_squared_op(sites, n):
    """``S^2 = Sx^2 + Sy^2 + Sz^2`` built from Pauli sums (eigenvalue 4S(S+1))."""
    ops = [collective_spin_op(a, sites, n) for a in "xyz"]
    return sum(s @ s for s in ops)


def is_hermitian(h, tol=HERMITIAN_TOL):
    return np.max(np.abs(h - h.conj().T), initial=0.0) <= tol


def is_unitary(u, tol=1e-12):
    eye = np.eye(u.shape[0])
    return np.linalg.norm(u.conj().T @ u - eye) < tol


class Propagator:
    """Cached eigendecomposition of a Hermitian generator.

    Calling the instance with a phase ``theta`` returns ``exp(-i H theta)``.
    Reuse one instance when the same H is exponentiated many times.
    """

    def __init__(self, h):
        h = np.asarray(h, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError(f"generator must be square, got shape {h.shape}")
        if not is_hermitian(h):
            raise ValueError("generator is not Hermitian")
        self.energies, self.vectors = np.linalg.eigh(h)

    def __call__(self, theta):
        phases = np.exp(-1j * self.energies * theta)
        return (self.vectors * phases) @ self.vectors.conj().T


def evolve(h, theta):
    """Return ``exp(-i H theta)`` for Hermitian ``H`` (hbar = 1)."""
    return Propagator(h)(theta)


def supercoherent_hamiltonian(j_sc, sites, n):
    """``J_SC`` times the sum of ``E_ij`` over all pairs of four sites."""
    sites = tuple(sites)
    if len(sites) != 4 or len(set(sites)) != 4:
        raise ValueError(f"supercoherent Hamiltonian needs 4 distinct sites, got {sites}")
    return j_sc * sum(exchange_op(i, j, n) for i, j in combinations(sites, 2))


def apply_on_sites(op, sites, states, n):
    """Apply a ``2^m x 2^m`` operator acting on ``sites`` to state vectors.

    ``states`` has shape ``(2**n,)`` or ``(2**n, k)``. The operator's own
    qubit order follows ``sites``: ``sites[0]`` is its most significant bit.
    Much cheaper than building the full 2^n matrix.
    """
    sites = tuple(sites)
    _check_sites(sites, n)
    m = len(sites)
    states = np.asarray(states)
    single = states.ndim == 1
    if single:
        states = states[:, None]
    k = states.shape[1]
    axes = [s - 1 for s in sites]
    t = states.reshape((2,) * n + (k,))
    t = np.moveaxis(t, axes, range(m))
    rest = t.shape[m:]
    t = (op @ t.reshape(2**m, -1)).reshape((2,) * m + rest)
    t = np.moveaxis(t, range(m), axes).reshape(2**n, k)
    return t[:, 0] if single else t


def embed(op, sites, n):
    """Full ``2^n`` matrix of an operator given on ``sites``."""
    return apply_on_sites(op, sites, np.eye(2**n, dtype=complex), n)
