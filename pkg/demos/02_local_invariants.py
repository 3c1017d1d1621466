"""Makhlin invariants tell two-qubit gates apart up to single-qubit rotations."""
import numpy as np

from dfgate import invariants as inv

gates = {"I": inv.IDENTITY4, "CZ": inv.CZ, "CNOT": inv.CNOT, "SWAP": inv.SWAP,
         "sqrt(SWAP)": inv.SQRT_SWAP}
for name, g in gates.items():
    m = inv.makhlin_invariants(g)
    print(f"{name:>10}: m1 = {m.m1:.4f}  m2 = {m.m2:.4f}  f_m = {inv.fm_objective(g):.4f}")


def random_su2(rng):
    a, b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    n = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
    return np.array([[a, -b.conjugate()], [b, a.conjugate()]]) / n


# dress CZ with random local gates; invariants do not move
rng = np.random.default_rng(1)
worst = 0.0
for _ in range(500):
    k1 = np.kron(random_su2(rng), random_su2(rng))
    k2 = np.kron(random_su2(rng), random_su2(rng))
    worst = max(worst, inv.fm_objective(k1 @ inv.CZ @ k2))
print("largest f_m over 500 locally dressed CZ gates:", worst)

# CNOT is CZ with Hadamards on the target
h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
hh = np.kron(np.eye(2), h)
print("H CZ H == CNOT:", np.allclose(hh @ inv.CZ @ hh, inv.CNOT))
