"""Build the five-pulse CZ gate on two 4-qubit encoded qubits and check it."""
import numpy as np

from dfgate import encodings, invariants, pulses, spin
from dfgate.pulses import CZ_PARAMETERS

layout = encodings.default_layout(4)
print("encoded qubit A on sites", layout.sites_a, "B on", layout.sites_b)
print("pulses act on the gate square", layout.gate_sites)

# compile: Times/Box/Ring merge into one symmetric ring pulse
seq = pulses.compile_sequence(CZ_PARAMETERS)
for p in seq.pulses:
    extra = f"  alpha = {p.alpha:.6f}" if p.alpha is not None else ""
    print(f"  {p.label.value:<9} theta = {p.theta:.6f}{extra}")
print(f"total time T = {seq.total_time:.6f} hbar/J")

# the gate only touches 4 sites, so a 16x16 matrix is enough
u = pulses.local_gate(CZ_PARAMETERS)
basis = encodings.pair_basis(layout).columns
block = basis.conj().T @ spin.apply_on_sites(u, layout.gate_sites, basis, layout.n)

print("f_m     =", invariants.fm_objective(block))
print("leakage =", encodings.leakage_from_block(block, 4))

# the logical block is diagonal: CZ up to single-qubit Z phases and a global phase
np.set_printoptions(precision=5, suppress=True)
print("phases of the logical block:", np.angle(np.diag(block)))
frame = invariants.calibrate_local_frame(block)
print("after the local frame:\n", frame.apply(block).real)

# same physical pulses on the 3-qubit encoding: every gauge block is a CZ too
layout3 = encodings.default_layout(3)
for label in encodings.GAUGE_LABELS:
    b3 = encodings.gauge_block_basis(layout3, label).columns
    m = b3.conj().T @ spin.apply_on_sites(u, layout3.gate_sites, b3, layout3.n)
    print(f"3-qubit gauge block {label}: f_m = {invariants.fm_objective(m):.1e}")
