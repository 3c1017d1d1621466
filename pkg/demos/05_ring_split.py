"""Realise the symmetric ring pulse with two hardware ring ratios alpha_a, alpha_b."""
import numpy as np

from dfgate import pulses, spin
from dfgate.pulses import CZ_PARAMETERS

for n in range(3):
    print(f"alpha({n}) = {pulses.alpha_n(CZ_PARAMETERS, n):.6f}")

alpha_a, alpha_b = 0.2, 0.1
t_a, t_b = pulses.alpha_split(alpha_a, alpha_b, 0, CZ_PARAMETERS)
print(f"\nsplit with alpha_a={alpha_a}, alpha_b={alpha_b}: t_a = {t_a:.6f}, t_b = {t_b:.6f}")

single = spin.evolve(pulses.local_hamiltonian("symmetric", pulses.alpha_n(CZ_PARAMETERS)),
                     CZ_PARAMETERS.theta_box)
double = (spin.evolve(pulses.local_hamiltonian("symmetric", alpha_a), t_a)
          @ spin.evolve(pulses.local_hamiltonian("symmetric", alpha_b), t_b))
print("two pulses vs one:", np.linalg.norm(single - double))

# alpha_b above alpha(0) cannot work; one extra box period lowers the target ratio
try:
    pulses.alpha_split(0.15, 0.1, 0, CZ_PARAMETERS)
except pulses.InfeasibleSplitError as err:
    print("infeasible:", err)
t_a, t_b = pulses.alpha_split(0.15, 0.05, 1, CZ_PARAMETERS)
print(f"with n = 1: t_a = {t_a:.4f}, t_b = {t_b:.4f}, extra time {t_a + t_b - CZ_PARAMETERS.theta_box:.4f}")
