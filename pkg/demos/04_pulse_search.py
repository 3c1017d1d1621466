"""Search pulse phases for a CZ gate: genetic algorithm, then Nelder-Mead."""
import numpy as np

from dfgate import optimizer as opt
from dfgate.pulses import CZ_TEMPLATE

cfg = opt.SearchConfig(seed=0)
print("template:", ", ".join(t.value for t in CZ_TEMPLATE))

ga = opt.genetic_search(CZ_TEMPLATE, cfg, restart=0)
print(f"GA after {cfg.generations} generations: f_m = {ga.fm:.2e}, L = {ga.leakage:.2e}")

nm = opt.nelder_mead_refine(ga.thetas, CZ_TEMPLATE, cfg)
print(f"Nelder-Mead: f_m = {nm.fm:.2e}, L = {nm.leakage:.2e}, converged = {nm.converged}")
print("phases:", np.round(np.mod(nm.thetas, 2 * np.pi), 6))

# a template that cannot make CZ: the search stalls well above zero
bad = opt.search("times,box,ring", opt.quick_config(restarts=2, generations=100))
print(f"times, box, ring: best f_m = {bad[0].fm:.3f}")
