"""Average process fidelity and leakage under coupling jitter and quasi-static fields.

Writes nothing; prints one table per sweep plus the quadratic fit 1 - c s^2.
Set DFGATE_THREADS to limit worker processes.
"""
import os

import numpy as np

from dfgate import noise

workers = int(os.environ.get("DFGATE_THREADS", os.cpu_count() or 1))
samples = 100  # 250 for publication-size runs


def show(title, cfg):
    pts = noise.noise_sweep(cfg, workers=workers)
    print(f"\n{title}")
    print("  strength   mean F_p   stderr     leakage    1-(1-L)F")
    for p in pts:
        print(f"  {p.strength:<9.4f}  {p.mean_fp:.5f}  {p.stderr_fp:.1e}   {p.mean_leakage:.2e}"
              f"   {p.p_e_bound:.2e}")
    print(f"  fit over {cfg.fit_window}: c = {noise.quadratic_fit(pts, cfg.fit_window):.1f}")


show("coupling jitter, 4-qubit",
     noise.NoiseConfig("coupling", np.linspace(0, 0.05, 6), samples, seed=7))
show("coupling jitter on the compiled pulses instead",
     noise.NoiseConfig("coupling", np.linspace(0, 0.05, 6), samples, seed=7,
                       coupling_model="five"))
for enc in (4, 3):
    for kind in ("collective", "individual"):
        show(f"{kind} fields, {enc}-qubit",
             noise.NoiseConfig(kind, np.linspace(0, 0.01, 5), samples, seed=7, encoding=enc))
