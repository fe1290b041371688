"""Step-by-step solve of the 3 mm piezo capacitor.

Prints every intermediate quantity of the pipeline: intensities, charging
profiles, the reduction time, the reconfiguration solution and the final
probability of the enhanced state.
"""

import warnings

import numpy as np

from dpcollapse import load_config
from dpcollapse.errors import ModelWarning
from dpcollapse.experiments import approx_reduction_time_piezo, build_scenario, size_piezo_area_max
from dpcollapse.quantities import HBAR
from dpcollapse.reduction import born_limit_p2, reduce_scenario

US, ANG = 1e-6, 1e-10

cfg = load_config("fig6.cfg")
sc = build_scenario(cfg)
print("intensities (none, diode 1, diode 2):", np.round(sc.intensities, 4))
print(f"piezo capacitance: {cfg.capacitance * 1e12:.0f} pF")
for k, p in enumerate(sc.profiles[1:], start=1):
    print(f"state {k}: final displacement {p.amplitude / ANG:.1f} A, time constant {p.tau / US:.3f} us")

A_max = size_piezo_area_max(cfg)
with warnings.catch_warnings():
    warnings.simplefilter("ignore", ModelWarning)
    t_approx, branch = approx_reduction_time_piezo(cfg)
print(f"\nA / A_max = {cfg.solid.area / A_max:.2f}; closed form ({branch}) gives {t_approx / US:.3f} us")

for short in (True, False):
    r = reduce_scenario(sc, include_short_distance=short)
    label = "with" if short else "without"
    print(f"\n-- {label} the short-distance term --")
    print(f"reduction time      {r.t_bar_c / US:.4f} us")
    print(f"S_02 at reduction   {r.actions[0, 2] / HBAR:.3f} hbar")
    print(f"displacements       {r.displacements[1] / ANG:.2f} A, {r.displacements[2] / ANG:.2f} A")
    print(f"dI_c                {np.round(r.dI_c, 4)}")
    print(f"I+ / I-             {np.round(r.I_plus, 3)} / {np.round(r.I_minus, 3)}")
    print(f"p+                  {r.p_plus:.4f}")
    print(f"p2 = {r.p2_overall:.4f}  ->  p2/I2 = {r.p2_ratio:.4f}")

I2 = sc.intensities[2]
print(f"\nfar-limit reference 2I2/(1+I2) = {born_limit_p2(I2, True):.4f} (ratio {born_limit_p2(I2, True) / I2:.3f})")
