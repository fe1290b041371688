"""Reduction time against piezo area.

Small discs charge fully before reduction, so t_C falls as 1/A. Large discs
charge slowly, so t_C grows again. The minimum sits near A_max.
"""

import warnings

import numpy as np

from dpcollapse import load_config, run_experiment
from dpcollapse.errors import ModelWarning
from dpcollapse.experiments import size_piezo_area_max

base = load_config("fig6.cfg")
A_max = size_piezo_area_max(base)
print(f"A_max = {A_max * 1e6:.2f} mm2\n")
print(" area/mm2   t_C/us   p2/I2   ds1/A    ds2/A")
for area in np.geomspace(1e-6, 20e-6, 12):
    cfg = load_config("fig6.cfg", overrides={"solid.area": float(area)})
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ModelWarning)
        r = run_experiment(cfg)
    print(f"{area * 1e6:8.2f} {r.t_bar_c * 1e6:8.4f} {r.p2_ratio:7.4f} {r.ds1 * 1e10:7.2f} {r.ds2 * 1e10:8.2f}")
