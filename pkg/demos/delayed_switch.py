"""Probability of state 2 against the switch delay in the delayed experiment.

States 0 and 1 form a two-state superposition that reduces on its own at
t01. A delay shorter than that lets state 2 join the competition; a longer
one leaves it with its plain Born weight.
"""

import warnings

import numpy as np

from dpcollapse import load_config
from dpcollapse.errors import ModelWarning
from dpcollapse.experiments import delayed_two_state_curve, two_state_reduction_time

cfg = load_config("delayed.cfg")
t01 = two_state_reduction_time(cfg)
print(f"two-state reduction time t01 = {t01 * 1e6:.4f} us")

delays = np.linspace(0.0, 1.4 * t01, 29)
with warnings.catch_warnings():
    warnings.simplefilter("ignore", ModelWarning)
    curve = delayed_two_state_curve(cfg, delays)

I2 = cfg.R2 * cfg.diode2.p_QE
for dt, p2 in curve:
    bar = "#" * int(round(p2 * 100))
    print(f"{dt * 1e6:7.3f} us  p2 = {p2:.4f}  {bar}")
print(f"\nBorn value I2 = {I2:.2f}. Just before t01 states 1 and 2 compete and p2 dips below it.")
