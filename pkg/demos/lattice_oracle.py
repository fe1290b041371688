"""Brute-force lattice energy against the smooth short-distance model.

A 12x12x12 aluminium-like block of Gaussian nuclei is shifted against
itself along a direction that avoids lattice rows.
"""

import math

import numpy as np

from dpcollapse import default_database
from dpcollapse.dpenergy import PlateKind, _short_shape
from dpcollapse.oracle import dp_energy_numeric_oracle, lattice_from_material, lattice_saturation_energy

al = default_database()["aluminium"]
lattice = lattice_from_material(al, (12, 12, 12))
sat = lattice_saturation_energy(lattice)
u = np.array([1.0, math.sqrt(2.0), math.sqrt(3.0)])
u /= np.linalg.norm(u)

print(" ds/sigma   oracle/(T V)   model/(T V)")
for x in (0.01, 0.1, 0.5, 1, 2, 4, 8, 12, 20):
    e = dp_energy_numeric_oracle(lattice, x * al.sigma_n * u)
    print(f"{x:9.2f} {e / sat:14.6g} {_short_shape(PlateKind.DISPLACED, x):13.6g}")
