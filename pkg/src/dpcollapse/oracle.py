"""Brute-force DP energy of a Gaussian-smeared lattice displaced against itself.

Each nucleus is a Gaussian mass cloud of width ``σ_n``. Two such clouds at
distance r interact with ``u(r) = -G m² erf(r / 2σ_n) / r``, so the DP
energy of the lattice and its displaced copy is

    E(d) = Σ_ab [u(|r_ab - d|) - u(r_ab)]

summed over all ordered nucleus pairs including a = b. Pairs sharing the
same lattice offset k contribute identically, so the double sum collapses
to a sum over offsets weighted by ``Π (n_axis - |k_axis|)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .errors import DomainError, LatticeTooLargeError
from .materials import Material
from .quantities import G

__all__ = [
    "DEFAULT_NUCLEUS_CAP",
    "LatticeSpec",
    "lattice_from_material",
    "gaussian_pair_self_energy",
    "dp_energy_numeric_oracle",
    "lattice_saturation_energy",
]

DEFAULT_NUCLEUS_CAP = 20**3
SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class LatticeSpec:
    """Simple cubic block of identical Gaussian nuclei."""

    dimensions: tuple[int, int, int]
    lattice_constant: float  # m
    nucleus_mass: float  # kg
    sigma_n: float  # m
    cap: int = DEFAULT_NUCLEUS_CAP

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dimensions)
        if len(dims) != 3 or min(dims) < 1:
            raise DomainError("lattice dimensions must be three positive integers")
        object.__setattr__(self, "dimensions", dims)
        if not (self.lattice_constant > 0 and self.nucleus_mass > 0 and self.sigma_n > 0):
            raise DomainError("lattice constant, nucleus mass and sigma_n must be positive")
        if self.count > self.cap:
            raise LatticeTooLargeError(f"lattice has {self.count} nuclei; the cap is {self.cap}")

    @property
    def count(self) -> int:
        nx, ny, nz = self.dimensions
        return nx * ny * nz

    @property
    def volume(self) -> float:
        return self.count * self.lattice_constant**3

    @property
    def density(self) -> float:
        return self.nucleus_mass / self.lattice_constant**3


def lattice_from_material(material: Material, dimensions, cap: int = DEFAULT_NUCLEUS_CAP) -> LatticeSpec:
    """Lattice with the material's ḡ and σ_n and a nucleus mass giving its density."""
    return LatticeSpec(
        dimensions=dimensions,
        lattice_constant=material.g_bar,
        nucleus_mass=material.rho * material.g_bar**3,
        sigma_n=material.sigma_n,
        cap=cap,
    )


def gaussian_pair_self_energy(mass: float, sigma_n: float) -> float:
    """``G m² / (√π σ_n)``: DP energy of one Gaussian cloud moved far from itself."""
    return G * mass * mass / (SQRT_PI * sigma_n)


def _self_shape(z: np.ndarray) -> np.ndarray:
    """``2/√π - erf(z)/z``, with its Taylor series near zero."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < 0.05
    zs = z[small] ** 2
    out[small] = (2.0 / SQRT_PI) * zs * (1.0 / 3.0 - zs * (1.0 / 10.0 - zs * (1.0 / 42.0 - zs / 216.0)))
    zl = z[~small]
    out[~small] = 2.0 / SQRT_PI - erf(zl) / zl
    return out


def _offsets(dims):
    axes = [np.arange(-(n - 1), n) for n in dims]
    kx, ky, kz = np.meshgrid(*axes, indexing="ij")
    k = np.stack([kx.ravel(), ky.ravel(), kz.ravel()], axis=1)
    w = np.prod(np.array(dims)[None, :] - np.abs(k), axis=1).astype(float)
    return k, w


def dp_energy_numeric_oracle(lattice: LatticeSpec, ds) -> float:
    """DP energy (J) between the lattice and a copy shifted by the vector ``ds``.

    A scalar ``ds`` is taken as a shift along the z axis. Terms are combined
    with :func:`math.fsum`, so the result does not depend on summation order.
    """
    d = np.zeros(3)
    if np.ndim(ds) == 0:
        d[2] = float(ds)
    else:
        d = np.asarray(ds, dtype=float)
        if d.shape != (3,):
            raise DomainError("displacement must be a scalar or a 3-vector")
    dd = float(d @ d)
    if dd == 0.0:
        return 0.0
    sig2 = 2.0 * lattice.sigma_n
    gm2 = G * lattice.nucleus_mass**2

    k, w = _offsets(lattice.dimensions)
    zero = np.all(k == 0, axis=1)
    r = k[~zero] * lattice.lattice_constant
    w_cross = w[~zero]

    # self pairs: h(0) - h(|d|) written without cancellation
    terms = [lattice.count * float(_self_shape(np.array([math.sqrt(dd) / sig2]))[0]) / sig2]

    r1 = np.sqrt(np.einsum("ij,ij->i", r, r))
    r2 = np.sqrt(np.einsum("ij,ij->i", r - d, r - d))
    z1, z2 = r1 / sig2, r2 / sig2
    # h(r1) - h(r2) = (erf z1 - erf z2)/r1 + erf z2 (r2 - r1)/(r1 r2)
    r2_minus_r1 = (dd - 2.0 * (r @ d)) / (r1 + r2)
    near = z2 < 1.0
    cross = np.empty_like(r1)
    far = ~near
    cross[far] = (erf(z1[far]) - erf(z2[far])) / r1[far] + erf(z2[far]) * r2_minus_r1[far] / (r1[far] * r2[far])
    # a shifted nucleus lands on (or near) another site
    cross[near] = (_self_shape(z2[near]) - _self_shape(z1[near])) / sig2
    terms.extend((w_cross * cross).tolist())
    return gm2 * math.fsum(terms)


def lattice_saturation_energy(lattice: LatticeSpec) -> float:
    """``T̄_G V`` for the lattice, i.e. N times the single-cloud self energy."""
    return lattice.count * gaussian_pair_self_energy(lattice.nucleus_mass, lattice.sigma_n)
