"""Diósi-Penrose energies of superposed plates and plate composites.

A plate contributes a long-distance (continuum) term quadratic in the
displacement and, optionally, a short-distance term from the Gaussian
spread of its nuclei that saturates at ``T̄_G V``. Energies are in joules;
displacements in metres.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .errors import DomainError, ModelWarning
from .materials import Material
from .quantities import EPS0, G, HBAR

__all__ = [
    "PlateKind",
    "ALPHA_GEO",
    "PlateSpec",
    "PiezoCapacitorSpec",
    "MovablePlateCapacitorSpec",
    "geometric_function",
    "short_distance_regime",
    "dp_energy_short_distance",
    "dp_energy_long_distance",
    "dp_energy_plate",
    "dp_energy_piezo_capacitor",
    "dp_energy_solid",
    "SolidEnergy",
]

SQRT_PI = math.sqrt(math.pi)
# quadratic branch is trusted up to QUAD_MAX sigma_n, F_geo beyond GEO_MIN
QUAD_MAX = 1.0
GEO_MIN = 4.0
ASPECT_WARN = 5.0


class PlateKind(str, Enum):
    DISPLACED = "displaced"
    EXTENDED = "extended"


ALPHA_GEO = {PlateKind.DISPLACED: 1.0, PlateKind.EXTENDED: 1.0 / 3.0}

_EXT_C = 2.0 + SQRT_PI / 2.0 - SQRT_PI * math.log(4.0)


def _f_geo(kind: PlateKind, x: float) -> float:
    if kind is PlateKind.DISPLACED:
        return 1.0 - SQRT_PI / x
    return 1.0 - _EXT_C / x - SQRT_PI * math.log(x) / x


def _df_geo(kind: PlateKind, x: float) -> float:
    if kind is PlateKind.DISPLACED:
        return SQRT_PI / x**2
    return _EXT_C / x**2 - SQRT_PI * (1.0 - math.log(x)) / x**2


def geometric_function(kind, x: float) -> float:
    """Large-displacement shape of the short-distance term, ``x = Δs/σ_n``."""
    kind = PlateKind(kind)
    if not x > GEO_MIN:
        raise DomainError(f"geometric function is defined for Δs/σ_n > {GEO_MIN:g} only (got {x!r})")
    return _f_geo(kind, x)


def _blend_coefficients(kind: PlateKind):
    """Monotone cubic Hermite data on [QUAD_MAX, GEO_MIN] (Fritsch-Carlson limited)."""
    a = ALPHA_GEO[kind]
    f0 = a / 12.0 * QUAD_MAX**2
    m0 = a / 6.0 * QUAD_MAX
    f1 = _f_geo(kind, GEO_MIN)
    m1 = _df_geo(kind, GEO_MIN)
    h = GEO_MIN - QUAD_MAX
    delta = (f1 - f0) / h
    if delta <= 0:
        m0 = m1 = 0.0
    else:
        al, be = m0 / delta, m1 / delta
        s = al * al + be * be
        if s > 9.0:
            tau = 3.0 / math.sqrt(s)
            m0, m1 = tau * al * delta, tau * be * delta
    return f0, m0 * h, f1, m1 * h


_BLEND = {k: _blend_coefficients(k) for k in PlateKind}


def _short_shape(kind: PlateKind, x: float) -> float:
    """Short-distance term in units of ``T̄_G V`` at ``x = |Δs|/σ_n``."""
    if x <= QUAD_MAX:
        return ALPHA_GEO[kind] / 12.0 * x * x
    if x > GEO_MIN:
        return _f_geo(kind, x)
    f0, d0, f1, d1 = _BLEND[kind]
    s = (x - QUAD_MAX) / (GEO_MIN - QUAD_MAX)
    s2 = s * s
    s3 = s2 * s
    return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * d1


def short_distance_regime(ds: float, sigma_n: float) -> str:
    """'quadratic', 'blend' or 'geometric' for a displacement ``ds``."""
    x = abs(ds) / sigma_n
    if x <= QUAD_MAX:
        return "quadratic"
    if x > GEO_MIN:
        return "geometric"
    return "blend"


@dataclass(frozen=True)
class PlateSpec:
    kind: PlateKind
    area: float  # m^2
    thickness: float  # m
    material: Material

    def __post_init__(self):
        object.__setattr__(self, "kind", PlateKind(self.kind))
        if not (self.area > 0 and self.thickness > 0):
            raise DomainError("plate area and thickness must be positive")
        if math.sqrt(self.area) < ASPECT_WARN * self.thickness:
            warnings.warn(
                f"{self.material.name} plate: sqrt(area)={math.sqrt(self.area):.3g} m is not much larger "
                f"than thickness {self.thickness:.3g} m; plate formulas lose accuracy",
                ModelWarning,
                stacklevel=3,
            )

    @property
    def volume(self) -> float:
        return self.area * self.thickness

    @property
    def alpha_geo(self) -> float:
        return ALPHA_GEO[self.kind]

    @property
    def long_distance_coefficient(self) -> float:
        """``E_long / Δs²`` in J/m²."""
        return 2.0 * math.pi * self.alpha_geo * G * self.volume * self.material.rho**2

    @property
    def saturation_energy(self) -> float:
        """``T̄_G V`` in joules."""
        return self.material.tbar * HBAR * self.volume


def dp_energy_long_distance(plate: PlateSpec, ds: float) -> float:
    return plate.long_distance_coefficient * ds * ds


def dp_energy_short_distance(plate: PlateSpec, ds: float) -> float:
    """Short-distance term; warns when ``ds`` falls in the blended zone."""
    if ds < 0:
        raise DomainError("displacement must be non-negative")
    if short_distance_regime(ds, plate.material.sigma_n) == "blend":
        warnings.warn(
            f"Δs/σ_n = {ds / plate.material.sigma_n:.3g} lies between the quadratic and geometric "
            "branches; value is interpolated",
            ModelWarning,
            stacklevel=2,
        )
    return plate.saturation_energy * _short_shape(plate.kind, ds / plate.material.sigma_n)


def dp_energy_plate(plate: PlateSpec, ds: float, include_short_distance: bool = True) -> float:
    if ds < 0:
        raise DomainError("displacement must be non-negative")
    e = dp_energy_long_distance(plate, ds)
    if include_short_distance:
        e += plate.saturation_energy * _short_shape(plate.kind, ds / plate.material.sigma_n)
    return e


@dataclass(frozen=True)
class PiezoCapacitorSpec:
    """Piezo disc (extended plate) between two displaced metal plates."""

    piezo: PlateSpec
    plate: PlateSpec
    plate_count: int = 2

    def __post_init__(self):
        if self.piezo.kind is not PlateKind.EXTENDED or self.plate.kind is not PlateKind.DISPLACED:
            raise DomainError("piezo must be an extended plate and the electrodes displaced plates")
        if not math.isclose(self.piezo.area, self.plate.area, rel_tol=1e-12):
            raise DomainError("piezo and plates must have the same area")
        if self.plate_count != 2:
            raise DomainError("a piezo capacitor has exactly two plates")
        if self.piezo.material.d33 is None or self.piezo.material.eps_r is None:
            raise DomainError(f"{self.piezo.material.name} has no piezoelectric data (d33, eps_r)")

    @property
    def area(self) -> float:
        return self.piezo.area

    @property
    def components(self) -> tuple:
        return (self.piezo,) + (self.plate,) * self.plate_count

    @property
    def capacitance(self) -> float:
        return EPS0 * self.piezo.material.eps_r * self.area / self.piezo.thickness


@dataclass(frozen=True)
class MovablePlateCapacitorSpec:
    """Air-gap capacitor whose two plates are pulled together when charged."""

    plate: PlateSpec
    gap: float  # plate distance d, m
    plate_count: int = 2

    def __post_init__(self):
        if self.plate.kind is not PlateKind.DISPLACED:
            raise DomainError("movable plates are displaced plates")
        if not self.gap > 0:
            raise DomainError("plate gap must be positive")
        if self.plate_count != 2:
            raise DomainError("a movable-plate capacitor has exactly two plates")

    @property
    def area(self) -> float:
        return self.plate.area

    @property
    def components(self) -> tuple:
        return (self.plate,) * self.plate_count

    @property
    def capacitance(self) -> float:
        return EPS0 * self.area / self.gap


Solid = Union[PlateSpec, PiezoCapacitorSpec, MovablePlateCapacitorSpec]


def _components(solid) -> tuple:
    if isinstance(solid, PlateSpec):
        return (solid,)
    return tuple(solid.components)


def dp_energy_solid(solid, ds: float, include_short_distance: bool = True) -> float:
    """Energy of a solid whose components all shift by the same ``ds``."""
    return math.fsum(dp_energy_plate(p, ds, include_short_distance) for p in _components(solid))


def dp_energy_piezo_capacitor(spec: PiezoCapacitorSpec, ds_i: float, ds_j: float, include_short_distance: bool = True) -> float:
    if ds_i < 0 or ds_j < 0:
        raise DomainError("displacements must be non-negative")
    return dp_energy_solid(spec, abs(ds_i - ds_j), include_short_distance)


class SolidEnergy:
    """Fast scalar evaluator ``E(|Δs_i - Δs_j|)`` for quadrature integrands.

    Sums the same terms as :func:`dp_energy_solid` with the per-component
    constants hoisted out of the loop.
    """

    def __init__(self, solid, include_short_distance: bool = True):
        comps = _components(solid)
        self.include_short_distance = include_short_distance
        self.long_coefficient = math.fsum(p.long_distance_coefficient for p in comps)
        self.terms = []
        if include_short_distance:
            merged: dict = {}
            for p in comps:
                key = (p.kind, p.material.sigma_n)
                merged[key] = merged.get(key, 0.0) + p.saturation_energy
            self.terms = [(kind, sigma, tv) for (kind, sigma), tv in merged.items()]
        self.sigma_max = max(p.material.sigma_n for p in comps)
        self.sigmas = sorted({p.material.sigma_n for p in comps})

    def __call__(self, ds: float) -> float:
        ds = abs(ds)
        e = self.long_coefficient * ds * ds
        for kind, sigma, tv in self.terms:
            e += tv * _short_shape(kind, ds / sigma)
        return e

    def short_distance_saturation(self) -> float:
        return sum(tv for _, _, tv in self.terms)
