"""Material database and per-material Diósi-Penrose constants."""

from __future__ import annotations

import math
import os
from collections.abc import Mapping
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path
from typing import Iterator, Optional

from .errors import ConfigError, DomainError
from .quantities import G, HBAR, KB, Quantity
from .textfile import parse_records

__all__ = [
    "Material",
    "MaterialDatabase",
    "tbar_g",
    "sigma_n_from_debye",
    "builtin_materials",
    "load_materials",
    "default_database",
    "ENV_VAR",
    "ROOM_TEMPERATURE",
]

ENV_VAR = "DPCOLLAPSE_MATERIALS"
ROOM_TEMPERATURE = 300.0


def tbar_g(rho: float, q_hat: float, g_bar: float, sigma_n: float) -> float:
    """Characteristic DP energy density divided by hbar, in 1/(s m^3).

    ``G q ρ² ḡ³ / (√π σ_n)`` is the energy density itself; it is divided by
    hbar here so the result compares directly with MHz/cm³ tables.
    """
    for name, v in (("rho", rho), ("q_hat", q_hat), ("g_bar", g_bar), ("sigma_n", sigma_n)):
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v!r}")
    return G * q_hat * rho**2 * g_bar**3 / (math.sqrt(math.pi) * sigma_n) / HBAR


def sigma_n_from_debye(T: float, m_bar: float, theta_debye: float) -> float:
    """Thermal spread of nuclear positions from the Debye temperature.

    Thermal velocity ``sqrt(3 kB T / m)`` times the phonon time scale
    ``hbar / (kB Θ_D)``.
    """
    for name, v in (("T", T), ("m_bar", m_bar), ("theta_debye", theta_debye)):
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v!r}")
    return math.sqrt(3.0 * KB * T / m_bar) * HBAR / (KB * theta_debye)


@dataclass(frozen=True)
class Material:
    name: str
    rho: float  # kg/m^3
    g_bar: float  # m
    sigma_n: float  # m
    m_bar: float  # kg
    tbar_g_over_hbar: Optional[float] = None  # 1/(s m^3); None when not tabulated
    q_hat: Optional[float] = None  # 1 for single-element solids
    theta_debye: Optional[float] = None  # K
    sound_speed_longitudinal: Optional[float] = None  # m/s
    d33: Optional[float] = None  # m/V
    eps_r: Optional[float] = None
    elastic_modulus: Optional[float] = None  # Pa
    resistivity: Optional[float] = None  # Ohm m

    def __post_init__(self):
        for name in ("rho", "g_bar", "sigma_n", "m_bar"):
            v = getattr(self, name)
            if not v > 0:
                raise DomainError(f"{self.name}: {name} must be positive, got {v!r}")
        if not self.sigma_n < self.g_bar:
            raise DomainError(f"{self.name}: sigma_n must be smaller than g_bar")
        for name in ("tbar_g_over_hbar", "q_hat", "theta_debye", "sound_speed_longitudinal", "eps_r"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise DomainError(f"{self.name}: {name} must be positive, got {v!r}")

    @property
    def tbar(self) -> float:
        """Tabulated T̄_G/ħ, falling back to the formula when q̂ is known."""
        if self.tbar_g_over_hbar is not None:
            return self.tbar_g_over_hbar
        if self.q_hat is not None:
            return tbar_g(self.rho, self.q_hat, self.g_bar, self.sigma_n)
        raise DomainError(f"{self.name}: no DP energy density tabulated and q_hat unknown")

    def computed_tbar(self) -> float:
        if self.q_hat is None:
            raise DomainError(f"{self.name}: q_hat unknown")
        return tbar_g(self.rho, self.q_hat, self.g_bar, self.sigma_n)


# file key -> (field name, dimension)
_FIELDS = {
    "rho": ("rho", "mass-density"),
    "g_bar": ("g_bar", "length"),
    "sigma_n": ("sigma_n", "length"),
    "m_bar": ("m_bar", "mass"),
    "tbar_g_over_hbar": ("tbar_g_over_hbar", "frequency-per-volume"),
    "q_hat": ("q_hat", "dimensionless"),
    "theta_debye": ("theta_debye", "temperature"),
    "sound_speed_longitudinal": ("sound_speed_longitudinal", "velocity"),
    "d33": ("d33", "length-per-voltage"),
    "eps_r": ("eps_r", "dimensionless"),
    "elastic_modulus": ("elastic_modulus", "pressure"),
    "resistivity": ("resistivity", "resistivity"),
}
_REQUIRED = ("rho", "g_bar", "sigma_n", "m_bar")


class MaterialDatabase(Mapping):
    """Read-only name -> Material mapping; lookups ignore case."""

    def __init__(self, materials):
        self._items: dict[str, Material] = {}
        for m in materials:
            self._items[m.name.lower()] = m

    def __getitem__(self, name: str) -> Material:
        try:
            return self._items[name.lower()]
        except KeyError:
            known = ", ".join(m.name for m in self._items.values())
            raise KeyError(f"unknown material '{name}' (known: {known})") from None

    def __iter__(self) -> Iterator[str]:
        return (m.name for m in self._items.values())

    def __len__(self) -> int:
        return len(self._items)

    def merged(self, other: "MaterialDatabase") -> "MaterialDatabase":
        return MaterialDatabase([*self.values(), *other.values()])


def parse_materials(text: str, source=None) -> MaterialDatabase:
    records: dict[str, dict] = {}
    first_line: dict[str, int] = {}
    for e in parse_records(text, source):
        if e.section is None:
            raise ConfigError("entry outside a [material] section", key=e.key, line=e.line, source=source)
        if e.key not in _FIELDS:
            raise ConfigError("unknown material key", key=e.key, line=e.line, source=source)
        field, dim = _FIELDS[e.key]
        records.setdefault(e.section, {})[field] = e.si(dim, source)
        first_line.setdefault(e.section, e.line)
    out = []
    for name, values in records.items():
        missing = [k for k in _REQUIRED if k not in values]
        if missing:
            raise ConfigError(f"material '{name}' lacks {', '.join(missing)}", line=first_line[name], source=source)
        try:
            out.append(Material(name=name, **values))
        except DomainError as exc:
            raise ConfigError(str(exc), line=first_line[name], source=source) from None
    return MaterialDatabase(out)


def dump_materials(db: Mapping) -> str:
    """Serialize to the material file format in SI units."""
    lines = []
    units = {
        "rho": "kg/m3",
        "g_bar": "m",
        "sigma_n": "m",
        "m_bar": "kg",
        "tbar_g_over_hbar": "Hz/m3",
        "q_hat": "",
        "theta_debye": "K",
        "sound_speed_longitudinal": "m/s",
        "d33": "m/V",
        "eps_r": "",
        "elastic_modulus": "Pa",
        "resistivity": "Ohm*m",
    }
    for m in db.values():
        lines.append(f"[{m.name}]")
        for f in fields(Material):
            if f.name == "name":
                continue
            v = getattr(m, f.name)
            if v is None:
                continue
            lines.append(f"{f.name} = {v!r} {units[f.name]}".rstrip())
        lines.append("")
    return "\n".join(lines)


def load_materials(path) -> MaterialDatabase:
    path = Path(path)
    return parse_materials(path.read_text(encoding="utf-8"), path.name)


def builtin_materials() -> list[Material]:
    text = resources.files("dpcollapse").joinpath("data/materials.txt").read_text(encoding="utf-8")
    return list(parse_materials(text, "materials.txt").values())


def default_database() -> MaterialDatabase:
    """Database from ``$DPCOLLAPSE_MATERIALS`` if set, else the packaged file."""
    override = os.environ.get(ENV_VAR)
    if override:
        return load_materials(override)
    return MaterialDatabase(builtin_materials())


def describe(m: Material) -> dict:
    """Human-oriented summary in the units the literature uses."""
    out = {
        "name": m.name,
        "rho [g/cm3]": Quantity.of(m.rho, "kg/m3").to("g/cm3"),
        "g_bar [A]": m.g_bar / 1e-10,
        "sigma_n [A]": m.sigma_n / 1e-10,
    }
    try:
        out["tbar_g/hbar [MHz/cm3]"] = m.tbar / 1e12
    except DomainError:
        out["tbar_g/hbar [MHz/cm3]"] = None
    if m.d33 is not None:
        out["d33 [1e-10 cm/V]"] = m.d33 / 1e-12
    if m.eps_r is not None:
        out["eps_r"] = m.eps_r
    return out
