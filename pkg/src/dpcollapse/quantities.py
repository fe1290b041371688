"""Physical constants, unit tags and a small dimension-checked scalar type.

Every computation in the package runs on plain floats in SI units.
:class:`Quantity` exists for the boundaries (config files, material files,
CLI output) where values arrive with a unit suffix and must be validated
before they are reduced to SI.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DimensionError

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "G",
    "HBAR",
    "EPS0",
    "KB",
    "C_LIGHT",
    "ATOMIC_MASS",
    "Quantity",
    "DIMENSIONS",
    "unit_dimension",
    "unit_factor",
    "convert",
    "parse_quantity",
    "as_si",
    "format_si",
]


@dataclass(frozen=True)
class PhysicalConstants:
    G: float = 6.67430e-11  # m^3 kg^-1 s^-2
    hbar: float = 1.054571817e-34  # J s
    eps0: float = 8.8541878128e-12  # F/m
    kB: float = 1.380649e-23  # J/K
    c: float = 299792458.0  # m/s
    u: float = 1.66053906660e-27  # kg

    def __post_init__(self):
        for name in ("G", "hbar", "eps0", "kB", "c", "u"):
            if not getattr(self, name) > 0:
                raise ValueError(f"constant {name} must be positive")


CONSTANTS = PhysicalConstants()
G = CONSTANTS.G
HBAR = CONSTANTS.hbar
EPS0 = CONSTANTS.eps0
KB = CONSTANTS.kB
C_LIGHT = CONSTANTS.c
ATOMIC_MASS = CONSTANTS.u


# dimension name -> canonical SI tag
DIMENSIONS = {
    "dimensionless": "1",
    "time": "s",
    "length": "m",
    "area": "m2",
    "volume": "m3",
    "mass": "kg",
    "mass-density": "kg/m3",
    "energy": "J",
    "action": "J*s",
    "voltage": "V",
    "capacitance": "F",
    "resistance": "Ohm",
    "frequency": "Hz",
    "temperature": "K",
    "current": "A",
    "velocity": "m/s",
    "acceleration": "m/s2",
    "pressure": "Pa",
    "resistivity": "Ohm*m",
    "frequency-per-volume": "Hz/m3",
    "length-per-voltage": "m/V",
}

_PREFIX = {
    "p": -12,
    "n": -9,
    "u": -6,
    "m": -3,
    "c": -2,
    "": 0,
    "k": 3,
    "M": 6,
    "G": 9,
}


def _pow10(k: int) -> Fraction:
    return Fraction(10) ** k


def _build_units() -> dict[str, tuple[Fraction, str]]:
    units: dict[str, tuple[Fraction, str]] = {"1": (Fraction(1), "dimensionless"), "": (Fraction(1), "dimensionless")}
    units["%"] = (Fraction(1, 100), "dimensionless")

    def prefixed(base, dim, allowed, power=1, suffix=""):
        for p in allowed:
            units[f"{p}{base}{suffix}"] = (_pow10(_PREFIX[p] * power), dim)

    prefixed("s", "time", ["p", "n", "u", "m", ""])
    prefixed("m", "length", ["p", "n", "u", "m", "c", "", "k"])
    prefixed("m", "area", ["n", "u", "m", "c", ""], power=2, suffix="2")
    prefixed("m", "volume", ["n", "u", "m", "c", ""], power=3, suffix="3")
    units["angstrom"] = (_pow10(-10), "length")
    units["kg"] = (Fraction(1), "mass")
    units["g"] = (_pow10(-3), "mass")
    units["mg"] = (_pow10(-6), "mass")
    units["u"] = (Fraction(ATOMIC_MASS), "mass")
    units["kg/m3"] = (Fraction(1), "mass-density")
    units["g/cm3"] = (_pow10(3), "mass-density")
    prefixed("J", "energy", ["", "m", "u", "n", "p"])
    units["eV"] = (Fraction(1.602176634e-19), "energy")
    units["J*s"] = (Fraction(1), "action")
    units["Js"] = (Fraction(1), "action")
    units["hbar"] = (Fraction(HBAR), "action")
    prefixed("V", "voltage", ["", "m", "k"])
    prefixed("F", "capacitance", ["p", "n", "u", "m", ""])
    prefixed("Ohm", "resistance", ["", "k", "M"])
    prefixed("Hz", "frequency", ["", "k", "M", "G"])
    units["1/s"] = (Fraction(1), "frequency")
    units["K"] = (Fraction(1), "temperature")
    prefixed("A", "current", ["", "m", "u", "n"])
    units["m/s"] = (Fraction(1), "velocity")
    units["m/s2"] = (Fraction(1), "acceleration")
    prefixed("Pa", "pressure", ["", "k", "M", "G"])
    units["Ohm*m"] = (Fraction(1), "resistivity")
    units["Ohmm"] = (Fraction(1), "resistivity")
    units["Ohm*cm"] = (_pow10(-2), "resistivity")
    units["Ohmcm"] = (_pow10(-2), "resistivity")
    units["Hz/m3"] = (Fraction(1), "frequency-per-volume")
    units["Hz/cm3"] = (_pow10(6), "frequency-per-volume")
    units["kHz/cm3"] = (_pow10(9), "frequency-per-volume")
    units["MHz/cm3"] = (_pow10(12), "frequency-per-volume")
    units["m/V"] = (Fraction(1), "length-per-voltage")
    units["pm/V"] = (_pow10(-12), "length-per-voltage")
    units["cm/V"] = (_pow10(-2), "length-per-voltage")
    units["V-1cm"] = (_pow10(-2), "length-per-voltage")
    units["V-1*cm"] = (_pow10(-2), "length-per-voltage")
    return units


_UNITS = _build_units()

_ALIASES = [
    ("µ", "u"),
    ("μ", "u"),
    ("Å", "angstrom"),
    ("Ω", "Ohm"),
    ("ohm", "Ohm"),
    ("^", ""),
    ("**", ""),
    ("³", "3"),
    ("²", "2"),
    ("⁻¹", "-1"),
    ("·", "*"),
]


def _normalize(tag: str) -> str:
    tag = tag.strip()
    for a, b in _ALIASES:
        tag = tag.replace(a, b)
    # bare 'A' is ampere; angstrom is spelled out or written as Å
    return re.sub(r"\s+", "", tag).replace("Angstrom", "angstrom")


def _lookup(tag: str) -> tuple[Fraction, str]:
    key = _normalize(tag)
    try:
        return _UNITS[key]
    except KeyError:
        raise DimensionError(f"unknown unit '{tag}'") from None


def unit_dimension(tag: str) -> str:
    return _lookup(tag)[1]


def unit_factor(tag: str) -> float:
    """SI value of one ``tag``."""
    return float(_lookup(tag)[0])


@dataclass(frozen=True)
class Quantity:
    """A real value carrying a dimension and the unit it is expressed in."""

    value: float
    dimension: str
    unit: str = ""

    def __post_init__(self):
        if self.dimension not in DIMENSIONS:
            raise DimensionError(f"unknown dimension '{self.dimension}'")
        unit = self.unit or DIMENSIONS[self.dimension]
        if unit_dimension(unit) != self.dimension:
            raise DimensionError(
                f"unit '{unit}' is {unit_dimension(unit)}, not {self.dimension}"
            )
        object.__setattr__(self, "unit", unit)
        object.__setattr__(self, "value", float(self.value))

    @classmethod
    def of(cls, value: float, unit: str) -> "Quantity":
        return cls(value, unit_dimension(unit), unit)

    @property
    def si(self) -> float:
        return self.value * unit_factor(self.unit)

    def to(self, unit: str) -> float:
        return convert(self, unit).value

    def _check(self, other: "Quantity", op: str):
        if not isinstance(other, Quantity):
            raise DimensionError(f"cannot {op} {self.dimension} and a bare number")
        if other.dimension != self.dimension:
            raise DimensionError(f"cannot {op} {self.dimension} and {other.dimension}")

    def __add__(self, other):
        self._check(other, "add")
        return Quantity(self.value + convert(other, self.unit).value, self.dimension, self.unit)

    def __sub__(self, other):
        self._check(other, "subtract")
        return Quantity(self.value - convert(other, self.unit).value, self.dimension, self.unit)

    def __mul__(self, k):
        if isinstance(k, Quantity):
            raise DimensionError("products of quantities are not supported; work in SI floats")
        return Quantity(self.value * k, self.dimension, self.unit)

    __rmul__ = __mul__

    def __truediv__(self, k):
        if isinstance(k, Quantity):
            self._check(k, "divide")
            return self.si / k.si
        return Quantity(self.value / k, self.dimension, self.unit)

    def __neg__(self):
        return Quantity(-self.value, self.dimension, self.unit)

    def __lt__(self, other):
        self._check(other, "compare")
        return self.si < other.si

    def __le__(self, other):
        self._check(other, "compare")
        return self.si <= other.si

    def __gt__(self, other):
        self._check(other, "compare")
        return self.si > other.si

    def __ge__(self, other):
        self._check(other, "compare")
        return self.si >= other.si

    def __str__(self):
        return f"{self.value:g} {self.unit}"


def convert(q: Quantity, target_unit: str) -> Quantity:
    """Re-express ``q`` in ``target_unit``; the dimension must match."""
    f_from, dim_from = _lookup(q.unit)
    f_to, dim_to = _lookup(target_unit)
    if dim_from != dim_to:
        raise DimensionError(f"cannot convert {dim_from} ({q.unit}) to {dim_to} ({target_unit})")
    ratio = f_from / f_to
    if ratio.denominator == 1 or ratio.numerator == 1:
        value = q.value * ratio.numerator / ratio.denominator
    else:
        value = q.value * float(ratio)
    return Quantity(value, dim_to, target_unit)


_NUMBER = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(.*?)\s*$")


def parse_quantity(text: str, dimension: str | None = None) -> Quantity:
    """Parse ``"20 V"``, ``"0.2mm"``, ``"4.3 MHz/cm^3"`` into a Quantity.

    When ``dimension`` is given the unit must belong to it. A missing unit is
    only accepted for dimensionless values.
    """
    m = _NUMBER.match(text)
    if not m:
        raise DimensionError(f"cannot parse quantity '{text}'")
    value, unit = float(m.group(1)), m.group(2)
    if not unit:
        if dimension not in (None, "dimensionless"):
            raise DimensionError(f"'{text}' is missing a unit ({dimension} expected)")
        return Quantity(value, "dimensionless")
    q = Quantity.of(value, unit)
    if dimension is not None and q.dimension != dimension:
        raise DimensionError(f"'{text}' is {q.dimension}, expected {dimension}")
    return q


Number = Union[int, float]


def as_si(x: Union[Quantity, Number], dimension: str) -> float:
    """Reduce ``x`` to an SI float, checking the dimension of Quantities.

    Bare numbers are taken to be SI already.
    """
    if isinstance(x, Quantity):
        if x.dimension != dimension:
            raise DimensionError(f"expected {dimension}, got {x.dimension}")
        return x.si
    value = float(x)
    if math.isnan(value):
        raise DimensionError(f"{dimension} value is NaN")
    return value


def format_si(value: float) -> str:
    return f"{value:.9e}"
