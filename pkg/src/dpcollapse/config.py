"""Experiment configuration files.

A configuration is a flat list of ``key.path = value unit`` records::

    kind = piezo-capacitor
    diode2.V_E = 20 V
    solid.diameter = 3 mm
    solid.piezo.material = PIC-153

Every numeric value needs a unit suffix (``1`` for dimensionless numbers).
Photodiode fields left out fall back to the thick silicon SPAD defaults.
"""

from __future__ import annotations

import math
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional

from .dpenergy import MovablePlateCapacitorSpec, PiezoCapacitorSpec, PlateSpec
from .errors import ConfigError, DPCollapseError
from .experiments import ExperimentConfig, PhotodiodeParams
from .materials import MaterialDatabase, default_database
from .quantities import DIMENSIONS
from .reduction import ComponentBudget, default_budget
from .textfile import parse_records

__all__ = ["KEYS", "load_config", "parse_config", "config_from_values", "shipped_config", "SHIPPED_CONFIGS"]

_DIODE_FIELDS = {
    "V_B": "voltage",
    "V_E": "voltage",
    "p_QE": "dimensionless",
    "f_DC": "frequency",
    "R_d": "resistance",
    "t_res": "time",
    "I_q": "current",
}

# key path -> dimension, or one of the non-numeric types 'str' / 'bool'
KEYS: dict[str, str] = {
    "kind": "str",
    "name": "str",
    "beam_splitter.T2": "dimensionless",
    "beam_splitter.R2": "dimensionless",
    "solid.area": "area",
    "solid.diameter": "length",
    "solid.piezo.material": "str",
    "solid.piezo.d": "length",
    "solid.plate.material": "str",
    "solid.plate.d": "length",
    "solid.gap": "length",
    "circuit.R": "resistance",
    "circuit.C_bias": "capacitance",
    "circuit.t_connected": "time",
    "circuit.latching_time": "time",
    "circuit.R_switch": "resistance",
    "circuit.V2": "voltage",
    "circuit.delay": "time",
    "model.short_distance": "bool",
    "model.bias_attenuation": "bool",
    "model.horizon": "time",
    "budget.enabled": "bool",
}
for _d in ("diode1", "diode2"):
    for _f, _dim in _DIODE_FIELDS.items():
        KEYS[f"{_d}.{_f}"] = _dim

SHIPPED_CONFIGS = ("fig6.cfg", "fig8.cfg", "delayed.cfg")


def _key_dimension(key: str) -> Optional[str]:
    if key in KEYS:
        return KEYS[key]
    if key.startswith("budget.") and key != "budget.enabled":
        return "time"
    return None


def _read_values(entries, source) -> dict:
    """Typed values keyed by path, with the line each came from."""
    values: dict = {}
    for e in entries:
        if e.section is not None:
            raise ConfigError("sections are not used in experiment configs", key=e.key, line=e.line, source=source)
        dim = _key_dimension(e.key)
        if dim is None:
            raise ConfigError("unknown key", key=e.key, line=e.line, source=source)
        if dim == "str":
            v = e.text
        elif dim == "bool":
            v = e.boolean(source)
        else:
            v = e.si(dim, source)
        values[e.key] = (v, e.line)
    return values


def config_from_values(values: Mapping, source=None, materials: Optional[MaterialDatabase] = None) -> ExperimentConfig:
    """Build a validated config from ``{key: value}`` or ``{key: (value, line)}``."""
    vals = {k: (v if isinstance(v, tuple) else (v, None)) for k, v in values.items()}
    db = materials if materials is not None else default_database()

    def get(key, default=None):
        return vals[key][0] if key in vals else default

    def fail(key, msg):
        line = vals[key][1] if key in vals else None
        return ConfigError(msg, key=key, line=line, source=source)

    for key in vals:
        if _key_dimension(key) is None:
            raise fail(key, "unknown key")

    if "kind" not in vals:
        raise ConfigError("missing required key", key="kind", source=source)
    kind = get("kind")

    def material(key):
        name = get(key)
        if name is None:
            raise ConfigError("missing required key", key=key, source=source)
        try:
            return db[name]
        except KeyError:
            raise fail(key, f"unknown material '{name}'") from None

    def required(key):
        if key not in vals:
            raise ConfigError("missing required key", key=key, source=source)
        return get(key)

    # probabilities first: their errors are easier to read than a missing-geometry one
    T2, R2 = get("beam_splitter.T2", 0.7), get("beam_splitter.R2", 0.3)
    for key, v in (("beam_splitter.T2", T2), ("beam_splitter.R2", R2)):
        if not 0.0 <= v <= 1.0:
            raise fail(key, f"must lie in [0, 1], got {v!r}")
    if T2 + R2 > 1.0 + 1e-12:
        raise fail("beam_splitter.R2" if "beam_splitter.R2" in vals else "beam_splitter.T2", f"T2 + R2 = {T2 + R2:g} exceeds 1")

    if "solid.area" in vals and "solid.diameter" in vals:
        raise fail("solid.diameter", "give either solid.area or solid.diameter, not both")
    if "solid.diameter" in vals:
        area = math.pi * (get("solid.diameter") / 2.0) ** 2
    else:
        area = required("solid.area")

    try:
        plate = PlateSpec("displaced", area, required("solid.plate.d"), material("solid.plate.material"))
        if kind == "movable-plates":
            solid = MovablePlateCapacitorSpec(plate, required("solid.gap"))
        else:
            piezo = PlateSpec("extended", area, required("solid.piezo.d"), material("solid.piezo.material"))
            solid = PiezoCapacitorSpec(piezo, plate)
    except ConfigError:
        raise
    except DPCollapseError as exc:
        raise ConfigError(str(exc), key="solid", source=source) from None

    def diode(prefix, base):
        kw = {f: get(f"{prefix}.{f}") for f in _DIODE_FIELDS if f"{prefix}.{f}" in vals}
        try:
            return PhotodiodeParams(**{**base, **kw})
        except DPCollapseError as exc:
            raise ConfigError(str(exc), key=prefix, source=source) from None

    if get("budget.enabled", True):
        budget = default_budget()
        for key in sorted(k for k in vals if k.startswith("budget.") and k != "budget.enabled"):
            name = key.split(".", 1)[1]
            try:
                budget = budget.replace(name, get(key))
            except KeyError:
                budget = ComponentBudget(budget.components + ((name, get(key)),))
            except DPCollapseError as exc:
                raise fail(key, str(exc)) from None
    else:
        budget = None

    kw = dict(
        kind=kind,
        solid=solid,
        T2=T2,
        R2=R2,
        diode1=diode("diode1", dict(V_E=10.0, p_QE=0.35)),
        diode2=diode("diode2", dict(V_E=20.0, p_QE=0.70)),
        R_series=get("circuit.R", 0.0 if kind == "movable-plates" else 940.0),
        C_bias=get("circuit.C_bias"),
        bias_attenuation=get("model.bias_attenuation", True),
        budget=budget,
        delay=get("circuit.delay", 0.0),
        V2_charge=get("circuit.V2"),
        R_switch=get("circuit.R_switch"),
        t_connected=get("circuit.t_connected", 2e-6),
        latching_time=get("circuit.latching_time"),
        include_short_distance=get("model.short_distance", True),
        horizon=get("model.horizon", 10.0),
        name=get("name", Path(str(source)).stem if source else ""),
    )
    try:
        return ExperimentConfig(**kw)
    except ConfigError:
        raise
    except DPCollapseError as exc:
        msg = str(exc)
        key = "beam_splitter" if ("T²" in msg or "T2" in msg or "R2" in msg) else None
        raise ConfigError(msg, key=key, source=source) from None


def parse_config(text: str, source=None, overrides: Optional[Mapping] = None, materials=None) -> ExperimentConfig:
    """Parse config text; ``overrides`` maps key paths to SI values (or strings)."""
    values = _read_values(parse_records(text, source), source)
    for key, v in (overrides or {}).items():
        if _key_dimension(key) is None:
            raise ConfigError("unknown key", key=key, source="override")
        # an overridden area replaces a diameter and vice versa
        twin = {"solid.area": "solid.diameter", "solid.diameter": "solid.area"}.get(key)
        values.pop(twin, None)
        values[key] = (v, None)
    return config_from_values(values, source, materials)


def _resolve(path) -> Path:
    p = Path(path)
    if p.exists():
        return p
    if p.parent == Path(".") and p.name in SHIPPED_CONFIGS:
        return Path(str(resources.files("dpcollapse") / "configs" / p.name))
    raise ConfigError("file not found", source=str(path))


def load_config(path, overrides: Optional[Mapping] = None, materials=None) -> ExperimentConfig:
    """Load a config file; bare shipped names such as ``fig6.cfg`` resolve to the packaged copies."""
    p = _resolve(path)
    return parse_config(p.read_text(encoding="utf-8"), p.name, overrides, materials)


def shipped_config(name: str) -> ExperimentConfig:
    return load_config(name)


def config_keys_text() -> str:
    """One line per known key with its SI unit (used by ``--help`` texts)."""
    lines = []
    for k, dim in KEYS.items():
        unit = DIMENSIONS.get(dim, dim)
        lines.append(f"{k} [{unit}]")
    return "\n".join(lines)
