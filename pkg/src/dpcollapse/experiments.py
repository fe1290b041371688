"""Device models and end-to-end runs of the proposed experiments.

Covers the piezo capacitor and movable-plates setups, the reference
measurement with an aperture, the delayed-switch lifetime experiment and
the EPR signalling ratio, plus the closed-form sizing formulas used to
dimension them.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from .dpenergy import MovablePlateCapacitorSpec, PiezoCapacitorSpec
from .dynamics import (
    DisplacementProfile,
    ScenarioSet,
    movable_plate_profile,
    piezo_displacement_profile,
)
from .errors import DomainError, ModelWarning
from .quantities import C_LIGHT, EPS0, G, HBAR
from .reduction import (
    DECORRELATION_FACTOR,
    DEFAULT_HORIZON,
    ComponentBudget,
    ReductionResult,
    default_budget,
    find_reduction_time,
    reduce_scenario,
)

__all__ = [
    "PhotodiodeParams",
    "ExperimentConfig",
    "ExperimentReport",
    "KINDS",
    "scenario_intensities",
    "bias_attenuation",
    "readout_voltage_drop",
    "dark_count_probability",
    "size_piezo_area_max",
    "approx_reduction_time_piezo",
    "approx_displacement_piezo",
    "approx_movable_plates",
    "resistor_equation",
    "choose_resistor",
    "build_scenario",
    "run_experiment",
    "two_state_reduction_time",
    "delayed_two_state_curve",
    "signalling_chain",
    "signalling_ratio",
    "signalling_arm_margin",
    "NEAR_AMAX_BAND",
]

KINDS = ("piezo-capacitor", "movable-plates", "delayed-two-state", "signalling", "reference-aperture")

# ε of the "A ≈ A_max" branch domain [A_max(1-ε), A_max]
NEAR_AMAX_BAND = 0.6


@dataclass(frozen=True)
class PhotodiodeParams:
    """Thick silicon SPAD operated in gated mode."""

    V_B: float = 420.0  # V
    V_E: float = 20.0  # V
    p_QE: float = 0.70
    f_DC: float = 20e3  # Hz
    R_d: float = 500.0  # Ohm
    t_res: float = 170e-12  # s
    I_q: float = 1e-4  # A

    def __post_init__(self):
        if not 0.0 <= self.p_QE <= 1.0:
            raise DomainError(f"quantum efficiency must lie in [0, 1], got {self.p_QE!r}")
        for name in ("V_B", "V_E", "R_d", "t_res", "I_q"):
            if not getattr(self, name) > 0:
                raise DomainError(f"photodiode {name} must be positive")
        if self.f_DC < 0:
            raise DomainError("dark count rate must be non-negative")

    def replace(self, **changes) -> "PhotodiodeParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    solid: object  # PiezoCapacitorSpec or MovablePlateCapacitorSpec
    T2: float = 0.7
    R2: float = 0.3
    diode1: PhotodiodeParams = PhotodiodeParams(V_E=10.0, p_QE=0.35)
    diode2: PhotodiodeParams = PhotodiodeParams(V_E=20.0, p_QE=0.70)
    R_series: float = 940.0  # Ohm, behind photodiode 1
    C_bias: Optional[float] = None  # F; None means C >> C_p
    bias_attenuation: bool = True
    budget: Optional[ComponentBudget] = field(default_factory=default_budget)
    delay: float = 0.0  # s, delayed experiment
    V2_charge: Optional[float] = None  # V, delayed experiment
    R_switch: Optional[float] = None  # Ohm, defaults to photodiode 2's R_d
    t_connected: float = 2e-6  # s, photodiodes connected to their bias bank
    latching_time: Optional[float] = None  # s
    include_short_distance: bool = True
    horizon: float = DEFAULT_HORIZON
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown experiment kind '{self.kind}' (expected one of {', '.join(KINDS)})")
        for name in ("T2", "R2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {v!r}")
        if self.T2 + self.R2 > 1.0 + 1e-12:
            raise DomainError(f"beam splitter T² + R² = {self.T2 + self.R2:g} exceeds 1")
        if self.kind == "movable-plates":
            if not isinstance(self.solid, MovablePlateCapacitorSpec):
                raise DomainError("movable-plates experiments need a movable-plate capacitor")
        elif not isinstance(self.solid, PiezoCapacitorSpec):
            raise DomainError(f"{self.kind} experiments need a piezo capacitor")
        if self.R_series < 0:
            raise DomainError("series resistance must be non-negative")
        if self.C_bias is not None and not self.C_bias > 0:
            raise DomainError("bias capacitance must be positive")
        if self.kind == "delayed-two-state" and self.V2_charge is None:
            raise DomainError("the delayed experiment needs the charging voltage V2_charge")
        if self.delay < 0:
            raise DomainError("delay must be non-negative")

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    @property
    def capacitance(self) -> float:
        return self.solid.capacitance

    @property
    def alpha(self) -> float:
        """Bias-bank attenuation applied to excess voltages (1 when disabled)."""
        if not self.bias_attenuation or self.C_bias is None:
            return 1.0
        return bias_attenuation(self.C_bias, self.capacitance)


# ---------------------------------------------------------------------------
# small device formulas


def scenario_intensities(T2: float, R2: float, p_QE1: float, p_QE2: float) -> np.ndarray:
    """Intensities of no detection, detection in photodiode 1 and in photodiode 2."""
    for name, v in (("T2", T2), ("R2", R2), ("p_QE1", p_QE1), ("p_QE2", p_QE2)):
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"{name} must lie in [0, 1], got {v!r}")
    I1 = T2 * p_QE1
    I2 = R2 * p_QE2
    if I1 + I2 > 1.0 + 1e-12:
        raise DomainError(f"detection probabilities sum to {I1 + I2:g} > 1")
    return np.array([max(1.0 - I1 - I2, 0.0), I1, I2])


def bias_attenuation(C_bias: Optional[float], C_p: float) -> float:
    """``C / (C + C_p)``; 1 for an unbounded bank."""
    if C_bias is None or math.isinf(C_bias):
        return 1.0
    if not (C_bias > 0 and C_p > 0):
        raise DomainError("capacitances must be positive")
    return C_bias / (C_bias + C_p)


def readout_voltage_drop(V_E: float, C_bias: Optional[float], C_p: float) -> float:
    """Drop ``V_E C_p / (C + C_p)`` of the bank voltage after charging the piezo."""
    if C_bias is None or math.isinf(C_bias) or C_p == 0:
        return 0.0
    if C_bias <= 0 or C_p < 0:
        raise DomainError("capacitances must be positive")
    return V_E * C_p / (C_bias + C_p)


def dark_count_probability(f_DC: float, t_connected: float) -> float:
    if f_DC < 0 or t_connected < 0:
        raise DomainError("dark count rate and connection time must be non-negative")
    return min(f_DC * t_connected, 1.0)


# ---------------------------------------------------------------------------
# piezo sizing


def _piezo_parameters(config: ExperimentConfig, V: Optional[float] = None, R_d: Optional[float] = None):
    spec = config.solid
    if not isinstance(spec, PiezoCapacitorSpec):
        raise DomainError("piezo sizing needs a piezo capacitor")
    pm = spec.piezo.material
    a = config.alpha
    V = config.diode2.V_E if V is None else V
    R_d = config.diode2.R_d if R_d is None else R_d
    d, dm = spec.piezo.thickness, spec.plate.thickness
    rp, rm = pm.rho, spec.plate.material.rho
    beta = 1.0 + 6.0 * dm * rm**2 / (d * rp**2)
    return dict(
        A=spec.area, d=d, rho_p=rp, beta=beta, d33=pm.d33, eps_r=a * pm.eps_r, V=a * V, R_d=R_d
    )


def size_piezo_area_max(config: ExperimentConfig) -> float:
    """Largest piezo area that still charges fully before reduction (m²)."""
    p = _piezo_parameters(config)
    return math.sqrt(9.0 * HBAR / (math.pi * G * EPS0 * p["eps_r"] * p["beta"] * p["R_d"])) / (
        p["rho_p"] * p["d33"] * p["V"]
    )


def _branch(A: float, A_max: float) -> tuple[str, bool]:
    """(branch, inside_its_domain) for the three-regime approximations.

    Domains: small-A below A_max/4, near-A_max on [A_max(1-ε), A_max], large-A
    above 2 A_max. In the gaps the nearest branch is used: the near branch up
    to A_max(1+ε), since the 3 mm disc (A ≈ 1.5 A_max) is treated as A ≈ A_max.
    """
    lo = A_max * (1 - NEAR_AMAX_BAND)
    if A < A_max / 4:
        return "small-A", True
    if A > 2 * A_max:
        return "large-A", True
    if lo <= A <= A_max:
        return "near-A_max", True
    if A < lo:
        return ("small-A" if math.log(A / (A_max / 4)) < math.log(lo / A) else "near-A_max"), False
    return ("near-A_max" if A <= A_max * (1 + NEAR_AMAX_BAND) else "large-A"), False


def approx_reduction_time_piezo(config: ExperimentConfig, branch: Optional[str] = None) -> tuple[float, str]:
    """Closed-form t̄_C of the piezo capacitor and the branch it came from.

    The near-A_max branch carries a factor 2 relative to the printed
    formula; without it the branch gives half the quoted 0.86 µs.
    """
    p = _piezo_parameters(config)
    A_max = size_piezo_area_max(config)
    if branch is None:
        branch, exact = _branch(p["A"], A_max)
        if not exact:
            warnings.warn(
                f"A/A_max = {p['A'] / A_max:.3g} lies between approximation domains; using the {branch} branch",
                ModelWarning,
                stacklevel=2,
            )
    k = math.pi * G * p["rho_p"] ** 2 * p["beta"]
    if branch == "small-A":
        t = 6.0 * HBAR / (k * p["d"] * p["d33"] ** 2 * p["V"] ** 2 * p["A"])
    elif branch == "near-A_max":
        t = 2.0 * math.sqrt(9.0 * HBAR * EPS0 * p["R_d"] * p["eps_r"] / (math.pi * G * p["beta"])) / (
            p["d"] * p["rho_p"] * p["d33"] * p["V"]
        )
    elif branch == "large-A":
        t = (
            18.0 * HBAR * EPS0**2 * p["eps_r"] ** 2 * p["R_d"] ** 2 * p["A"] / (k * p["d33"] ** 2 * p["V"] ** 2)
        ) ** (1.0 / 3.0) / p["d"]
    else:
        raise ValueError(f"unknown branch '{branch}'")
    return t, branch


def approx_displacement_piezo(config: ExperimentConfig) -> float:
    """Closed-form Δs₂(t̄_C) of the piezo capacitor (m)."""
    p = _piezo_parameters(config)
    A_max = size_piezo_area_max(config)
    branch, exact = _branch(p["A"], A_max)
    if not exact:
        warnings.warn(
            f"A/A_max = {p['A'] / A_max:.3g} lies between approximation domains; using the {branch} branch",
            ModelWarning,
            stacklevel=2,
        )
    if branch != "large-A":
        return 0.5 * p["d33"] * p["V"]
    return (
        9.0 * HBAR * p["V"] * p["d33"]
        / (4.0 * math.pi * G * EPS0 * p["eps_r"] * p["rho_p"] ** 2 * p["beta"] * p["R_d"] * p["A"] ** 2)
    ) ** (1.0 / 3.0)


def approx_movable_plates(config: ExperimentConfig) -> tuple[float, float]:
    """Closed-form (t̄_C, Δs₂(t̄_C)) of the movable-plates capacitor."""
    spec = config.solid
    if not isinstance(spec, MovablePlateCapacitorSpec):
        raise DomainError("needs a movable-plate capacitor")
    V = config.alpha * config.diode2.V_E
    A, d, dm = spec.area, spec.gap, spec.plate.thickness
    rho_m = spec.plate.material.rho
    t = (5.0 * HBAR * d**4 * dm / (math.pi * G * EPS0**2 * A * V**4)) ** 0.2
    ds = (25.0 * EPS0 * HBAR**2 * V**2 / (32.0 * math.pi**2 * G**2 * d**2 * dm**3 * A**2)) ** 0.2 / rho_m
    return t, ds


# ---------------------------------------------------------------------------
# scenarios and full runs


def _piezo_profiles(config: ExperimentConfig):
    spec = config.solid
    d33 = spec.piezo.material.d33
    a = config.alpha
    C = a * spec.capacitance
    p1 = piezo_displacement_profile(d33, a * config.diode1.V_E, config.diode1.R_d + config.R_series, C)
    p2 = piezo_displacement_profile(d33, a * config.diode2.V_E, config.diode2.R_d, C)
    return p1, p2


def _delayed_charge_profile(config: ExperimentConfig, delay: float) -> DisplacementProfile:
    spec = config.solid
    R = config.R_switch if config.R_switch is not None else config.diode2.R_d
    a = config.alpha
    inner = piezo_displacement_profile(spec.piezo.material.d33, a * config.V2_charge, R, a * spec.capacitance)
    return DisplacementProfile.delayed(inner, delay)


def build_scenario(config: ExperimentConfig, delay: Optional[float] = None) -> ScenarioSet:
    I = scenario_intensities(config.T2, config.R2, config.diode1.p_QE, config.diode2.p_QE)
    if config.kind == "reference-aperture":
        # the aperture blocks photodiode 1: its branch folds back into state 0
        I = np.array([1.0 - I[2], 0.0, I[2]])
    if config.kind == "movable-plates":
        spec = config.solid
        a = config.alpha
        args = (spec.gap, spec.plate.thickness, spec.plate.material.rho)
        p1 = movable_plate_profile(a * config.diode1.V_E, *args)
        p2 = movable_plate_profile(a * config.diode2.V_E, *args)
    elif config.kind == "delayed-two-state":
        p1, _ = _piezo_profiles(config)
        p2 = _delayed_charge_profile(config, config.delay if delay is None else delay)
    else:
        p1, p2 = _piezo_profiles(config)
    return ScenarioSet(
        intensities=I,
        profiles=(DisplacementProfile.zero(), p1, p2),
        solid=config.solid,
        detector_budget=config.budget,
        include_short_distance=config.include_short_distance,
        latching_time=config.latching_time,
    )


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    result: ReductionResult
    intensities: np.ndarray
    capacitance: float
    alpha: float
    dark_count_probability: float
    readout_voltage_drop: float
    approximations: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    @property
    def t_bar_c(self) -> float:
        return self.result.t_bar_c

    @property
    def p2(self) -> float:
        return self.result.p2_overall

    @property
    def I2(self) -> float:
        return float(self.intensities[2])

    @property
    def p2_ratio(self) -> float:
        return self.p2 / self.I2

    @property
    def ds1(self) -> float:
        return float(self.result.displacements[1])

    @property
    def ds2(self) -> float:
        return float(self.result.displacements[2])

    @property
    def decorrelated(self) -> bool:
        return bool(self.result.decorrelated_pairs)

    def as_dict(self) -> dict:
        r = self.result
        out = {
            "name": self.config.name,
            "kind": self.config.kind,
            "short_distance": self.config.include_short_distance,
            "t_bar_c": self.t_bar_c,
            "p2": self.p2,
            "I2": self.I2,
            "p2_ratio": self.p2_ratio,
            "ds1": self.ds1,
            "ds2": self.ds2,
            "decorrelated": self.decorrelated,
            "decorrelation_margin": r.decorrelation_margin,
            "detector_share": r.detector_share,
            "p_plus": r.p_plus,
            "p_minus": r.p_minus,
            "dI_c": r.dI_c.tolist(),
            "I_plus": r.I_plus.tolist(),
            "I_minus": r.I_minus.tolist(),
            "intensities": self.intensities.tolist(),
            "e_max_over_hbar": r.e_max / HBAR,
            "capacitance": self.capacitance,
            "alpha": self.alpha,
            "dark_count_probability": self.dark_count_probability,
            "readout_voltage_drop": self.readout_voltage_drop,
            "approximations": dict(self.approximations),
            "warnings": list(self.warnings),
            "notes": list(r.notes),
        }
        out.update(self.extras)
        return out


def _approximations(config: ExperimentConfig) -> dict:
    out = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ModelWarning)
        if isinstance(config.solid, PiezoCapacitorSpec):
            t, branch = approx_reduction_time_piezo(config)
            a_max = size_piezo_area_max(config)
            out.update(
                A_max=a_max,
                t_bar_c=t,
                branch=branch,
                branch_in_domain=_branch(config.solid.area, a_max)[1],
                ds2=approx_displacement_piezo(config),
            )
        else:
            t, ds = approx_movable_plates(config)
            out.update(t_bar_c=t, ds2=ds)
    return out


def run_experiment(config: ExperimentConfig, include_short_distance: Optional[bool] = None) -> ExperimentReport:
    if include_short_distance is not None:
        config = config.replace(include_short_distance=include_short_distance)
    scenario = build_scenario(config)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ModelWarning)
        result = reduce_scenario(scenario, horizon=config.horizon)
    msgs = list(dict.fromkeys([str(w.message) for w in caught] + result.warnings))
    C_p = config.capacitance
    extras = {}
    if config.kind == "signalling":
        extras["signalling_ratio"] = signalling_ratio(config.diode2.p_QE)
        extras["arm_margin"] = signalling_arm_margin(result.t_bar_c)
    if config.kind == "delayed-two-state":
        extras["t_bar_c01"] = two_state_reduction_time(config)
    return ExperimentReport(
        config=config,
        result=result,
        intensities=scenario.intensities,
        capacitance=C_p,
        alpha=config.alpha,
        dark_count_probability=dark_count_probability(
            max(config.diode1.f_DC, config.diode2.f_DC), config.t_connected
        ),
        readout_voltage_drop=readout_voltage_drop(config.diode2.V_E, config.C_bias, C_p),
        approximations=_approximations(config),
        extras=extras,
        warnings=msgs,
    )


# ---------------------------------------------------------------------------
# resistor choice


def resistor_equation(R: float, t: float, config: ExperimentConfig, target_ratio: float) -> float:
    """Residual of ``V₂(t) = ratio · V₁(t)`` for series resistance R."""
    a = config.alpha
    C = a * config.capacitance
    v2 = -a * config.diode2.V_E * math.expm1(-t / (config.diode2.R_d * C))
    v1 = -a * config.diode1.V_E * math.expm1(-t / ((config.diode1.R_d + R) * C))
    return v2 - target_ratio * v1


def _solve_resistor(t: float, config: ExperimentConfig, target_ratio: float) -> float:
    f0 = resistor_equation(0.0, t, config, target_ratio)
    if f0 >= 0:
        a = config.alpha
        C = a * config.capacitance
        r0 = math.expm1(-t / (config.diode2.R_d * C)) * config.diode2.V_E
        r0 /= math.expm1(-t / (config.diode1.R_d * C)) * config.diode1.V_E
        raise DomainError(
            f"ratio {target_ratio:g} is unreachable: the voltage ratio is already {r0:.4g} at R = 0 "
            "and only grows with R"
        )
    hi = max(config.diode1.R_d, 1.0)
    while resistor_equation(hi, t, config, target_ratio) < 0:
        hi *= 2.0
        if hi > 1e15:
            raise DomainError("no finite resistance reaches the target ratio")
    return optimize.brentq(resistor_equation, 0.0, hi, args=(t, config, target_ratio), xtol=1e-9, rtol=1e-12)


def choose_resistor(
    config: ExperimentConfig,
    target_ratio: float = 4.0,
    t_bar: Optional[float] = None,
    rtol: float = 1e-3,
    max_iter: int = 50,
) -> float:
    """Series resistance giving ``V₂(t̄_C)/V₁(t̄_C) = target_ratio``.

    With ``t_bar`` given, the voltage equation is solved once at that time.
    Otherwise t̄_C is re-solved for each new R until R changes by less than
    ``rtol``.
    """
    if not target_ratio > 0:
        raise DomainError("target ratio must be positive")
    if t_bar is not None:
        return _solve_resistor(t_bar, config, target_ratio)
    R = config.R_series if config.R_series > 0 else config.diode1.R_d
    for _ in range(max_iter):
        t = find_reduction_time(build_scenario(config.replace(R_series=R)), horizon=config.horizon)
        R_new = _solve_resistor(t, config, target_ratio)
        if abs(R_new - R) <= rtol * R_new:
            return R_new
        R = R_new
    raise DomainError(f"resistor iteration did not settle within {max_iter} steps (last R = {R:.6g} Ohm)")


# ---------------------------------------------------------------------------
# delayed two-state lifetime experiment


def _two_state_scenario(config: ExperimentConfig) -> ScenarioSet:
    I = scenario_intensities(config.T2, config.R2, config.diode1.p_QE, config.diode2.p_QE)
    pair = np.array([I[0], I[1]]) / (I[0] + I[1])
    p1, _ = _piezo_profiles(config)
    return ScenarioSet(
        intensities=pair,
        profiles=(DisplacementProfile.zero(), p1),
        solid=config.solid,
        detector_budget=config.budget,
        include_short_distance=config.include_short_distance,
    )


def two_state_reduction_time(config: ExperimentConfig) -> float:
    """Reduction time of the superposition of states 0 and 1 alone."""
    return find_reduction_time(_two_state_scenario(config), horizon=config.horizon)


def delayed_two_state_curve(config: ExperimentConfig, delays: Sequence[float]) -> list[tuple[float, float]]:
    """Reduction probability of state 2 against the switch delay Δt.

    Once Δt reaches the two-state reduction time of states 0 and 1 the
    superposition has already reduced and state 2 follows Born's rule.
    """
    if config.kind != "delayed-two-state":
        raise DomainError("delayed_two_state_curve needs a delayed-two-state configuration")
    t01 = two_state_reduction_time(config)
    I = scenario_intensities(config.T2, config.R2, config.diode1.p_QE, config.diode2.p_QE)
    two = _two_state_scenario(config)
    ds1 = two.profiles[1](t01)
    ds2_full = 0.5 * config.solid.piezo.material.d33 * config.alpha * config.V2_charge
    if ds2_full < 4.0 * ds1:
        warnings.warn(
            f"full state-2 displacement {ds2_full:.3e} m is less than four times Δs₁(t̄_C) = {ds1:.3e} m; "
            "the enhancement will be weak",
            ModelWarning,
            stacklevel=2,
        )
    out = []
    for dt in delays:
        if dt < 0:
            raise DomainError("delays must be non-negative")
        if dt >= t01:
            out.append((float(dt), float(I[2])))
            continue
        res = reduce_scenario(build_scenario(config, delay=dt), horizon=config.horizon)
        out.append((float(dt), res.p2_overall))
    return out


# ---------------------------------------------------------------------------
# signalling


def signalling_chain(p_QE2: float) -> dict:
    """Joint polarisation/detection probabilities before and after reduction.

    Starts from a Bell state with p_H = p_V = 1/2 and Bob's detection in
    photodiode 2 with ``p_H2 = p_QE2 / 2``.
    """
    if not 0.0 <= p_QE2 <= 1.0:
        raise DomainError("p_QE2 must lie in [0, 1]")
    p_H2 = 0.5 * p_QE2
    p_H0 = 0.5 - p_H2
    p_V1 = p_H2
    p_V0 = 0.5 - p_V1
    n = 1.0 + p_H2
    after = {"H2": 2.0 * p_H2 / n, "H0": p_H0 / n, "V1": p_V1 / n, "V0": p_V0 / n}
    return {
        "before": {"H2": p_H2, "H0": p_H0, "V1": p_V1, "V0": p_V0},
        "after": after,
        "p_H": after["H2"] + after["H0"],
        "p_V": after["V1"] + after["V0"],
    }


def signalling_ratio(p_QE2: float) -> float:
    """Alice's p_H/p_V once Bob removes the aperture."""
    chain = signalling_chain(p_QE2)
    ratio = chain["p_H"] / chain["p_V"]
    if abs(ratio - (1.0 + p_QE2)) > 1e-12:
        raise ArithmeticError(f"signalling chain gave {ratio!r}, expected 1 + p_QE2")
    return ratio


def signalling_arm_margin(t_bar_c: float) -> float:
    """Minimum extra length ``c t̄_C`` of Alice's arm (m)."""
    if t_bar_c < 0:
        raise DomainError("t_bar_c must be non-negative")
    return C_LIGHT * t_bar_c
