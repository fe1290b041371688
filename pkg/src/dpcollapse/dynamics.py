"""Displacement profiles of superposed scenarios and their competition actions.

Time runs from the avalanche onset at t = 0. Every profile is zero for
t <= 0 and non-decreasing afterwards. The competition action of a pair of
scenarios is the time integral of their DP energy, evaluated either in
closed form (long-distance energy with constant/exponential or quadratic
profiles) or by adaptive quadrature.
"""

from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from .dpenergy import SolidEnergy
from .errors import DomainError, ModelWarning, QuadratureError
from .quantities import EPS0

__all__ = [
    "DisplacementProfile",
    "piezo_voltage_profile",
    "displacement_from_voltage",
    "movable_plate_displacement",
    "piezo_displacement_profile",
    "movable_plate_profile",
    "competition_action",
    "ActionIntegrator",
    "ScenarioSet",
    "QUAD_RTOL",
]

QUAD_RTOL = 1e-8
# below this λT the expanded exponential closed form loses too many digits
_CLOSED_FORM_MIN_LT = 1e-3

FORMS = ("zero", "constant", "exponential", "quadratic", "linear-ramp", "delayed")


@dataclass(frozen=True)
class DisplacementProfile:
    """Δs(t) of one scenario relative to the undisturbed state (metres)."""

    form: str
    amplitude: float = 0.0  # m; constant, exponential and ramp forms
    tau: float = 0.0  # s; exponential time constant or ramp rise time
    coefficient: float = 0.0  # m/s^2; quadratic form
    delay: float = 0.0  # s; delayed form
    inner: Optional["DisplacementProfile"] = None

    def __post_init__(self):
        if self.form not in FORMS:
            raise DomainError(f"unknown profile form '{self.form}' (expected one of {', '.join(FORMS)})")
        if self.amplitude < 0 or self.coefficient < 0:
            raise DomainError("profile amplitude and coefficient must be non-negative")
        if self.form in ("exponential", "linear-ramp") and not self.tau > 0:
            raise DomainError(f"{self.form} profile needs a positive time constant")
        if self.form == "delayed":
            if self.inner is None:
                raise DomainError("delayed profile needs an inner profile")
            if self.delay < 0:
                raise DomainError("delay must be non-negative")

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def constant(cls, amplitude: float):
        return cls("constant", amplitude=amplitude)

    @classmethod
    def exponential(cls, amplitude: float, tau: float):
        """``amplitude (1 - exp(-t/tau))``."""
        return cls("exponential", amplitude=amplitude, tau=tau)

    @classmethod
    def quadratic(cls, coefficient: float):
        """``coefficient t²``."""
        return cls("quadratic", coefficient=coefficient)

    @classmethod
    def linear_ramp(cls, amplitude: float, rise_time: float):
        """``amplitude min(t/rise_time, 1)``."""
        return cls("linear-ramp", amplitude=amplitude, tau=rise_time)

    @classmethod
    def delayed(cls, inner: "DisplacementProfile", delay: float):
        if delay == 0:
            return inner
        return cls("delayed", inner=inner, delay=delay)

    def __call__(self, t: float) -> float:
        if t <= 0:
            return 0.0
        f = self.form
        if f == "zero":
            return 0.0
        if f == "constant":
            return self.amplitude
        if f == "exponential":
            return -self.amplitude * math.expm1(-t / self.tau)
        if f == "quadratic":
            return self.coefficient * t * t
        if f == "linear-ramp":
            return self.amplitude * min(t / self.tau, 1.0)
        return self.inner(t - self.delay)

    def breakpoints(self) -> list[float]:
        """Times where the profile is not smooth."""
        if self.form == "linear-ramp":
            return [self.tau]
        if self.form == "delayed":
            return [self.delay] + [self.delay + b for b in self.inner.breakpoints()]
        return []

    def _exp_terms(self):
        """``(c0, [(c, λ), ...])`` with Δs = c0 + Σ c e^{-λt} for t > 0, if available."""
        if self.form == "zero":
            return 0.0, []
        if self.form == "constant":
            return self.amplitude, []
        if self.form == "exponential":
            return self.amplitude, [(-self.amplitude, 1.0 / self.tau)]
        return None

    def _quadratic_coefficient(self):
        if self.form == "zero":
            return 0.0
        if self.form == "quadratic":
            return self.coefficient
        return None


def piezo_voltage_profile(V_E: float, R_series: float, C_p: float, t: float) -> float:
    """Capacitor voltage ``V_E (1 - e^{-t/RC})`` while charging from t = 0."""
    if not (R_series > 0 and C_p > 0):
        raise DomainError("series resistance and capacitance must be positive")
    if t <= 0:
        return 0.0
    return -V_E * math.expm1(-t / (R_series * C_p))


def displacement_from_voltage(d33: float, V: float) -> float:
    """Plate displacement ``(d33 / 2) V`` of a piezo disc."""
    if V < 0:
        raise DomainError("voltage must be non-negative")
    return 0.5 * d33 * V


def movable_plate_displacement(V_E: float, d: float, d_m: float, rho_m: float, t: float) -> float:
    """Ballistic plate displacement under the electrostatic pull of a charged gap."""
    if not (d > 0 and d_m > 0 and rho_m > 0):
        raise DomainError("gap, plate thickness and density must be positive")
    if t <= 0:
        return 0.0
    return EPS0 * V_E**2 / (2.0 * d * d * d_m * rho_m) * t * t


def piezo_displacement_profile(d33: float, V_E: float, R_series: float, C_p: float) -> DisplacementProfile:
    if not (R_series > 0 and C_p > 0):
        raise DomainError("series resistance and capacitance must be positive")
    return DisplacementProfile.exponential(displacement_from_voltage(d33, V_E), R_series * C_p)


def movable_plate_profile(V_E: float, d: float, d_m: float, rho_m: float) -> DisplacementProfile:
    return DisplacementProfile.quadratic(movable_plate_displacement(V_E, d, d_m, rho_m, 1.0))


def _phi(lam: float, T: float) -> float:
    """``∫₀^T e^{-λt} dt``."""
    if lam == 0.0:
        return T
    return -math.expm1(-lam * T) / lam


def _closed_form(energy: SolidEnergy, pi: DisplacementProfile, pj: DisplacementProfile, t0: float, t1: float):
    """Closed-form ``∫_{t0}^{t1} K (Δs_i - Δs_j)² dt`` or None when not applicable."""
    if energy.include_short_distance and energy.terms:
        return None
    K = energy.long_coefficient
    qi, qj = pi._quadratic_coefficient(), pj._quadratic_coefficient()
    if qi is not None and qj is not None:
        a = qi - qj
        return K * a * a * (t1**5 - t0**5) / 5.0
    ei, ej = pi._exp_terms(), pj._exp_terms()
    if ei is None or ej is None:
        return None
    c0 = ei[0] - ej[0]
    terms = ei[1] + [(-c, lam) for c, lam in ej[1]]
    T = t1 - t0
    if any(lam * T < _CLOSED_FORM_MIN_LT for _, lam in terms):
        return None
    # shift the origin to t0: c e^{-λt} = (c e^{-λ t0}) e^{-λ(t - t0)}
    terms = [(c * math.exp(-lam * t0), lam) for c, lam in terms]
    parts = [c0 * c0 * T]
    for c, lam in terms:
        parts.append(2.0 * c0 * c * _phi(lam, T))
    for c, lam in terms:
        for c2, lam2 in terms:
            parts.append(c * c2 * _phi(lam + lam2, T))
    return K * max(math.fsum(parts), 0.0)


def _quadrature(energy, pi, pj, t0: float, t1: float, rtol: float) -> float:
    pts = sorted({b for b in pi.breakpoints() + pj.breakpoints() if t0 < b < t1})

    def f(t):
        return energy(pi(t) - pj(t))

    val, err, *rest = integrate.quad(
        f, t0, t1, epsabs=0.0, epsrel=rtol, limit=400, points=pts or None, full_output=1
    )
    # quad appends a message to the output only when it did not converge
    converged = len(rest) == 1
    achieved = err / abs(val) if val else err
    if not converged and achieved > 10 * rtol:
        raise QuadratureError(
            f"action quadrature did not converge on [{t0:.3e}, {t1:.3e}] s (relative error {achieved:.2e})",
            achieved=achieved,
        )
    return val


def competition_action(
    solid,
    profile_i: DisplacementProfile,
    profile_j: DisplacementProfile,
    t_bar: float,
    include_short_distance: bool = True,
    method: str = "auto",
    rtol: float = QUAD_RTOL,
) -> float:
    """``∫₀^t̄ E_G(|Δs_i(t) - Δs_j(t)|) dt`` in J s.

    ``solid`` is a plate, a composite, or an already built :class:`SolidEnergy`.
    ``method`` is 'auto' (closed form when available), 'closed' or 'quad'.
    """
    if t_bar < 0:
        raise DomainError("t_bar must be non-negative")
    energy = solid if isinstance(solid, SolidEnergy) else SolidEnergy(solid, include_short_distance)
    if t_bar == 0:
        return 0.0
    return _action(energy, profile_i, profile_j, 0.0, t_bar, method, rtol)


def _action(energy, pi, pj, t0, t1, method, rtol):
    if method not in ("auto", "closed", "quad"):
        raise ValueError(f"unknown method '{method}'")
    if method != "quad":
        value = _closed_form(energy, pi, pj, t0, t1)
        if value is not None:
            return value
        if method == "closed":
            raise DomainError("no closed form for these profiles or with short-distance energy")
    return _quadrature(energy, pi, pj, t0, t1, rtol)


class ActionIntegrator:
    """Cumulative competition action of one scenario pair with memoised checkpoints.

    Root finders query S(t̄) at many nearby times; each query integrates only
    from the nearest checkpoint below.
    """

    def __init__(self, energy: SolidEnergy, pi: DisplacementProfile, pj: DisplacementProfile, rtol: float = QUAD_RTOL):
        self.energy = energy
        self.pi, self.pj = pi, pj
        self.rtol = rtol
        self._t = [0.0]
        self._s = [0.0]

    def __call__(self, t: float) -> float:
        if t < 0:
            raise DomainError("t_bar must be non-negative")
        k = bisect.bisect_right(self._t, t) - 1
        t0, s0 = self._t[k], self._s[k]
        if t == t0:
            return s0
        s = s0 + _action(self.energy, self.pi, self.pj, t0, t, "auto", self.rtol)
        self._t.insert(k + 1, t)
        self._s.insert(k + 1, s)
        return s

    def energy_at(self, t: float) -> float:
        return self.energy(self.pi(t) - self.pj(t))


def _pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass
class ScenarioSet:
    """Intensities and displacement profiles of a 2- or 3-state superposition.

    State 0 is the undisturbed scenario with Δs₀ ≡ 0. ``detector_budget`` is
    a :class:`~dpcollapse.reduction.ComponentBudget` or None.
    """

    intensities: Sequence[float]
    profiles: Sequence[DisplacementProfile]
    solid: object
    detector_budget: object = None
    include_short_distance: bool = True
    latching_time: Optional[float] = None  # s; avalanche breakdown ends charging
    energy: Optional[Callable[[float], float]] = field(default=None, repr=False)

    def __post_init__(self):
        I = np.asarray(self.intensities, dtype=float)
        if I.ndim != 1 or len(I) not in (2, 3):
            raise DomainError(f"only 2- or 3-state superpositions are supported (got {I.size} states)")
        if np.any(I < 0) or not math.isclose(I.sum(), 1.0, rel_tol=0.0, abs_tol=1e-12):
            raise DomainError(f"intensities must be non-negative and sum to 1 (sum = {I.sum()!r})")
        if len(self.profiles) != len(I):
            raise DomainError("one displacement profile per state is required")
        if self.profiles[0].form != "zero":
            raise DomainError("state 0 is the undisturbed scenario and must have a zero profile")
        self.intensities = I
        self.profiles = tuple(self.profiles)
        if self.energy is None:
            self.energy = SolidEnergy(self.solid, self.include_short_distance)

    @property
    def n(self) -> int:
        return len(self.intensities)

    @property
    def sigma_n(self) -> float:
        """Nuclear spread used by the decorrelation criterion (largest component value)."""
        return self.energy.sigma_max

    def integrators(self, rtol: float = QUAD_RTOL) -> dict:
        return {(i, j): ActionIntegrator(self.energy, self.profiles[i], self.profiles[j], rtol) for i, j in _pairs(self.n)}

    def displacements(self, t: float) -> np.ndarray:
        return np.array([p(t) for p in self.profiles])

    def energies(self, t: float) -> np.ndarray:
        """Symmetric table of pairwise DP energies at time t."""
        s = self.displacements(t)
        E = np.zeros((self.n, self.n))
        for i, j in _pairs(self.n):
            E[i, j] = E[j, i] = self.energy(s[i] - s[j])
        return E

    def actions(self, t: float, method: str = "auto") -> np.ndarray:
        S = np.zeros((self.n, self.n))
        for i, j in _pairs(self.n):
            S[i, j] = S[j, i] = _action(self.energy, self.profiles[i], self.profiles[j], 0.0, t, method, QUAD_RTOL) if t > 0 else 0.0
        return S

    def check_latching(self, t_bar: float) -> list[str]:
        if self.latching_time is not None and t_bar > self.latching_time:
            msg = (
                f"reduction time {t_bar:.3e} s exceeds the latching time {self.latching_time:.3e} s; "
                "charging would already have stopped"
            )
            warnings.warn(msg, ModelWarning, stacklevel=2)
            return [msg]
        return []
