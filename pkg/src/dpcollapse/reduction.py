"""Reconfiguration-equation solver and reduction probabilities.

For intensities I and pairwise competition actions S the reconfiguration
matrix M has off-diagonal entries ``-S_ij I_i`` and diagonal entries
``Σ_j S_ij I_j``. With D = diag(I) the product M·D is symmetric, so M is
similar to ``B = D^{-1/2} (M D) D^{-1/2}``; the spectrum is obtained from B
in closed form and eigenvectors are mapped back with ``v = D^{1/2} w``.

Reduction happens at the first t̄ where the largest eigenvalue plus the
detector components' action reaches ħ.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from .dynamics import ScenarioSet
from .errors import DomainError, MonotonicityError, ModelWarning, NoDecayTriggersError, NoReductionError
from .quantities import HBAR

__all__ = [
    "ComponentBudget",
    "default_budget",
    "detector_action_budget",
    "NEGLIGIBLE_ACTION",
    "build_matrix",
    "largest_eigenvalue",
    "largest_eigenpair",
    "emax_function",
    "find_reduction_time",
    "decay_trigger_rates",
    "decorrelation_groups",
    "apply_reconfiguration_rule",
    "merge_groups",
    "overall_p2",
    "born_limit_p2",
    "ReductionResult",
    "reduce_scenario",
    "DECORRELATION_FACTOR",
    "DEFAULT_HORIZON",
]

DECORRELATION_FACTOR = 6.0
DEFAULT_HORIZON = 10.0  # s
ROOT_RTOL = 1e-6
NEGLIGIBLE_ACTION = 0.01 * HBAR
_CLIP = 1e-12
_GAP_RTOL = 1e-10
MAX_STATES = 3


# ---------------------------------------------------------------------------
# detector component budget


@dataclass(frozen=True)
class ComponentBudget:
    """Setup components with their characteristic lifetimes ``T_G = ħ/E_G``."""

    components: tuple = ()

    def __post_init__(self):
        comps = tuple((str(name), float(T)) for name, T in self.components)
        for name, T in comps:
            if not T > 0:
                raise DomainError(f"component '{name}' needs a positive lifetime, got {T!r}")
        object.__setattr__(self, "components", comps)

    @property
    def rate(self) -> float:
        """``Σ 1/T_Gi`` in 1/s."""
        return math.fsum(1.0 / T for _, T in self.components)

    def replace(self, name: str, lifetime: float) -> "ComponentBudget":
        comps = [(n, lifetime if n == name else T) for n, T in self.components]
        if name not in dict(self.components):
            raise KeyError(f"no component named '{name}'")
        return ComponentBudget(tuple(comps))


def default_budget() -> ComponentBudget:
    """Representative lifetimes of the piezo/plate setups' detector components."""
    return ComponentBudget(
        (
            ("capacitor-bank", 0.1),
            ("resistor", 1.0),
            ("photodiode-1", 1.0),
            ("photodiode-2", 1.0),
            ("wires", 1e7),
        )
    )


def detector_action_budget(budget: Optional[ComponentBudget], t_bar: float) -> float:
    """``ħ Σ t̄ / T_Gi``, the detector components' competition action."""
    if t_bar < 0:
        raise DomainError("t_bar must be non-negative")
    if budget is None:
        return 0.0
    return HBAR * t_bar * budget.rate


# ---------------------------------------------------------------------------
# matrix and eigenproblem


def _check_table(S, name="action"):
    S = np.asarray(S, dtype=float)
    n = S.shape[0]
    if S.ndim != 2 or S.shape != (n, n):
        raise DomainError(f"{name} table must be square")
    if n > MAX_STATES:
        raise DomainError(f"superpositions of more than {MAX_STATES} states are not supported (got {n})")
    if np.any(S < 0):
        raise DomainError(f"{name} table must be non-negative")
    if not np.allclose(S, S.T, rtol=1e-12, atol=0.0):
        raise DomainError(f"{name} table must be symmetric")
    return S


def _check_intensities(I, n=None):
    I = np.asarray(I, dtype=float)
    if I.ndim != 1 or (n is not None and I.size != n):
        raise DomainError("intensity vector does not match the number of states")
    if np.any(I < 0) or not math.isclose(I.sum(), 1.0, rel_tol=0.0, abs_tol=1e-10):
        raise DomainError("intensities must be non-negative and sum to 1")
    return I


def build_matrix(actions, I) -> np.ndarray:
    """Reconfiguration matrix for a symmetric action table and intensities."""
    S = _check_table(actions)
    I = _check_intensities(I, S.shape[0])
    S = S.copy()
    np.fill_diagonal(S, 0.0)
    M = -S * I[:, None]
    # diagonal is the correctly rounded negative of each column's off-diagonal sum
    for j in range(M.shape[0]):
        M[j, j] = -math.fsum(M[i, j] for i in range(M.shape[0]) if i != j)
    return M


def _symmetrized(S, I):
    r = np.sqrt(I)
    S = S.copy()
    np.fill_diagonal(S, 0.0)
    B = -S * np.outer(r, r)
    B[np.diag_indices_from(B)] = S @ I
    return B


def _sym_eigvals(B) -> np.ndarray:
    """Ascending eigenvalues of a symmetric 1x1, 2x2 or 3x3 matrix.

    2x2 uses the closed form. For 3x3 the trigonometric Cardano formula loses
    half its digits at (near-)degenerate spectra, so LAPACK's direct
    symmetric solver is used instead.
    """
    n = B.shape[0]
    if n == 1:
        return np.array([B[0, 0]])
    if n == 2:
        a, b, d = B[0, 0], B[0, 1], B[1, 1]
        m = 0.5 * (a + d)
        r = math.hypot(0.5 * (a - d), b)
        return np.array([m - r, m + r])
    return np.linalg.eigvalsh(B)


def _top_eigvec(B, lam) -> Optional[np.ndarray]:
    n = B.shape[0]
    A = B - lam * np.eye(n)
    if n == 1:
        return np.array([1.0])
    if n == 2:
        # null vector of a rank-one 2x2 from its larger row
        rows = [A[0], A[1]]
        row = max(rows, key=lambda v: float(v @ v))
        if not np.any(row):
            return None
        return np.array([-row[1], row[0]])
    best = None
    for a, b in ((0, 1), (0, 2), (1, 2)):
        c = np.cross(A[a], A[b])
        if best is None or c @ c > best @ best:
            best = c
    scale = np.abs(A).max()
    if scale == 0 or math.sqrt(best @ best) <= 1e-14 * scale * scale:
        return None
    return best


def _reduce_support(S, I):
    keep = np.flatnonzero(I > 0)
    return keep, S[np.ix_(keep, keep)], I[keep]


def largest_eigenvalue(actions, I) -> float:
    """Largest eigenvalue of the reconfiguration matrix (J s)."""
    S = np.asarray(actions, dtype=float)
    I = np.asarray(I, dtype=float)
    _, S, I = _reduce_support(S, I)
    return float(_sym_eigvals(_symmetrized(S, I))[-1])


def largest_eigenpair(actions, I) -> tuple[float, np.ndarray, list[str]]:
    """Largest eigenvalue, its unit eigenvector and any warnings.

    The eigenvector's sign makes the component of the state with the largest
    total pairwise action positive (ties go to the lowest index). States of
    zero intensity get a zero component.
    """
    S = _check_table(actions)
    I = _check_intensities(I, S.shape[0])
    notes: list[str] = []
    keep, Sr, Ir = _reduce_support(S, I)
    B = _symmetrized(Sr, Ir)
    ev = _sym_eigvals(B)
    lam = float(ev[-1])
    scale = max(abs(lam), np.abs(B).max(), 1e-300)
    if len(ev) > 1 and (ev[-1] - ev[-2]) <= _GAP_RTOL * scale:
        notes.append("largest eigenvalue is (near-)degenerate; eigenvector chosen by lowest-index tie-break")
    w = _top_eigvec(B, lam) if not notes else None
    if w is None:
        vals, vecs = np.linalg.eigh(B)
        top = np.flatnonzero(vals >= vals[-1] - _GAP_RTOL * scale)
        # within a degenerate top space prefer directions orthogonal to sqrt(I)
        basis = vecs[:, top]
        r = np.sqrt(Ir)
        proj = basis - np.outer(r, r @ basis) / (r @ r)
        norms = np.linalg.norm(proj, axis=0)
        k = int(np.argmax(norms)) if norms.max() > 1e-12 else 0
        w = proj[:, k] if norms.max() > 1e-12 else basis[:, k]
    r = np.sqrt(Ir)
    if lam > 0:
        # sqrt(I) spans the null space of B, so the top eigenvector is orthogonal to it
        w = w - r * (r @ w) / (r @ r)
    v_r = r * w
    v = np.zeros(len(I))
    v[keep] = v_r
    nrm = np.linalg.norm(v)
    if nrm > 0:
        v = v / nrm
    gain = np.where(I > 0, np.asarray(S).sum(axis=1), -np.inf)
    order = sorted(range(len(I)), key=lambda i: (-gain[i], i))
    for i in order:
        if abs(v[i]) > 1e-12:
            if v[i] < 0:
                v = -v
            break
    v[np.abs(v) < 1e-15] = 0.0
    return lam, v, notes


# ---------------------------------------------------------------------------
# reduction time


def emax_function(scenario: ScenarioSet):
    """``t̄ -> (e_max(t̄), S_detectors(t̄))`` with memoised action integrals."""
    integ = scenario.integrators()
    n = scenario.n
    I = scenario.intensities

    def f(t):
        S = np.zeros((n, n))
        for (i, j), a in integ.items():
            S[i, j] = S[j, i] = a(t)
        return largest_eigenvalue(S, I), detector_action_budget(scenario.detector_budget, t)

    return f


def _with_flag(scenario: ScenarioSet, include_short_distance):
    if include_short_distance is None or include_short_distance == scenario.include_short_distance:
        return scenario
    return dataclasses.replace(scenario, include_short_distance=include_short_distance, energy=None)


def find_reduction_time(
    scenario: ScenarioSet,
    include_short_distance: Optional[bool] = None,
    horizon: float = DEFAULT_HORIZON,
    rtol: float = ROOT_RTOL,
    t_start: float = 1e-9,
    detector: bool = True,
) -> float:
    """Smallest t̄ with ``e_max(t̄) + S_detectors(t̄) = ħ``.

    The root is bracketed by doubling from ``t_start`` and refined with
    Brent's bracketing method. Every sampled e_max is checked for
    monotonicity in t̄.
    """
    scenario = _with_flag(scenario, include_short_distance)
    if all(p.form == "zero" for p in scenario.profiles):
        raise DomainError("all displacement profiles are zero; nothing competes")
    f = emax_function(scenario)
    samples: dict[float, float] = {}

    def g(t):
        e, sd = f(t)
        samples[t] = e
        return e + (sd if detector else 0.0) - HBAR

    lo, hi = 0.0, min(t_start, horizon)
    ghi = g(hi)
    if ghi >= 0:
        for _ in range(1100):
            mid = hi / 2.0
            if g(mid) < 0:
                lo = mid
                break
            hi = mid
        else:
            raise NoReductionError("reduction condition holds at arbitrarily small t̄")
    else:
        while ghi < 0:
            if hi >= horizon:
                raise NoReductionError(
                    f"no reduction within horizon {horizon:g} s (e_max reached {samples[hi] / HBAR:.4g} ħ)"
                )
            lo, hi = hi, min(2.0 * hi, horizon)
            ghi = g(hi)
    t = optimize.brentq(g, lo, hi, xtol=1e-300, rtol=max(rtol, 4 * np.finfo(float).eps), maxiter=500)
    _check_monotone(samples)
    return float(t)


def _check_monotone(samples: dict):
    ts = sorted(samples)
    es = [samples[t] for t in ts]
    for k in range(1, len(ts)):
        if es[k] < es[k - 1] - 1e-9 * max(abs(es[k - 1]), HBAR):
            raise MonotonicityError(
                f"e_max decreased from {es[k - 1] / HBAR:.6g} ħ at t̄={ts[k - 1]:.6e} s "
                f"to {es[k] / HBAR:.6g} ħ at t̄={ts[k]:.6e} s"
            )


# ---------------------------------------------------------------------------
# reconfiguration rule


def decay_trigger_rates(E, I) -> np.ndarray:
    """Decay-trigger rates ``(1/ħ) Σ_j I_j E_ij`` in 1/s."""
    E = _check_table(E, "energy")
    I = _check_intensities(I, E.shape[0])
    E = E.copy()
    np.fill_diagonal(E, 0.0)
    return (E @ I) / HBAR


def decorrelation_groups(displacements, sigma_n: float, factor: float = DECORRELATION_FACTOR) -> list[tuple[int, ...]]:
    """Partition states into groups whose relative displacements stay within ``factor σ_n``.

    ``displacements`` is either the per-state vector Δs_i or the pairwise
    table |Δs_i - Δs_j|. Grouping is transitive; equality counts as correlated.
    """
    d = np.asarray(displacements, dtype=float)
    if d.ndim == 1:
        d = np.abs(d[:, None] - d[None, :])
    n = d.shape[0]
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    limit = factor * sigma_n
    for i in range(n):
        for j in range(i + 1, n):
            if d[i, j] <= limit:
                ri, rj = find(i), find(j)
                parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def _side_weight(rates, members, groups):
    total = []
    for g in groups:
        on = [rates[i] for i in g if i in members]
        if on:
            total.append(max(on))
    return math.fsum(total)


def _final(I, step):
    out = I + step
    out[out < _CLIP] = 0.0
    return out / out.sum()


def apply_reconfiguration_rule(I, dI, rates, groups=None):
    """Final intensity vectors and branch probabilities.

    Returns ``(I_plus, I_minus, p_plus, p_minus, alpha_plus, alpha_minus)``.
    """
    I = np.asarray(I, dtype=float)
    dI = np.asarray(dI, dtype=float)
    rates = np.asarray(rates, dtype=float)
    if np.any(rates < 0):
        raise DomainError("decay-trigger rates must be non-negative")
    if groups is None:
        groups = [(i,) for i in range(len(I))]
    tol = _CLIP * max(np.abs(dI).max(), 1e-300)
    neg = [i for i in range(len(I)) if dI[i] < -tol]
    pos = [i for i in range(len(I)) if dI[i] > tol]
    if not neg or not pos:
        raise DomainError("reconfiguration solution must have components of both signs")
    a_plus = min(I[i] / -dI[i] for i in neg)
    a_minus = min(I[i] / dI[i] for i in pos)
    I_plus = _final(I, a_plus * dI)
    I_minus = _final(I, -a_minus * dI)
    w_plus = _side_weight(rates, set(neg), groups)
    w_minus = _side_weight(rates, set(pos), groups)
    total = w_plus + w_minus
    if not total > 0:
        raise NoDecayTriggersError("no decay triggers: all decay-trigger rates vanish")
    p_plus = w_plus / total
    return I_plus, I_minus, p_plus, 1.0 - p_plus, float(a_plus), float(a_minus)


def merge_groups(table, I, groups) -> np.ndarray:
    """Pairwise table between groups, intensity-weighted over member pairs."""
    T = np.asarray(table, dtype=float)
    I = np.asarray(I, dtype=float)
    m = len(groups)
    out = np.zeros((m, m))
    for a in range(m):
        for b in range(a + 1, m):
            w = np.array([[I[i] * I[j] for j in groups[b]] for i in groups[a]])
            vals = np.array([[T[i, j] for j in groups[b]] for i in groups[a]])
            v = float((w * vals).sum() / w.sum()) if w.sum() > 0 else float(vals.mean())
            out[a, b] = out[b, a] = v
    return out


def _grouped_rule(I, S, E, groups):
    """Reconfiguration rule with each correlated group collapsed into one state.

    Members share their group's outcome in proportion to their intensities.
    """
    I = np.asarray(I, dtype=float)
    Ig = np.array([I[list(g)].sum() for g in groups])
    n = len(I)
    if len(groups) == 1 or np.count_nonzero(Ig) < 2:
        # nothing left to compete: Born weights
        return np.zeros(n), I.copy(), I.copy(), 1.0, 0.0, 0.0, 0.0
    Sg, Eg = merge_groups(S, I, groups), merge_groups(E, I, groups)
    _, dIg, _ = largest_eigenpair(Sg, Ig)
    rates = decay_trigger_rates(Eg, Ig)
    Ipg, Img, p_plus, p_minus, a_plus, a_minus = apply_reconfiguration_rule(Ig, dIg, rates)

    def expand(vg):
        v = np.zeros(n)
        for k, g in enumerate(groups):
            if Ig[k] > 0:
                for i in g:
                    v[i] = vg[k] * I[i] / Ig[k]
        return v

    dI = expand(dIg)
    dI /= np.linalg.norm(dI)
    return dI, expand(Ipg), expand(Img), p_plus, p_minus, a_plus, a_minus



def overall_p2(p_plus: float, I_plus, p_minus: float, I_minus, state: int = 2) -> float:
    """Overall reduction probability of ``state`` after the branch decision."""
    return float(p_plus * I_plus[state] + p_minus * I_minus[state])


def born_limit_p2(I2: float, decorrelated: bool) -> float:
    """Reference value for the enhanced state: ``2I₂/(1+I₂)`` if decorrelated, else I₂."""
    if not 0 <= I2 <= 1:
        raise DomainError("I2 must lie in [0, 1]")
    return 2.0 * I2 / (1.0 + I2) if decorrelated else I2


# ---------------------------------------------------------------------------
# full solve


@dataclass
class ReductionResult:
    t_bar_c: float
    intensities: np.ndarray
    dI_c: np.ndarray
    I_plus: np.ndarray
    I_minus: np.ndarray
    alpha_plus: float
    alpha_minus: float
    p_plus: float
    p_minus: float
    p2_overall: float
    decorrelated_pairs: frozenset
    groups: list
    e_max: float
    detector_action: float
    actions: np.ndarray
    energies: np.ndarray
    rates: np.ndarray
    displacements: np.ndarray
    sigma_n: float
    include_short_distance: bool
    warnings: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def state(self) -> int:
        """Index of the state whose probability is reported as p2."""
        return len(self.intensities) - 1

    @property
    def p2_ratio(self) -> float:
        I2 = self.intensities[self.state]
        return self.p2_overall / I2 if I2 > 0 else math.nan

    @property
    def detector_share(self) -> float:
        return self.detector_action / HBAR

    @property
    def decorrelation_margin(self) -> float:
        """Smallest relative displacement over the 6σ_n threshold (>1 means decorrelated)."""
        n = len(self.displacements)
        d = [abs(self.displacements[i] - self.displacements[j]) for i in range(n) for j in range(i + 1, n)]
        return min(d) / (DECORRELATION_FACTOR * self.sigma_n)


def reduce_scenario(
    scenario: ScenarioSet,
    include_short_distance: Optional[bool] = None,
    horizon: float = DEFAULT_HORIZON,
    rtol: float = ROOT_RTOL,
) -> ReductionResult:
    """Solve for t̄_C and apply the reconfiguration rule."""
    scenario = _with_flag(scenario, include_short_distance)
    t_c = find_reduction_time(scenario, horizon=horizon, rtol=rtol)
    I = scenario.intensities
    S = scenario.actions(t_c)
    lam, dI, notes = largest_eigenpair(S, I)
    E = scenario.energies(t_c)
    rates = decay_trigger_rates(E, I)
    ds = scenario.displacements(t_c)
    sigma = scenario.sigma_n
    groups = decorrelation_groups(ds, sigma)
    n = scenario.n
    pairs = frozenset(
        (i, j) for i in range(n) for j in range(i + 1, n) if abs(ds[i] - ds[j]) > DECORRELATION_FACTOR * sigma
    )
    if all(len(g) == 1 for g in groups):
        I_plus, I_minus, p_plus, p_minus, a_plus, a_minus = apply_reconfiguration_rule(I, dI, rates, groups)
        model_notes = []
    else:
        dI, I_plus, I_minus, p_plus, p_minus, a_plus, a_minus = _grouped_rule(I, S, E, groups)
        model_notes = [
            f"states {', '.join(map(str, g))} are correlated and reduce as one state" for g in groups if len(g) > 1
        ]
    warn = list(notes)
    warn += scenario.check_latching(t_c)
    for w in notes:
        warnings.warn(w, ModelWarning, stacklevel=2)
    sd = detector_action_budget(scenario.detector_budget, t_c)
    return ReductionResult(
        t_bar_c=t_c,
        intensities=I.copy(),
        dI_c=dI,
        I_plus=I_plus,
        I_minus=I_minus,
        alpha_plus=a_plus,
        alpha_minus=a_minus,
        p_plus=p_plus,
        p_minus=p_minus,
        p2_overall=overall_p2(p_plus, I_plus, p_minus, I_minus, state=n - 1),
        decorrelated_pairs=pairs,
        groups=groups,
        e_max=lam,
        detector_action=sd,
        actions=S,
        energies=E,
        rates=rates,
        displacements=ds,
        sigma_n=sigma,
        include_short_distance=scenario.include_short_distance,
        warnings=warn,
        notes=model_notes,
    )
