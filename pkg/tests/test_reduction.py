import math

import numpy as np
import pytest

from dpcollapse.dpenergy import PlateSpec, SolidEnergy
from dpcollapse.dynamics import DisplacementProfile, ScenarioSet
from dpcollapse.errors import DomainError, NoDecayTriggersError, NoReductionError
from dpcollapse.quantities import HBAR
from dpcollapse.reduction import (
    ComponentBudget,
    apply_reconfiguration_rule,
    born_limit_p2,
    build_matrix,
    decay_trigger_rates,
    decorrelation_groups,
    default_budget,
    detector_action_budget,
    find_reduction_time,
    largest_eigenpair,
    largest_eigenvalue,
    merge_groups,
    overall_p2,
    reduce_scenario,
)

I4 = np.array([0.5, 0.25, 0.25])
RATIO4 = np.array([[0, 1, 16], [1, 0, 9], [16, 9, 0]], dtype=float)


def test_matrix_structure():
    M = build_matrix(RATIO4, I4)
    assert np.all(M.sum(axis=0) == 0.0)
    off = M[~np.eye(3, dtype=bool)]
    assert np.all(off <= 0)
    assert M[0, 1] == -RATIO4[0, 1] * I4[0]
    assert np.all(build_matrix(np.zeros((3, 3)), I4) == 0)


def test_asymmetric_table_rejected():
    S = RATIO4.copy()
    S[0, 1] = 2.0
    with pytest.raises(DomainError, match="symmetric"):
        build_matrix(S, I4)


def test_eq23_eigenvalue_reaches_hbar():
    # the largest eigenvalue equals ħ once S_02 = 1.15 ħ
    lam = largest_eigenvalue(RATIO4 / 16.0, I4)
    assert 1.0 / lam == pytest.approx(1.15, abs=0.01)


def test_ratio4_eigenvector():
    lam, v, notes = largest_eigenpair(RATIO4, I4)
    assert not notes
    assert v == pytest.approx([-0.626, -0.140, 0.767], abs=2e-3)
    assert math.fsum(v) == pytest.approx(0.0, abs=1e-12)


def test_far_limit_eigenvector():
    I = np.array([0.49, 0.3, 0.21])
    S = np.array([[0, 0, 1], [0, 0, 1], [1, 1, 0]], dtype=float)
    lam, v, _ = largest_eigenpair(S, I)
    expected = np.array([-I[0], -I[1], I[0] + I[1]])
    assert v == pytest.approx(expected / np.linalg.norm(expected), abs=1e-12)
    assert lam == pytest.approx(1.0, rel=1e-12)


def test_two_state_limit():
    S = np.array([[0, 2.5], [2.5, 0]])
    assert largest_eigenvalue(S, [0.3, 0.7]) == pytest.approx(2.5, rel=1e-14)
    # a zero-intensity third state drops out
    S3 = np.array([[0, 2.5, 7], [2.5, 0, 4], [7, 4, 0]])
    lam, v, _ = largest_eigenpair(S3, [0.3, 0.7, 0.0])
    assert lam == pytest.approx(2.5, rel=1e-14)
    assert v[2] == 0.0


def test_zero_matrix_eigenvalue():
    lam, _, notes = largest_eigenpair(np.zeros((3, 3)), I4)
    assert lam == 0.0
    assert notes


def test_decay_trigger_rates():
    r = decay_trigger_rates(RATIO4, I4) * HBAR
    assert r == pytest.approx([4.25, 2.75, 10.25], rel=1e-14)
    assert decay_trigger_rates(RATIO4, [1, 0, 0])[0] == 0.0
    E = np.array([[0, 0, 3], [0, 0, 3], [3, 3, 0]], dtype=float)
    r = decay_trigger_rates(E, [0.4, 0.35, 0.25])
    assert r[0] == r[1]


def test_ratio4_rule():
    _, v, _ = largest_eigenpair(RATIO4, I4)
    rates = decay_trigger_rates(RATIO4, I4)
    Ip, Im, pp, pm, _, _ = apply_reconfiguration_rule(I4, v, rates)
    assert Ip == pytest.approx([0, 0.138, 0.862], abs=1.5e-3)
    assert Im == pytest.approx([0.704, 0.296, 0], abs=1.5e-3)
    assert pp == pytest.approx(0.406, abs=1e-3)
    assert pp + pm == 1.0
    p2 = overall_p2(pp, Ip, pm, Im)
    assert p2 == pytest.approx(0.350, abs=1e-3)
    assert p2 / I4[2] == pytest.approx(1.40, abs=5e-3)


def test_far_limit_rule_gives_closed_form():
    I = np.array([0.49, 0.3, 0.21])
    S = np.array([[0, 0, 1], [0, 0, 1], [1, 1, 0]], dtype=float)
    _, v, _ = largest_eigenpair(S, I)
    Ip, Im, pp, pm, _, _ = apply_reconfiguration_rule(I, v, decay_trigger_rates(S, I))
    assert Ip == pytest.approx([0, 0, 1], abs=1e-12)
    assert Im == pytest.approx([I[0] / 0.79, I[1] / 0.79, 0], abs=1e-12)
    assert overall_p2(pp, Ip, pm, Im) == pytest.approx(born_limit_p2(0.21, True), rel=1e-12)


def test_rule_rejects_bad_input():
    with pytest.raises(DomainError):
        apply_reconfiguration_rule(I4, [0.1, 0.1, 0.1], [1, 1, 1])
    with pytest.raises(NoDecayTriggersError):
        apply_reconfiguration_rule(I4, [-0.5, -0.5, 1.0], [0, 0, 0])


def test_final_intensities_valid():
    _, v, _ = largest_eigenpair(RATIO4, I4)
    Ip, Im, *_ = apply_reconfiguration_rule(I4, v, decay_trigger_rates(RATIO4, I4))
    for vec in (Ip, Im):
        assert np.all(vec >= 0)
        assert vec.sum() == pytest.approx(1.0, abs=1e-15)


def test_decorrelation_groups():
    s = 0.1e-10
    assert decorrelation_groups([0, 10.7e-10, 43e-10], s) == [(0,), (1,), (2,)]
    assert decorrelation_groups([0, 0, 43e-10], s) == [(0, 1), (2,)]
    assert decorrelation_groups([0, 6 * s, 43e-10], s) == [(0, 1), (2,)]
    # transitive closure
    assert decorrelation_groups([0, 5 * s, 10 * s], s) == [(0, 1, 2)]


def test_merge_groups_weights_by_intensity():
    I = np.array([0.5, 0.3, 0.2])
    T = np.array([[0, 0, 4], [0, 0, 2], [4, 2, 0]], dtype=float)
    out = merge_groups(T, I, [(0, 1), (2,)])
    assert out[0, 1] == pytest.approx((0.5 * 4 + 0.3 * 2) / 0.8)


def test_born_limit():
    assert born_limit_p2(0.25, True) == pytest.approx(0.4)
    assert born_limit_p2(0.21, True) == pytest.approx(0.347, abs=5e-4)
    assert born_limit_p2(0.21, True) / 0.21 == pytest.approx(1.65, abs=5e-3)
    assert born_limit_p2(1.0, True) == 1.0
    assert born_limit_p2(0.3, False) == 0.3
    with pytest.raises(DomainError):
        born_limit_p2(1.5, True)


def test_detector_budget():
    assert detector_action_budget(None, 1.0) == 0.0
    assert detector_action_budget(ComponentBudget(), 1.0) == 0.0
    assert detector_action_budget(ComponentBudget((("x", 2e-6),)), 2e-6) == pytest.approx(HBAR, rel=1e-15)
    share = detector_action_budget(default_budget(), 0.84e-6) / HBAR
    assert share == pytest.approx(1.1e-5, rel=0.05)
    with pytest.raises(DomainError):
        ComponentBudget((("bad", 0.0),))
    b = default_budget().replace("wires", 5.0)
    assert dict(b.components)["wires"] == 5.0
    with pytest.raises(KeyError):
        default_budget().replace("nope", 1.0)


def _const_scenario(aluminium, I, amps, budget=None):
    plate = PlateSpec("displaced", 1e-6, 1e-4, aluminium)
    profiles = [DisplacementProfile.zero()] + [DisplacementProfile.constant(a) for a in amps]
    return ScenarioSet(I, profiles, plate, detector_budget=budget, include_short_distance=False)


def test_constant_energy_reduction_time(aluminium):
    sc = _const_scenario(aluminium, [0.6, 0.4], [5e-9])
    E = SolidEnergy(sc.solid, False)(5e-9)
    t = find_reduction_time(sc)
    assert t == pytest.approx(HBAR / E, rel=2e-6)


def test_no_reduction_within_horizon(aluminium):
    sc = _const_scenario(aluminium, [0.6, 0.4], [1e-18])
    with pytest.raises(NoReductionError, match="horizon"):
        find_reduction_time(sc, horizon=1.0)


@pytest.mark.parametrize("I1", [0.1, 0.35, 0.5, 0.8])
def test_two_state_born(aluminium, I1):
    r = reduce_scenario(_const_scenario(aluminium, [1 - I1, I1], [5e-9]))
    assert r.p2_overall == pytest.approx(I1, abs=1e-9)


def test_correlated_pair_reduces_by_born(aluminium):
    sc = _const_scenario(aluminium, [0.49, 0.3, 0.21], [0.0, 40 * aluminium.sigma_n])
    r = reduce_scenario(sc)
    assert r.groups == [(0, 1), (2,)]
    assert r.p2_overall == pytest.approx(0.21, abs=1e-9)
    assert r.notes
