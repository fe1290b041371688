import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpcollapse.dpenergy import PlateSpec
from dpcollapse.dynamics import DisplacementProfile, competition_action
from dpcollapse.experiments import signalling_chain, signalling_ratio
from dpcollapse.quantities import Quantity, convert
from dpcollapse.reduction import (
    apply_reconfiguration_rule,
    build_matrix,
    decay_trigger_rates,
    decorrelation_groups,
    largest_eigenpair,
    largest_eigenvalue,
)

pos = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


@st.composite
def intensities(draw, n=3):
    w = np.array([draw(st.floats(min_value=0.01, max_value=1.0)) for _ in range(n)])
    return w / w.sum()


@st.composite
def action_tables(draw):
    s01, s02, s12 = draw(pos), draw(pos), draw(pos)
    return np.array([[0, s01, s02], [s01, 0, s12], [s02, s12, 0]])


@given(action_tables(), intensities())
def test_similarity_transform_preserves_spectrum(S, I):
    M = build_matrix(S, I)
    ev = np.linalg.eigvals(M)
    assert np.max(np.abs(ev.imag)) <= 1e-9 * np.abs(M).max()
    top = np.max(ev.real)
    assert largest_eigenvalue(S, I) == pytest.approx(top, rel=1e-10, abs=1e-12 * np.abs(M).max())
    assert largest_eigenvalue(S, I) >= 0


@given(action_tables(), intensities())
def test_columns_sum_to_zero(S, I):
    M = build_matrix(S, I)
    assert np.all(np.abs(M.sum(axis=0)) <= 1e-15 * np.abs(M).max())


@given(action_tables(), intensities())
def test_rule_outputs_are_probabilities(S, I):
    _, v, _ = largest_eigenpair(S, I)
    assert abs(math.fsum(v)) <= 1e-10
    Ip, Im, pp, pm, ap, am = apply_reconfiguration_rule(I, v, decay_trigger_rates(S, I))
    for vec in (Ip, Im):
        assert np.all(vec >= 0)
        assert vec.sum() == pytest.approx(1.0, abs=1e-12)
    assert pp + pm == pytest.approx(1.0, abs=1e-15)
    assert 0 <= pp <= 1 and ap >= 0 and am >= 0


@given(
    st.floats(min_value=0.5e-9, max_value=10e-9),
    st.floats(min_value=0.1e-6, max_value=3e-6),
    st.floats(min_value=0.0, max_value=10e-9),
    st.floats(min_value=0.1e-6, max_value=3e-6),
    st.floats(min_value=0.05e-6, max_value=5e-6),
)
@settings(max_examples=40)
def test_closed_form_matches_quadrature(piezo_cap, a1, tau1, a2, tau2, t):
    p, q = DisplacementProfile.exponential(a1, tau1), DisplacementProfile.exponential(a2, tau2)
    c = competition_action(piezo_cap, p, q, t, include_short_distance=False, method="auto")
    qd = competition_action(piezo_cap, p, q, t, include_short_distance=False, method="quad")
    assert c == pytest.approx(qd, rel=1e-6)


@given(st.floats(min_value=0.0, max_value=1.0))
def test_signalling_chain_closed_form(p):
    assert signalling_ratio(p) == pytest.approx(1.0 + p, abs=1e-12)
    c = signalling_chain(p)
    assert sum(c["after"].values()) == pytest.approx(1.0, abs=1e-12)


@given(st.lists(st.floats(min_value=0, max_value=1e-9), min_size=2, max_size=3), st.floats(min_value=1e-12, max_value=1e-10))
def test_groups_partition_states(ds, sigma):
    groups = decorrelation_groups(ds, sigma)
    flat = sorted(i for g in groups for i in g)
    assert flat == list(range(len(ds)))
    for g in groups:
        for h in groups:
            if g is not h:
                assert all(abs(ds[i] - ds[j]) > 6 * sigma for i in g for j in h)


@given(st.floats(min_value=1e-6, max_value=1e6), st.sampled_from(["nm", "um", "mm", "cm", "km", "Å"]))
def test_length_conversion_round_trips(v, unit):
    q = Quantity.of(v, "m")
    back = convert(convert(q, unit), "m")
    assert back.value == pytest.approx(v, rel=1e-15)


@given(st.floats(min_value=1e-12, max_value=1e-8))
def test_plate_energy_non_decreasing(aluminium, ds):
    import warnings

    from dpcollapse.dpenergy import dp_energy_plate
    from dpcollapse.errors import ModelWarning

    plate = PlateSpec("displaced", 1e-6, 1e-4, aluminium)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ModelWarning)
        assert dp_energy_plate(plate, ds * 1.01) >= dp_energy_plate(plate, ds)
