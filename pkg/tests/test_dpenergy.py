import math
import warnings

import numpy as np
import pytest

from dpcollapse.dpenergy import (
    GEO_MIN,
    QUAD_MAX,
    MovablePlateCapacitorSpec,
    PiezoCapacitorSpec,
    PlateSpec,
    SolidEnergy,
    dp_energy_long_distance,
    dp_energy_piezo_capacitor,
    dp_energy_plate,
    dp_energy_short_distance,
    dp_energy_solid,
    geometric_function,
    short_distance_regime,
)
from dpcollapse.errors import DomainError, ModelWarning
from dpcollapse.quantities import HBAR

A3 = math.pi * (1.5e-3) ** 2


@pytest.fixture()
def al_plate(aluminium):
    return PlateSpec("displaced", A3, 1e-4, aluminium)


def test_geometric_function_values():
    assert geometric_function("displaced", 10.0) == pytest.approx(1 - math.sqrt(math.pi) / 10, rel=1e-15)
    assert geometric_function("displaced", 10.0) == pytest.approx(0.8228, abs=5e-5)
    c = 2 + math.sqrt(math.pi) / 2 - math.sqrt(math.pi) * math.log(4)
    expected = 1 - c / 10 - math.sqrt(math.pi) * math.log(10) / 10
    assert geometric_function("extended", 10.0) == pytest.approx(expected, rel=1e-15)
    assert geometric_function("extended", 10.0) == pytest.approx(0.5490, abs=5e-5)


def test_geometric_function_limit_and_domain():
    for kind in ("displaced", "extended"):
        assert geometric_function(kind, 1e9) == pytest.approx(1.0, abs=1e-6)
        with pytest.raises(DomainError, match="4"):
            geometric_function(kind, 4.0)


def test_long_distance_hand_value(al_plate):
    e = dp_energy_plate(al_plate, 60e-10, include_short_distance=False)
    assert e / HBAR == pytest.approx(7.4e5, rel=0.01)
    assert dp_energy_long_distance(al_plate, 120e-10) / dp_energy_long_distance(al_plate, 60e-10) == 4.0


def test_zero_displacement(al_plate, piezo_cap):
    assert dp_energy_plate(al_plate, 0.0) == 0.0
    assert dp_energy_short_distance(al_plate, 0.0) == 0.0
    assert dp_energy_piezo_capacitor(piezo_cap, 3e-9, 3e-9) == 0.0
    with pytest.raises(DomainError):
        dp_energy_plate(al_plate, -1e-10)


def test_short_distance_quadratic_branch(al_plate, aluminium):
    e = dp_energy_short_distance(al_plate, aluminium.sigma_n / 10)
    assert e / al_plate.saturation_energy == pytest.approx(0.01 / 12, rel=1e-12)


def test_short_distance_saturates(al_plate, aluminium):
    e = dp_energy_short_distance(al_plate, 1e7 * aluminium.sigma_n)
    assert e / al_plate.saturation_energy == pytest.approx(1.0, abs=1e-6)


def test_blend_zone_warns_and_is_monotone_and_continuous(al_plate, aluminium):
    s = aluminium.sigma_n
    with pytest.warns(ModelWarning):
        dp_energy_short_distance(al_plate, 2 * s)
    xs = np.linspace(0.0, 8.0, 2001)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ModelWarning)
        vals = np.array([dp_energy_short_distance(al_plate, x * s) for x in xs])
    assert np.all(np.diff(vals) >= 0)
    for edge in (QUAD_MAX, GEO_MIN):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ModelWarning)
            lo = dp_energy_short_distance(al_plate, edge * s * (1 - 1e-9))
            hi = dp_energy_short_distance(al_plate, edge * s * (1 + 1e-9))
        assert hi == pytest.approx(lo, rel=1e-6)


def test_regimes():
    assert short_distance_regime(0.5, 1.0) == "quadratic"
    assert short_distance_regime(2.0, 1.0) == "blend"
    assert short_distance_regime(5.0, 1.0) == "geometric"


def test_piezo_energy_is_sum_of_components(piezo_cap):
    for ds in (1e-12, 5e-10, 6e-9):
        total = dp_energy_piezo_capacitor(piezo_cap, ds, 0.0)
        parts = dp_energy_plate(piezo_cap.piezo, ds) + 2 * dp_energy_plate(piezo_cap.plate, ds)
        assert total == pytest.approx(parts, rel=1e-14)


def test_piezo_energy_symmetric(piezo_cap):
    assert dp_energy_piezo_capacitor(piezo_cap, 1e-9, 4e-9) == dp_energy_piezo_capacitor(piezo_cap, 4e-9, 1e-9)


def test_piezo_long_distance_closed_form(piezo_cap, pzt, aluminium):
    from dpcollapse.quantities import G

    ds = 5e-9
    closed = 2 * math.pi * G * A3 * (2e-4 * pzt.rho**2 / 3 + 2 * 1e-4 * aluminium.rho**2) * ds**2
    assert dp_energy_piezo_capacitor(piezo_cap, ds, 0.0, include_short_distance=False) == pytest.approx(closed, rel=1e-13)


def test_solid_energy_matches_reference(piezo_cap, al_plate):
    gap = MovablePlateCapacitorSpec(al_plate, 2e-4)
    for solid in (piezo_cap, gap, al_plate):
        for flag in (True, False):
            fast = SolidEnergy(solid, flag)
            for ds in (0.0, 3e-13, 2e-11, 4e-11, 1e-9):
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", ModelWarning)
                    ref = dp_energy_solid(solid, ds, flag)
                assert fast(ds) == pytest.approx(ref, rel=1e-12, abs=0.0)
                assert fast(-ds) == fast(ds)


def test_spec_validation(pzt, aluminium):
    with pytest.raises(DomainError):
        PlateSpec("displaced", -1.0, 1e-4, aluminium)
    with pytest.raises(DomainError):
        PiezoCapacitorSpec(PlateSpec("extended", 1e-6, 1e-4, aluminium), PlateSpec("displaced", 1e-6, 1e-4, aluminium))
    with pytest.raises(DomainError):
        PiezoCapacitorSpec(PlateSpec("extended", 1e-6, 1e-4, pzt), PlateSpec("displaced", 2e-6, 1e-4, aluminium))
    with pytest.raises(DomainError):
        MovablePlateCapacitorSpec(PlateSpec("displaced", 1e-6, 1e-4, aluminium), 0.0)


def test_capacitances(piezo_cap):
    assert piezo_cap.capacitance == pytest.approx(1.3143e-9, rel=1e-4)
