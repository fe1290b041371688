import math

import pytest

from dpcollapse.errors import DimensionError
from dpcollapse.quantities import Quantity, as_si, convert, parse_quantity, unit_dimension


@pytest.mark.parametrize(
    "text, dim, si",
    [
        ("1 angstrom", "length", 1e-10),
        ("1 Å", "length", 1e-10),
        ("0.2 mm", "length", 2e-4),
        ("4.3 MHz/cm³", "frequency-per-volume", 4.3e12),
        ("4.3 MHz/cm^3", "frequency-per-volume", 4.3e12),
        ("1300 pF", "capacitance", 1.3e-9),
        ("940 Ω", "resistance", 940.0),
        ("0.65 µs", "time", 0.65e-6),
        ("600e-10 V-1cm", "length-per-voltage", 6e-10),
        ("7.6 g/cm3", "mass-density", 7600.0),
    ],
)
def test_parse_to_si(text, dim, si):
    q = parse_quantity(text, dim)
    assert math.isclose(q.si, si, rel_tol=1e-15)


def test_missing_unit_rejected_for_dimensioned_values():
    with pytest.raises(DimensionError, match="missing a unit"):
        parse_quantity("20", "voltage")
    assert parse_quantity("0.7", "dimensionless").si == 0.7


def test_wrong_dimension_rejected():
    with pytest.raises(DimensionError):
        parse_quantity("20 V", "length")
    with pytest.raises(DimensionError):
        parse_quantity("3 furlong")


def test_power_of_ten_conversion_round_trips_exactly():
    for v in (1.0, 0.2, 3.3e-7, 123.456):
        q = Quantity.of(v, "mm")
        assert convert(convert(q, "nm"), "mm").value == v
        assert convert(convert(q, "m"), "mm").value == v


def test_arithmetic_checks_dimensions():
    a = Quantity.of(1.0, "mm")
    b = Quantity.of(2.0, "um")
    assert math.isclose((a + b).si, 1.002e-3)
    assert a > b
    with pytest.raises(DimensionError):
        _ = a + Quantity.of(1.0, "s")
    with pytest.raises(DimensionError):
        _ = a * a


def test_as_si():
    assert as_si(Quantity.of(20, "kV"), "voltage") == 20000.0
    assert as_si(5.0, "voltage") == 5.0
    with pytest.raises(DimensionError):
        as_si(Quantity.of(1, "s"), "voltage")
    with pytest.raises(DimensionError):
        as_si(float("nan"), "voltage")


def test_bare_A_is_ampere():
    assert unit_dimension("mA") == "current"
    assert unit_dimension("A") == "current"
