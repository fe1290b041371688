import csv
import io
import json
import math

import pytest

from dpcollapse.cli import main
from dpcollapse.config import load_config
from dpcollapse.experiments import run_experiment

AREA_AXIS = ["--axis", "solid.area", "1mm2:20mm2:40:log"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_reduce_json(capsys):
    code, out, _ = run(capsys, "reduce", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["t_bar_c"] == pytest.approx(0.84e-6, rel=0.01)
    assert d["p2_ratio"] == pytest.approx(1.56, abs=0.01)


def test_reduce_human(capsys):
    code, out, _ = run(capsys, "reduce", "--config", "fig8.cfg", "--no-short-distance")
    assert code == 0
    assert "t_bar_c" in out and "p2_ratio" in out


def test_materials_list(capsys):
    code, out, _ = run(capsys, "materials", "list", "--format", "csv")
    assert code == 0
    names = [row[0] for row in csv.reader(io.StringIO(out))][1:]
    assert "aluminium" in names and "PIC-153" in names


def test_dimension(capsys):
    code, out, _ = run(capsys, "dimension", "piezo", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["A_max_diameter"] == pytest.approx(2.4e-3, rel=0.02)
    assert d["R_series"] == pytest.approx(940.0, rel=0.03)
    code, out, _ = run(capsys, "dimension", "plates", "--config", "fig8.cfg", "--format", "json")
    assert json.loads(out)["t_bar_c_approx"] == pytest.approx(96e-6, rel=0.01)
    code, _, err = run(capsys, "dimension", "plates")
    assert code == 2 and "movable-plates" in err


@pytest.fixture(scope="module")
def area_sweep():
    import contextlib

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        assert main(["sweep", *AREA_AXIS]) == 0
    return buf.getvalue()


def test_sweep_rows_and_header(area_sweep):
    rows = list(csv.reader(io.StringIO(area_sweep)))
    assert rows[0][0] == "solid.area [m2]"
    assert rows[0][1] == "t_bar_c [s]"
    assert len(rows) == 41


def test_sweep_reduction_time_is_unimodal_with_minimum_near_area_max(area_sweep, fig6):
    from dpcollapse.experiments import size_piezo_area_max

    rows = list(csv.DictReader(io.StringIO(area_sweep)))
    area = [float(r["solid.area [m2]"]) for r in rows]
    t = [float(r["t_bar_c [s]"]) for r in rows]
    k = t.index(min(t))
    assert all(b < a for a, b in zip(t[: k + 1], t[1 : k + 1]))
    assert all(b > a for a, b in zip(t[k:], t[k + 1 :]))
    assert 0.5 < area[k] / size_piezo_area_max(fig6) < 2.0


def test_sweep_csv_round_trips(area_sweep):
    rows = list(csv.DictReader(io.StringIO(area_sweep)))
    for r in (rows[0], rows[17], rows[-1]):
        cfg = load_config("fig6.cfg", overrides={"solid.area": float(r["solid.area [m2]"])})
        rep = run_experiment(cfg)
        assert rep.t_bar_c == pytest.approx(float(r["t_bar_c [s]"]), rel=1e-9)
        assert rep.p2 == pytest.approx(float(r["p2 [1]"]), rel=1e-9)
        assert rep.ds1 == pytest.approx(float(r["ds1 [m]"]), rel=1e-9)
        assert str(rep.decorrelated).lower() == r["decorrelated [bool]"]


def test_sweep_parallel_output_is_identical(area_sweep, tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", *AREA_AXIS, "--jobs", "3", "--output", str(out)]) == 0
    assert out.read_text() == area_sweep


def test_sweep_two_axes(capsys):
    code, out, _ = run(
        capsys, "sweep", "--axis", "solid.area", "4mm2:8mm2:2", "--axis", "circuit.R", "500Ohm:1000Ohm:2"
    )
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and len(rows) == 5
    assert [r[1] for r in rows[1:]] == [r[1] for r in rows[1:]]


def test_sweep_errors(capsys):
    assert run(capsys, "sweep")[0] == 2
    assert run(capsys, "sweep", "--axis", "kind", "1:2:3")[0] == 2
    assert run(capsys, "sweep", "--axis", "solid.area", "1mm2:2mm2:1")[0] == 2
    assert run(capsys, "sweep", "--axis", "solid.area", "1 s:2 s:3")[0] == 3


def test_delayed(capsys):
    code, out, err = run(capsys, "delayed", "--delays", "0us:4us:5")
    rows = list(csv.reader(io.StringIO(out))) if "," in out else None
    assert code == 0
    code, out, _ = run(capsys, "delayed", "--delays", "0us:4us:5", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 5
    assert float(rows[-1]["p2 [1]"]) == 0.21
    assert rows[-1]["two_state_reduced [bool]"] == "true"


def test_signalling(capsys):
    code, out, _ = run(capsys, "signalling", "--pqe2", "0.7", "--tbar", "0.84 us", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["ratio"] == pytest.approx(1.7)
    assert d["arm_margin"] == pytest.approx(252.0, rel=0.005)


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "dp-numeric", "--dims", "6", "--ds", "0.1sigma", "20sigma", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    assert float(rows[1]["fraction_of_saturation [1]"]) > float(rows[0]["fraction_of_saturation [1]"])
    assert run(capsys, "oracle", "dp-numeric", "--dims", "30")[0] == 9


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "reduce", "--config", str(tmp_path / "missing.cfg"))[0] == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("kind = piezo-capacitor\nbeam_splitter.T2 = 1.2\n")
    code, _, err = run(capsys, "reduce", "--config", str(bad))
    assert code == 2 and "beam_splitter.T2" in err
    assert run(capsys, "reduce", "--horizon", "1 ns")[0] == 6
    with pytest.raises(SystemExit) as exc:
        main(["reduce", "--bogus"])
    assert exc.value.code == 64
    assert run(capsys, "reduce", "--output", str(tmp_path / "no" / "dir.txt"))[0] == 74


def test_output_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["reduce", "--format", "json", "--output", str(out)]) == 0
    assert math.isfinite(json.loads(out.read_text())["t_bar_c"])
