"""Command-line front end.

Subcommands: ``materials list``, ``reduce``, ``dimension piezo|plates``,
``sweep``, ``delayed``, ``signalling`` and ``oracle dp-numeric``. Output is
deterministic; errors exit with the code attached to their exception type.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import numpy as np

from .config import KEYS, load_config
from .errors import ConfigError, DimensionError, DPCollapseError, ModelWarning
from .experiments import (
    approx_displacement_piezo,
    approx_movable_plates,
    approx_reduction_time_piezo,
    choose_resistor,
    delayed_two_state_curve,
    readout_voltage_drop,
    run_experiment,
    signalling_chain,
    signalling_arm_margin,
    signalling_ratio,
    size_piezo_area_max,
    two_state_reduction_time,
)
from .materials import default_database, describe
from .oracle import dp_energy_numeric_oracle, lattice_from_material, lattice_saturation_energy
from .quantities import DIMENSIONS, parse_quantity

EXIT_USAGE = 64
EXIT_IO = 74

SWEEP_COLUMNS = (
    ("t_bar_c", "s"),
    ("p2", "1"),
    ("p2_ratio", "1"),
    ("ds1", "m"),
    ("ds2", "m"),
    ("decorrelated", "bool"),
    ("detector_share", "1"),
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.16e}"
    return str(v)


def _human_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_human_value(x) for x in v) + ")"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_human_value(x)}" for k, x in v.items())
    return _fmt(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def render_record(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(record), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        flat = {k: v for k, v in record.items() if not isinstance(v, (dict, list, tuple))}
        return render_rows(list(flat), [list(flat.values())], "csv")
    width = max(len(k) for k in record) if record else 0
    return "".join(f"{k:<{width}}  {_human_value(v)}\n" for k, v in record.items())


def render_rows(header: Sequence[str], rows: Sequence[Sequence], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([_jsonable(dict(zip(header, r))) for r in rows], indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(x) for x in r])
        return buf.getvalue()
    cells = [list(header)] + [[_human_value(x) for x in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    return "".join("  ".join(c[i].rjust(widths[i]) for i in range(len(c))) + "\n" for c in cells)


def _emit(text: str, output: Optional[str]):
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# axes


def parse_axis(key: str, spec: str):
    """``start:stop:count[:log]`` with unit-suffixed start/stop → (key, values)."""
    dim = KEYS.get(key)
    if dim is None or dim in ("str", "bool"):
        raise ConfigError("not a numeric config parameter", key=key, source="--axis")
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(f"axis '{spec}' must look like start:stop:count[:log]", key=key, source="--axis")
    start = parse_quantity(parts[0], dim).si
    stop = parse_quantity(parts[1], dim).si
    try:
        count = int(parts[2])
    except ValueError:
        raise ConfigError(f"axis count '{parts[2]}' is not an integer", key=key, source="--axis") from None
    if count < 2:
        raise ConfigError("axis count must be at least 2", key=key, source="--axis")
    scale = parts[3] if len(parts) == 4 else "linear"
    if scale == "log":
        if start <= 0 or stop <= 0:
            raise ConfigError("log axes need positive bounds", key=key, source="--axis")
        values = np.geomspace(start, stop, count)
    elif scale in ("lin", "linear"):
        values = np.linspace(start, stop, count)
    else:
        raise ConfigError(f"unknown axis scale '{scale}'", key=key, source="--axis")
    return key, [float(v) for v in values]


def _sweep_point(args):
    config_path, overrides, short, horizon = args
    cfg = load_config(config_path, overrides=overrides)
    if horizon is not None:
        cfg = cfg.replace(horizon=horizon)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ModelWarning)
        rep = run_experiment(cfg, include_short_distance=short)
    return [rep.t_bar_c, rep.p2, rep.p2_ratio, rep.ds1, rep.ds2, rep.decorrelated, rep.result.detector_share]


# ---------------------------------------------------------------------------
# commands


def _load(args, overrides=None):
    cfg = load_config(args.config, overrides=overrides)
    if getattr(args, "horizon", None) is not None:
        cfg = cfg.replace(horizon=args.horizon)
    if getattr(args, "no_short_distance", False):
        cfg = cfg.replace(include_short_distance=False)
    return cfg


def cmd_materials(args) -> str:
    db = default_database()
    records = [describe(db[name]) for name in sorted(db, key=str.lower)]
    header = []
    for r in records:
        header.extend(k for k in r if k not in header)
    rows = [[r.get(k, "") if r.get(k) is not None else "" for k in header] for r in records]
    return render_rows(header, rows, args.format)


def cmd_reduce(args) -> str:
    rep = run_experiment(_load(args))
    return render_record(rep.as_dict(), args.format)


def cmd_dimension(args) -> str:
    cfg = _load(args)
    rec: dict = {"name": cfg.name, "capacitance": cfg.capacitance}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ModelWarning)
        if args.what == "piezo":
            if cfg.kind == "movable-plates":
                raise ConfigError("dimension piezo needs a piezo capacitor config", key="kind")
            a_max = size_piezo_area_max(cfg)
            t, branch = approx_reduction_time_piezo(cfg)
            rec.update(
                area=cfg.solid.area,
                A_max=a_max,
                A_max_diameter=2.0 * math.sqrt(a_max / math.pi),
                area_ratio=cfg.solid.area / a_max,
                branch=branch,
                t_bar_c_approx=t,
                ds2_approx=approx_displacement_piezo(cfg),
                R_series=choose_resistor(cfg, target_ratio=args.ratio),
                readout_voltage_drop=readout_voltage_drop(cfg.diode2.V_E, cfg.C_bias, cfg.capacitance),
            )
        else:
            if cfg.kind != "movable-plates":
                raise ConfigError("dimension plates needs a movable-plates config", key="kind")
            t, ds = approx_movable_plates(cfg)
            rec.update(area=cfg.solid.area, t_bar_c_approx=t, ds2_approx=ds)
    rec["warnings"] = list(dict.fromkeys(str(w.message) for w in caught))
    return render_record(rec, args.format)


def cmd_sweep(args) -> str:
    if not args.axis:
        raise ConfigError("sweep needs at least one --axis", source="--axis")
    axes = [parse_axis(k, s) for k, s in args.axis]
    keys = [k for k, _ in axes]
    if len(set(keys)) != len(keys):
        raise ConfigError("each parameter may be swept only once", source="--axis")
    grid = list(itertools.product(*[v for _, v in axes]))
    short = False if args.no_short_distance else None
    tasks = [(args.config, dict(zip(keys, point)), short, args.horizon) for point in grid]
    load_config(args.config)  # fail early on a bad base config
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]
    header = [f"{k} [{DIMENSIONS[KEYS[k]]}]" for k in keys] + [f"{c} [{u}]" for c, u in SWEEP_COLUMNS]
    rows = [list(p) + r for p, r in zip(grid, results)]
    return render_rows(header, rows, args.format)


def cmd_delayed(args) -> str:
    cfg = _load(args)
    if args.delays:
        _, delays = parse_axis("circuit.delay", args.delays)
    else:
        t01 = two_state_reduction_time(cfg)
        delays = [float(x) for x in np.linspace(0.0, 1.5 * t01, 16)]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ModelWarning)
        curve = delayed_two_state_curve(cfg, delays)
    for w in dict.fromkeys(str(w.message) for w in caught):
        sys.stderr.write(f"warning: {w}\n")
    t01 = two_state_reduction_time(cfg)
    rows = [[dt, p, dt >= t01] for dt, p in curve]
    return render_rows(["delay [s]", "p2 [1]", "two_state_reduced [bool]"], rows, args.format)


def cmd_signalling(args) -> str:
    if args.tbar is not None:
        t = args.tbar
    else:
        cfg = _load(args)
        t = run_experiment(cfg).t_bar_c
    chain = signalling_chain(args.pqe2)
    rec = {
        "p_QE2": args.pqe2,
        "ratio": signalling_ratio(args.pqe2),
        "p_H": chain["p_H"],
        "p_V": chain["p_V"],
        "t_bar_c": t,
        "arm_margin": signalling_arm_margin(t),
    }
    return render_record(rec, args.format)


def cmd_oracle(args) -> str:
    db = default_database()
    try:
        mat = db[args.material]
    except KeyError:
        raise ConfigError(f"unknown material '{args.material}'", key="--material") from None
    dims = tuple(int(x) for x in args.dims.split(",")) if "," in args.dims else (int(args.dims),) * 3
    lattice = lattice_from_material(mat, dims, cap=args.cap)
    direction = np.array([0.0, 0.0, 1.0]) if args.direction == "z" else np.array([1.0, math.sqrt(2), math.sqrt(3)])
    direction /= np.linalg.norm(direction)
    sat = lattice_saturation_energy(lattice)
    rows = []
    for text in args.ds:
        if text.endswith("sigma"):
            ds = float(text[: -len("sigma")]) * lattice.sigma_n
        else:
            ds = parse_quantity(text, "length").si
        e = dp_energy_numeric_oracle(lattice, ds * direction)
        rows.append([ds, ds / lattice.sigma_n, e, e / sat])
    return render_rows(["ds [m]", "ds_over_sigma [1]", "energy [J]", "fraction_of_saturation [1]"], rows, args.format)


# ---------------------------------------------------------------------------


def _time(text):
    try:
        return parse_quantity(text, "time").si
    except DimensionError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--format", choices=("human", "csv", "json"), help="default: csv for sweep, else human")

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--config", help="config file (shipped: fig6.cfg, fig8.cfg, delayed.cfg); default fig6.cfg, delayed.cfg for delayed")
    run.add_argument("--no-short-distance", action="store_true", help="drop the nuclear short-distance term")
    run.add_argument("--horizon", type=_time, help="give up beyond this reduction time, e.g. '10 s'")

    p = _Parser(prog="dpcollapse", description="Reduction times and probabilities of superposed solids.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("materials", parents=[common], help="material database")
    m.add_argument("action", choices=("list",))
    m.set_defaults(func=cmd_materials)

    r = sub.add_parser("reduce", parents=[common, run], help="solve one configuration")
    r.set_defaults(func=cmd_reduce)

    d = sub.add_parser("dimension", parents=[common, run], help="closed-form sizing")
    d.add_argument("what", choices=("piezo", "plates"))
    d.add_argument("--ratio", type=float, default=4.0, help="target V2/V1 for the resistor choice")
    d.set_defaults(func=cmd_dimension)

    s = sub.add_parser("sweep", parents=[common, run], help="grid of configurations")
    s.add_argument("--axis", nargs=2, action="append", metavar=("KEY", "START:STOP:COUNT[:log]"),
                   help="config key and grid, e.g. solid.area 1mm2:20mm2:40:log; repeat for a product grid")
    s.add_argument("--jobs", type=int, default=1, help="worker processes (output order does not depend on it)")
    s.set_defaults(func=cmd_sweep)

    dl = sub.add_parser("delayed", parents=[common, run], help="p2 against switch delay")
    dl.add_argument("--delays", metavar="START:STOP:COUNT[:log]")
    dl.set_defaults(func=cmd_delayed)

    sg = sub.add_parser("signalling", parents=[common, run], help="EPR signalling ratio")
    sg.add_argument("--pqe2", type=float, default=0.7)
    sg.add_argument("--tbar", type=_time, help="reduction time to use instead of solving --config")
    sg.set_defaults(func=cmd_signalling)

    o = sub.add_parser("oracle", parents=[common], help="brute-force lattice DP energy")
    o.add_argument("what", choices=("dp-numeric",))
    o.add_argument("--material", default="aluminium")
    o.add_argument("--dims", default="12", help="N or nx,ny,nz")
    o.add_argument("--ds", nargs="+", default=["0.1sigma", "1sigma", "12sigma", "20sigma"],
                   help="displacements with a length unit, or in units of sigma_n like '12sigma'")
    o.add_argument("--direction", choices=("z", "generic"), default="generic")
    o.add_argument("--cap", type=int, default=20**3)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be at least 1")
    # per-command defaults live here: subparsers share the parent parsers' actions
    if args.format is None:
        args.format = "csv" if args.command == "sweep" else "human"
    if hasattr(args, "config") and args.config is None:
        args.config = "delayed.cfg" if args.command == "delayed" else "fig6.cfg"
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ModelWarning)
            text = args.func(args)
        _emit(text, args.output)
    except DPCollapseError as exc:
        sys.stderr.write(f"dpcollapse: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"dpcollapse: {exc}\n")
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
