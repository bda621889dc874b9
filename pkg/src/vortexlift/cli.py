"""Batch front-end: ``vortexlift SUBCOMMAND --config run.yaml --out DIR``.

Exit codes: 0 success, 1 invalid configuration or arguments, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .errors import InvalidArgumentError, NumericError
from .gp import GPParams, SODIUM_MASS, regime_report
from .lift import LiftFunctions, lift, lift_to_csv
from .linear import evolve_linear
from .moments import compute_moments, evolve_moments, moments_to_csv
from .oracle import (
    GPStepper,
    GridSpec,
    HarmonicStepper,
    Observer,
    evolve,
    l2_distance,
    sample,
    spectral_resample,
    write_grid,
)
from .states import (
    TwoLineParams,
    VortexParams,
    dumps_state,
    from_polynomial,
    make_ground_state,
    make_single_vortex,
    make_two_perpendicular_vortices,
)
from .trap import TrapConfig
from .vortices import Plane, find_zeros_in_plane, polylines_to_csv, polylines_to_json, single_vortex_trajectory, trace_vortex_lines

log = logging.getLogger("vortexlift")

SCHEMA = {
    "trap": {"tilde_omega": [1.0, 1.0, 1.0], "omega_sq_int": 0.0, "norm": 1.0},
    "state": {"kind": "single_vortex", "a_disp": 0.5, "terms": None},
    "grid": {"n": 32, "box": None, "box_widths": 8.0},
    "run": {
        "t_end": 1.0,
        "dt": 1e-3,
        "samples": 11,
        "observe_every": 100,
        "lattice": 64,
        "window": 3.0,
        "zoom_n": 64,
        "zoom_half_width": 1.5,
        "flag_tol": 1e-3,
    },
    "gp": {
        "n_atoms": 1e6,
        "a_scatt": 5e-9,
        "L": 5e-5,
        "d": None,
        "mass": SODIUM_MASS,
        "hbar": 1.054571817e-34,
        "trap_period": 1e-2,
        "trap_omega": None,
    },
}

SUBCOMMANDS = (
    "evolve-linear",
    "evolve-nonlinear",
    "oracle-harmonic",
    "oracle-gp",
    "track-vortices",
    "moments",
    "gp-regime",
    "verify",
)


TEXT_KEYS = {("state", "kind")}


def _number(value, where):
    # YAML 1.1 reads exponent forms such as 1.0e6 as strings
    if isinstance(value, bool):
        raise InvalidArgumentError(f"{where} must be a number, got {value!r}")
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            pass
    raise InvalidArgumentError(f"{where} must be a number, got {value!r}")


def _coerce(section, key, value):
    where = f"{section}.{key}"
    if value is None or (section, key) in TEXT_KEYS:
        return value
    if isinstance(value, list):
        return [[_number(v, where) for v in row] if isinstance(row, list) else _number(row, where) for row in value]
    return _number(value, where)


def load_config(path):
    """Parse a YAML config strictly: unknown sections or keys are errors."""
    try:
        raw = yaml.safe_load(Path(path).read_text()) or {}
    except (OSError, yaml.YAMLError) as exc:
        raise InvalidArgumentError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise InvalidArgumentError("config must be a mapping of sections")
    bad = [s for s in raw if s not in SCHEMA]
    for section, values in raw.items():
        if section in SCHEMA:
            if not isinstance(values, dict):
                raise InvalidArgumentError(f"section [{section}] must be a mapping")
            bad += [f"{section}.{k}" for k in values if k not in SCHEMA[section]]
    if bad:
        raise InvalidArgumentError("unknown config keys: " + ", ".join(sorted(bad)))
    cfg = {s: {**defaults, **(raw.get(s) or {})} for s, defaults in SCHEMA.items()}
    return {s: {k: _coerce(s, k, v) for k, v in values.items()} for s, values in cfg.items()}


def _trap(cfg):
    t = cfg["trap"]
    return TrapConfig(t["tilde_omega"], t["omega_sq_int"], t["norm"])


def _state(cfg, trap):
    s = cfg["state"]
    kind = s["kind"]
    if kind == "ground":
        return make_ground_state(trap.omega, norm=trap.norm)
    if kind == "single_vortex":
        return make_single_vortex(VortexParams(float(s["a_disp"])), trap.omega, norm=trap.norm)
    if kind == "polynomial":
        if not s["terms"]:
            raise InvalidArgumentError("state.terms is required for kind 'polynomial'")
        poly = {}
        for row in s["terms"]:
            k, l, m, re, im = row
            poly[(int(k), int(l), int(m))] = complex(re, im)
        return from_polynomial(poly, trap.omega, norm=trap.norm)
    raise InvalidArgumentError(f"unknown state.kind {kind!r}")


def _gp(cfg):
    g = cfg["gp"]
    d = g["d"] if g["d"] is not None else g["L"] / 10
    return GPParams(g["n_atoms"], g["a_scatt"], g["L"], d, g["mass"], g["hbar"])


def _grid_spec(cfg, widths):
    g = cfg["grid"]
    if g["box"] is not None:
        box = g["box"]
    else:
        box = tuple(float(g["box_widths"]) / np.sqrt(np.asarray(widths, dtype=float)))
    return GridSpec(g["n"], box)


def _times(cfg):
    r = cfg["run"]
    return np.linspace(0.0, float(r["t_end"]), int(r["samples"]))


def _steps(cfg):
    r = cfg["run"]
    n = int(round(float(r["t_end"]) / float(r["dt"])))
    if n < 0:
        raise InvalidArgumentError("run.t_end must be non-negative")
    return n


def _rows_to_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(v if isinstance(v, (str, int, np.integer)) else f"{float(v):.17g}" for v in row)
    return buf.getvalue()


@dataclass
class Outputs:
    root: Path
    written: list = field(default_factory=list)

    def text(self, name, content):
        path = self.root / name
        path.write_text(content)
        self.written.append(path)

    def grid(self, name, g):
        path = self.root / name
        write_grid(path, g)
        self.written.append(path)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_evolve_linear(cfg, out):
    trap = _trap(cfg)
    s0 = _state(cfg, trap)
    traj = [compute_moments(evolve_linear(s0, trap.omega, t)) for t in _times(cfg)]
    out.text("moments.csv", moments_to_csv(traj))
    out.text("final_state.txt", dumps_state(evolve_linear(s0, trap.omega, float(cfg["run"]["t_end"]))))


def cmd_evolve_nonlinear(cfg, out):
    trap = _trap(cfg)
    s0 = _state(cfg, trap)
    times = _times(cfg)
    traj = [compute_moments(lift(s0, trap, t)) for t in times]
    out.text("moments.csv", moments_to_csv(traj))
    out.text("lift.csv", lift_to_csv(LiftFunctions(compute_moments(s0), trap), times))


def cmd_moments(cfg, out):
    trap = _trap(cfg)
    m0 = compute_moments(_state(cfg, trap))
    out.text("moments.csv", moments_to_csv([evolve_moments(m0, trap, t) for t in _times(cfg)]))


def cmd_oracle_harmonic(cfg, out):
    trap = _trap(cfg)
    s0 = _state(cfg, trap)
    spec = _grid_spec(cfg, trap.omega)
    stride = int(cfg["run"]["observe_every"])
    final, logs = evolve(
        sample(s0, spec), HarmonicStepper(trap), float(cfg["run"]["dt"]), _steps(cfg),
        [Observer("moments", compute_moments, stride)],
    )
    out.text("moments.csv", moments_to_csv([m for _, m in logs["moments"]]))
    out.grid("final_grid.bin", final)


def cmd_verify(cfg, out):
    trap = _trap(cfg)
    s0 = _state(cfg, trap)
    spec = _grid_spec(cfg, trap.omega)
    stride = int(cfg["run"]["observe_every"])

    def distance(g):
        ref = sample(lift(s0, trap, g.time), spec, check=False)
        err = l2_distance(g, ref)
        return err, err / np.sqrt(ref.norm_sq())

    _, logs = evolve(
        sample(s0, spec), HarmonicStepper(trap), float(cfg["run"]["dt"]), _steps(cfg),
        [Observer("l2", distance, stride)],
    )
    rows = [(t, e, r) for t, (e, r) in logs["l2"]]
    out.text("verify.csv", _rows_to_csv(("time", "l2_error", "relative_error"), rows))
    if not cfg.get("_quiet"):
        print(f"{'time':>12} {'l2_error':>14} {'relative':>14}")
        for t, e, r in rows:
            print(f"{t:12.6g} {e:14.6e} {r:14.6e}")


def cmd_track_vortices(cfg, out):
    trap = _trap(cfg)
    run = cfg["run"]
    a_disp = float(cfg["state"]["a_disp"])
    if cfg["state"]["kind"] != "single_vortex":
        raise InvalidArgumentError("track-vortices expects state.kind = single_vortex")
    s0 = _state(cfg, trap)
    fns = LiftFunctions(compute_moments(s0), trap)
    half = float(run["window"])
    rows = []
    for t in _times(cfg):
        pt = single_vortex_trajectory(a_disp, trap.omega, t, flag_tol=float(run["flag_tol"]))
        tracked = (np.nan, np.nan)
        if not pt.unbounded:
            zeros = find_zeros_in_plane(
                evolve_linear(s0, trap.omega, t), Plane(2, 0.0), ((-half, half), (-half, half)), int(run["lattice"])
            )
            if len(zeros) == 1:
                tracked = tuple(zeros[0].position[:2])
        b = fns.b(t)
        rows.append((t, pt.x, pt.y, int(pt.unbounded), tracked[0], tracked[1], tracked[0] + b[0], tracked[1] + b[1]))
    header = ("time", "x", "y", "unbounded", "tracked_x", "tracked_y", "psi_x", "psi_y")
    out.text("trajectory.csv", _rows_to_csv(header, rows))


def cmd_oracle_gp(cfg, out):
    gp = _gp(cfg)
    run = cfg["run"]
    trap_omega = cfg["gp"]["trap_omega"] or gp.hbar / (gp.mass * gp.L**2)
    s0 = make_two_perpendicular_vortices(TwoLineParams(gp.d, gp.L, gp.n_atoms))
    spec = _grid_spec(cfg, s0.widths)
    zoom = GridSpec(int(run["zoom_n"]), float(run["zoom_half_width"]) * gp.d)

    def topology(g):
        return trace_vortex_lines(spectral_resample(g, zoom)).topology()

    final, logs = evolve(
        sample(s0, spec), GPStepper(trap_omega, gp), float(run["dt"]), _steps(cfg),
        [Observer("topology", topology, int(run["observe_every"]))],
    )
    rows = [(t, ";".join(f"{a}|{b}" for a, b in topo)) for t, topo in logs["topology"]]
    out.text("topology.csv", _rows_to_csv(("time", "open_line_ends"), rows))
    lines = trace_vortex_lines(spectral_resample(final, zoom)).lines
    out.text("vortex_lines.csv", polylines_to_csv(lines))
    out.text("vortex_lines.json", polylines_to_json(lines))
    out.grid("final_grid.bin", final)


def cmd_gp_regime(cfg, out):
    report = regime_report(_gp(cfg), float(cfg["gp"]["trap_period"]))
    out.text("regime.txt", report.to_text())
    if not cfg.get("_quiet"):
        print(report.to_text(), end="")


COMMANDS = {
    "evolve-linear": cmd_evolve_linear,
    "evolve-nonlinear": cmd_evolve_nonlinear,
    "oracle-harmonic": cmd_oracle_harmonic,
    "oracle-gp": cmd_oracle_gp,
    "track-vortices": cmd_track_vortices,
    "moments": cmd_moments,
    "gp-regime": cmd_gp_regime,
    "verify": cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    """Usage errors are validation errors: exit 1 rather than argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    ap = _Parser(prog="vortexlift", description=__doc__.splitlines()[0])
    ap.add_argument("subcommand", choices=SUBCOMMANDS)
    ap.add_argument("--config", required=True, help="YAML config with sections trap/state/grid/run/gp")
    ap.add_argument("--out", required=True, help="output directory (created if missing)")
    ap.add_argument("--quiet", action="store_true")
    return ap


def run(config_path, subcommand, out_dir, quiet=False):
    """Run one subcommand; returns the process exit code."""
    try:
        cfg = load_config(config_path)
        cfg["_quiet"] = quiet
        root = Path(out_dir)
        root.mkdir(parents=True, exist_ok=True)
        outputs = Outputs(root)
        COMMANDS[subcommand](cfg, outputs)
    except InvalidArgumentError as exc:
        log.error("invalid input: %s", exc)
        return 1
    except NumericError as exc:
        log.error("numerical failure: %s", exc)
        return 2
    except (TypeError, ValueError) as exc:
        # malformed values that slipped past the schema, e.g. a short state.terms row
        log.error("invalid input: %s", exc)
        return 1
    for path in outputs.written:
        log.info("wrote %s", path)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s")
    return run(args.config, args.subcommand, args.out, args.quiet)


if __name__ == "__main__":
    sys.exit(main())
