"""Command-line interface: phase scans, parameter grids, critical temperatures,
winding staircases, Argand curves, and the self-validation battery.

Output is deterministic byte-for-byte: fixed column order, 17-significant-digit
floats, no timestamps, no locale dependence.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import chebyshev_phase, topology, uhlmann_core
from .spin_algebra import SpinNumber
from .thermal_state import LoopConfig

_ANGLE_LITERALS = {"pi": math.pi, "pi/2": math.pi / 2, "pi/4": math.pi / 4}

_ENGINES = ("chebyshev", "trace_closed", "trace_path_ordered")


# ---------------------------------------------------------------- parsing

def parse_angle(text: str) -> float:
    """An angle given as a decimal or one of the literals pi, pi/2, pi/4."""
    t = text.strip().lower()
    if t in _ANGLE_LITERALS:
        return _ANGLE_LITERALS[t]
    try:
        return float(t)
    except ValueError:
        raise ValueError(
            f"cannot parse angle {text!r}; use a decimal or one of pi, pi/2, pi/4"
        ) from None


def parse_number(text: str) -> float:
    try:
        return float(text.strip())
    except ValueError:
        raise ValueError(f"cannot parse number {text!r}") from None


def parse_values(text: str, parse=parse_number):
    """One value, a comma list, or an inclusive start:stop:count range.

    Returns (values, is_range); ranges must have count ≥ 2 and start < stop.
    """
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range {text!r} must look like start:stop:count")
        start, stop = parse(parts[0]), parse(parts[1])
        try:
            count = int(parts[2])
        except ValueError:
            raise ValueError(f"range count {parts[2]!r} must be an integer") from None
        if count < 2:
            raise ValueError("range count must be ≥ 2")
        if not start < stop:
            raise ValueError("range start must be < stop")
        return tuple(float(v) for v in np.linspace(start, stop, count)), True
    values = tuple(parse(piece) for piece in text.split(","))
    if not values:
        raise ValueError("empty value list")
    return values, False


@dataclass(frozen=True)
class ScanSpec:
    """One parsed scan request: the spin plus the theta and beta_b axes.

    Axes built from start:stop:count expressions are inclusive of both ends
    and carry count ≥ 2 with start < stop (enforced at parse time).
    """

    spin: SpinNumber
    thetas: tuple
    beta_bs: tuple
    engine: str = "chebyshev"
    steps: int = 4096


def _resolve_engine(args) -> tuple:
    engine = args.engine
    if engine not in _ENGINES:
        raise ValueError(f"engine must be one of {', '.join(_ENGINES)}")
    if args.steps is not None and engine != "trace_path_ordered":
        raise ValueError("--steps applies only to the trace_path_ordered engine")
    steps = args.steps if args.steps is not None else 4096
    if steps < 16:
        raise ValueError("steps must be ≥ 16")
    return engine, steps


def _phase_point(spec: ScanSpec, cfg: LoopConfig):
    if spec.engine == "chebyshev":
        return chebyshev_phase.uhlmann_phase_closed(spec.spin, cfg)
    if spec.engine == "trace_closed":
        return uhlmann_core.uhlmann_phase_trace(spec.spin, cfg, method="closed")
    return uhlmann_core.uhlmann_phase_trace(
        spec.spin, cfg, method="path_ordered", steps=spec.steps
    )


# ---------------------------------------------------------------- output

def _worker_count() -> int:
    raw = os.environ.get("UHLMANN_SPIN_WORKERS", "").strip()
    if raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError("UHLMANN_SPIN_WORKERS must be an integer ≥ 1") from None
    if n < 1:
        raise ValueError("UHLMANN_SPIN_WORKERS must be an integer ≥ 1")
    return n


def _map_ordered(fn, items):
    workers = _worker_count()
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _clean(value):
    # normalize float payloads (incl. -0.0) once, for both output formats
    if value is None or isinstance(value, (bool, int, str)):
        return value
    x = float(value)
    if x == 0.0:
        x = 0.0
    return x


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    return format(value, ".17g")


def _render(columns, rows, spec, out_format, extra=None) -> str:
    rows = [{k: _clean(v) for k, v in row.items()} for row in rows]
    if out_format == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(_csv_cell(row.get(c)) for c in columns))
        return "\n".join(lines) + "\n"
    payload = {"spec": spec, "rows": rows}
    if extra:
        payload.update(extra)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, output) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands

def cmd_phase_scan(args) -> int:
    spin = SpinNumber.from_string(args.j)
    theta = parse_angle(args.theta)
    beta_bs, _ = parse_values(args.beta_b)
    engine, steps = _resolve_engine(args)
    spec = ScanSpec(spin=spin, thetas=(theta,), beta_bs=beta_bs, engine=engine, steps=steps)
    results = _map_ordered(
        lambda b: _phase_point(spec, LoopConfig(beta_b=b, theta=theta)), beta_bs
    )
    rows = [
        {
            "beta_b": b,
            "phase": r.phase,
            "trace_magnitude": r.trace_magnitude,
            "singular_flag": r.singular,
        }
        for b, r in zip(beta_bs, results)
    ]
    spec_obj = {
        "command": "phase-scan",
        "j": str(spin),
        "theta": args.theta,
        "beta_b": args.beta_b,
        "engine": engine,
        "steps": steps,
    }
    text = _render(
        ["beta_b", "phase", "trace_magnitude", "singular_flag"],
        rows, spec_obj, args.format,
    )
    _emit(text, args.output)
    return 0


def cmd_grid(args) -> int:
    spin = SpinNumber.from_string(args.j)
    thetas, theta_is_range = parse_values(args.theta, parse=parse_angle)
    beta_bs, beta_is_range = parse_values(args.beta_b)
    if not (theta_is_range and beta_is_range):
        raise ValueError("grid needs start:stop:count ranges for both --theta and --beta-b")
    engine, steps = _resolve_engine(args)
    spec = ScanSpec(spin=spin, thetas=thetas, beta_bs=beta_bs, engine=engine, steps=steps)
    # row-major: theta is the outer (slow) axis
    points = [(t, b) for t in thetas for b in beta_bs]
    results = _map_ordered(
        lambda tb: _phase_point(spec, LoopConfig(beta_b=tb[1], theta=tb[0])), points
    )
    rows = [
        {
            "theta": t,
            "beta_b": b,
            "phase": r.phase,
            "trace_magnitude": r.trace_magnitude,
            "singular_flag": r.singular,
        }
        for (t, b), r in zip(points, results)
    ]
    spec_obj = {
        "command": "grid",
        "j": str(spin),
        "theta": args.theta,
        "beta_b": args.beta_b,
        "engine": engine,
        "steps": steps,
    }
    text = _render(
        ["theta", "beta_b", "phase", "trace_magnitude", "singular_flag"],
        rows, spec_obj, args.format,
    )
    _emit(text, args.output)
    return 0


def cmd_critical_temps(args) -> int:
    spin = SpinNumber.from_string(args.j)
    table = topology.critical_temperatures(spin)
    for warning in table.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    rows = [
        {"k": p.k, "beta_b": p.beta_b, "target": p.target, "residual": p.residual}
        for p in table.points
    ]
    spec_obj = {"command": "critical-temps", "j": str(spin)}
    text = _render(["k", "beta_b", "target", "residual"], rows, spec_obj, args.format)
    _emit(text, args.output)
    return 0


def cmd_winding(args) -> int:
    spin = SpinNumber.from_string(args.j)
    beta_bs, _ = parse_values(args.beta_b)
    rows = []
    for b in beta_bs:
        try:
            w = topology.winding_number(
                spin, b, initial_grid=args.initial_grid, max_refine=args.max_refine
            )
            rows.append(
                {
                    "beta_b": b,
                    "n_u": w.n_u,
                    "raw_integral": w.raw_integral,
                    "singular_flag": False,
                }
            )
        except topology.SingularInputError:
            rows.append(
                {"beta_b": b, "n_u": None, "raw_integral": None, "singular_flag": True}
            )
    spec_obj = {
        "command": "winding",
        "j": str(spin),
        "beta_b": args.beta_b,
        "initial_grid": args.initial_grid,
        "max_refine": args.max_refine,
    }
    text = _render(
        ["beta_b", "n_u", "raw_integral", "singular_flag"], rows, spec_obj, args.format
    )
    _emit(text, args.output)
    return 0


def cmd_argand(args) -> int:
    spin = SpinNumber.from_string(args.j)
    beta_bs, _ = parse_values(args.beta_b)
    if args.grid < 3:
        raise ValueError("--grid must be ≥ 3")
    thetas = np.linspace(0.0, math.pi, args.grid)
    rows = []
    for b in beta_bs:
        for t in thetas:
            z = chebyshev_phase.z_variable(LoopConfig(beta_b=b, theta=float(t)))
            rows.append(
                {
                    "record": "curve",
                    "k": None,
                    "beta_b": b,
                    "theta": float(t),
                    "re": z.value.real,
                    "im": z.value.imag,
                }
            )
    roots = [
        {"k": k + 1, "re": float(r), "im": 0.0}
        for k, r in enumerate(topology.chebyshev_roots(spin))
    ]
    for r in roots:
        rows.append(
            {
                "record": "root",
                "k": r["k"],
                "beta_b": None,
                "theta": None,
                "re": r["re"],
                "im": r["im"],
            }
        )
    spec_obj = {
        "command": "argand",
        "j": str(spin),
        "beta_b": args.beta_b,
        "grid": args.grid,
    }
    if args.format == "json":
        curve_rows = [row for row in rows if row["record"] == "curve"]
        for row in curve_rows:
            row.pop("record")
            row.pop("k")
        text = _render(
            [], curve_rows, spec_obj, "json", extra={"roots": roots}
        )
    else:
        text = _render(
            ["record", "k", "beta_b", "theta", "re", "im"], rows, spec_obj, "csv"
        )
    _emit(text, args.output)
    return 0


# ---------------------------------------------------------------- validate

def _validate_connection(spins, thetas, beta_bs, phis):
    worst = (0.0, None)
    worst_ah = (0.0, None)
    for j in spins:
        for theta in thetas:
            for b in beta_bs:
                cfg = LoopConfig(beta_b=b, theta=theta)
                for phi in phis:
                    closed = uhlmann_core.connection_closed_form(j, cfg, phi).coefficient
                    spectral = uhlmann_core.connection_spectral(j, cfg, phi).coefficient
                    err = float(np.abs(spectral - closed).max())
                    ah = max(
                        float(np.abs(closed + closed.conj().T).max()),
                        float(np.abs(spectral + spectral.conj().T).max()),
                    )
                    point = (str(j), theta, b, phi)
                    if err > worst[0]:
                        worst = (err, point)
                    if ah > worst_ah[0]:
                        worst_ah = (ah, point)
    return worst, worst_ah


def _validate_holonomy(spins, thetas, beta_bs, steps):
    worst = (0.0, None)
    worst_unitary = (0.0, None)
    worst_det = (0.0, None)
    for j in spins:
        eye = np.eye(j.dim)
        for theta in thetas:
            for b in beta_bs:
                cfg = LoopConfig(beta_b=b, theta=theta)
                closed = uhlmann_core.holonomy_closed_form(j, cfg).matrix
                path = uhlmann_core.holonomy_path_ordered(j, cfg, steps=steps).matrix
                point = (str(j), theta, b)
                err = float(np.abs(path - closed).max())
                unit = float(np.abs(closed.conj().T @ closed - eye).max())
                det = abs(np.linalg.det(closed) - 1.0)
                if err > worst[0]:
                    worst = (err, point)
                if unit > worst_unitary[0]:
                    worst_unitary = (unit, point)
                if det > worst_det[0]:
                    worst_det = (det, point)
    return worst, worst_unitary, worst_det


def _validate_phase(spins, thetas, beta_bs):
    worst = (0.0, None)
    for j in spins:
        for theta in thetas:
            for b in beta_bs:
                cfg = LoopConfig(beta_b=b, theta=theta)
                a = chebyshev_phase.uhlmann_phase_closed(j, cfg)
                t = uhlmann_core.uhlmann_phase_trace(j, cfg, method="closed")
                if a.singular or t.singular:
                    continue
                err = abs(math.remainder(a.phase - t.phase, 2 * math.pi))
                if err > worst[0]:
                    worst = (err, (str(j), theta, b))
    return worst


def _validate_winding(spins):
    worst = (0.0, None)
    for j in spins:
        criticals = topology.critical_temperatures(j).beta_values
        edges = (0.3,) + criticals + (criticals[-1] + 1.0,)
        probes = [0.5 * (edges[i] + edges[i + 1]) for i in range(len(edges) - 1)]
        for expected, b in enumerate(probes):
            w = topology.winding_number(j, b)
            enclosed = topology.roots_enclosed(j, b)
            err = float(max(abs(w.n_u - expected), abs(enclosed - expected)))
            if err > worst[0] or worst[1] is None:
                worst = (err, (str(j), b))
    return worst


def cmd_validate(args) -> int:
    if args.level == "quick":
        spins = [SpinNumber(n) for n in (1, 2, 3)]
        steps, holo_tol = 1024, 2e-6
        winding_spins = [SpinNumber(3)]
    else:
        spins = [SpinNumber(n) for n in range(1, 7)]
        steps, holo_tol = 4096, 2e-7
        winding_spins = [SpinNumber(3), SpinNumber(6)]
    thetas = [0.1, math.pi / 4, math.pi / 2, 2.7]
    phis = [0.0, 1.0, 4.0]

    (conn, conn_pt), (ah, ah_pt) = _validate_connection(spins, thetas, [0.5, 2.0, 8.0], phis)
    (holo, holo_pt), (unit, unit_pt), (det, det_pt) = _validate_holonomy(
        spins, thetas, [0.5, 1.2, 2.0], steps
    )
    phase, phase_pt = _validate_phase(spins, thetas, [0.5, 1.2, 2.0, 5.0])
    winding, winding_pt = _validate_winding(winding_spins)

    checks = [
        ("connection spectral-vs-closed", conn, 1e-9, conn_pt),
        ("connection anti-hermiticity", ah, 1e-12, ah_pt),
        (f"holonomy path({steps})-vs-closed", holo, holo_tol, holo_pt),
        ("holonomy unitarity", unit, 1e-9, unit_pt),
        ("holonomy determinant", det, 1e-10, det_pt),
        ("phase chebyshev-vs-trace", phase, 1e-8, phase_pt),
        ("winding vs enclosed roots", winding, 0.0, winding_pt),
    ]
    failed = False
    for name, err, tol, point in checks:
        ok = err <= tol
        status = "PASS" if ok else "FAIL"
        print(f"{name:34s} max error {err:.3e}  tol {tol:.1e}  {status}  worst at {point}")
        if not ok:
            failed = True
    return 1 if failed else 0


# ---------------------------------------------------------------- entry

def _add_common(sub, engine: bool = False) -> None:
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--output", default=None, help="write to this file instead of stdout")
    if engine:
        sub.add_argument("--engine", choices=_ENGINES, default="chebyshev")
        sub.add_argument("--steps", type=int, default=None,
                         help="integration steps (trace_path_ordered only)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uhlmann-spin",
        description="Uhlmann phase of a thermal spin in a slowly rotating field",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("phase-scan", help="phase along a beta_b range at fixed theta")
    p.add_argument("--j", required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--beta-b", required=True)
    _add_common(p, engine=True)
    p.set_defaults(func=cmd_phase_scan)

    p = subs.add_parser("grid", help="phase over a theta x beta_b grid")
    p.add_argument("--j", required=True)
    p.add_argument("--theta", required=True, help="start:stop:count (theta is the outer axis)")
    p.add_argument("--beta-b", required=True, help="start:stop:count")
    _add_common(p, engine=True)
    p.set_defaults(func=cmd_grid)

    p = subs.add_parser("critical-temps", help="critical beta_b values for one spin")
    p.add_argument("--j", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_critical_temps)

    p = subs.add_parser("winding", help="winding number over one or many beta_b values")
    p.add_argument("--j", required=True)
    p.add_argument("--beta-b", required=True)
    p.add_argument("--initial-grid", type=int, default=256)
    p.add_argument("--max-refine", type=int, default=30)
    _add_common(p)
    p.set_defaults(func=cmd_winding)

    p = subs.add_parser("argand", help="z-plane curves plus the companion roots")
    p.add_argument("--j", required=True)
    p.add_argument("--beta-b", required=True, help="comma list of beta_b values")
    p.add_argument("--grid", type=int, default=257, help="curve samples over [0, pi]")
    _add_common(p)
    p.set_defaults(func=cmd_argand)

    p = subs.add_parser("validate", help="run the internal cross-validation battery")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (topology.MissingRootError, topology.UnresolvedWindingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
