"""Command-line interface.

    expwell solve --g 1.4142135624 --n 0 --tol 1e-6
    expwell spectrum --g 5 --nmax 6 --check-oracle
    expwell hobound --g-squared 2 --omega 1
    expwell figdata fig2 --out fig2.csv
    expwell oracle --g 2 --nmax 3
    expwell selfcheck --suite all

Exit codes: 0 ok, 1 selfcheck failure, 2 domain error, 3 envelope error,
4 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__, checks, hobound, oracle, solver, specfun

SCHEMA = "expwell.run/1"

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_DOMAIN = 2
EXIT_ENVELOPE = 3
EXIT_IO = 4


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict
    wall_time_ms: int = 0
    versions: dict = field(
        default_factory=lambda: {
            "expwell": __version__,
            "numpy": np.__version__,
            "max_coupling": solver.MAX_COUPLING,
            "max_bessel_order": specfun.MAX_ORDER,
        }
    )

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "results": _round_floats(self.results),
            "versions": self.versions,
            "wall_time_ms": self.wall_time_ms,
        }


def _sig(x: float) -> float:
    return float(f"{x:.12g}")


def _round_floats(obj):
    if isinstance(obj, float):
        return _sig(obj) if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _table(rows: list[dict]) -> str:
    if not rows:
        return "(no rows)\n"
    cols = list(rows[0])
    cells = [[_fmt(r.get(c, "")) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        flat = [{k: _fmt(v) for k, v in r.items()} for r in rows]
        writer = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(flat)
    return buf.getvalue()


def _emit(report: RunReport, rows: list[dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(report.to_dict(), indent=2) + "\n")
    elif fmt == "csv":
        out.write(_csv(rows))
    else:
        out.write(_table(rows))


def _coupling(args) -> float:
    if args.g is None and args.g_squared is None:
        raise CLIError("one of --g / --g-squared is required", EXIT_DOMAIN)
    if args.g is not None and args.g_squared is not None:
        raise CLIError("give only one of --g / --g-squared", EXIT_DOMAIN)
    if args.g_squared is not None:
        if args.g_squared <= 0:
            raise CLIError(f"--g-squared must be > 0, got {args.g_squared}", EXIT_DOMAIN)
        g, flag = math.sqrt(args.g_squared), "--g-squared"
    else:
        g, flag = args.g, "--g"
    if not math.isfinite(g) or g <= 0:
        raise CLIError(f"{flag} must be > 0, got {g}", EXIT_DOMAIN)
    if g > solver.MAX_COUPLING:
        raise CLIError(
            f"{flag}: coupling {g:.12g} outside the envelope g <= {solver.MAX_COUPLING:g}",
            EXIT_ENVELOPE,
        )
    return g


def _state_row(s: solver.BoundState) -> dict:
    lo, hi = s.energy_bracket
    return {
        "n": s.n,
        "parity": s.parity.value,
        "energy": s.energy,
        "e_lo": lo,
        "e_hi": hi,
        "k": s.k,
        "nodes": s.nodes,
        "iterations": s.iterations,
        "certified": s.certified,
    }


def cmd_solve(args) -> tuple[RunReport, list[dict]]:
    g = _coupling(args)
    try:
        state = solver.solve_state(g, args.n, args.tol, args.grid)
    except solver.NoSuchStateError as exc:
        raise CLIError(f"--n: {exc}", EXIT_DOMAIN) from exc
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_DOMAIN) from exc
    inputs = {"g": g, "n": args.n, "tol": args.tol}
    return RunReport("solve", inputs, {"state": state.to_dict()}), [_state_row(state)]


def cmd_spectrum(args) -> tuple[RunReport, list[dict]]:
    g = _coupling(args)
    if args.nmax < 0:
        raise CLIError("--nmax must be >= 0", EXIT_DOMAIN)
    try:
        states = solver.spectrum(g, args.nmax, args.tol, args.grid)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_DOMAIN) from exc
    rows = [_state_row(s) for s in states]
    results: dict = {"states": [s.to_dict() for s in states], "count": len(states)}
    if args.check_oracle:
        grid = oracle.FDGrid(g, args.oracle_half_width, args.oracle_points)
        ref = oracle.fd_spectrum(g, grid, args.nmax)
        results["oracle"] = ref.to_dict()
        for i, row in enumerate(rows):
            if i < len(ref.energies):
                row["oracle"] = ref.energies[i]
                row["oracle_err"] = ref.richardson_error[i]
                row["delta"] = row["energy"] - ref.energies[i]
            else:
                row["oracle"] = row["oracle_err"] = row["delta"] = float("nan")
    inputs = {"g": g, "nmax": args.nmax, "tol": args.tol, "check_oracle": args.check_oracle}
    return RunReport("spectrum", inputs, results), rows


def cmd_hobound(args) -> tuple[RunReport, list[dict]]:
    g = _coupling(args)
    chosen = [args.xi is not None, args.omega is not None, args.optimize]
    if sum(chosen) != 1:
        raise CLIError("give exactly one of --xi / --omega / --optimize", EXIT_DOMAIN)
    if args.n < 0:
        raise CLIError("--n must be >= 0", EXIT_DOMAIN)
    inputs = {"g": g, "n": args.n, "xi": args.xi, "omega": args.omega, "optimize": args.optimize}
    if args.optimize:
        opt = hobound.optimal_xi(g, args.n)
        row = opt.to_dict()
        row["kind"] = "upper_bound"
        report = RunReport("hobound", inputs, {"estimate": row})
        if not opt.interior:
            report.results["warning"] = "no interior minimum on (0, 3]; boundary infimum reported"
        return report, [row]
    try:
        xi = args.xi if args.xi is not None else hobound.xi_from_omega(g, args.omega)
        est = hobound.ho_upper_bound(g, xi, args.n)
    except ValueError as exc:
        flag = "--xi" if args.xi is not None else "--omega"
        raise CLIError(f"{flag}: {exc}", EXIT_DOMAIN) from exc
    row = est.to_dict()
    row["kind"] = "upper_bound"
    return RunReport("hobound", inputs, {"estimate": row}), [row]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("EXPWELL_THREADS", "1")))
    except ValueError:
        return 1


def fig1_rows(g: float, omega: float, x_range: float, resolution: int) -> list[dict]:
    xi = hobound.xi_from_omega(g, omega)
    shift = hobound.shift_of_xi(g, xi)
    xs = np.linspace(-x_range, x_range, resolution)
    xs = np.union1d(xs, [-xi, xi])
    v = solver.potential(xs, g)
    ho = hobound.majorant(xs, omega, shift)
    return [{"x": float(x), "V": float(a), "V_HO": float(b)} for x, a, b in zip(xs, v, ho)]


def fig2_rows(g_range, xi_range, resolution: int, n: int = 0) -> list[dict]:
    gs = np.linspace(g_range[0], g_range[1], resolution)
    xis = np.linspace(xi_range[0], xi_range[1], resolution)

    def row_block(g):
        return [
            {"g": float(g), "xi": float(xi), "E_HO": hobound.ho_upper_bound(g, xi, n).bound}
            for xi in xis
        ]

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        blocks = list(pool.map(row_block, gs))
    return [r for block in blocks for r in block]


def curve_rows(xi_range, resolution: int) -> list[dict]:
    xis = np.union1d(np.linspace(xi_range[0], xi_range[1], resolution), [hobound.CRITICAL_XI])
    xis = xis[(xis >= xi_range[0]) & (xis <= xi_range[1])]
    rows = []
    for xi in xis:
        p = hobound.optimal_curve_point(float(xi))
        rows.append({"xi0": p.xi0, "g": p.g, "branch": p.branch.value})
    return rows


def cmd_figdata(args) -> tuple[RunReport, list[dict]]:
    if args.resolution < 2:
        raise CLIError("--resolution must be >= 2", EXIT_DOMAIN)
    if args.which == "fig1":
        g = _coupling(args) if (args.g is not None or args.g_squared is not None) else math.sqrt(2.0)
        rows = fig1_rows(g, args.omega, args.x_range, args.resolution)
        inputs = {"which": "fig1", "g": g, "omega": args.omega, "x_range": args.x_range}
    elif args.which == "fig2":
        rows = fig2_rows(args.g_range, args.xi_range, args.resolution)
        inputs = {"which": "fig2", "g_range": args.g_range, "xi_range": args.xi_range}
    else:
        xi_range = args.xi_range if args.xi_range_set else [0.1, 10.0]
        rows = curve_rows(xi_range, args.resolution)
        inputs = {"which": "curve", "xi_range": xi_range}
    inputs["resolution"] = args.resolution
    report = RunReport("figdata", inputs, {"rows": len(rows), "out": args.out})
    if args.out != "-":
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write(_csv(rows))
        except OSError as exc:
            raise CLIError(f"cannot write {args.out}: {exc}", EXIT_IO) from exc
    return report, rows


def cmd_oracle(args) -> tuple[RunReport, list[dict]]:
    g = _coupling(args)
    try:
        grid = oracle.FDGrid(g, args.half_width, args.points)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_DOMAIN) from exc
    ref = oracle.fd_spectrum(g, grid, args.nmax)
    rows = [
        {"n": i, "energy": e, "richardson_error": err}
        for i, (e, err) in enumerate(zip(ref.energies, ref.richardson_error))
    ]
    results = ref.to_dict()
    if args.eigenvector is not None:
        try:
            xs, vs = oracle.fd_eigenvector(g, grid, args.eigenvector)
        except oracle.OracleError as exc:
            raise CLIError(f"--eigenvector: {exc}", EXIT_DOMAIN) from exc
        path = args.eigenvector_out
        try:
            with open(path, "w", newline="") as fh:
                fh.write(_csv([{"x": float(x), "value": float(v)} for x, v in zip(xs, vs)]))
        except OSError as exc:
            raise CLIError(f"cannot write {path}: {exc}", EXIT_IO) from exc
        results["eigenvector_file"] = path
    inputs = {"g": g, "nmax": args.nmax, "half_width": args.half_width, "points": args.points}
    return RunReport("oracle", inputs, results), rows


def cmd_selfcheck(args) -> tuple[RunReport, list[dict]]:
    suite = args.suite_pos or args.suite
    results = checks.run_suite(suite)
    rows = [r.to_dict() for r in results]
    report = RunReport("selfcheck", {"suite": suite}, {"checks": rows})
    failed = [r.name for r in results if not r.passed]
    report.results["failed"] = failed
    return report, rows


def _add_coupling(p: argparse.ArgumentParser) -> None:
    p.add_argument("--g", type=float, help="coupling g (well depth g^2)")
    p.add_argument("--g-squared", type=float, help="well depth g^2 instead of g")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expwell", description="Bound states of V(x) = -g^2 exp(-|x|)."
    )
    parser.add_argument("--version", action="version", version=f"expwell {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="bracket one bound state")
    _add_coupling(p)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10, help="bracket width in k")
    p.add_argument("--grid", type=int, default=solver.MIN_GRID, help="node-count grid size")
    _add_format(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("spectrum", help="all bound states up to --nmax")
    _add_coupling(p)
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--grid", type=int, default=solver.MIN_GRID)
    p.add_argument("--check-oracle", action="store_true")
    p.add_argument("--oracle-half-width", type=float, default=40.0)
    p.add_argument("--oracle-points", type=int, default=16001)
    _add_format(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("hobound", help="harmonic-oscillator upper bound")
    _add_coupling(p)
    p.add_argument("--xi", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--optimize", action="store_true")
    p.add_argument("--n", type=int, default=0)
    _add_format(p)
    p.set_defaults(func=cmd_hobound)

    p = sub.add_parser("figdata", help="CSV data for the majorization figures")
    p.add_argument("which", choices=["fig1", "fig2", "curve"])
    _add_coupling(p)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--x-range", type=float, default=3.0)
    p.add_argument("--g-range", type=float, nargs=2, default=[0.5, 3.0])
    p.add_argument("--xi-range", type=float, nargs=2, default=None)
    p.add_argument("--resolution", type=int, default=61)
    p.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    _add_format(p)
    p.set_defaults(func=cmd_figdata)

    p = sub.add_parser("oracle", help="finite-difference reference spectrum")
    _add_coupling(p)
    p.add_argument("--nmax", type=int, default=5)
    p.add_argument("--half-width", type=float, default=40.0)
    p.add_argument("--points", type=int, default=16001)
    p.add_argument("--eigenvector", type=int, help="also export this eigenvector")
    p.add_argument("--eigenvector-out", default="eigenvector.csv")
    _add_format(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("selfcheck", help="run numerical self-checks")
    p.add_argument("suite_pos", nargs="?", choices=["specfun", "solver", "hobound", "all"])
    p.add_argument("--suite", choices=["specfun", "solver", "hobound", "all"], default="all")
    _add_format(p)
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "figdata":
        args.xi_range_set = args.xi_range is not None
        if args.xi_range is None:
            args.xi_range = [0.1, 6.0]
    start = time.perf_counter()
    try:
        report, rows = args.func(args)
    except CLIError as exc:
        print(f"expwell {args.command}: {exc}", file=sys.stderr)
        return exc.code
    report.wall_time_ms = int(round(1000 * (time.perf_counter() - start)))
    if args.command == "figdata" and args.out != "-" and args.format != "json":
        print(f"wrote {len(rows)} rows to {args.out}")
    elif args.command == "figdata" and args.out == "-" and args.format == "table":
        sys.stdout.write(_csv(rows))
    else:
        _emit(report, rows, args.format)

    if args.command == "selfcheck":
        failed = report.results["failed"]
        if failed:
            print("FAILED: " + ", ".join(failed), file=sys.stderr)
            return EXIT_CHECK
    if args.command == "hobound" and "warning" in report.results:
        print(f"expwell hobound: {report.results['warning']}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
