"""Command-line interface.

Subcommands: statics, elastic, elastic-sweep, quantum, anomaly, anomaly-sweep,
reproduce. Global flags (before or after the subcommand): --format csv|json,
--tol, --output, --seed (accepted and ignored; nothing here is randomized).

Exit status: 0 on success, 1 on a model or numerical error (or a failing
reproduction row), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

import numpy as np

from . import __version__, anomaly, elastic, quantum, statics
from .errors import ThreePillarError
from .reproduce import all_passed, reproduce_paper

DEFAULT_TOL = 1e-12
_NUMERIC_TOKEN = re.compile(r"^-[\d.]")


def _float_list(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _geometric(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:factor, got {text!r}")
    try:
        start, stop, factor = (float(p) for p in parts)
        return elastic.geometric_grid(start, stop, factor)
    except (ValueError, ThreePillarError) as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from None


def _grid(text: str) -> list[float]:
    return _geometric(text) if ":" in text else _float_list(text)


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda value: argparse.SUPPRESS) if suppress else (lambda value: value)
    parser.add_argument("--format", choices=("csv", "json"), default=default("csv"))
    parser.add_argument("--tol", type=float, default=default(None),
                        help="quadrature tolerance override")
    parser.add_argument("--output", default=default(None), help="write report to this path")
    parser.add_argument("--seed", type=int, default=default(None),
                        help="reserved; no computation here is randomized")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="threepillar", description=__doc__.splitlines()[0])
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        _common(p, suppress=True)
        return p

    p = add("statics", "equilibrium force family for rigid supports")
    p.add_argument("--weight", type=float, required=True)
    p.add_argument("--positions", type=_float_list, required=True)
    p.add_argument("--param", type=_float_list, default=None,
                   help="forces at the interior (redundant) supports; f for three supports")

    p = add("elastic", "unique spring-regularized solution")
    p.add_argument("--weight", type=float, required=True)
    p.add_argument("--positions", type=_float_list, required=True)
    p.add_argument("--springs", type=_float_list, required=True)

    p = add("elastic-sweep", "stiff-limit sweep with fixed stiffness ratios")
    p.add_argument("--weight", type=float, required=True)
    p.add_argument("--positions", type=_float_list, required=True)
    p.add_argument("--ratios", type=_float_list, required=True)
    p.add_argument("--kappa-grid", type=_geometric, required=True, help="start:stop:factor")

    p = add("quantum", "reduced Hamiltonian, ground state and central force")
    p.add_argument("--mass", type=float, required=True)
    p.add_argument("--stiffness", type=float, required=True)
    p.add_argument("--weight", type=float, required=True)
    p.add_argument("--grid-points", type=int, default=2001)
    p.add_argument("--box", type=float, default=None, help="box halfwidth (default 8 sigma)")

    p = add("anomaly", "regulated product Lambda * int u exp(-u^2)")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--a", type=float, required=True)

    p = add("anomaly-sweep", "central force under a cutoff scheme as k grows")
    p.add_argument("--scheme", choices=("symmetric", "designed", "none"), required=True)
    p.add_argument("--target", type=float, default=0.0)
    p.add_argument("--k-grid", type=_grid, required=True, help="k1,k2,... or start:stop:factor")
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--weight", type=float, default=0.0)

    add("reproduce", "check every analytic result and print a pass/fail table")
    return parser


def _preprocess(argv: list[str]) -> list[str]:
    # keep "--positions -1,0,1" from being read as an option
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NUMERIC_TOKEN.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _clean(value):
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    return value


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    return str(value)


def _meta(args, tol) -> dict:
    return {"version": __version__, "command": args.command, "tolerance": tol,
            "units": "natural units, hbar = 1"}


def _cmd_statics(args, tol):
    problem = statics.BeamProblem(args.weight, tuple(args.positions))
    family = statics.solve_family(statics.build_equilibrium(problem))
    pos = problem.support_positions
    if args.param is not None:
        forces = statics.redundant_member(family, args.param)
        records = [{"support": i + 1, "position": pos[i], "force": float(forces[i])}
                   for i in range(len(pos))]
        return records, None
    records = []
    for i in range(len(pos)):
        rec = {"support": i + 1, "position": pos[i], "particular": float(family.particular[i])}
        for j, row in enumerate(family.nullspace_basis):
            rec[f"basis{j + 1}"] = float(row[i])
        records.append(rec)
    return records, {"nullity": family.nullity,
                     "free_parameters": list(family.free_parameter_names)}


def _cmd_elastic(args, tol):
    problem = statics.BeamProblem(args.weight, tuple(args.positions))
    springs = elastic.SpringArray(tuple(args.springs))
    sol = elastic.solve_elastic(problem, springs)
    records = [{"support": i + 1, "position": problem.support_positions[i],
                "spring": springs.constants[i], "displacement": float(sol.displacements[i]),
                "force": float(sol.forces[i])} for i in range(problem.n_supports)]
    return records, {"height": sol.rigid_dofs[0], "tilt": sol.rigid_dofs[1]}


def _cmd_elastic_sweep(args, tol):
    problem = statics.BeamProblem(args.weight, tuple(args.positions))
    sweep = elastic.stiff_limit_sweep(problem, tuple(args.ratios), args.kappa_grid)
    n = problem.n_supports
    records = []
    for pt in sweep.points:
        rec = {"kappa": pt.kappa}
        rec.update({f"d{i + 1}": float(pt.displacements[i]) for i in range(n)})
        rec.update({f"F{i + 1}": float(pt.forces[i]) for i in range(n)})
        records.append(rec)
    summary = {"limit_forces": [float(x) for x in sweep.limit_forces],
               "extrapolated_forces": [float(x) for x in sweep.extrapolated_forces],
               "self_consistent": sweep.self_consistent}
    return records, summary


def _cmd_quantum(args, tol):
    model = quantum.QuadraticHamiltonian(args.mass, args.stiffness)
    red = quantum.reduce_hamiltonian(model)
    modes = quantum.normal_modes(red)
    gs = quantum.ground_state(red)
    fd = quantum.fd_ground_state(red, args.grid_points, args.box)
    record = {
        "mass": args.mass, "stiffness": args.stiffness, "weight": args.weight,
        "omega_r": modes.omega_r, "omega_s": modes.omega_s,
        "e0_analytic": gs.energy, "e0_numeric": fd.energy, "e0_numeric_raw": fd.energy_raw,
        "gaussian_r": gs.gaussian_coefficient_r, "gaussian_s": gs.gaussian_coefficient_s,
        "mean_r": quantum.expectation_r(gs, tol),
        "central_force": quantum.central_force_expectation(model, args.weight),
    }
    return [record], None


def _cmd_anomaly(args, tol):
    closed = anomaly.regulated_product_closed(args.lam, args.a)
    quad = anomaly.regulated_product_quadrature(args.lam, args.a, args.tol or 1e-10)
    return [{"lambda": args.lam, "a": args.a, "cutoff": closed.cutoff,
             "value": closed.value, "quadrature": quad.value}], None


def _cmd_anomaly_sweep(args, tol):
    model = quantum.QuadraticHamiltonian(args.mass, args.k_grid[0])
    if args.scheme == "designed":
        scheme = anomaly.design_scheme(args.target, model)
    elif args.scheme == "symmetric":
        scheme = anomaly.symmetric_scheme(mass=args.mass)
    else:
        scheme = None
    result = anomaly.force_limit(scheme, model, args.k_grid, args.weight)
    records = [{"k": k, "force": f} for k, f in zip(result.k_values, result.forces)]
    return records, {"limit": result.limit, "error_estimate": result.error_estimate,
                     "status": result.status}


def _cmd_reproduce(args, tol):
    rows = reproduce_paper()
    records = [{"check": r.check, "computed": r.computed, "expected": r.expected,
                "error": r.error, "tolerance": r.tolerance, "pass": r.passed} for r in rows]
    return records, {"all_passed": all_passed(rows)}


_COMMANDS = {
    "statics": _cmd_statics,
    "elastic": _cmd_elastic,
    "elastic-sweep": _cmd_elastic_sweep,
    "quantum": _cmd_quantum,
    "anomaly": _cmd_anomaly,
    "anomaly-sweep": _cmd_anomaly_sweep,
    "reproduce": _cmd_reproduce,
}


def render(records, summary, meta, fmt: str) -> str:
    records = [{k: _clean(v) for k, v in rec.items()} for rec in records]
    if summary is not None:
        summary = {k: (_clean(v) if not isinstance(v, list) else [_clean(x) for x in v])
                   for k, v in summary.items()}
    if fmt == "json":
        doc = {"meta": meta, "records": records}
        if summary is not None:
            doc["summary"] = summary
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if records:
        header = list(records[0])
        writer.writerow(header)
        for rec in records:
            writer.writerow([_cell(rec.get(h)) for h in header])
    if summary is not None and meta["command"] == "anomaly-sweep":
        buf.write(json.dumps(summary) + "\n")
    return buf.getvalue()


def run(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(_preprocess(argv))
    tol = DEFAULT_TOL if args.tol is None else args.tol
    if not tol > 0:
        parser.error("--tol must be positive")
    try:
        records, summary = _COMMANDS[args.command](args, tol)
    except ThreePillarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = render(records, summary, _meta(args, tol), args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "reproduce" and not summary["all_passed"]:
        return 1
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
