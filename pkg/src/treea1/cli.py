"""Command-line interface: verification campaigns, extremal sweeps, search, inspection.

Exit codes: 0 all checks passed, 1 a mathematical check failed (a
counterexample file is written), 2 usage or parameter error.  Every command
that writes data files also writes a ``manifest.json`` sidecar; identical
flags and seed reproduce the data files byte for byte (timestamps live only
in the manifest).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import ParameterError, ViolationError
from .maximal import a1_constant, maximal_function, stopping_family
from .rationals import as_fraction, decimal_string, format_rational
from .rearrangement import profile_to_text, rearrange, sup_ratio
from .search import SearchConfig, hill_climb
from .tree import make_shape
from .verify import ALL_CHECKS, audit_superlevel, fuzz_campaign, sharpness_sweep
from .weights import weight_from_text, weight_to_text

MANIFEST_NAME = "manifest.json"


def _parse_rational_list(text: str) -> list[Fraction]:
    items = [piece for piece in text.split(",") if piece.strip()]
    if not items:
        raise ParameterError(f"expected a comma-separated list of rationals, got {text!r}")
    return [as_fraction(piece.strip()) for piece in items]


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(piece.strip()) for piece in text.split(",") if piece.strip()]
    except ValueError as exc:
        raise ParameterError(f"expected a comma-separated list of integers, got {text!r}") from exc


def _bool_cell(flag: bool | None) -> str:
    if flag is None:
        return ""
    return "true" if flag else "false"


def _rational_cells(value: Fraction) -> list[str]:
    return [format_rational(value), decimal_string(value)]


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    lines = [f"# manifest: {MANIFEST_NAME}", ",".join(header)]
    lines.extend(",".join(row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _write_manifest(outdir: Path, command: str, parameters: dict, seed, outputs: list[str], started: float) -> None:
    manifest = {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "artifact_version": __version__,
        "started_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
        "finished_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(time.time())),
        "outputs": sorted(outputs),
    }
    (outdir / MANIFEST_NAME).write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def _outdir(args) -> Path:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    return outdir


def _cmd_verify(args) -> int:
    started = time.time()
    outdir = _outdir(args)
    grid = _parse_rational_list(args.grid)
    make_shape(args.k, args.depth)
    parameters = {
        "k": args.k,
        "depth": args.depth,
        "trials": args.trials,
        "grid": [format_rational(g) for g in grid],
        "exhaustive": args.exhaustive,
        "threads": args.threads,
    }
    header = (
        ["trial", "weight_hash"]
        + ["c", "c_dec", "bound", "bound_dec", "sup_ratio", "sup_ratio_dec", "margin", "margin_dec"]
        + ["bound_holds", "stopping_consistent", "growth_bound_ok", "weak_type_ok",
           "decomposition_ok", "oracle_match", "kadic_ok"]
    )
    try:
        summary = fuzz_campaign(
            args.k,
            args.depth,
            args.trials,
            args.seed,
            grid,
            checks=ALL_CHECKS,
            exhaustive=args.exhaustive,
            threads=args.threads,
        )
    except ViolationError as exc:
        counter = outdir / "counterexample.txt"
        counter.write_text(exc.weight_text + f"check: {exc.check}\ndetail: {exc.detail}\n")
        _write_manifest(outdir, "verify", parameters, args.seed, [counter.name], started)
        print(f"violation: {exc}", file=sys.stderr)
        print(f"counterexample written to {counter}", file=sys.stderr)
        return 1

    rows = []
    for row in summary.rows:
        cells = [str(row.index), row.weight_hash]
        for value in (row.c, row.bound, row.sup_ratio, row.margin):
            cells.extend(_rational_cells(value))
        cells.extend(
            _bool_cell(flag)
            for flag in (
                row.bound_holds,
                row.stopping_consistent,
                row.growth_bound_ok,
                row.weak_type_ok,
                row.decomposition_ok,
                row.oracle_match,
                row.kadic_ok,
            )
        )
        rows.append(cells)
    report = outdir / "report.csv"
    _write_csv(report, header, rows)
    _write_manifest(outdir, "verify", parameters, summary.seed, [report.name], started)
    worst = format_rational(summary.worst_margin) if summary.worst_margin is not None else "n/a"
    print(f"{len(summary.rows)} weights checked, zero violations, worst margin {worst}")
    return 0


def _cmd_extremal(args) -> int:
    started = time.time()
    outdir = _outdir(args)
    c = as_fraction(args.c)
    if args.mode == "exact":
        depths = [2]
        deltas = [Fraction(1, args.k**2)]
    else:
        depths = _parse_int_list(args.depths)
        deltas = _parse_rational_list(args.delta_steps) if args.delta_steps else None
    rows = sharpness_sweep(args.k, c, depths, deltas)
    header = []
    for name in ("depth", "delta", "nominal_c", "measured_c", "bound", "sup_ratio", "ratio_at_branch_scale", "gap"):
        if name == "depth":
            header.append(name)
        else:
            header.extend([name, f"{name}_dec"])
    table = []
    for row in rows:
        cells = [str(row.depth)]
        for value in (
            row.delta,
            row.nominal_c,
            row.measured_c,
            row.bound,
            row.sup_ratio,
            row.ratio_at_branch_scale,
            row.gap,
        ):
            cells.extend(_rational_cells(value))
        table.append(cells)
    sweep = outdir / "sweep.csv"
    _write_csv(sweep, header, table)
    parameters = {
        "k": args.k,
        "c": format_rational(c),
        "mode": args.mode,
        "depths": depths,
        "delta_steps": [format_rational(d) for d in deltas] if deltas else None,
    }
    _write_manifest(outdir, "extremal", parameters, None, [sweep.name], started)
    print(f"{len(rows)} sweep rows written to {sweep}")
    return 0


def _cmd_search(args) -> int:
    started = time.time()
    outdir = _outdir(args)
    config = SearchConfig(
        shape=make_shape(args.k, args.depth),
        iterations=args.iters,
        restarts=args.restarts,
        seed=args.seed,
    )
    result = hill_climb(config)

    trace = outdir / "trace.csv"
    _write_csv(trace, ["iteration", "objective"], [[str(i), repr(v)] for i, v in enumerate(result.trace)])
    best = outdir / "best_weight.txt"
    best.write_text(weight_to_text(result.best_weight))
    summary = outdir / "summary.json"
    summary.write_text(
        json.dumps(
            {
                "manifest": MANIFEST_NAME,
                "best_objective": result.best_objective,
                "exact_objective": format_rational(result.exact_objective),
                "exact_objective_dec": decimal_string(result.exact_objective),
                "objective_at_most_one": result.exact_objective <= 1,
                "best_restart": result.best_restart,
            },
            sort_keys=True,
            indent=2,
        )
        + "\n"
    )
    parameters = {"k": args.k, "depth": args.depth, "iters": args.iters, "restarts": args.restarts}
    _write_manifest(outdir, "search", parameters, args.seed, [trace.name, best.name, summary.name], started)
    print(f"best objective {result.best_objective:.6f} (exact {result.exact_objective})")
    return 0


def _audit_json(audit) -> dict:
    payload = {
        "t": format_rational(audit.t),
        "level_value": format_rational(audit.level_value),
        "threshold": format_rational(audit.threshold),
        "degenerate": audit.degenerate,
        "nodes": [[n.level, n.index] for n in audit.nodes],
        "superlevel_measure": format_rational(audit.superlevel_measure),
        "above_threshold_measure": format_rational(audit.above_threshold_measure),
        "set_average": format_rational(audit.set_average) if audit.set_average is not None else None,
        "checks": {
            "nodes_are_members": audit.nodes_are_members,
            "average_bounded": audit.average_bounded,
            "dominates_prefix": audit.dominates_prefix,
            "inside_level_set": audit.inside_level_set,
            "measures_ordered": audit.measures_ordered,
        },
        "passed": audit.passed,
    }
    return payload


def _cmd_inspect(args) -> int:
    try:
        text = Path(args.weight).read_text()
    except OSError as exc:
        raise ParameterError(f"cannot read weight file {args.weight!r}: {exc}") from exc
    w = weight_from_text(text)
    c = a1_constant(w)
    bound = w.shape.k * c - w.shape.k + 1
    mf = maximal_function(w)
    fam = stopping_family(w)
    parts = fam.parts()
    profile = rearrange(w)
    ratio, witness = sup_ratio(profile)
    audit = audit_superlevel(w, as_fraction(args.t)) if args.t is not None else None

    if args.json:
        payload = {
            "k": w.shape.k,
            "depth": w.shape.m,
            "leaf_values": [format_rational(v) for v in w.leaf_values],
            "a1_constant": format_rational(c),
            "bound": format_rational(bound),
            "maximal_function": [format_rational(v) for v in mf],
            "stopping_family": [
                {
                    "level": node.level,
                    "index": node.index,
                    "average": format_rational(fam.node_averages[node]),
                    "star": [fam.star[node].level, fam.star[node].index] if node in fam.star else None,
                    "leaves": list(parts.get(node, ())),
                }
                for node in fam.members
            ],
            "profile": {
                "pieces": [[format_rational(p.measure), format_rational(p.value)] for p in profile.pieces]
            },
            "sup_ratio": format_rational(ratio),
            "witness": format_rational(witness),
        }
        if audit is not None:
            payload["audit"] = _audit_json(audit)
        print(json.dumps(payload, sort_keys=True, indent=2))
        return 0

    print(f"weight on k={w.shape.k}, depth={w.shape.m}: {' '.join(format_rational(v) for v in w.leaf_values)}")
    print(f"a1 constant  {format_rational(c)}  (bound k*c-k+1 = {format_rational(bound)})")
    print(f"maximal fn   {' '.join(format_rational(v) for v in mf)}")
    print("stopping family:")
    for node in fam.members:
        star = fam.star.get(node)
        star_text = f"-> ({star.level},{star.index})" if star is not None else "(root)"
        leaves = ",".join(str(i) for i in parts.get(node, ()))
        print(
            f"  ({node.level},{node.index}) avg {format_rational(fam.node_averages[node])} "
            f"{star_text} leaves [{leaves}]"
        )
    print("profile (measure value per line):")
    for line in profile_to_text(profile).splitlines():
        print(f"  {line}")
    print(f"sup ratio    {format_rational(ratio)} at boundary t={format_rational(witness)}")
    if audit is not None:
        print(f"audit at t={format_rational(audit.t)}:")
        for key, value in _audit_json(audit).items():
            if key == "t":
                continue
            print(f"  {key}: {value}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treea1",
        description="Exact A1 constants and rearrangement bounds for step weights on homogeneous trees.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a verification campaign over random or exhaustive weights")
    p.add_argument("--k", type=int, required=True, help="tree homogeneity (branching factor)")
    p.add_argument("--depth", type=int, required=True, help="weight depth m")
    p.add_argument("--trials", type=int, default=100, help="number of seeded random weights")
    p.add_argument("--seed", type=int, default=0, help="campaign seed")
    p.add_argument("--grid", default="1,2,3", help="comma-separated positive rationals to draw from")
    p.add_argument("--exhaustive", action="store_true", help="enumerate every grid weight instead of sampling")
    p.add_argument("--threads", type=int, default=1, help="worker processes for the campaign")
    p.add_argument("--out", required=True, help="output directory (report.csv + manifest.json)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("extremal", help="evaluate the extremal family (sharpness sweep)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", required=True, help="target A1 constant, rational >= 1")
    p.add_argument("--mode", choices=("exact", "paper"), default="exact",
                   help="'exact' = depth-2 variant with measured constant exactly c; "
                        "'paper' = delta-parameterized family approaching the bound")
    p.add_argument("--depths", default="4,6,8", help="comma-separated family depths (paper mode)")
    p.add_argument("--delta-steps", dest="delta_steps", default=None,
                   help="comma-separated delta values; default picks the largest leaf-aligned delta per depth")
    p.add_argument("--out", required=True, help="output directory (sweep.csv + manifest.json)")
    p.set_defaults(func=_cmd_extremal)

    p = sub.add_parser("search", help="hill-climb the normalized sup-ratio objective")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--restarts", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory (trace.csv, best_weight.txt, summary.json)")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("inspect", help="print all derived structure for one serialized weight")
    p.add_argument("--weight", required=True, help="path to a weight file ('k m v_0 ...')")
    p.add_argument("--t", default=None, help="optional t in (0,1]: also print the superlevel audit")
    p.add_argument("--json", action="store_true", help="machine-readable JSON output")
    p.set_defaults(func=_cmd_inspect)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ViolationError as exc:
        # commands with an output directory write counterexample files
        # themselves; anything reaching here still reports the weight
        print(f"violation: {exc}", file=sys.stderr)
        print(exc.weight_text, file=sys.stderr, end="")
        return 1
