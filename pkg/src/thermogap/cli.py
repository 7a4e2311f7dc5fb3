"""Command line entry point: ``thermogap {cone,gap,simulate,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource or I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import __version__, bath as bt, ento, gap, verification
from .core import GOLDEN, DomainError, ResourceError, check_q

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

CONE_HEADER = ("q", "p0", "p1", "feasible", "rho10_max", "case_id", "g00_star", "g11_star")
GAP_HEADER = ("q", "epsilon", "delta", "ento_max", "to_max", "delta10", "bound_main", "bound_refined", "f_q",
              "certified")
SIM_HEADER = ("sample", "g00", "g11", "g01", "g02", "g10", "g12", "g20", "g21", "g22", "rho10", "bound_eq7",
              "in_window")


class UsageError(Exception):
    pass


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "nan" if math.isnan(value) else f"{float(value):.17g}"
    return str(value)


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def json_safe(obj):
    if isinstance(obj, dict):
        return {k: json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return None if math.isnan(obj) else float(obj)
    return obj


def table_text(header, rows, fmt_name: str, metadata: dict) -> str:
    if fmt_name == "csv":
        return csv_text(header, rows)
    doc = {"metadata": json_safe(metadata), "rows": [json_safe(dict(zip(header, row))) for row in rows]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ResourceError(f"cannot write {path}: {exc}") from exc


def emit(args, text: str, metadata: dict) -> None:
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    meta = json.dumps(json_safe(metadata), indent=2, sort_keys=True) + "\n"
    if args.meta:
        write_text(args.meta, meta)
    elif args.out:
        sys.stdout.write(meta)
    else:
        sys.stderr.write(meta)


def _q(value: str) -> float:
    try:
        return check_q(float(value))
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(f"q must lie in (0, 1): {value}") from exc


def _count(minimum: int):
    def parse(value: str) -> int:
        n = int(value)
        if n < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}: {value}")
        return n

    return parse


def _nonneg(value: str) -> float:
    x = float(value)
    if not x >= 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {value}")
    return x


def _unit_interval(value: str) -> float:
    x = _nonneg(value)
    if x >= 1:
        raise argparse.ArgumentTypeError(f"must be < 1: {value}")
    return x


def run_cone(args) -> int:
    records = ento.sweep_cone(args.q, args.grid)
    rows = [(r.q, r.p0, r.p1, r.feasible, r.rho10_max, r.case_id, r.g00_star, r.g11_star) for r in records]
    feas = [r for r in records if r.feasible]
    metadata = {
        "command": "cone",
        "version": __version__,
        "q": args.q,
        "grid": args.grid,
        "n_rows": len(rows),
        "n_feasible": len(feas),
        "rho10_max_max": max((r.rho10_max for r in feas), default=float("nan")),
        "rho10_max_min": min((r.rho10_max for r in feas), default=float("nan")),
    }
    emit(args, table_text(CONE_HEADER, rows, args.format, metadata), metadata)
    if args.svg:
        from .svg import cone_svg

        write_text(args.svg, cone_svg(records))
    return EXIT_OK


def run_gap(args) -> int:
    records = gap.sweep_gap(args.q, args.epsilon, args.delta)
    rows = [(r.q, r.epsilon, r.delta, r.ento_max, r.to_max, r.delta10, r.bound_main, r.bound_refined, r.f_q,
             r.certified) for r in records]
    warnings_list = []
    for q in sorted(set(args.q)):
        if q >= GOLDEN:
            warnings_list.append(f"q={q}: 1 - q - q^2 = {1 - q - q * q:.6g} <= 0, bounds are vacuous")
        elif 1 - q - q * q < gap.NEAR_VACUOUS:
            warnings_list.append(f"q={q}: 1 - q - q^2 = {1 - q - q * q:.6g}, bounds are near-vacuous")
    metadata = {
        "command": "gap",
        "version": __version__,
        "n_rows": len(rows),
        "warnings": warnings_list,
        "near_vacuous_rows": [i for i, r in enumerate(records) if r.near_vacuous],
        "bound_refined_note": "first order in epsilon; O(epsilon^2) terms dropped",
    }
    emit(args, table_text(GAP_HEADER, rows, args.format, metadata), metadata)
    return EXIT_OK


def run_simulate(args) -> int:
    bath = bt.make_bath(args.q, args.bath_k, args.bath_base)
    summary = gap.empirical_gap(bath, args.samples, args.window, seed=args.seed, pattern=args.pattern,
                                normal_form=args.normal_form)
    rows = []
    sigma_ok = True
    for s in summary.samples:
        G = s["G"]
        rows.append((s["sample"], G[0, 0], G[1, 1], G[0, 1], G[0, 2], G[1, 0], G[1, 2], G[2, 0], G[2, 1],
                     G[2, 2], s["rho10"], s["bound_eq7"], s["in_window"]))
        if args.pattern == "point-b":
            try:
                sigma_ok &= bt.verify_sigma_pattern(s["unitary"], bath)
            except Exception:
                sigma_ok = False
    metadata = {
        "command": "simulate",
        "version": __version__,
        "bath": {"q": bath.q, "K": bath.K, "scheme": bath.scheme, "degeneracies": list(bath.degeneracies)},
        "delta_report": bt.bath_delta_report(bath).as_dict(),
        "seed": args.seed,
        "window": args.window,
        "normal_form": args.normal_form,
        **summary.metadata(),
    }
    if args.pattern == "point-b":
        metadata["sigma_pattern_all"] = bool(sigma_ok)
    emit(args, table_text(SIM_HEADER, rows, args.format, metadata), metadata)
    return EXIT_OK


def run_verify(args) -> int:
    try:
        numbers = verification.select(args.criteria)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    failed = []
    for result in verification.run(numbers, force_fail=args.force_fail, on_result=_print_result):
        if not result.passed:
            failed.append(result)
    print(f"{len(numbers) - len(failed)}/{len(numbers)} criteria passed")
    if failed:
        print("failing: " + ", ".join(f"{r.number} ({r.name})" for r in failed))
        return EXIT_VERIFY
    return EXIT_OK


def _print_result(result) -> None:
    print(result.line(), flush=True)
    for label, ok, detail in result.checks:
        print(f"       {'ok  ' if ok else 'FAIL'} {label}: {detail}", flush=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thermogap", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def outputs(p):
        p.add_argument("--out", help="output file (stdout if omitted)")
        p.add_argument("--meta", help="write run metadata JSON here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("cone", help="maximum |rho10| over a population lattice")
    p.add_argument("--q", type=_q, required=True)
    p.add_argument("--grid", type=_count(2), default=50)
    p.add_argument("--svg", help="also write an SVG heatmap")
    outputs(p)

    p = sub.add_parser("gap", help="point-(b) gap and its perturbation bounds")
    p.add_argument("--q", type=_q, nargs="*", default=[0.5])
    p.add_argument("--epsilon", type=_unit_interval, nargs="*", default=[0.0])
    p.add_argument("--delta", type=_nonneg, nargs="*", default=[0.0])
    outputs(p)

    p = sub.add_parser("simulate", help="Monte Carlo thermal operations on a finite bath")
    p.add_argument("--q", type=_q, required=True)
    p.add_argument("--bath-k", type=_count(4), default=4)
    p.add_argument("--bath-base", type=float, default=2.0)
    p.add_argument("--samples", type=_count(1), default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pattern", choices=("random", "point-b"), default="random")
    p.add_argument("--window", type=_nonneg, default=0.25)
    p.add_argument("--normal-form", action="store_true", help="map each sample to its SVD normal form")
    outputs(p)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("--criteria", help="comma list of numbers or groups (cone, bath, gap, all)")
    p.add_argument("--force-fail", action="store_true", help="self-test: set one tolerance to zero")
    return parser


COMMANDS = {"cone": run_cone, "gap": run_gap, "simulate": run_simulate, "verify": run_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", gap.VacuousBoundWarning)
            return COMMANDS[args.command](args)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"thermogap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceError, OSError, MemoryError) as exc:
        print(f"thermogap: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
