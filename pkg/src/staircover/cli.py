"""Command-line front end.

Exit codes: 0 all requested checks passed, 1 checks failed (a report was
still produced), 2 usage or parse errors. Reports go to --out as JSON when
given, otherwise to stdout; identical inputs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import fileio, svg
from .bounds import density_chain
from .decomposition import decompose
from .lattice import (
    hermite_basis,
    lattice_instance,
    perturb_instance,
    search_optimal_lattice,
)
from .rational import rat, rat_str
from .verification import coverage_certificate, run_audits, verify_exact_tiling


def _emit(report: dict, out_path: str | None) -> None:
    text = fileio.dump_report(report)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
        summary = {"verify": "covers", "audit": "passed", "bounds": "holds"}.get(
            report.get("kind"), None
        )
        line = f"report written to {out_path}"
        if summary and summary in report:
            line += f" ({summary}={report[summary]})"
        print(line)
    else:
        sys.stdout.write(text)


def _load(path: str):
    try:
        return fileio.load_instance(path)
    except FileNotFoundError:
        print(f"error: instance file not found: {path}", file=sys.stderr)
        raise SystemExit(2)
    except fileio.InstanceFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)


def cmd_decompose(args) -> int:
    inst, _ = _load(args.instance)
    cert = coverage_certificate(inst)
    result = decompose(inst)
    report = fileio.report_decompose(inst, result, cert)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(svg.render_decomposition(result))
    _emit(report, args.out)
    return 0 if cert.covers and result.is_stair_decomposition else 1


def cmd_verify(args) -> int:
    inst, _ = _load(args.instance)
    cert = coverage_certificate(inst)
    _emit(fileio.report_verify(inst, cert), args.out)
    return 0 if cert.covers else 1


def _corrupt(result, mode: str):
    cells = list(result.cells)
    if not cells:
        raise SystemExit(2)
    if mode == "dup-cell":
        cells.insert(0, cells[0])
    elif mode == "drop-cell":
        cells.pop(0)
    elif mode == "shrink-cell":
        i, cell = cells[0]
        half_x = (cell.x_breaks[0] + cell.x_breaks[1]) / 2
        mid_y = (cell.y_breaks[-1] + cell.y_breaks[-2]) / 2
        from .geom import StairPolygon

        cells[0] = (i, StairPolygon.rect(cell.x_breaks[0], half_x, cell.y_breaks[-1], mid_y))
    else:
        raise SystemExit(2)
    return dataclasses.replace(result, cells=tuple(cells))


def cmd_audit(args) -> int:
    inst, _ = _load(args.instance)
    result = decompose(inst)
    if args.corrupt:
        result = _corrupt(result, args.corrupt)
    report = run_audits(inst, result)
    _emit(fileio.report_audit(inst, report), args.out)
    return 0 if report.passed else 1


def cmd_bounds(args) -> int:
    inst, _ = _load(args.instance)
    result = decompose(inst)
    tiling_ok = False
    if result.is_stair_decomposition:
        tiling_ok = verify_exact_tiling(result.stair_cells(), inst.k, inst.window).ok
    report = density_chain(result, tiling_ok)
    _emit(fileio.report_bounds(inst, report), args.out)
    return 0 if report.holds else 1


def cmd_optimize(args) -> int:
    warm = ()
    store = {}
    if args.resume:
        try:
            store = fileio.load_results_store(args.resume)
        except FileNotFoundError:
            store = {}
        if args.k in store:
            lat, _ = store[args.k]
            warm = (hermite_basis(lat),)
    report = search_optimal_lattice(
        args.k, budget=args.budget, seed_grid=args.seed_grid, warm_starts=warm
    )
    _emit(fileio.report_optimize(report), args.out)
    if report.feasible:
        print(
            f"k={args.k}: density {rat_str(report.density)} "
            f"(target {rat_str(report.target_density)}, gap {rat_str(report.gap)})",
            file=sys.stderr,
        )
        if args.resume:
            prev = store.get(args.k)
            if prev is None or report.lattice.det > prev[0].det:
                store[args.k] = (report.lattice, report.multiplicity)
            fileio.save_results_store(args.resume, store)
        return 0
    print(f"k={args.k}: {report.message}", file=sys.stderr)
    return 1


def cmd_gen_lattice(args) -> int:
    if args.basis:
        try:
            parts = [rat(v) for half in args.basis.split(";") for v in half.split(",")]
            if len(parts) != 4:
                raise ValueError("expected ux,uy;vx,vy")
            from .lattice import Lattice

            lat = Lattice.of(*parts)
        except (ValueError, TypeError) as exc:
            print(f"error: --basis {exc}", file=sys.stderr)
            return 2
    elif args.results:
        try:
            store = fileio.load_results_store(args.results)
        except FileNotFoundError:
            print(f"error: results file not found: {args.results}", file=sys.stderr)
            return 2
        if args.k not in store:
            print(f"error: no stored lattice for k={args.k}", file=sys.stderr)
            return 2
        lat = store[args.k][0]
    else:
        print("error: need --basis or --results", file=sys.stderr)
        return 2
    inst = lattice_instance(lat, rat(args.l), args.k)
    provenance = (
        f"lattice u={rat_str(lat.u.x)},{rat_str(lat.u.y)} "
        f"v={rat_str(lat.v.x)},{rat_str(lat.v.y)}"
    )
    if args.perturb:
        inst = perturb_instance(inst, rat(args.perturb), seed=args.seed)
        provenance += f" perturbed by {args.perturb} (seed {args.seed})"
    meta = {
        "name": args.name or f"lattice-k{args.k}-l{rat_str(inst.window)}",
        "seed": args.seed,
        "provenance": provenance,
    }
    text = fileio.dump_report(fileio.instance_to_json(inst, meta))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"instance with {inst.size} translates written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="staircover",
        description="Exact stair-polygon decomposition, verification and "
        "density tooling for k-fold triangle coverings of a square window.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="decompose an instance into cells")
    p.add_argument("instance")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--svg", help="render the cells to this SVG file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="exact k-fold coverage check")
    p.add_argument("instance")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="run the full structural audit suite")
    p.add_argument("instance")
    p.add_argument("--out")
    p.add_argument(
        "--corrupt",
        choices=("dup-cell", "drop-cell", "shrink-cell"),
        help="debug: corrupt the decomposition before auditing",
    )
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("bounds", help="evaluate the window-area bound chain")
    p.add_argument("instance")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("optimize", help="search for the densest k-fold covering lattice")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=int, default=6000)
    p.add_argument("--seed-grid", type=int, default=6)
    p.add_argument("--resume", help="results file for warm starts and persistence")
    p.add_argument("--out")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("gen-lattice", help="materialize an instance from a lattice")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", required=True)
    p.add_argument("--results", help="stored-lattice file to read")
    p.add_argument("--basis", help='explicit basis "ux,uy;vx,vy"')
    p.add_argument("--perturb", help="random covering-preserving shift magnitude")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized fixtures")
    p.add_argument("--name")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_lattice)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
