"""Command-line entry point ``coregkit``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import catalog, scenario
from .errors import CoregError, InputError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _emit(data: Any, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(data, sort_keys=True, indent=2) + "\n")
        return
    rows = data if isinstance(data, list) else [data]
    for row in rows:
        for key in sorted(row):
            value = row[key]
            text = value if isinstance(value, str) else json.dumps(value, sort_keys=True)
            out.write(f"{key}\t{text}\n")
        if len(rows) > 1:
            out.write("\n")


def _op(name: str, args: dict) -> dict:
    return scenario.jsonable(scenario.OPS[name](args).data)


def _read_json(path: str) -> Any:
    return scenario.load(path)


# --- commands ----------------------------------------------------------------------------------


def cmd_lct(ns: argparse.Namespace) -> int:
    base = {"germ": ns.germ, "nvars": ns.nvars, "order": ns.order}
    if ns.weights:
        data = _op("weighted_bound", {**base, "weights": ns.weights.split(",")})
    elif ns.search:
        data = _op("weight_search", base)
    else:
        data = _op("curve_lct", base)
    _emit(data, ns.json)
    return EXIT_OK


def cmd_classify(ns: argparse.Namespace) -> int:
    base = {"germ": ns.germ, "nvars": 3, "order": ns.order}
    if ns.cubic:
        data = _op("classify_cubic", base)
    else:
        data = {"lc1": _op("strict_lc1_screen", base), "lc2": _op("strict_lc2_screen", base)}
    _emit(data, ns.json)
    return EXIT_OK


def cmd_dualcx(ns: argparse.Namespace) -> int:
    out = scenario.OPS["build_complex"]({"config": _read_json(ns.file)})
    _emit(scenario.jsonable(out.data), ns.json)
    if ns.figure:
        from .figures import complex_skeleton

        complex_skeleton(out.artifacts["complex"], ns.figure)
    return EXIT_OK


def cmd_toric(ns: argparse.Namespace) -> int:
    fan: Any = ns.fan
    if Path(ns.fan).suffix == ".json":
        fan = _read_json(ns.fan)
    _emit(_op("toric_boundary", {"fan": fan}), ns.json)
    return EXIT_OK


def cmd_blowup(ns: argparse.Namespace) -> int:
    normal = [ns.a, ns.b]
    data = _op("curve_blowup", {"normal": normal, "ldot": ns.ldot})
    if ns.other is not None:
        data.update(_op("zero_stratum", {"normal": normal, "ldot": ns.ldot, "other_ldot": ns.other}))
    _emit(data, ns.json)
    return EXIT_OK


def cmd_dp1(ns: argparse.Namespace) -> int:
    _emit(_op("dp1_discriminant", {"f4": ns.f4, "f6": ns.f6}), ns.json)
    return EXIT_OK


def cmd_codim(ns: argparse.Namespace) -> int:
    if ns.scenario:
        return _run_files([ns.scenario], ns.json, ns.figures)
    if ns.nvars is None or ns.degree is None:
        raise InputError("codim needs --scenario or both --nvars and --degree")
    args: dict[str, Any] = {"nvars": ns.nvars, "degree": ns.degree, "offset": ns.offset}
    if ns.locus:
        data = _op("locus_codim", {**args, "locus": ns.locus, "trials": ns.trials, "seed": ns.seed})
    else:
        data = _op("linear_codim", args)
    _emit(data, ns.json)
    return EXIT_OK


def _report_rows(report: scenario.Report) -> list[str]:
    rows = []
    for e in report.expectations:
        status = "PASS" if e["pass"] else "FAIL"
        expected = e["expected"] if isinstance(e["expected"], str) else json.dumps(e["expected"])
        actual = e["actual"] if isinstance(e["actual"], str) else json.dumps(e["actual"], sort_keys=True)
        rows.append(
            "\t".join([report.name, e["step"], e["field"], e["relation"], expected, actual, e["provenance"], status, e["diff"]])
        )
    return rows


def _run_files(paths: Sequence[str], as_json: bool, figures: str | None) -> int:
    reports = [scenario.run_scenario(p) for p in paths]
    if as_json:
        payload = [r.to_json() for r in reports]
        sys.stdout.write(json.dumps(payload[0] if len(payload) == 1 else payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write("scenario\tstep\tfield\trelation\texpected\tactual\tprovenance\tstatus\tdiff\n")
        for r in reports:
            if r.citation:
                sys.stdout.write(f"# {r.name}: {r.citation}\n")
            for row in _report_rows(r):
                sys.stdout.write(row + "\n")
    if figures:
        from .figures import render_artifacts

        written = []
        for r in reports:
            written += render_artifacts(r.artifacts, figures, prefix=f"{r.name}_")
        for p in written:
            sys.stderr.write(f"figure\t{p}\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_run(ns: argparse.Namespace) -> int:
    paths = list(ns.files)
    if ns.shipped:
        paths += [str(p) for _, p in sorted(scenario.shipped_scenarios().items())]
    if not paths:
        raise InputError("no scenario files given")
    return _run_files(paths, ns.json, ns.figures)


def cmd_table(ns: argparse.Namespace) -> int:
    recs = catalog.table_query(ns.id, ns.rank, ns.verdict, ns.toric)
    if ns.json:
        _emit([r.to_json() for r in recs], True)
    else:
        sys.stdout.write("id\tpicard_rank\tindex\tdegree\ttoric\tverdict\n")
        for r in recs:
            sys.stdout.write(f"{r.id}\t{r.picard_rank}\t{r.index}\t{r.degree}\t{str(r.toric).lower()}\t{r.verdict.value}\n")
        sys.stdout.write(f"# {len(recs)} records\n")
    return EXIT_OK


def cmd_verify(ns: argparse.Namespace) -> int:
    ids = [r.id for r in catalog.families()] if ns.all else ns.ids
    if not ids:
        raise InputError("give family ids or --all")
    reports = [catalog.verify_builtin(fid) for fid in ids]
    if ns.json:
        _emit([r.to_json() for r in reports], True)
    else:
        sys.stdout.write("id\troute\tpassed\tcoreg\tverdict\n")
        for r in reports:
            coreg = "" if r.coreg is None else str(r.coreg)
            sys.stdout.write(f"{r.id}\t{r.route}\t{str(r.passed).lower()}\t{coreg}\t{r.verdict}\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _toric_flag(text: str) -> bool:
    if text.lower() in ("true", "yes", "1"):
        return True
    if text.lower() in ("false", "no", "0"):
        return False
    raise argparse.ArgumentTypeError("expected true or false")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coregkit", description="Exact checks for coregularity arguments.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lct", parents=[common], help="log canonical threshold of a germ")
    p.add_argument("germ")
    p.add_argument("--nvars", type=int)
    p.add_argument("--order", type=int, default=8)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--weights", help="comma-separated weights, e.g. 3,2")
    g.add_argument("--search", action="store_true", help="best weight from the Newton polyhedron")
    p.set_defaults(func=cmd_lct)

    p = sub.add_parser("classify", parents=[common], help="screens for a surface germ in three variables")
    p.add_argument("germ")
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--cubic", action="store_true", help="classify a ternary cubic form instead")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("dualcx", parents=[common], help="dual complex of an SNC configuration file")
    p.add_argument("file")
    p.add_argument("--figure", help="write the 1-skeleton to this image file")
    p.set_defaults(func=cmd_dualcx)

    p = sub.add_parser("toric", parents=[common], help="toric boundary of a shipped fan or fan file")
    p.add_argument("fan", help="family id, alias (P3, P1xP2, ...) or JSON file")
    p.set_defaults(func=cmd_toric)

    p = sub.add_parser("blowup", parents=[common], help="blow-up along a rational curve")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--ldot", type=int, required=True, help="degree of the divisor on the curve")
    p.add_argument("--other", type=int, help="degree of a second divisor, for the zero-stratum check")
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("dp1", parents=[common], help="discriminant of y^2 = x^3 + f4 x + f6")
    p.add_argument("f4")
    p.add_argument("f6")
    p.set_defaults(func=cmd_dp1)

    p = sub.add_parser("codim", parents=[common], help="codimension counts")
    p.add_argument("--scenario")
    p.add_argument("--nvars", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--locus", help="named locus such as triple_line")
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--figures")
    p.set_defaults(func=cmd_codim)

    p = sub.add_parser("run", parents=[common], help="run scenario files")
    p.add_argument("files", nargs="*")
    p.add_argument("--shipped", action="store_true", help="also run every shipped scenario")
    p.add_argument("--figures", help="directory for Newton polygon and dual complex figures")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("table", parents=[common], help="query the family table")
    p.add_argument("--id")
    p.add_argument("--rank", type=int)
    p.add_argument("--verdict", action="append")
    p.add_argument("--toric", type=_toric_flag)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", parents=[common], help="re-run builtin constructions for families")
    p.add_argument("ids", nargs="*")
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except CoregError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
