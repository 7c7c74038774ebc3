"""Declarative scenario files: chained operations checked against tagged expectations."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import jsonschema

from . import blowcalc, catalog, dualcx, genericity, lct, singclass
from .errors import CoregError, InputError, ParseError
from .fans import ALIASES, fan_from_json, shipped_fan
from .polyring import Germ, WeightVector, as_rational, format_germ, parse_germ

PROVENANCE = ("cited", "trivial", "derived")


@cache
def schema() -> dict:
    return json.loads((resources.files("coregkit") / "data" / "scenario.schema.json").read_text())


def jsonable(value: Any) -> Any:
    """Exact JSON form: rationals become ``"p/q"`` strings."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Germ):
        return format_germ(value)
    if isinstance(value, WeightVector):
        return [jsonable(w) for w in value.weights]
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


# --- operations -----------------------------------------------------------------------------------


@dataclass
class StepOutput:
    data: dict[str, Any]
    artifacts: dict[str, Any] = field(default_factory=dict)


def _germ(args: dict, key: str = "germ") -> Germ:
    return parse_germ(args[key], args.get("nvars"), args.get("order", 8))


def _threshold_json(t: lct.Threshold) -> dict[str, Any]:
    out = {"value": t.value, "kind": t.kind, "strict": t.strict}
    if isinstance(t.certificate, WeightVector):
        out["weights"] = t.certificate
    return out


def _op_germ(args: dict) -> StepOutput:
    g = _germ(args)
    return StepOutput({"germ": g, "nvars": g.nvars, "order": g.order, "dropped": g.dropped}, {"germ": g})


def _op_weighted_bound(args: dict) -> StepOutput:
    g = _germ(args)
    t = lct.weighted_bound(WeightVector(args["weights"]), g)
    return StepOutput(_threshold_json(t), {"germ": g})


def _op_curve_lct(args: dict) -> StepOutput:
    g = _germ(args)
    t = lct.curve_lct(g)
    tree = t.certificate
    data = _threshold_json(t)
    data["blowups"] = len(tree.divisors)
    data["realizing"] = [[d.index, d.discrepancy, d.mult] for d in tree.realizing()]
    return StepOutput(data, {"germ": g})


def _op_weight_search(args: dict) -> StepOutput:
    g = _germ(args)
    w, t = lct.weight_search(g)
    data = _threshold_json(t)
    data["weights"] = w
    return StepOutput(data, {"germ": g})


def _threshold_arg(spec: dict) -> lct.Threshold:
    kind = lct.Kind(spec.get("kind", "Exact"))
    return lct.Threshold(
        as_rational(spec["value"]),
        kind,
        upper="supplied" if kind is not lct.Kind.LOWER else None,
        lower="supplied" if kind is not lct.Kind.UPPER else None,
        variables=frozenset(spec.get("variables", [])),
    )


def _op_sum_lct(args: dict) -> StepOutput:
    t = lct.sum_lct(_threshold_arg(args["first"]), _threshold_arg(args["second"]))
    return StepOutput(_threshold_json(t))


def _op_double_point_klt(args: dict) -> StepOutput:
    return StepOutput({"klt": lct.double_point_klt(_germ(args))})


def _op_pencil(args: dict) -> StepOutput:
    g = _germ(args)
    cert = lct.pencil_klt_certificate(
        g, tuple(args.get("pencil", (1, 2))), args.get("samples", 5), args.get("seed", 0)
    )
    return StepOutput(
        {
            "ok": cert.ok,
            "minimum": cert.minimum,
            "samples": list(cert.samples),
            "thresholds": [t.value for t in cert.thresholds],
            "witness": cert.witness,
            "reason": cert.reason,
        }
    )


def _op_hessian_split(args: dict) -> StepOutput:
    rep = singclass.hessian_split(_germ(args))
    return StepOutput({"rank": rep.rank, "tail": rep.tail if rep.tail is not None else None})


def _op_classify_cubic(args: dict) -> StepOutput:
    c = singclass.classify_cubic(_germ(args))
    return StepOutput({"tag": c.tag, "is_lc": c.is_lc})


def _op_lc1(args: dict) -> StepOutput:
    v = singclass.strict_lc1_screen(_germ(args))
    return StepOutput({"tag": v.tag, "rank": v.rank})


def _op_lc2(args: dict) -> StepOutput:
    v = singclass.strict_lc2_screen(_germ(args))
    data: dict[str, Any] = {"tag": v.tag, "certificate": v.certificate}
    if v.cubic is not None:
        data["cubic"] = v.cubic.tag
    if v.weights is not None:
        data["weights"] = v.weights
        data["witness"] = v.witness
        data["witness_bound"] = lct.weighted_bound(v.weights, v.witness).value
    return StepOutput(data)


def _op_normal_form(args: dict) -> StepOutput:
    kind = args["kind"]
    if kind == "cusp":
        nf = singclass.Cusp(*args["params"])
    elif kind == "simple_elliptic_quartic":
        nf = singclass.SimpleEllipticQuartic(tuple(as_rational(c) for c in args["params"]))
    elif kind == "simple_elliptic_sextic":
        nf = singclass.SimpleEllipticSextic(*(as_rational(c) for c in args["params"]))
    else:
        raise InputError(f"unknown normal form {kind!r}")
    g = singclass.normal_form(nf)
    return StepOutput({"germ": g, "order": g.order}, {"germ": g})


def config_from_json(spec: dict) -> dualcx.SncConfig:
    try:
        strata = [(s["set"], s["count"]) for s in spec["strata"]]
        faces = {
            (frozenset(f["set"]), f["copy"], f["drop"]): f["target"] for f in spec.get("faces", [])
        }
        return dualcx.SncConfig.from_sets(spec["ambient_dim"], spec["components"], strata, faces)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed configuration: {exc}") from exc


def _complex_data(dc: dualcx.DualComplex, n: int) -> dict[str, Any]:
    reg = dualcx.regularity(dc, n)
    return {
        "dim": dualcx.dimension(dc),
        "euler": dualcx.euler(dc),
        "connected": dualcx.is_connected(dc),
        "cells": [dc.count(d) for d in range(dualcx.dimension(dc) + 1)],
        "reg": reg.reg,
        "coreg": reg.coreg,
        "topology": reg.topology,
    }


def _op_build_complex(args: dict) -> StepOutput:
    cfg = config_from_json(args["config"])
    dc = dualcx.build_complex(cfg)
    return StepOutput(_complex_data(dc, cfg.ambient_dim), {"complex": dc})


def _fan_arg(spec: Any) -> dualcx.Fan:
    if isinstance(spec, str):
        return shipped_fan(spec)
    return fan_from_json(spec)


def _op_toric_boundary(args: dict) -> StepOutput:
    fan = _fan_arg(args["fan"])
    dc = dualcx.build_complex(dualcx.toric_boundary(fan))
    data = _complex_data(dc, fan.dim)
    data["rays"] = len(fan.rays)
    data["smooth"] = fan.is_smooth()
    if fan.dim == 3:
        data["fano"] = dualcx.is_fano(fan)
        data["degree"] = dualcx.anticanonical_degree(fan) if data["fano"] else None
    return StepOutput(data, {"complex": dc})


def _op_regularity(args: dict) -> StepOutput:
    n, d = args["n"], args["dim"]
    if not -1 <= d <= n - 1:
        raise InputError("dimension out of range")
    return StepOutput({"reg": d, "coreg": n - 1 - d})


def _op_coreg_verdict(args: dict) -> StepOutput:
    return StepOutput({"verdict": dualcx.coreg_verdict(args["reg1"], args["reg2"], args["n"])})


def _hirz(n: int, pair: list[int]) -> blowcalc.HirzClass:
    return blowcalc.HirzClass(n, pair[0], pair[1])


def _op_hirz(args: dict) -> StepOutput:
    n = args["n"]
    a = _hirz(n, args["first"])
    out: dict[str, Any] = {"ample": blowcalc.hirz_is_ample(a)}
    if "second" in args:
        out["pairing"] = blowcalc.hirz_intersect(a, _hirz(n, args["second"]))
    return StepOutput(out)


def _op_curve_blowup(args: dict) -> StepOutput:
    r = blowcalc.curve_blowup(blowcalc.NormalBundle(*args["normal"]), args["ldot"])
    return StepOutput(
        {
            "hirzebruch_index": r.hirzebruch_index,
            "c": r.c,
            "E_self": str(r.E_self),
            "D_restrict": str(r.D_restrict),
            "E_cubed": blowcalc.hirz_intersect(r.E_self, r.E_self),
            "note": r.note,
        }
    )


def _op_zero_stratum(args: dict) -> StepOutput:
    normal = blowcalc.NormalBundle(*args["normal"])
    r = blowcalc.curve_blowup(normal, args["ldot"])
    other = blowcalc.curve_blowup(normal, args["other_ldot"]).D_restrict
    return StepOutput(
        {
            "certified": blowcalc.zero_stratum_certificate(r, other),
            "pairing": blowcalc.hirz_intersect(r.D_restrict, other),
        }
    )


def _op_blowup_boundary(args: dict) -> StepOutput:
    cfg, info = catalog.blowup_boundary(tuple(args["normal"]), args["ldot"], args["other_ldot"])
    dc = dualcx.build_complex(cfg)
    data = _complex_data(dc, 3)
    data.update(info)
    return StepOutput(data, {"complex": dc})


def _p2k(spec: dict) -> blowcalc.P2kClass:
    return blowcalc.P2kClass(spec["d"], spec.get("m", []))


def _op_p2k(args: dict) -> StepOutput:
    b, c = _p2k(args["first"]), _p2k(args["second"])
    pairing = blowcalc.p2k_intersect(b, c)
    out: dict[str, Any] = {"pairing": pairing}
    if "required" in args:
        required = as_rational(args["required"])
    elif "multiplicities" in args:
        required = blowcalc.incidence_lower_bound(*args["multiplicities"])
    else:
        required = None
    if required is not None:
        out["required"] = required
        out["infeasible"] = blowcalc.infeasible(b, c, required)
    return StepOutput(out)


def _op_dp1(args: dict) -> StepOutput:
    rep = blowcalc.dp1_discriminant(parse_germ(args["f4"], 2), parse_germ(args["f6"], 2))
    return StepOutput(
        {
            "nodal_count": rep.nodal_count,
            "cusp_count": rep.cusp_count,
            "degenerate": rep.degenerate,
            "other": rep.other,
            "multiplicities": list(rep.multiplicities),
        }
    )


def _space(args: dict) -> genericity.CoeffSpace:
    return genericity.CoeffSpace(args["nvars"], tuple(args["degrees"]) if "degrees" in args else (args["degree"],))


def _op_linear_codim(args: dict) -> StepOutput:
    space = _space(args)
    vanishing = space.basis if args.get("vanishing", "all") == "all" else [tuple(m) for m in args["vanishing"]]
    codim = genericity.linear_codim(space, vanishing)
    offset = args.get("offset", 0)
    return StepOutput({"codim": codim, "space_dim": space.dim, "offset": offset, "on_f": codim - offset})


def _locus(space: genericity.CoeffSpace, spec: Any) -> genericity.Parametrization:
    if isinstance(spec, str):
        if spec not in genericity.CUBIC_LOCI:
            raise InputError(f"unknown locus {spec!r}")
        return genericity.CUBIC_LOCI[spec](space)
    kind = spec.get("kind")
    if kind == "product":
        return genericity.product_locus(space, [tuple(f) for f in spec["factors"]])
    if kind == "orbit":
        return genericity.orbit_locus(space, spec["form"])
    if kind == "custom":
        return genericity.custom_locus(space, spec["expr"])
    raise InputError(f"unknown locus kind {kind!r}")


def _op_locus_codim(args: dict) -> StepOutput:
    space = _space(args)
    rep = genericity.locus_codim(_locus(space, args["locus"]), space, args.get("trials", 3), args.get("seed", 0))
    offset = args.get("offset", 0)
    return StepOutput(
        {
            "image_dim": rep.image_dim,
            "codim": rep.codim,
            "offset": offset,
            "on_f": rep.codim - offset,
            "ranks": list(rep.ranks),
            "failure_bound": rep.failure_bound,
        }
    )


def _op_avoid_generic(args: dict) -> StepOutput:
    setup = genericity.IncidenceSetup(args["n"], args["fiber_codim"], args.get("threshold"))
    return StepOutput({"avoid": genericity.avoid_generic(setup)})


def _op_table_query(args: dict) -> StepOutput:
    recs = catalog.table_query(args.get("id"), args.get("rank"), args.get("verdict"), args.get("toric"))
    out: dict[str, Any] = {"count": len(recs), "ids": [r.id for r in recs]}
    if len(recs) == 1:
        out["record"] = recs[0].to_json()
        out["verdict"] = recs[0].verdict
    return StepOutput(out)


def _op_verify_builtin(args: dict) -> StepOutput:
    rep = catalog.verify_builtin(args["id"])
    return StepOutput(rep.to_json())


OPS: dict[str, Callable[[dict], StepOutput]] = {
    "germ": _op_germ,
    "weighted_bound": _op_weighted_bound,
    "curve_lct": _op_curve_lct,
    "weight_search": _op_weight_search,
    "sum_lct": _op_sum_lct,
    "double_point_klt": _op_double_point_klt,
    "pencil_klt_certificate": _op_pencil,
    "hessian_split": _op_hessian_split,
    "classify_cubic": _op_classify_cubic,
    "strict_lc1_screen": _op_lc1,
    "strict_lc2_screen": _op_lc2,
    "normal_form": _op_normal_form,
    "build_complex": _op_build_complex,
    "toric_boundary": _op_toric_boundary,
    "regularity": _op_regularity,
    "coreg_verdict": _op_coreg_verdict,
    "hirz": _op_hirz,
    "curve_blowup": _op_curve_blowup,
    "zero_stratum": _op_zero_stratum,
    "blowup_boundary": _op_blowup_boundary,
    "p2k": _op_p2k,
    "dp1_discriminant": _op_dp1,
    "linear_codim": _op_linear_codim,
    "locus_codim": _op_locus_codim,
    "avoid_generic": _op_avoid_generic,
    "table_query": _op_table_query,
    "verify_builtin": _op_verify_builtin,
}


# --- runner ------------------------------------------------------------------------------------------

_REF = re.compile(r"^\$([A-Za-z_][A-Za-z0-9_]*)\.([A-Za-z_][A-Za-z0-9_]*)$")


def _resolve(value: Any, results: dict[str, dict[str, Any]]) -> Any:
    if isinstance(value, str):
        m = _REF.match(value)
        if not m:
            return value
        step, key = m.groups()
        if step not in results:
            raise InputError(f"reference to unknown or later step {step!r}")
        if key not in results[step]:
            raise InputError(f"step {step!r} has no field {key!r}")
        return results[step][key]
    if isinstance(value, list):
        return [_resolve(v, results) for v in value]
    if isinstance(value, dict):
        return {k: _resolve(v, results) for k, v in value.items()}
    return value


def _as_fraction(value: Any) -> Fraction | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str) and re.fullmatch(r"-?\d+(/\d+)?", value):
        return Fraction(value)
    return None


def _show(value: Any) -> str:
    return value if isinstance(value, str) else json.dumps(value, sort_keys=True)


def compare(actual: Any, expect: dict) -> tuple[bool, str]:
    """Exact comparison; returns ``(passed, diff)``."""
    for key, sym, test in (
        ("equals", "≠", lambda a, b: a == b),
        ("at_least", "<", lambda a, b: a >= b),
        ("at_most", ">", lambda a, b: a <= b),
    ):
        if key not in expect:
            continue
        wanted = expect[key]
        fa, fw = _as_fraction(actual), _as_fraction(wanted)
        if fa is not None and fw is not None:
            ok = test(fa, fw)
        elif key == "equals":
            # booleans never equal numbers here, although True == 1 in Python
            ok = isinstance(actual, bool) == isinstance(wanted, bool) and actual == wanted
        else:
            ok = False
        return ok, "" if ok else f"{_show(actual)} {sym} {_show(wanted)}"
    raise InputError("expectation without a comparison")


@dataclass
class Report:
    name: str
    citation: str
    steps: list[dict[str, Any]]
    expectations: list[dict[str, Any]]
    artifacts: dict[str, dict[str, Any]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e["pass"] for e in self.expectations)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self) -> dict[str, Any]:
        failed = sum(not e["pass"] for e in self.expectations)
        return {
            "scenario": self.name,
            "citation": self.citation,
            "steps": self.steps,
            "expectations": self.expectations,
            "summary": {"total": len(self.expectations), "failed": failed, "passed": failed == 0},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def validate(doc: Any) -> None:
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as exc:
        raise ParseError(f"scenario does not match the schema: {exc.message}") from exc
    ids = [s["id"] for s in doc["steps"]]
    if len(set(ids)) != len(ids):
        raise ParseError("duplicate step ids")
    for s in doc["steps"]:
        if s["op"] not in OPS:
            raise InputError(f"unknown operation {s['op']!r}")
    for e in doc["expect"]:
        if e["step"] not in ids:
            raise ParseError(f"expectation refers to unknown step {e['step']!r}")


def run_document(doc: Any) -> Report:
    validate(doc)
    results: dict[str, dict[str, Any]] = {}
    artifacts: dict[str, dict[str, Any]] = {}
    steps = []
    for step in doc["steps"]:
        args = _resolve(step.get("args", {}), results)
        out = OPS[step["op"]](args)
        data = jsonable(out.data)
        results[step["id"]] = data
        artifacts[step["id"]] = out.artifacts
        steps.append({"id": step["id"], "op": step["op"], "result": data})
    expectations = []
    for e in doc["expect"]:
        data = results[e["step"]]
        if e["field"] not in data:
            raise InputError(f"step {e['step']!r} has no field {e['field']!r}")
        actual = data[e["field"]]
        ok, diff = compare(actual, e)
        wanted = next(e[k] for k in ("equals", "at_least", "at_most") if k in e)
        expectations.append(
            {
                "step": e["step"],
                "field": e["field"],
                "relation": next(k for k in ("equals", "at_least", "at_most") if k in e),
                "expected": wanted,
                "actual": actual,
                "provenance": e["provenance"],
                "pass": ok,
                "diff": diff,
            }
        )
    return Report(doc["name"], doc.get("citation", ""), steps, expectations, artifacts)


def load(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def run_scenario(path: str | Path) -> Report:
    return run_document(load(path))


def shipped_scenarios() -> dict[str, Path]:
    root = resources.files("coregkit") / "data" / "scenarios"
    return {p.name[:-5]: Path(str(p)) for p in root.iterdir() if p.name.endswith(".json")}


__all__ = ["run_scenario", "run_document", "Report", "OPS", "shipped_scenarios", "CoregError", "ALIASES"]
