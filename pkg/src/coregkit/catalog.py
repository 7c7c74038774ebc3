"""Catalog of the 105 smooth Fano threefold families and builtin verification routes."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cache
from importlib import resources
from typing import Any

from .blowcalc import NormalBundle, curve_blowup, dp1_discriminant, hirz_intersect, zero_stratum_certificate
from .dualcx import (
    CoregVerdict,
    SncConfig,
    build_complex,
    coreg_verdict,
    euler,
    join_configs,
    regularity,
    toric_boundary,
)
from .errors import InputError
from .fans import toric_fano_fans
from .polyring import parse_germ


class Verdict(str, Enum):
    ZERO_ALL = "CoregZeroAll"
    ZERO_GENERAL = "CoregZeroGeneral"
    AT_LEAST_ONE_GENERAL = "CoregAtLeastOneGeneral"
    COREG1_TWO_GENERAL = "Coreg1EqualsTwoGeneral"
    AT_MOST_ONE_GENERAL = "CoregAtMostOneGeneral"


@dataclass(frozen=True)
class FamilyRecord:
    id: str
    picard_rank: int
    index: int
    degree: int
    verdict: Verdict
    evidence: tuple[str, ...]
    toric: bool
    extra: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict[str, Any]:
        out = {
            "id": self.id,
            "picard_rank": self.picard_rank,
            "index": self.index,
            "degree": self.degree,
            "verdict": self.verdict.value,
            "evidence": list(self.evidence),
            "toric": self.toric,
        }
        out.update(self.extra)
        return out


_CORE = {"id", "picard_rank", "index", "degree", "verdict", "evidence", "toric"}


@cache
def families() -> tuple[FamilyRecord, ...]:
    data = json.loads((resources.files("coregkit") / "data" / "families.json").read_text())
    out = []
    for rec in data["families"]:
        out.append(
            FamilyRecord(
                rec["id"],
                rec["picard_rank"],
                rec["index"],
                rec["degree"],
                Verdict(rec["verdict"]),
                tuple(rec["evidence"]),
                rec["toric"],
                {k: v for k, v in rec.items() if k not in _CORE},
            )
        )
    return tuple(out)


def family(fid: str) -> FamilyRecord:
    for rec in families():
        if rec.id == fid:
            return rec
    raise InputError(f"unknown family id {fid!r}")


def table_query(
    id: str | None = None,
    rank: int | None = None,
    verdict: str | Verdict | list | tuple | set | None = None,
    toric: bool | None = None,
) -> list[FamilyRecord]:
    """Records matching every given filter; ``verdict`` may be one value or a collection."""
    if id is not None:
        return [family(id)]
    wanted = None
    if verdict is not None:
        items = [verdict] if isinstance(verdict, (str, Verdict)) else list(verdict)
        try:
            wanted = {Verdict(v) for v in items}
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    out = []
    for rec in families():
        if rank is not None and rec.picard_rank != rank:
            continue
        if wanted is not None and rec.verdict not in wanted:
            continue
        if toric is not None and rec.toric != toric:
            continue
        out.append(rec)
    return out


# --- builtin verification -----------------------------------------------------------------------

# (normal bundle, L.D1, L.D2) of the blown-up curve for blow-up families
BLOWUP_TEMPLATES: dict[str, tuple[tuple[int, int], int, int]] = {
    **{fid: ((0, 0), 1, 1) for fid in ("2.26", "2.22", "2.20", "2.14", "2.19", "2.16", "2.10", "2.11", "2.5")},
    **{fid: ((0, 1), 2, 1) for fid in ("2.21", "2.13", "2.7")},
    **{fid: ((1, 1), 3, 1) for fid in ("2.12", "2.9", "2.4")},
    "2.1": ((-1, 1), 1, 1),
}

# surface factor S of S x P^1 and the anticanonical cycle used on it
PRODUCT_SURFACES = {"6.1": 5, "7.1": 4, "8.1": 3, "9.1": 2, "10.1": 1}


@dataclass(frozen=True)
class BuiltinReport:
    id: str
    route: str
    passed: bool
    coreg: int | None
    verdict: str
    checks: tuple[tuple[str, Any], ...] = ()

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "route": self.route,
            "passed": self.passed,
            "coreg": self.coreg,
            "verdict": self.verdict,
            "checks": [[k, v] for k, v in self.checks],
        }


def blowup_boundary(normal: tuple[int, int], ld1: int, ld2: int) -> tuple[SncConfig, dict[str, Any]]:
    """Boundary ``D1' + D2' + E`` on the blow-up along a rational curve."""
    r1 = curve_blowup(NormalBundle(*normal), ld1)
    r2 = curve_blowup(NormalBundle(*normal), ld2)
    pairing = hirz_intersect(r1.D_restrict, r2.D_restrict)
    certified = zero_stratum_certificate(r1, r2.D_restrict)
    strata = [([0], 1), ([1], 1), ([2], 1), ([0, 1], 1), ([0, 2], 1), ([1, 2], 1)]
    if pairing > 0:
        strata.append(([0, 1, 2], pairing))
    cfg = SncConfig.from_sets(3, ["D1'", "D2'", "E"], strata)
    info = {
        "hirzebruch_index": r1.hirzebruch_index,
        "D1_restrict": str(r1.D_restrict),
        "D2_restrict": str(r2.D_restrict),
        "pairing": pairing,
        "zero_stratum": certified,
    }
    return cfg, info


def surface_cycle(degree: int) -> SncConfig:
    """Cycle of rational curves in ``|-K_S|`` on a del Pezzo surface of the given degree.

    Degree one uses the blown-up nodal curve: its strict transform and the
    exceptional curve meet in two points.
    """
    if degree == 1:
        return SncConfig.from_sets(2, ["C'", "E"], [([0], 1), ([1], 1), ([0, 1], 2)])
    return SncConfig.from_sets(2, ["A", "B", "C"], [([0], 1), ([1], 1), ([2], 1), ([0, 1], 1), ([1, 2], 1), ([0, 2], 1)])


def two_points() -> SncConfig:
    return SncConfig.from_sets(1, ["0", "inf"], [([0], 1), ([1], 1)])


def verify_builtin(fid: str) -> BuiltinReport:
    rec = family(fid)
    if rec.toric:
        dc = build_complex(toric_boundary(toric_fano_fans()[fid]))
        reg = regularity(dc, 3)
        return BuiltinReport(
            fid, "toric", reg.coreg == 0, reg.coreg, coreg_verdict(reg.reg, -1, 3).value,
            (("dimension", reg.reg), ("euler", euler(dc))),
        )
    if fid in BLOWUP_TEMPLATES:
        normal, ld1, ld2 = BLOWUP_TEMPLATES[fid]
        cfg, info = blowup_boundary(normal, ld1, ld2)
        dc = build_complex(cfg)
        reg = regularity(dc, 3)
        checks = tuple(info.items()) + (("dimension", reg.reg), ("euler", euler(dc)))
        ok = info["zero_stratum"] and reg.coreg == 0
        return BuiltinReport(fid, "blowup", ok, reg.coreg, coreg_verdict(reg.reg, -1, 3).value, checks)
    if fid in PRODUCT_SURFACES:
        d = PRODUCT_SURFACES[fid]
        checks: list[tuple[str, Any]] = []
        ok = True
        if d == 1:
            disc = dp1_discriminant(parse_germ("x1^4 + 2*x1*x2^3 - x2^4", 2), parse_germ("x1^6 - x1^2*x2^4 + 3*x2^6", 2))
            checks.append(("nodal_members", disc.nodal_count))
            ok = disc.nodal_count > 0
        dc = build_complex(join_configs(surface_cycle(d), two_points()))
        reg = regularity(dc, 3)
        checks += [("dimension", reg.reg), ("euler", euler(dc))]
        return BuiltinReport(
            fid, "product", ok and reg.coreg == 0, reg.coreg, coreg_verdict(reg.reg, -1, 3).value, tuple(checks)
        )
    if "reg1" in rec.extra and "reg2" in rec.extra:
        r1, r2 = rec.extra["reg1"], rec.extra["reg2"]
        verdict = coreg_verdict(r1, r2, 3)
        return BuiltinReport(
            fid, "regularity", verdict is CoregVerdict.AT_LEAST_ONE, None, verdict.value, (("reg1", r1), ("reg2", r2))
        )
    return BuiltinReport(fid, "citation", True, None, "verdict recorded by citation", (("verdict", rec.verdict.value),))


def encodable_ids() -> list[str]:
    return [r.id for r in families() if verify_builtin(r.id).route != "citation"]

