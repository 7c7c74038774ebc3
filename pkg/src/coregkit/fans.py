"""Fans of the smooth toric Fano threefolds, built by products and star subdivisions."""
from __future__ import annotations

import json
from functools import cache
from importlib import resources

from .dualcx import Fan, product_fan
from .errors import InputError

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
E4 = (-1, -1, -1)


def projective_space(n: int, name: str = "") -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [(-1,) * n]
    cones = [set(range(n + 1)) - {k} for k in range(n + 1)]
    return Fan.make(rays, cones, name or f"P{n}")


def hirzebruch(a: int, name: str = "") -> Fan:
    """Fan of F_a: rays (1,0), (0,1), (-1,a), (0,-1)."""
    return Fan.make([(1, 0), (0, 1), (-1, a), (0, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)], name or f"F{a}")


def del_pezzo_toric(k: int) -> Fan:
    """Blow-up of P^2 in ``k`` torus-fixed points, ``k <= 3``."""
    fan = projective_space(2)
    faces = [(0, 1), (1, 2), (2, 0)]
    for f in faces[:k]:
        fan = fan.star_subdivide(f)
    return fan


def _face(fan: Fan, *rays: tuple[int, ...]) -> frozenset[int]:
    return frozenset(fan.rays.index(r) for r in rays)


def _p1() -> Fan:
    return Fan.make([(1,), (-1,)], [(0,), (1,)], "P1")


@cache
def toric_fano_fans() -> dict[str, Fan]:
    p3 = projective_space(3, "1.17")
    out: dict[str, Fan] = {"1.17": p3}
    out["2.33"] = p3.star_subdivide(_face(p3, E1, E2), "2.33")
    out["2.34"] = product_fan(_p1(), projective_space(2), "2.34")
    v7 = p3.star_subdivide(_face(p3, E1, E2, E3), "2.35")
    out["2.35"] = v7
    out["2.36"] = Fan.make(
        [E1, E2, (-1, -1, 2), E3, (0, 0, -1)],
        [(0, 1, 3), (1, 2, 3), (2, 0, 3), (0, 1, 4), (1, 2, 4), (2, 0, 4)],
        "2.36",
    )
    f = out["2.33"]
    out["3.25"] = f.star_subdivide(_face(f, E3, E4), "3.25")
    out["3.26"] = f.star_subdivide(_face(f, E1, E3, E4), "3.26")
    out["3.27"] = product_fan(_p1(), product_fan(_p1(), _p1()), "3.27")
    out["3.28"] = product_fan(_p1(), hirzebruch(1), "3.28")
    r = (1, 1, 1)
    out["3.29"] = v7.star_subdivide(_face(v7, r, E1), "3.29")
    out["3.30"] = v7.star_subdivide(_face(v7, E1, E2), "3.30")
    out["3.31"] = Fan.make(
        [E1, (-1, 0, 1), E2, (0, -1, 1), E3, (0, 0, -1)],
        [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)],
        "3.31",
    )
    f = out["3.25"]
    u = (1, 1, 0)
    out["4.9"] = f.star_subdivide(_face(f, u, E3), "4.9")
    out["4.10"] = product_fan(_p1(), del_pezzo_toric(2), "4.10")
    f = out["3.28"]
    out["4.11"] = f.star_subdivide(_face(f, E1, E3), "4.11")
    f = out["2.33"]
    f = f.star_subdivide(_face(f, u, E3))
    out["4.12"] = f.star_subdivide(_face(f, u, E4), "4.12")
    f = out["3.25"]
    f = f.star_subdivide(_face(f, u, E3))
    out["5.2"] = f.star_subdivide(_face(f, u, E4), "5.2")
    out["5.3"] = product_fan(_p1(), del_pezzo_toric(3), "5.3")
    return out


def fan_to_json(fan: Fan) -> dict:
    return {
        "name": fan.name,
        "rays": [list(r) for r in fan.rays],
        "cones": sorted(sorted(c) for c in fan.cones),
    }


def fan_from_json(data: dict) -> Fan:
    try:
        return Fan.make(data["rays"], data["cones"], data.get("name", ""))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed fan data: {exc}") from exc


def shipped_fan(name: str) -> Fan:
    """Fan shipped as package data, by family id or alias (``P3``, ``P1xP2``, ...)."""
    path = resources.files("coregkit") / "data" / "fans" / f"{name}.json"
    if not path.is_file():
        raise InputError(f"no shipped fan named {name!r}")
    return fan_from_json(json.loads(path.read_text()))


ALIASES = {"P3": "1.17", "P1xP2": "2.34", "P1xP1xP1": "3.27", "BlP3": "2.35"}
