"""Dual complexes of simple normal crossing configurations and toric boundaries."""
from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import AmbiguousFaceError, InputError, NonCompleteFanError
from .linalg import det, inverse


Stratum = frozenset


@dataclass(frozen=True)
class SncConfig:
    """Combinatorics of an SNC divisor: which component sets meet, and in how many pieces.

    ``faces`` optionally resolves face maps when a codimension-one face
    stratum has several copies: it maps ``(I, copy, j)`` to the copy of
    ``I - {j}`` that the cell is attached to.
    """

    ambient_dim: int
    components: tuple[str, ...]
    strata: tuple[tuple[frozenset[int], int], ...]
    faces: Mapping[tuple[frozenset[int], int, int], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = self.ambient_dim
        if n < 1:
            raise InputError("ambient dimension must be positive")
        if len(set(self.components)) != len(self.components):
            raise InputError("component names must be distinct")
        seen: dict[frozenset[int], int] = {}
        for idx, count in self.strata:
            if not idx:
                raise InputError("strata need at least one component")
            if count < 1:
                raise InputError("stratum counts are positive")
            if len(idx) > n:
                raise InputError(f"{len(idx)} components cannot meet in dimension {n}")
            if not idx <= set(range(len(self.components))):
                raise InputError("stratum refers to an unknown component")
            if idx in seen:
                raise InputError("stratum listed twice")
            seen[idx] = count
        for i in range(len(self.components)):
            if seen.get(frozenset({i})) != 1:
                raise InputError(f"component {self.components[i]!r} needs a singleton stratum of count 1")
        for idx in seen:
            for j in idx:
                if len(idx) > 1 and idx - {j} not in seen:
                    raise InputError("strata are not closed under taking subsets")

    @classmethod
    def from_sets(
        cls, ambient_dim: int, components: Sequence[str], strata: Iterable[tuple[Iterable[int], int]], faces=None
    ) -> SncConfig:
        return cls(
            ambient_dim,
            tuple(components),
            tuple(sorted(((frozenset(i), c) for i, c in strata), key=lambda s: (len(s[0]), sorted(s[0])))),
            dict(faces or {}),
        )

    def count(self, idx: frozenset[int]) -> int:
        return dict(self.strata).get(frozenset(idx), 0)

    def permuted(self, perm: Sequence[int]) -> SncConfig:
        """Relabel component ``i`` as ``perm[i]``."""
        comps = [""] * len(self.components)
        for i, name in enumerate(self.components):
            comps[perm[i]] = name
        strata = [(frozenset(perm[i] for i in idx), c) for idx, c in self.strata]
        faces = {(frozenset(perm[i] for i in idx), k, perm[j]): v for (idx, k, j), v in self.faces.items()}
        return SncConfig.from_sets(self.ambient_dim, comps, strata, faces)


@dataclass(frozen=True, order=True)
class Cell:
    stratum: tuple[int, ...]
    copy: int

    @property
    def dim(self) -> int:
        return len(self.stratum) - 1


@dataclass(frozen=True)
class DualComplex:
    cells: dict[int, tuple[Cell, ...]]
    attachments: dict[tuple[Cell, int], Cell]
    config: SncConfig

    def count(self, d: int) -> int:
        return len(self.cells.get(d, ()))


def build_complex(cfg: SncConfig) -> DualComplex:
    """One ``(|I|-1)``-cell per irreducible component of each stratum, glued along faces."""
    cells: dict[int, list[Cell]] = {}
    attach: dict[tuple[Cell, int], Cell] = {}
    for idx, count in cfg.strata:
        key = tuple(sorted(idx))
        for k in range(count):
            cell = Cell(key, k)
            cells.setdefault(cell.dim, []).append(cell)
            if len(idx) == 1:
                continue
            for j in key:
                face = idx - {j}
                fcount = cfg.count(face)
                if fcount == 1:
                    target = 0
                elif (idx, k, j) in cfg.faces:
                    target = cfg.faces[(idx, k, j)]
                    if not 0 <= target < fcount:
                        raise InputError("face map points at a missing copy")
                else:
                    raise AmbiguousFaceError(f"face of {key} opposite {j} has {fcount} copies and no face map")
                attach[(cell, j)] = Cell(tuple(sorted(face)), target)
    return DualComplex({d: tuple(sorted(cs)) for d, cs in cells.items()}, attach, cfg)


def dimension(dc: DualComplex) -> int:
    return max((d for d, cs in dc.cells.items() if cs), default=-1)


def euler(dc: DualComplex) -> int:
    return sum((-1) ** d * len(cs) for d, cs in dc.cells.items())


def is_connected(dc: DualComplex) -> bool:
    vertices = [c for c in dc.cells.get(0, ())]
    if not vertices:
        return False
    parent = {v: v for v in vertices}

    def find(v: Cell) -> Cell:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for edge in dc.cells.get(1, ()):
        a, b = (dc.attachments[(edge, j)] for j in edge.stratum)
        parent[find(a)] = find(b)
    return len({find(v) for v in vertices}) == 1


def canonical_hash(dc: DualComplex) -> str:
    """Hash invariant under relabeling the components."""
    cfg = dc.config
    m = len(cfg.components)

    def signature(perm: Sequence[int]) -> tuple:
        strata = sorted((tuple(sorted(perm[i] for i in idx)), c) for idx, c in cfg.strata)
        faces = sorted(
            (tuple(sorted(perm[i] for i in idx)), k, perm[j], v) for (idx, k, j), v in cfg.faces.items()
        )
        return (cfg.ambient_dim, tuple(strata), tuple(faces))

    if m <= 6:
        best = min(signature(p) for p in permutations(range(m)))
    else:
        colors = [0] * m
        for _ in range(m):
            sig = [
                tuple(sorted((len(idx), c, tuple(sorted(colors[j] for j in idx))) for idx, c in cfg.strata if i in idx))
                for i in range(m)
            ]
            palette = {s: k for k, s in enumerate(sorted(set(sig)))}
            new = [palette[s] for s in sig]
            if new == colors:
                break
            colors = new
        best = (cfg.ambient_dim, tuple(sorted(Counter(
            (len(idx), c, tuple(sorted(colors[j] for j in idx))) for idx, c in cfg.strata
        ).items())))
    return hashlib.sha256(repr(best).encode()).hexdigest()


def _face_copy(cfg: SncConfig, idx: frozenset[int], k: int, j: int) -> int:
    face = idx - {j}
    if cfg.count(face) == 1:
        return 0
    if (idx, k, j) not in cfg.faces:
        raise AmbiguousFaceError(f"face of {sorted(idx)} opposite {j} is ambiguous")
    return cfg.faces[(idx, k, j)]


def join_configs(a: SncConfig, b: SncConfig) -> SncConfig:
    """Boundary of a product: its dual complex is the join of the two complexes.

    A joint stratum ``I | J`` has ``count(I) * count(J)`` copies; copy
    ``(ka, kb)`` is numbered ``ka * count(J) + kb``.
    """
    off = len(a.components)

    def shift(idx: frozenset[int]) -> frozenset[int]:
        return frozenset(i + off for i in idx)

    strata = list(a.strata) + [(shift(idx), c) for idx, c in b.strata]
    faces = dict(a.faces)
    faces.update({(shift(idx), k, j + off): v for (idx, k, j), v in b.faces.items()})
    for ia, ca in a.strata:
        for ib, cb in b.strata:
            joint = ia | shift(ib)
            strata.append((joint, ca * cb))
            for ka in range(ca):
                for kb in range(cb):
                    k = ka * cb + kb
                    for j in ia:
                        if len(ia) == 1:
                            target, count = kb, cb
                        else:
                            target = _face_copy(a, ia, ka, j) * cb + kb
                            count = a.count(ia - {j}) * cb
                        if count > 1:
                            faces[(joint, k, j)] = target
                    for j in ib:
                        if len(ib) == 1:
                            target, count = ka, ca
                        else:
                            fb = b.count(ib - {j})
                            target = ka * fb + _face_copy(b, ib, kb, j)
                            count = ca * fb
                        if count > 1:
                            faces[(joint, k, j + off)] = target
    return SncConfig.from_sets(a.ambient_dim + b.ambient_dim, a.components + b.components, strata, faces)


# --- regularity ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class RegReport:
    n: int
    reg: int
    coreg: int
    level: int | None = None
    topology: str = ""


def regularity(dc: DualComplex, n: int, level: int | None = None) -> RegReport:
    if n < 1:
        raise InputError("dimension must be positive")
    reg = dimension(dc)
    if reg > n - 1:
        raise InputError("dual complex is too large for the ambient dimension")
    chi = euler(dc)
    note = ""
    if reg == 2 and chi == 2:
        note = "consistent with a sphere (Euler characteristic 2)"
    elif reg == 1 and chi == 0 and is_connected(dc):
        note = "consistent with a circle (Euler characteristic 0)"
    return RegReport(n, reg, n - 1 - reg, level, note)


class CoregVerdict(str, Enum):
    ZERO = "CoregZero"
    AT_LEAST_ONE = "CoregAtLeastOne"


def coreg_verdict(reg1: int, reg2: int, n: int) -> CoregVerdict:
    """Coregularity zero iff a 1- or 2-complement has a maximal dual complex."""
    for r in (reg1, reg2):
        if not -1 <= r <= n - 1:
            raise InputError(f"regularity {r} out of range for dimension {n}")
    return CoregVerdict.ZERO if n - 1 in (reg1, reg2) else CoregVerdict.AT_LEAST_ONE


# --- fans ----------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Fan:
    """Simplicial fan given by primitive rays and maximal cones."""

    rays: tuple[tuple[int, ...], ...]
    cones: tuple[frozenset[int], ...]
    name: str = ""

    def __post_init__(self) -> None:
        if not self.rays:
            raise InputError("fan needs rays")
        n = len(self.rays[0])
        for r in self.rays:
            if len(r) != n or not any(r):
                raise InputError("rays must be nonzero vectors of equal length")
            if gcd(*r) != 1:
                raise InputError(f"ray {r} is not primitive")
        if len(set(self.rays)) != len(self.rays):
            raise InputError("repeated ray")
        for c in self.cones:
            if not c or not c <= set(range(len(self.rays))):
                raise InputError("cone refers to unknown rays")

    @classmethod
    def make(cls, rays: Iterable[Iterable[int]], cones: Iterable[Iterable[int]], name: str = "") -> Fan:
        return cls(tuple(tuple(int(x) for x in r) for r in rays), tuple(frozenset(c) for c in cones), name)

    @property
    def dim(self) -> int:
        return len(self.rays[0])

    def matrix(self, cone: Iterable[int]) -> list[list[Fraction]]:
        return [[Fraction(x) for x in self.rays[i]] for i in sorted(cone)]

    def is_smooth(self) -> bool:
        return all(len(c) == self.dim and abs(det(self.matrix(c))) == 1 for c in self.cones)

    def picard_rank(self) -> int:
        return len(self.rays) - self.dim

    def walls(self) -> dict[frozenset[int], list[frozenset[int]]]:
        out: dict[frozenset[int], list[frozenset[int]]] = {}
        for c in self.cones:
            for j in c:
                out.setdefault(c - {j}, []).append(c)
        return out

    def star_subdivide(self, face: Iterable[int], name: str = "") -> Fan:
        """Insert the ray ``sum(face)`` and split every cone containing ``face``."""
        face = frozenset(face)
        new = tuple(sum(self.rays[i][k] for i in face) for k in range(self.dim))
        g = gcd(*new)
        new = tuple(x // g for x in new)
        rays = self.rays + (new,)
        r = len(self.rays)
        cones: list[frozenset[int]] = []
        for c in self.cones:
            if face <= c:
                cones.extend((c - {j}) | {r} for j in face)
            else:
                cones.append(c)
        return Fan(rays, tuple(cones), name or self.name)


def product_fan(a: Fan, b: Fan, name: str = "") -> Fan:
    na, nb = a.dim, b.dim
    rays = [r + (0,) * nb for r in a.rays] + [(0,) * na + r for r in b.rays]
    off = len(a.rays)
    cones = [ca | frozenset(i + off for i in cb) for ca in a.cones for cb in b.cones]
    return Fan(tuple(rays), tuple(cones), name)


_SAMPLES = ((3, 5, 7), (-2, 9, 4), (11, -6, -1), (-7, -3, -5), (1, -13, 8), (5, 2, -11))


def _in_cone(fan: Fan, cone: frozenset[int], v: Sequence[int]) -> str:
    """'interior', 'boundary' or 'outside' for a full-dimensional simplicial cone."""
    m = fan.matrix(cone)
    # v = sum lam_i ray_i  <=>  lam = v * inverse(M) with rays as rows
    inv = inverse(m)
    lam = [sum(Fraction(v[k]) * inv[k][i] for k in range(len(v))) for i in range(len(m))]
    if any(x < 0 for x in lam):
        return "outside"
    return "interior" if all(x > 0 for x in lam) else "boundary"


def check_complete(fan: Fan) -> None:
    """Raise unless every wall is shared by two opposite cones and generic points are covered once."""
    n = fan.dim
    for c in fan.cones:
        if len(c) != n or det(fan.matrix(c)) == 0:
            raise NonCompleteFanError("maximal cones must be full-dimensional and simplicial")
    for wall, cones in fan.walls().items():
        if len(cones) != 2:
            raise NonCompleteFanError(f"wall {sorted(wall)} lies in {len(cones)} maximal cones")
        sides = []
        for c in cones:
            (apex,) = c - wall
            sides.append(det(fan.matrix(wall) + [[Fraction(x) for x in fan.rays[apex]]]))
        if sides[0] * sides[1] >= 0:
            raise NonCompleteFanError(f"cones on wall {sorted(wall)} overlap")
    samples = [s[:n] + (1,) * max(0, n - len(s)) for s in _SAMPLES]
    used = 0
    for v in samples:
        where = [_in_cone(fan, c, v) for c in fan.cones]
        if "boundary" in where:
            continue
        used += 1
        if where.count("interior") != 1:
            raise NonCompleteFanError(f"direction {v} is covered by {where.count('interior')} cones")
    if not used:
        raise NonCompleteFanError("no generic sample direction available")


def toric_boundary(fan: Fan) -> SncConfig:
    """Torus-invariant boundary: one component per ray, one stratum per cone."""
    check_complete(fan)
    faces: set[frozenset[int]] = set()
    for c in fan.cones:
        for k in range(1, len(c) + 1):
            faces.update(frozenset(s) for s in combinations(sorted(c), k))
    names = [f"D{i + 1}" for i in range(len(fan.rays))]
    return SncConfig.from_sets(fan.dim, names, [(f, 1) for f in faces])


def _vertex(fan: Fan, cone: frozenset[int]) -> list[Fraction]:
    """``m_cone`` with ``<m, v_i> = -1`` for the rays of the cone."""
    inv = inverse(fan.matrix(cone))
    return [sum(-inv[k][i] for i in range(fan.dim)) for k in range(fan.dim)]


def is_fano(fan: Fan) -> bool:
    check_complete(fan)
    for c in fan.cones:
        m = _vertex(fan, c)
        for j, r in enumerate(fan.rays):
            if j not in c and sum(a * b for a, b in zip(m, r)) <= -1:
                return False
    return True


def anticanonical_degree(fan: Fan) -> int:
    """``(-K)^3`` of a smooth projective toric Fano threefold as ``6 vol(P)``."""
    if fan.dim != 3:
        raise InputError("degree computation is implemented for threefolds")
    if not is_fano(fan):
        raise InputError("fan is not Fano")
    total = Fraction(0)
    verts = {c: _vertex(fan, c) for c in fan.cones}
    for i in range(len(fan.rays)):
        star = [c for c in fan.cones if i in c]
        ring = [star[0]]
        while len(ring) < len(star):
            nxt = next(
                c for c in star if c not in ring and len(c & ring[-1]) == 2 and (len(ring) < 2 or c != ring[-2])
            )
            ring.append(nxt)
        a = verts[ring[0]]
        for b, c in zip(ring[1:], ring[2:]):
            total += abs(det([a, verts[b], verts[c]]))
    return int(total)
