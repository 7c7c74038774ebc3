"""Intersection calculus on Hirzebruch surfaces, blow-ups of the plane, and dP1 pencils."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from .errors import InputError
from .polyring import Germ, as_rational
from .symbridge import to_poly


# --- Hirzebruch surfaces ---------------------------------------------------------------------


@dataclass(frozen=True)
class HirzClass:
    """The class ``a*s + b*f`` on ``F_n`` with ``s^2 = -n``, ``s.f = 1``, ``f^2 = 0``."""

    n: int
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InputError("Hirzebruch index must be non-negative")

    def __add__(self, other: HirzClass) -> HirzClass:
        _same_surface(self, other)
        return HirzClass(self.n, self.a + other.a, self.b + other.b)

    def __neg__(self) -> HirzClass:
        return HirzClass(self.n, -self.a, -self.b)

    def __sub__(self, other: HirzClass) -> HirzClass:
        return self + (-other)

    def __str__(self) -> str:
        parts = []
        if self.a:
            parts.append({1: "s", -1: "-s"}.get(self.a, f"{self.a}s"))
        if self.b:
            term = {1: "f", -1: "-f"}.get(self.b, f"{self.b}f")
            parts.append(term if not parts or term.startswith("-") else "+" + term)
        return "".join(parts) or "0"

    @classmethod
    def section(cls, n: int) -> HirzClass:
        return cls(n, 1, 0)

    @classmethod
    def fiber(cls, n: int) -> HirzClass:
        return cls(n, 0, 1)


def _same_surface(c1: HirzClass, c2: HirzClass) -> None:
    if c1.n != c2.n:
        raise InputError(f"classes live on F_{c1.n} and F_{c2.n}")


def hirz_intersect(c1: HirzClass, c2: HirzClass) -> int:
    _same_surface(c1, c2)
    return -c1.n * c1.a * c2.a + c1.a * c2.b + c2.a * c1.b


def hirz_is_ample(c: HirzClass) -> bool:
    """Nakai criterion on ``F_n``: ``a > 0`` and ``b > n*a``."""
    return c.a > 0 and c.b > c.n * c.a


def hirz_is_effective(c: HirzClass) -> bool:
    """Effective cone of ``F_n`` is spanned by ``s`` and ``f``."""
    return c.a >= 0 and c.b >= 0


@dataclass(frozen=True)
class NormalBundle:
    """Splitting type ``O(a) + O(b)`` of a rational curve's normal bundle."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a > self.b:
            raise InputError("normal bundle splitting needs a <= b")

    @property
    def degree(self) -> int:
        return self.a + self.b


@dataclass(frozen=True)
class BlowupResult:
    """Exceptional surface ``E = F_n`` of a blow-up along a rational curve.

    ``E_self`` is ``E|_E`` and ``D_restrict`` the restriction of the strict
    transform of a divisor containing the curve with multiplicity one.
    """

    hirzebruch_index: int
    E_self: HirzClass
    D_restrict: HirzClass
    c: int
    note: str = ""


def curve_blowup(normal: NormalBundle, l_dot_d: int) -> BlowupResult:
    """``E|_E = -s - c f`` with ``c = -a`` and ``D'|_E = s + (L.D - a) f``."""
    n = normal.b - normal.a
    c = -normal.a
    e_self = HirzClass(n, -1, -c)
    d_restrict = HirzClass(n, 1, l_dot_d - normal.a)
    note = "E = P1 x P1 with s and f the two rulings" if n == 0 else ""
    return BlowupResult(n, e_self, d_restrict, c, note)


def zero_stratum_certificate(r: BlowupResult, other: HirzClass) -> bool:
    """Whether the two restricted divisors must meet on ``E``."""
    d = r.D_restrict
    _same_surface(d, other)
    if hirz_is_ample(d):
        return True
    sections = d.a == 1 and other.a == 1 and d.b >= 0 and other.b >= 0
    return sections and hirz_intersect(d, other) > 0


# --- blow-ups of the plane --------------------------------------------------------------------


@dataclass(frozen=True)
class P2kClass:
    """``d*H - sum m_i E_i`` on the blow-up of ``P^2`` in ``k`` points."""

    d: Fraction
    m: tuple[Fraction, ...]

    def __init__(self, d, m: Sequence = ()) -> None:
        object.__setattr__(self, "d", as_rational(d))
        object.__setattr__(self, "m", tuple(as_rational(x) for x in m))

    @property
    def k(self) -> int:
        return len(self.m)

    @classmethod
    def canonical(cls, k: int) -> P2kClass:
        return cls(-3, [1] * k)

    def __str__(self) -> str:
        return f"({self.d}; {', '.join(str(x) for x in self.m)})"


def p2k_intersect(c1: P2kClass, c2: P2kClass) -> Fraction:
    if c1.k != c2.k:
        raise InputError("classes live on different blow-ups")
    return c1.d * c2.d - sum(x * y for x, y in zip(c1.m, c2.m))


def incidence_lower_bound(mult1: Sequence, mult2: Sequence) -> Fraction:
    """``sum mult1_i * mult2_i``: local intersection at the points, for curves without common components."""
    if len(mult1) != len(mult2):
        raise InputError("multiplicity vectors differ in length")
    return sum((as_rational(a) * as_rational(b) for a, b in zip(mult1, mult2)), Fraction(0))


def infeasible(b: P2kClass, c: P2kClass, required) -> bool:
    """True when the intersection number falls short of the required local contributions."""
    return p2k_intersect(b, c) < as_rational(required)


# --- degree one del Pezzo pencils ---------------------------------------------------------------


@dataclass(frozen=True)
class DiscriminantReport:
    """Root structure of ``4 f4^3 + 27 f6^2`` on ``P^1``.

    ``other`` counts multiplicity not accounted for by nodes and cusps, so
    ``nodal + 2*cusp + other = 12`` whenever the discriminant is nonzero.
    """

    nodal_count: int
    cusp_count: int
    degenerate: bool
    other: int
    multiplicities: tuple[int, ...]


def _binary(g: Germ, degree: int, label: str) -> sympy.Poly:
    if g.nvars != 2:
        raise InputError(f"{label} must be a binary form")
    if not g.is_zero() and not g.is_homogeneous(degree):
        raise InputError(f"{label} must be homogeneous of degree {degree}")
    return to_poly(g.with_order(max(g.order, degree)))


def dp1_discriminant(f4: Germ, f6: Germ) -> DiscriminantReport:
    p4 = _binary(f4, 4, "f4")
    p6 = _binary(f6, 6, "f6")
    x, y = p4.gens
    delta = (4 * p4**3 + 27 * p6**2).as_expr()
    if sympy.expand(delta) == 0:
        return DiscriminantReport(0, 0, True, 12, ())
    t = sympy.Symbol("t")
    affine = sympy.Poly(sympy.expand(delta.subs({x: t, y: 1})), t, domain="QQ")
    f4_affine = sympy.Poly(sympy.expand(p4.as_expr().subs({x: t, y: 1})), t, domain="QQ")
    roots: list[tuple[int, int, int]] = []  # (multiplicity, number of roots, of which f4 vanishes)
    _, parts = affine.sqf_list()
    for h, mult in parts:
        if h.degree() == 0:
            continue
        on_f4 = sympy.gcd(h, f4_affine).degree() if not f4_affine.is_zero else h.degree()
        roots.append((mult, h.degree(), on_f4))
    at_infinity = 12 - affine.degree()
    if at_infinity:
        f4_inf = p4.as_expr().subs({x: 1, y: 0})
        roots.append((at_infinity, 1, int(f4_inf == 0)))
    nodal = sum(n for mult, n, _ in roots if mult == 1)
    cusp = sum(z for mult, _, z in roots if mult == 2)
    mults = tuple(sorted((mult for mult, n, _ in roots for _ in range(n)), reverse=True))
    degenerate = any(m >= 3 for m in mults)
    return DiscriminantReport(nodal, cusp, degenerate, 12 - nodal - 2 * cusp, mults)
