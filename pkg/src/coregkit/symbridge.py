"""Conversions between rational germs and sympy polynomials."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import sympy

from .errors import InputError, NonReducedError
from .polyring import Germ


def gens(n: int) -> tuple[sympy.Symbol, ...]:
    return sympy.symbols(f"x1:{n + 1}")


def to_poly(g: Germ, symbols: Sequence[sympy.Symbol] | None = None) -> sympy.Poly:
    symbols = tuple(symbols) if symbols is not None else gens(g.nvars)
    terms = {}
    for e, c in g.items():
        if not isinstance(c, Fraction):
            raise InputError("only rational germs convert to sympy")
        terms[e] = sympy.Rational(c.numerator, c.denominator)
    if not terms:
        return sympy.Poly(0, *symbols, domain="QQ")
    return sympy.Poly.from_dict(terms, *symbols, domain="QQ")


def from_poly(p: sympy.Poly, nvars: int, order: int) -> Germ:
    terms = {}
    for e, c in p.terms():
        r = sympy.Rational(c)
        terms[tuple(e) + (0,) * (nvars - len(e))] = Fraction(int(r.p), int(r.q))
    return Germ(nvars, terms, order)


def repeated_factor_through_origin(g: Germ) -> bool:
    """True if the polynomial ``g`` has a repeated factor vanishing at 0."""
    p = to_poly(g)
    if p.is_zero:
        return True
    common = p
    for x in p.gens:
        common = sympy.gcd(common, p.diff(x))
    if common.total_degree() == 0:
        return False
    return common.eval({x: 0 for x in p.gens}) == 0


def require_reduced(g: Germ) -> None:
    if g.is_zero():
        raise NonReducedError("the zero germ is not reduced")
    if repeated_factor_through_origin(g):
        raise NonReducedError("germ has a repeated factor through the origin")


def linear_factors(p: sympy.Poly) -> list[tuple[sympy.Poly, int]]:
    """Rational linear factors of a homogeneous polynomial with multiplicities."""
    _, facs = p.factor_list()
    return [(f, m) for f, m in facs if f.total_degree() == 1]
