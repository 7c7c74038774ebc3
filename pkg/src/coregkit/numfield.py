"""Simple algebraic number fields and univariate polynomials over them.

Only what the curve resolution needs: exact arithmetic in ``Q(a)``,
square-free decomposition, factorization into irreducibles (Trager's norm
method on top of sympy's rational factorization) and primitive elements
for towers ``Q(a)(b) = Q(c)``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import count
from typing import Any, Sequence

import sympy

Poly = list[Any]  # coefficients, lowest degree first


class NumberField:
    """``Q[y]/(m(y))`` for a monic irreducible ``m`` of degree >= 2."""

    def __init__(self, minpoly: Sequence[Any], name: str = "a") -> None:
        m = [Fraction(c) for c in minpoly]
        while m and m[-1] == 0:
            m.pop()
        if len(m) < 3:
            raise ValueError("minimal polynomial must have degree at least 2")
        lead = m[-1]
        self.minpoly: tuple[Fraction, ...] = tuple(c / lead for c in m)
        self.degree = len(m) - 1
        self.name = name

    def __repr__(self) -> str:
        return f"NumberField({list(map(str, self.minpoly))})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self) -> int:
        return hash(self.minpoly)

    def __call__(self, value: Any) -> NFElem:
        if isinstance(value, NFElem):
            if value.field != self:
                raise ValueError("element of a different field")
            return value
        return NFElem(self, (Fraction(value),))

    @cached_property
    def gen(self) -> NFElem:
        return NFElem(self, (Fraction(0), Fraction(1)))

    def _reduce(self, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
        m = self.minpoly
        d = self.degree
        c = list(coeffs)
        for k in range(len(c) - 1, d - 1, -1):
            top = c[k]
            if top:
                for j in range(d):
                    c[k - d + j] -= top * m[j]
            c[k] = Fraction(0)
        c = c[:d]
        while c and c[-1] == 0:
            c.pop()
        return tuple(c)


class NFElem:
    """Element of a :class:`NumberField`, stored as a reduced polynomial in the generator."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: Sequence[Fraction]) -> None:
        self.field = field
        self.coeffs = field._reduce([Fraction(c) for c in coeffs])

    def _lift(self, other: Any) -> NFElem | None:
        if isinstance(other, NFElem):
            if other.field != self.field:
                raise ValueError("mixing elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return NFElem(self.field, (Fraction(other),))
        return None

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __add__(self, other: Any) -> NFElem:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        for i, c in enumerate(o.coeffs):
            a[i] += c
        return NFElem(self.field, a)

    __radd__ = __add__

    def __neg__(self) -> NFElem:
        return NFElem(self.field, [-c for c in self.coeffs])

    def __sub__(self, other: Any) -> NFElem:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> NFElem:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Any) -> NFElem:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return NFElem(self.field, ())
        prod = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        return NFElem(self.field, prod)

    __rmul__ = __mul__

    def inverse(self) -> NFElem:
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero in a number field")
        # extended Euclid in Q[y]: s*self + t*m = 1
        _, s, _ = _xgcd_q(list(self.coeffs), list(self.field.minpoly))
        return NFElem(self.field, s)

    def __truediv__(self, other: Any) -> NFElem:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> NFElem:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> NFElem:
        if k < 0:
            return self.inverse() ** (-k)
        result = NFElem(self.field, (Fraction(1),))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.rational())
        return hash((self.field, self.coeffs))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        name = self.field.name
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(str(c) if i == 0 else f"{c}*{name}" + (f"^{i}" if i > 1 else ""))
        return "(" + " + ".join(parts) + ")"


# --- univariate polynomials over Q ---------------------------------------------


def _trim(p: Poly) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _xgcd_q(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """``(g, s, t)`` with ``s*a + t*b = g`` monic, over any field."""
    r0, r1 = _trim(a), _trim(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1))
    lead = r0[-1]
    inv = 1 / lead
    return [c * inv for c in r0], [c * inv for c in s0], [c * inv for c in t0]


def poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(x + y)
    return _trim(out)


def poly_sub(a: Poly, b: Poly) -> Poly:
    return poly_add(a, [-c for c in b])


def poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out: list[Any] = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q: list[Any] = [0] * max(len(a) - len(b) + 1, 0)
    inv = 1 / (Fraction(b[-1]) if isinstance(b[-1], int) else b[-1])
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] * inv
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] = r[k + i] - c * y
        r.pop()
        r = _trim(r)
    return _trim(q), r


def poly_monic(a: Poly) -> Poly:
    a = _trim(a)
    inv = 1 / (Fraction(a[-1]) if isinstance(a[-1], int) else a[-1])
    return [c * inv for c in a]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return poly_monic(a) if a else []


def poly_deriv(a: Poly) -> Poly:
    return _trim([c * i for i, c in enumerate(a)][1:])


def poly_eval(a: Poly, x: Any) -> Any:
    acc: Any = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_shift(a: Poly, s: Any) -> Poly:
    """Coefficients of ``a(t + s)``."""
    out: Poly = []
    for c in reversed(a):
        out = poly_add(poly_mul(out, [s, 1]), [c])
    return out


def squarefree_decomposition(a: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic square-free ``(p_i, i)`` with ``a ~ prod p_i^i``."""
    a = _trim(a)
    if len(a) <= 1:
        return []
    out = []
    b = poly_gcd(a, poly_deriv(a))
    c = poly_divmod(a, b)[0]
    d = poly_sub(poly_divmod(poly_deriv(a), b)[0], poly_deriv(c))
    i = 1
    while len(c) > 1:
        g = poly_gcd(c, d)
        if len(g) > 1:
            out.append((g, i))
        c = poly_divmod(c, g)[0]
        d = poly_sub(poly_divmod(d, g)[0], poly_deriv(c))
        i += 1
    return out


# --- factorization ---------------------------------------------------------------

_T, _Y = sympy.symbols("t y")


def _to_fraction(r: Any) -> Fraction:
    r = sympy.Rational(r)
    return Fraction(int(r.p), int(r.q))


def factor_rational(a: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factors over Q with multiplicities."""
    a = _trim([Fraction(c) for c in a])
    if len(a) <= 1:
        return []
    p = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(a)], _T, domain="QQ")
    _, facs = p.factor_list()
    out = []
    for f, mult in facs:
        coeffs = [_to_fraction(c) for c in reversed(f.all_coeffs())]
        out.append((poly_monic(coeffs), mult))
    return out


def _norm(field: NumberField, g: Poly) -> Poly:
    """``Res_y(m(y), G(t, y))`` where ``G`` represents ``g`` with the generator as ``y``."""
    m = sum(sympy.Rational(c.numerator, c.denominator) * _Y**i for i, c in enumerate(field.minpoly))
    expr = 0
    for k, c in enumerate(g):
        e = field(c)
        expr += sum(sympy.Rational(x.numerator, x.denominator) * _Y**i for i, x in enumerate(e.coeffs)) * _T**k
    res = sympy.Poly(sympy.resultant(m, expr, _Y), _T, domain="QQ")
    return [_to_fraction(c) for c in reversed(res.all_coeffs())]


def _shift_values():
    yield 0
    for k in count(1):
        yield k
        yield -k


def factor_squarefree(field: NumberField | None, a: Poly) -> list[tuple[Poly, dict]]:
    """Irreducible monic factors of a square-free polynomial over ``field`` (``None`` = Q).

    Each factor comes with data for building the extension it defines:
    ``{"shift": s, "norm_factor": N}`` where ``N`` is the rational minimal
    polynomial of ``root + s*gen``.
    """
    if field is None:
        return [(f, {"shift": 0, "norm_factor": f}) for f, _ in factor_rational(a)]
    a = poly_monic([field(c) for c in a])
    gen = field.gen
    for s in _shift_values():
        g = poly_shift(a, -s * gen) if s else list(a)
        norm = _norm(field, g)
        if len(poly_gcd(norm, poly_deriv(norm))) == 1:
            break
    out = []
    for nf, _ in factor_rational(norm):
        h = poly_gcd(g, [field(c) for c in nf])
        if len(h) > 1:
            h = poly_shift(h, s * gen) if s else h
            out.append((poly_monic(h), {"shift": s, "norm_factor": nf}))
    return out


def extend(field: NumberField | None, factor: Poly, data: dict, name: str = "a") -> tuple[NumberField, Any, NFElem]:
    """Adjoin a root of the irreducible ``factor`` over ``field``.

    Returns ``(L, embed, root)`` where ``embed`` maps elements of ``field``
    (or rationals) into ``L`` and ``root`` is the adjoined root in ``L``.
    """
    nf = data["norm_factor"]
    big = NumberField(nf, name)
    theta = big.gen
    if field is None:
        return big, (lambda c: big(c)), theta
    s = data["shift"]
    # g = factor(t - s*gen) has the root theta; its image over L in y must share
    # exactly the root y = gen with the minimal polynomial.
    g = poly_shift([field(c) for c in factor], -s * field.gen) if s else [field(c) for c in factor]
    hy: Poly = []
    for k, c in enumerate(g):
        tk = theta**k
        hy = poly_add(hy, [tk * x for x in c.coeffs])
    m = [big(c) for c in field.minpoly]
    common = poly_gcd(m, hy)
    if len(common) != 2:
        raise ArithmeticError("primitive element construction failed")
    alpha = -common[0]

    def embed(c: Any) -> NFElem:
        if isinstance(c, NFElem):
            return big(poly_eval(list(c.coeffs), alpha)) if c.coeffs else big(0)
        return big(c)

    root = theta - s * alpha
    return big, embed, root
