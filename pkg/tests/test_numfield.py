from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from coregkit.numfield import NumberField, extend, factor_rational, factor_squarefree, poly_eval, squarefree_decomposition


def test_sqrt2_arithmetic():
    K = NumberField([-2, 0, 1])
    a = K.gen
    assert a * a == 2
    assert (1 + a) * (1 - a) == -1
    assert (1 / (1 + a)) * (1 + a) == 1
    assert (a**3).coeffs == (0, 2)
    assert not (a - a)


def test_inverse_matches_sympy():
    K = NumberField([1, -3, 0, 1])  # y^3 - 3y + 1
    y = sympy.Symbol("y")
    elem = 2 + K.gen - K.gen**2 * Fraction(1, 3)
    inv = 1 / elem
    expr = sum(sympy.Rational(c.numerator, c.denominator) * y**i for i, c in enumerate(inv.coeffs))
    check = sympy.rem(sympy.expand(expr * (2 + y - y**2 / 3)), y**3 - 3 * y + 1, y)
    assert sympy.simplify(check - 1) == 0


def test_rejects_linear_minpoly():
    with pytest.raises(ValueError):
        NumberField([1, 1])


def test_squarefree_decomposition():
    # (t - 1)^2 (t + 2)
    parts = squarefree_decomposition([2, -3, 0, 1])
    assert sorted((len(p) - 1, m) for p, m in parts) == [(1, 1), (1, 2)]


def test_factor_rational():
    facs = factor_rational([0, 0, -2, 0, 1])  # t^4 - 2t^2, low degree first = t^2 (t^2 - 2)
    assert sorted((len(p) - 1, m) for p, m in facs) == [(1, 2), (2, 1)]


def test_factor_over_extension_splits():
    K = NumberField([-2, 0, 1])
    facs = factor_squarefree(K, [-2, 0, 1])
    assert len(facs) == 2 and all(len(f) == 2 for f, _ in facs)


def test_tower_root_satisfies_factor():
    K = NumberField([-2, 0, 1])
    (f, data), = factor_squarefree(K, [-3, 0, 1])
    L, embed, root = extend(K, f, data)
    assert L.degree == 4
    assert root * root == 3
    assert embed(K.gen) ** 2 == 2
    assert poly_eval([embed(c) for c in f], root) == 0
