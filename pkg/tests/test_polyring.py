"""Tests for the exact polynomial layer.

Ring axioms and substitution laws are property-based; a handful of concrete
expansions are cross-checked against sympy, which plays no role in the
package itself.
"""

from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from confalg.errors import DuplicateBinding, ParseError
from confalg.polyring import Poly, lam, parse_poly, var_sort_key

D = Poly.var("D")
L1 = Poly.var("L1")
L2 = Poly.var("L2")
T = Poly.var("t")


# -- strategies ------------------------------------------------------------

VARS = ["D", "L1", "L2", "L3", "t", "q"]

scalars = st.fractions(
    min_value=-6, max_value=6, max_denominator=4
)


@st.composite
def monomials(draw) -> tuple:
    names = draw(st.lists(st.sampled_from(VARS), unique=True, max_size=3))
    pairs = [(name, draw(st.integers(min_value=1, max_value=3))) for name in names]
    return tuple(sorted(pairs, key=lambda p: var_sort_key(p[0])))


@st.composite
def polys(draw) -> Poly:
    terms = draw(st.dictionaries(monomials(), scalars, max_size=4))
    return Poly(terms)


# -- ring axioms -----------------------------------------------------------


@settings(max_examples=100)
@given(polys(), polys(), polys())
def test_ring_axioms(p: Poly, q: Poly, r: Poly) -> None:
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p + Poly.zero() == p
    assert p * Poly.one() == p
    assert p - p == Poly.zero()
    assert p * Poly.zero() == Poly.zero()


@settings(max_examples=100)
@given(polys())
def test_coefficients_stay_reduced_and_nonzero(p: Poly) -> None:
    square = p * p
    for mono, coeff in square.items():
        assert coeff != 0
        assert isinstance(coeff, Fraction)
        # Fraction guarantees lowest terms; assert the invariant anyway.
        from math import gcd

        assert gcd(abs(coeff.numerator), coeff.denominator) == 1
        assert coeff.denominator > 0
        assert all(exp > 0 for _, exp in mono)


@settings(max_examples=100)
@given(polys(), st.sampled_from(VARS))
def test_substitute_identity(p: Poly, name: str) -> None:
    assert p.substitute(name, Poly.var(name)) == p


@settings(max_examples=100)
@given(polys(), polys(), st.sampled_from(VARS), polys())
def test_substitute_is_ring_hom(p: Poly, q: Poly, name: str, image: Poly) -> None:
    lhs = (p * q).substitute(name, image)
    rhs = p.substitute(name, image) * q.substitute(name, image)
    assert lhs == rhs
    assert (p + q).substitute(name, image) == p.substitute(name, image) + q.substitute(
        name, image
    )


@settings(max_examples=60)
@given(polys())
def test_str_round_trip(p: Poly) -> None:
    assert parse_poly(str(p)) == p


# -- simultaneity of substitute_many ----------------------------------------


def test_substitute_many_is_simultaneous() -> None:
    p = L1 * L2
    result = p.substitute_many([("L1", L1 + L2), ("L2", Poly.var("L3"))])
    assert result == (L1 + L2) * Poly.var("L3")


def test_substitute_many_rejects_duplicates() -> None:
    with pytest.raises(DuplicateBinding):
        (D + L1).substitute_many([("D", L1), ("D", L2)])


def test_substitute_examples() -> None:
    assert (D + L1).substitute("D", -L1) == Poly.zero()
    assert (D ** 2).substitute("D", D + L1) == D ** 2 + 2 * D * L1 + L1 ** 2
    assert L2.substitute("D", Poly.const(7)) == L2
    assert (D + L1).substitute_many([("D", -L1 - D)]) == -D
    assert (L1 ** 2).substitute_many([("L1", L1 + L2)]) == L1 ** 2 + 2 * L1 * L2 + L2 ** 2


def test_arith_examples() -> None:
    assert (D + 1) + (-D) == Poly.one()
    assert D * L1 == Poly({(("D", 1), ("L1", 1)): Fraction(1)})
    assert (D + L1) * (D - L1) - D ** 2 == -(L1 ** 2)


# -- sympy cross-checks ------------------------------------------------------


def _to_sympy(p: Poly) -> sympy.Expr:
    expr = sympy.Integer(0)
    for mono, coeff in p.items():
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        for name, exp in mono:
            term *= sympy.Symbol(name) ** exp
        expr += term
    return expr


@settings(max_examples=40)
@given(polys(), polys())
def test_mul_matches_sympy(p: Poly, q: Poly) -> None:
    ours = _to_sympy(p * q)
    theirs = sympy.expand(_to_sympy(p) * _to_sympy(q))
    assert sympy.simplify(ours - theirs) == 0


@settings(max_examples=40)
@given(polys(), polys())
def test_substitution_matches_sympy(p: Poly, image: Poly) -> None:
    ours = _to_sympy(p.substitute("D", image))
    theirs = sympy.expand(_to_sympy(p).subs(sympy.Symbol("D"), _to_sympy(image)))
    assert sympy.simplify(ours - theirs) == 0


# -- parsing ------------------------------------------------------------------


def test_parse_poly_forms() -> None:
    assert parse_poly("(2*D + 3*L1)^2") == (2 * D + 3 * L1) ** 2
    assert parse_poly("1/2*D - L1") == Fraction(1, 2) * D - L1
    assert parse_poly("-D^2") == -(D ** 2)
    assert parse_poly("t*q") == T * Poly.var("q")
    assert parse_poly("0") == Poly.zero()


def test_parse_poly_errors() -> None:
    with pytest.raises(ParseError):
        parse_poly("D^")
    with pytest.raises(ParseError):
        parse_poly("2 +")
    with pytest.raises(ParseError):
        parse_poly("(D")
    with pytest.raises(ParseError):
        parse_poly("D @ L1")


def test_lambda_names() -> None:
    assert lam(1) == "L1"
    assert lam(12) == "L12"
    with pytest.raises(ValueError):
        lam(0)
    assert var_sort_key("D") < var_sort_key("L1") < var_sort_key("L2") < var_sort_key("t")
