from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfpop.errors import HigherOrderPole, NotSquarefree, ZeroPolynomial
from mfpop.polyring import (
    ONE,
    X,
    Poly,
    RatFun,
    coprime,
    ext_gcd,
    format_rational,
    gcd,
    hermite_integrate_sq,
    laurent_at_infinity,
    parse_rational,
    residue_at,
    squarefree,
    wronskian,
)
from strategies import nonzero_polys, polys, small_rationals, squarefree_polys


# rationals --------------------------------------------------------------


@pytest.mark.parametrize("text,value", [("3", 3), ("-1/2", Fraction(-1, 2)), ("0", 0), (7, 7), ("10/3", Fraction(10, 3))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["1/0", "2/4", "-0", "3/1", "1.5", "+1", "1/-2", "", "x", True, None, 1.0])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


@given(st.fractions(max_denominator=1000))
def test_rational_round_trip(q):
    assert parse_rational(format_rational(q)) == q


# Poly basics --------------------------------------------------------------


def test_zero_polynomial():
    z = Poly()
    assert z.is_zero() and z.degree == -1
    assert Poly([0, 0]) == z
    with pytest.raises(ZeroPolynomial):
        z.monic()


def test_poly_arithmetic_and_eval():
    p = (X - 1) * (X + 1)
    assert p == X**2 - 1
    assert p(Fraction(1, 2)) == Fraction(-3, 4)
    assert p(2j) == -5
    q, r = divmod(X**3 + 1, X + 1)
    assert q == X**2 - X + 1 and r.is_zero()
    assert str(Poly([Fraction(-1, 2), 0, 1])) == "x^2 - 1/2"


@given(polys(), nonzero_polys())
def test_divmod_identity(f, g):
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.degree < g.degree


@given(polys())
def test_string_round_trip(f):
    assert Poly.from_strings(f.to_strings()) == f


# wronskian --------------------------------------------------------------


def test_wronskian_examples():
    assert wronskian(X, ONE) == Poly([-1])
    assert wronskian(X**2, X) == Poly([0, 0, -1])
    f = X**3 - 2 * X
    assert wronskian(f, f).is_zero()


@given(polys(8), polys(8), polys(8), small_rationals, small_rationals)
def test_wronskian_antisymmetric_bilinear(f, g, h, a, b):
    assert wronskian(f, g) == -wronskian(g, f)
    assert wronskian(f * a + g * b, h) == wronskian(f, h) * a + wronskian(g, h) * b


# gcd and structure tests -------------------------------------------------------


def test_squarefree_and_coprime_examples():
    assert squarefree(X**2 - 1)
    assert not squarefree((X - 1) ** 2)
    assert squarefree(ONE)
    assert coprime(X - 1, X + 1)
    assert not coprime(X**2 - 1, X - 1)
    assert coprime(ONE, X**3 + 2)
    with pytest.raises(ZeroPolynomial):
        squarefree(Poly())
    with pytest.raises(ZeroPolynomial):
        coprime(Poly(), X)


@given(nonzero_polys(), nonzero_polys(), nonzero_polys(3))
def test_gcd_divides_and_is_maximal(f, g, h):
    d = gcd(f * h, g * h)
    assert d.lc == 1
    assert ((f * h) % d).is_zero() and ((g * h) % d).is_zero()
    assert (d % h.monic()).is_zero()


@given(nonzero_polys(), nonzero_polys())
def test_ext_gcd_bezout(f, g):
    d, s, t = ext_gcd(f, g)
    assert s * f + t * g == d
    assert d == gcd(f, g)


# rational functions ------------------------------------------------------------


@given(polys(4), nonzero_polys(4), polys(4), nonzero_polys(4))
def test_ratfun_normalized(a, b, c, d):
    for f in (RatFun(a, b) + RatFun(c, d), RatFun(a, b) * RatFun(c, d), RatFun(a, b).derivative()):
        assert f.den.lc == 1
        assert gcd(f.num, f.den).is_constant() or f.num.is_zero()


def test_residue_examples():
    f = RatFun(Poly([5]), X - 1) - RatFun(Poly([5]), X + 1)
    assert residue_at(f, 1) == 5
    assert residue_at(RatFun(ONE, X**2 - 1), 1) == Fraction(1, 2)
    assert residue_at(RatFun(X**3 + 1), 7) == 0
    with pytest.raises(HigherOrderPole):
        residue_at(RatFun(ONE, (X - 1) ** 2), 1)


def test_laurent_examples():
    f = RatFun(Poly([5]), X - 1) - RatFun(Poly([5]), X + 1)
    assert laurent_at_infinity(f, 2) == [0, 0, 10]
    assert laurent_at_infinity(RatFun(ONE, X), 2) == [0, 1, 0]
    assert laurent_at_infinity(RatFun(Poly()), 3) == [0, 0, 0, 0]


@given(polys(3), squarefree_polys(4))
def test_laurent_matches_numeric_expansion(num, den):
    f = RatFun(num, den)
    coeffs = laurent_at_infinity(f, 3)
    # numeric coefficients through a large contour
    radius = 100.0
    x = radius * np.exp(2j * np.pi * np.arange(256) / 256)
    vals = np.array([f(complex(v)) for v in x]) - np.array([complex(f.polynomial_part()(complex(v))) for v in x])
    for m, c in enumerate(coeffs):
        if m == 0:
            continue
        approx = np.mean(vals * x**m)
        assert abs(approx - complex(c)) < 1e-6 * max(1.0, abs(complex(c)))


# Hermite reduction -------------------------------------------------------------


def test_hermite_examples():
    h = hermite_integrate_sq(X**2, ONE)
    assert h.poly_part == Poly([0, 0, 0, Fraction(1, 3)])
    assert h.rational_part.is_zero() and h.residual.is_zero()
    h = hermite_integrate_sq(ONE, X)
    assert h.rational_part == RatFun(Poly([-1]), X) and h.is_rational
    h = hermite_integrate_sq(X, X)
    assert h.residual == ONE and not h.is_rational
    with pytest.raises(NotSquarefree):
        hermite_integrate_sq(ONE, (X - 2) ** 2)


@settings(max_examples=200)
@given(polys(12), squarefree_polys(6))
def test_hermite_round_trip(P, y):
    h = hermite_integrate_sq(P, y)
    lhs = RatFun(h.poly_part.derivative()) + h.rational_part.derivative() + RatFun(h.residual, y)
    assert lhs == RatFun(P, y * y)
    assert h.residual.degree < max(y.degree, 1)


@settings(max_examples=200)
@given(polys(8), squarefree_polys(5))
def test_hermite_residual_matches_numeric_residues(P, y):
    if y.is_constant():
        return
    roots = np.roots([complex(c) for c in reversed(y.coeffs)])
    # residue of P/y^2 at a simple root of y: (P'y' - P y'') / y'^3
    dP, dy, d2y = P.derivative(), y.derivative(), y.derivative().derivative()
    res = [(dP(complex(u)) * dy(complex(u)) - P(complex(u)) * d2y(complex(u))) / dy(complex(u)) ** 3 for u in roots]
    numeric_zero = all(abs(v) < 1e-9 for v in res)
    assert numeric_zero == hermite_integrate_sq(P, y).is_rational
