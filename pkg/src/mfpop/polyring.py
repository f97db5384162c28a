"""Exact univariate polynomials and rational functions over Q.

Coefficients are :class:`fractions.Fraction`, stored in ascending degree with
no trailing zeros.  The zero polynomial has degree -1.

Besides ring arithmetic this module provides what the generation procedure
needs: Wronskians, squarefree/coprimality tests through a fraction-free
subresultant gcd, a single Hermite-reduction step for integrands P/y**2 with
y squarefree, residues at simple poles and Laurent coefficients at infinity.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import HigherOrderPole, NotSquarefree, ZeroPolynomial

ZERO_DEGREE = -1

_RATIONAL_RE = re.compile(r"^-?(0|[1-9][0-9]*)(/[1-9][0-9]*)?$")


def parse_rational(text) -> Fraction:
    """Parse a rational in canonical ``"p/q"`` form (lowest terms, q > 0).

    JSON integers and integer strings like ``"-3"`` are accepted as well.
    Raises ``ValueError`` on malformed or non-canonical input, and
    ``ZeroDivisionError`` never escapes (``"1/0"`` is a ValueError).
    """
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise ValueError(f"malformed rational: {text!r}")
    text = text.strip()
    if "/" in text:
        p, q = text.split("/")
        value = Fraction(int(p), int(q))
        if int(q) == 1 or value.denominator != int(q) or text.startswith("-0"):
            raise ValueError(f"rational not in lowest terms: {text!r}")
        return value
    if text == "-0":
        raise ValueError("negative zero is not canonical")
    return Fraction(int(text))


def format_rational(value) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _trim(coeffs: list) -> tuple:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Polynomial in x with exact rational coefficients (ascending order)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _trim([Fraction(c) for c in coeffs])

    # construction ---------------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        out = cls([1])
        for r in roots:
            out = out * cls([-Fraction(r), 1])
        return out

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Poly":
        return cls([0] * degree + [c])

    # basic properties -----------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        lc = self.coeffs[-1]
        return Poly(c / lc for c in self.coeffs)

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def antiderivative(self) -> "Poly":
        """Antiderivative with zero constant term."""
        return Poly([0] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def __call__(self, x):
        exact = isinstance(x, (int, Fraction))
        acc = Fraction(0) if exact else 0j
        for c in reversed(self.coeffs):
            acc = acc * x + (c if exact else complex(c))
        return acc

    # arithmetic -----------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(c * other for c in self.coeffs)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lc = other.lc
        if len(rem) - 1 < db:
            return Poly(), Poly(rem)
        quo = [Fraction(0)] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            q = rem[i] / lc
            quo[i - db] = q
            if q:
                for j, bj in enumerate(other.coeffs):
                    rem[i - db + j] -= q * bj
        return Poly(quo), Poly(rem[:db] if db > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def key(self) -> tuple:
        """Canonical hashable, ordered key (numerator/denominator pairs)."""
        return tuple((c.numerator, c.denominator) for c in self.coeffs)

    def to_strings(self) -> list:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_strings(cls, items: Sequence) -> "Poly":
        return cls(parse_rational(s) for s in items)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            elif mono:
                body = f"{format_rational(abs(c))}*{mono}"
            else:
                body = format_rational(abs(c))
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


X = Poly.x()
ONE = Poly.const(1)


# ---------------------------------------------------------------------------
# gcd machinery


def _int_content(a: list) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g


def _to_primitive_int(p: Poly) -> list:
    """Integer coefficient list proportional to p, primitive, positive lc."""
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = _int_content(ints)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _prem(a: list, b: list) -> list:
    """Pseudo-remainder of integer polynomials: lc(b)**(da-db+1) * a mod b."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        a = [c * lb for c in a]
        for j, bj in enumerate(b):
            a[shift + j] -= la * bj
        a.pop()
        e -= 1
        while a and a[-1] == 0:
            a.pop()
    if e > 0 and a:
        f = lb**e
        a = [c * f for c in a]
    return a


def _subresultant_gcd_int(a: list, b: list) -> list:
    """Primitive gcd of two primitive integer polynomials via the subresultant PRS."""
    if len(a) < len(b):
        a, b = b, a
    g = h = 1
    while True:
        delta = len(a) - len(b)
        r = _prem(a, b)
        if not r:
            break
        if len(r) == 1:
            return [1]
        a = b
        div = g * h**delta
        b = [c // div for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = g**delta // h ** (delta - 1)
    out = b
    cont = _int_content(out)
    out = [c // cont for c in out]
    if out[-1] < 0:
        out = [-c for c in out]
    return out


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd (zero iff both inputs are zero)."""
    if f.is_zero():
        return g.monic() if not g.is_zero() else Poly()
    if g.is_zero():
        return f.monic()
    if f.is_constant() or g.is_constant():
        return ONE
    return Poly(_subresultant_gcd_int(_to_primitive_int(f), _to_primitive_int(g))).monic()


def ext_gcd(f: Poly, g: Poly):
    """Return (d, s, t) with s*f + t*g = d monic gcd (Euclid over Q)."""
    r0, r1 = f, g
    s0, s1 = ONE, Poly()
    t0, t1 = Poly(), ONE
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lc = r0.lc
    return r0.monic(), s0 * (1 / lc), t0 * (1 / lc)


def squarefree(f: Poly) -> bool:
    if f.is_zero():
        raise ZeroPolynomial("squarefree test of the zero polynomial")
    return gcd(f, f.derivative()).is_constant()


def coprime(f: Poly, g: Poly) -> bool:
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("coprimality test with the zero polynomial")
    return gcd(f, g).is_constant()


def wronskian(f: Poly, g: Poly) -> Poly:
    """W(f, g) = f g' - f' g."""
    return f * g.derivative() - f.derivative() * g


# ---------------------------------------------------------------------------
# rational functions


class RatFun:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly([num])
        den = ONE if den is None else (den if isinstance(den, Poly) else Poly([den]))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), ONE
            return
        g = gcd(num, den)
        if not g.is_constant():
            num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc
        self.num = num * (1 / lc)
        self.den = den * (1 / lc)

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFun):
            return other
        if isinstance(other, (Poly, int, Fraction)):
            return RatFun(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def derivative(self) -> "RatFun":
        return RatFun(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def polynomial_part(self) -> Poly:
        return self.num // self.den

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __repr__(self):
        return f"RatFun(({self.num}) / ({self.den}))"


def residue_at(f: RatFun, z) -> Fraction:
    """Coefficient of 1/(x - z) in f; z may be at most a simple pole."""
    z = Fraction(z)
    lin = Poly([-z, 1])
    mult = 0
    den = f.den
    while True:
        q, r = divmod(den, lin)
        if not r.is_zero():
            break
        mult += 1
        den = q
    if mult == 0 or f.is_zero():
        return Fraction(0)
    if mult > 1:
        raise HigherOrderPole(f"pole of order {mult} at {z}")
    return f.num(z) / den(z)


def laurent_at_infinity(f: RatFun, order: int) -> list:
    """Coefficients of x**0, x**-1, ..., x**-order in the expansion of f at infinity.

    Only the constant term of the polynomial part enters the x**0 slot; the
    positive powers are available from :meth:`RatFun.polynomial_part`.
    """
    q, rem = divmod(f.num, f.den)
    out = [q.coeff(0)] + [Fraction(0)] * order
    if rem.is_zero() or order == 0:
        return out
    # rem/den = w * rho(w) / delta(w) with w = 1/x
    D = f.den.degree
    delta = [f.den.coeff(D - i) for i in range(D + 1)]
    rho = [rem.coeff(D - 1 - i) for i in range(D)]
    series = []
    for i in range(order):
        acc = rho[i] if i < len(rho) else Fraction(0)
        for l in range(1, min(i, D) + 1):
            acc -= delta[l] * series[i - l]
        series.append(acc / delta[0])
    for i in range(order):
        out[i + 1] = series[i]
    return out


@dataclass(frozen=True)
class HermiteResult:
    """Antiderivative of P/y**2 split as poly_part + rational_part + integral(residual/y)."""

    poly_part: Poly
    rational_part: RatFun
    residual: Poly
    # numerator A of rational_part before normalization (rational_part == A / y)
    numerator: Poly

    @property
    def is_rational(self) -> bool:
        return self.residual.is_zero()


def hermite_integrate_sq(P: Poly, y: Poly) -> HermiteResult:
    """One Hermite-reduction step for the integral of P / y**2, y squarefree.

    Splits P = Q y**2 + R, integrates Q directly and finds A with deg A < deg y
    such that R/y**2 = (A/y)' + N/y.  The integral is rational iff N == 0.
    """
    if y.is_zero():
        raise ZeroPolynomial("integrand denominator is zero")
    if y.is_constant():
        poly_part = (P * (1 / (y.lc * y.lc))).antiderivative()
        return HermiteResult(poly_part, RatFun(Poly()), Poly(), Poly())
    if not squarefree(y):
        raise NotSquarefree(f"denominator base {y} has a repeated root")
    Q, R = divmod(P, y * y)
    dy = y.derivative()
    # t * y' == 1 (mod y)
    _, _, t = ext_gcd(y, dy)
    A = (-(R * t)) % y
    N = (R + A * dy).exact_div(y) - A.derivative()
    return HermiteResult(Q.antiderivative(), RatFun(A, y), N, A)
