"""Problem assembly and the generation procedure on exact tuples.

A tuple is an r-tuple of monic polynomials; its roots in component j are
the u-coordinates of group j of a critical point.  The generation step in
direction j solves the Wronskian equation

    W(y_j, ytilde_j) = T_j * prod_{i != j} y_i ** (-a_ji)

through one Hermite-reduction step, yielding a one-parameter family
``base + c * y_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import kacmoody as km
from .errors import (
    DuplicatePoints,
    GramShapeMismatch,
    MissingGram,
    NonDominantWeight,
    NonGenericTuple,
    NotSquarefree,
    NotSquarefreeDirection,
    WronskianIdentityError,
    ZeroMember,
)
from .polyring import ONE, Poly, RatFun, coprime, gcd, hermite_integrate_sq, laurent_at_infinity, residue_at, squarefree, wronskian


@dataclass(frozen=True)
class ProblemData:
    cartan: km.CartanData
    z: tuple
    weights: tuple
    T: tuple
    tau: tuple
    gram: Optional[tuple] = None

    @property
    def n(self) -> int:
        return len(self.z)

    @property
    def r(self) -> int:
        return self.cartan.r

    def S(self, a: int) -> Fraction:
        """sum_{b != a} (Lambda_a, Lambda_b) / (z_a - z_b)."""
        if self.gram is None:
            raise MissingGram("weight Gram matrix is not available")
        return sum(
            (self.gram[a][b] / (self.z[a] - self.z[b]) for b in range(self.n) if b != a),
            Fraction(0),
        )


def build_problem(cartan: km.CartanData, z: Sequence, weights: Sequence[Sequence[int]], gram=None) -> ProblemData:
    z = tuple(Fraction(v) for v in z)
    weights = tuple(tuple(int(v) for v in m) for m in weights)
    if len(set(z)) != len(z):
        raise DuplicatePoints(f"marked points are not distinct: {[str(v) for v in z]}")
    if len(weights) != len(z):
        raise GramShapeMismatch(f"{len(weights)} weights for {len(z)} points")
    for a, m in enumerate(weights):
        if len(m) != cartan.r:
            raise NonDominantWeight(f"weight {a} has {len(m)} pairings, expected {cartan.r}")
        if not km.is_dominant(m):
            raise NonDominantWeight(f"weight {a} = {m} is not dominant")
    T = []
    for j in range(cartan.r):
        poly = ONE
        for za, m in zip(z, weights):
            poly = poly * Poly([-za, 1]) ** m[j]
        T.append(poly)
    tau = tuple(p.degree for p in T)
    if gram is not None:
        gram = tuple(tuple(Fraction(v) for v in row) for row in gram)
        if len(gram) != len(z) or any(len(row) != len(z) for row in gram):
            raise GramShapeMismatch(f"Gram matrix must be {len(z)}x{len(z)}")
        if any(gram[a][b] != gram[b][a] for a in range(len(z)) for b in range(len(z))):
            raise GramShapeMismatch("Gram matrix is not symmetric")
    elif cartan.invertible:
        gram = tuple(tuple(row) for row in km.gram_default(cartan, weights))
    return ProblemData(cartan, z, weights, tuple(T), tau, gram)


@dataclass(frozen=True)
class PolyTuple:
    """r-tuple of monic polynomials, i.e. a point of the product of projective spaces."""

    y: tuple

    @classmethod
    def of(cls, polys: Sequence) -> "PolyTuple":
        return cls(tuple((p if isinstance(p, Poly) else Poly(p)).monic() for p in polys))

    @classmethod
    def empty(cls, r: int) -> "PolyTuple":
        return cls((ONE,) * r)

    @property
    def k(self) -> tuple:
        return tuple(p.degree for p in self.y)

    @property
    def r(self) -> int:
        return len(self.y)

    def key(self) -> tuple:
        return tuple(p.key() for p in self.y)

    def replace(self, j: int, poly: Poly) -> "PolyTuple":
        return PolyTuple(self.y[:j] + (poly,) + self.y[j + 1 :])

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.y) + ")"


@dataclass(frozen=True)
class Violation:
    condition: str  # "i", "ii" or "iii"
    indices: tuple
    witness: Poly


@dataclass(frozen=True)
class GenericityReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def is_generic(t: PolyTuple, p: ProblemData) -> GenericityReport:
    found = []
    for j, y in enumerate(t.y):
        g = gcd(y, y.derivative())
        if not g.is_constant():
            found.append(Violation("i", (j,), g))
    for j, y in enumerate(t.y):
        g = gcd(y, p.T[j])
        if not g.is_constant():
            found.append(Violation("ii", (j,), g))
    for i in range(t.r):
        for j in range(i + 1, t.r):
            if p.cartan.A[i][j] != 0:
                g = gcd(t.y[i], t.y[j])
                if not g.is_constant():
                    found.append(Violation("iii", (i, j), g))
    return GenericityReport(tuple(found))


def wronskian_rhs(t: PolyTuple, p: ProblemData, j: int) -> Poly:
    """T_j * prod_{i != j} y_i ** (-a_ji)."""
    out = p.T[j]
    for i, y in enumerate(t.y):
        if i != j and p.cartan.A[j][i]:
            out = out * y ** (-p.cartan.A[j][i])
    return out


@dataclass(frozen=True)
class GenerationFamily:
    """Members base + c * direction of the generation in direction j."""

    j: int
    base: Poly
    direction: Poly
    parent: PolyTuple

    def member(self, c) -> Poly:
        return self.base + self.direction * Fraction(c)

    def degree_drop_c(self) -> Optional[Fraction]:
        """Parameter at which the member degree falls below deg(direction), if any."""
        kd = self.direction.degree
        if kd == 0:
            return None
        if self.base.degree < kd:
            return Fraction(0)
        if self.base.degree == kd:
            return -self.base.lc / self.direction.lc
        return None

    def locate(self, poly: Poly) -> Optional[Fraction]:
        """Return c with poly proportional to member(c), or None."""
        # solve s*poly - c*direction = base exactly
        n = max(poly.degree, self.direction.degree, self.base.degree) + 1
        rows = [[poly.coeff(i), -self.direction.coeff(i), self.base.coeff(i)] for i in range(n)]
        sol = _solve_exact(rows, 2)
        if sol is None or sol[0] == 0:
            return None
        return sol[1]


@dataclass(frozen=True)
class NotFertile:
    j: int
    residual: Poly


def _solve_exact(rows, nvars):
    """Solve an overdetermined consistent linear system exactly; None if inconsistent."""
    M = [list(map(Fraction, row)) for row in rows]
    piv_cols = []
    rank = 0
    for col in range(nvars):
        pivot = next((i for i in range(rank, len(M)) if M[i][col] != 0), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        pv = M[rank][col]
        M[rank] = [v / pv for v in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        piv_cols.append(col)
        rank += 1
    if any(M[i][nvars] != 0 for i in range(rank, len(M))):
        return None
    sol = [Fraction(0)] * nvars
    for i, col in enumerate(piv_cols):
        sol[col] = M[i][nvars]
    return sol


def fertility(t: PolyTuple, p: ProblemData, j: int):
    """Generation family in direction j, or NotFertile with the Hermite residual."""
    P = wronskian_rhs(t, p, j)
    y = t.y[j]
    try:
        h = hermite_integrate_sq(P, y)
    except NotSquarefree as exc:
        raise NotSquarefreeDirection(f"component {j} is not squarefree") from exc
    if not h.is_rational:
        return NotFertile(j, h.residual)
    if y.is_constant():
        base = h.poly_part * y
    else:
        base = y * h.poly_part + h.numerator
    if wronskian(y, base) != P:
        raise WronskianIdentityError(f"W(y_{j}, base) != T_j prod y_i^(-a_ji) for {t}")
    return GenerationFamily(j, base, y, t)


def is_fertile(t: PolyTuple, p: ProblemData) -> bool:
    return all(isinstance(fertility(t, p, j), GenerationFamily) for j in range(t.r))


def generate(f: GenerationFamily, c) -> PolyTuple:
    member = f.member(c)
    if member.is_zero():
        raise ZeroMember(f"member at c = {c} is the zero polynomial")
    return f.parent.replace(f.j, member.monic())


def solve_wronskian_linear(y: Poly, P: Poly, max_degree: int) -> Optional[Poly]:
    """Some polynomial g of degree <= max_degree with W(y, g) = P, by linear algebra.

    Independent of the Hermite route; works for non-squarefree y.
    """
    cols = [wronskian(y, Poly.monomial(m)) for m in range(max_degree + 1)]
    n = max([P.degree] + [c.degree for c in cols]) + 1
    rows = [[c.coeff(i) for c in cols] + [P.coeff(i)] for i in range(n)]
    sol = _solve_exact(rows, max_degree + 1)
    if sol is None:
        return None
    return Poly(sol)


def critical_form(t: PolyTuple, p: ProblemData) -> RatFun:
    """R = sum (a_j,a_j) y_j''/y_j + sum_{i!=j} (a_i,a_j) y_i'y_j'/(y_i y_j) - sum (a_j,a_j) T_j' y_j'/(T_j y_j)."""
    cd = p.cartan
    logd = [RatFun(y.derivative(), y) for y in t.y]
    R = RatFun(Poly())
    for j, y in enumerate(t.y):
        bjj = km.root_bilinear(cd, j, j)
        R = R + RatFun(y.derivative().derivative(), y) * bjj
        R = R - RatFun(p.T[j].derivative(), p.T[j]) * logd[j] * bjj
        for i in range(cd.r):
            bij = km.root_bilinear(cd, i, j)
            if i != j and bij:
                R = R + logd[i] * logd[j] * bij
    return R


@dataclass(frozen=True)
class MuResult:
    mu: tuple
    identity_ok: bool

    @property
    def mu_sum(self) -> Fraction:
        return sum(self.mu, Fraction(0))


def mu_extract(t: PolyTuple, p: ProblemData) -> MuResult:
    if p.gram is None:
        raise MissingGram("mu extraction needs the weight Gram matrix")
    if not is_generic(t, p).ok:
        raise NonGenericTuple(f"tuple {t} is not generic")
    R = critical_form(t, p)
    residues = [residue_at(R, za) for za in p.z]
    mu = tuple(p.S(a) - residues[a] for a in range(p.n))
    rest = R
    for za, res in zip(p.z, residues):
        if res:
            rest = rest - RatFun(Poly([res]), Poly([-za, 1]))
    return MuResult(mu, rest.is_zero())


def laurent_charge(t: PolyTuple, p: ProblemData) -> Fraction:
    """x**-2 coefficient at infinity of the critical form R; equals B(k)."""
    return laurent_at_infinity(critical_form(t, p), 2)[2]


def tuple_charge(t: PolyTuple, p: ProblemData) -> int:
    return km.charge_form(p, t.k)
