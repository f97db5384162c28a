"""Floating-point oracle for the critical-point (Bethe) system.

Independent of the exact engine: critical points are found by damped Newton
iteration from random complex starts, and the exact verdicts (fertility,
the mu identity, population membership) are re-derived numerically from
roots and contour integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import kacmoody as km
from .errors import ClusteredRoots, MissingGram
from .population import PopulationGraph
from .tuplegen import PolyTuple, ProblemData

GENERICITY_WINDOW = 1e-6
ESCAPE_RADIUS = 1e8
STALL_WINDOW = 10


def _coupling(p: ProblemData):
    """Float tables (alpha_j, alpha_j') and (alpha_j, Lambda_a)."""
    cd = p.cartan
    C = np.array([[km.root_bilinear(cd, i, j) for j in range(cd.r)] for i in range(cd.r)], dtype=float)
    L = np.array([[cd.b[j] * p.weights[a][j] for a in range(p.n)] for j in range(cd.r)], dtype=float)
    z = np.array([complex(v) for v in p.z])
    return C, L, z


def bethe_lhs(p: ProblemData, groups: Sequence[Sequence[complex]]) -> list:
    """Left-hand sides of the critical-point equations, one plain loop per variable."""
    C, L, z = _coupling(p)
    out = []
    for j, grp in enumerate(groups):
        for i, u in enumerate(grp):
            acc = 0j
            for jj, other in enumerate(groups):
                for ii, w in enumerate(other):
                    if jj == j and ii == i:
                        continue
                    acc += C[j, jj] / (u - w)
            for a in range(p.n):
                acc -= L[j, a] / (u - z[a])
            out.append(acc)
    return out


def _canonical_group(grp) -> tuple:
    return tuple(sorted((complex(u) for u in grp), key=lambda u: (round(u.real, 9), round(u.imag, 9))))


@dataclass(frozen=True)
class BethePoint:
    u: tuple  # one tuple of complex coordinates per group, canonically sorted
    residual: float
    k: tuple

    @classmethod
    def build(cls, p: ProblemData, groups) -> "BethePoint":
        u = tuple(_canonical_group(g) for g in groups)
        lhs = bethe_lhs(p, u)
        res = max((abs(v) for v in lhs), default=0.0)
        return cls(u, float(res), tuple(len(g) for g in u))

    def flat(self) -> np.ndarray:
        return np.array([v for g in self.u for v in g], dtype=complex)

    def to_json(self) -> dict:
        return {
            "k": list(self.k),
            "u": [[[v.real, v.imag] for v in g] for g in self.u],
            "residual": self.residual,
        }


@dataclass
class SolveStats:
    starts: int = 0
    converged: int = 0
    diverged: int = 0
    non_generic: int = 0
    duplicates: int = 0
    chart_seeds: int = 0


@dataclass
class SolveResult:
    points: list
    stats: SolveStats

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]


class _BatchSystem:
    """Vectorized F and J over a batch of starts (rows)."""

    def __init__(self, p: ProblemData, k: Sequence[int]):
        C, L, z = _coupling(p)
        grp = np.repeat(np.arange(len(k)), k)
        self.grp = grp
        self.K = C[np.ix_(grp, grp)].copy()
        np.fill_diagonal(self.K, 0.0)
        self.L = L[grp] if len(grp) else np.zeros((0, p.n))
        self.z = z
        self.N = len(grp)

    def F(self, U):
        D = U[:, :, None] - U[:, None, :]
        idx = np.arange(self.N)
        D[:, idx, idx] = 1.0
        Dz = U[:, :, None] - self.z[None, None, :]
        return (self.K / D).sum(axis=2) - (self.L / Dz).sum(axis=2)

    def FJ(self, U):
        D = U[:, :, None] - U[:, None, :]
        idx = np.arange(self.N)
        D[:, idx, idx] = 1.0
        Dz = U[:, :, None] - self.z[None, None, :]
        F = (self.K / D).sum(axis=2) - (self.L / Dz).sum(axis=2)
        J = self.K / D**2
        diag = -J.sum(axis=2) + (self.L / Dz**2).sum(axis=2)
        J[:, idx, idx] = diag
        return F, J


def _resid(F):
    with np.errstate(invalid="ignore"):
        r = np.abs(F).max(axis=1) if F.shape[1] else np.zeros(F.shape[0])
    return np.where(np.isfinite(r), r, np.inf)


def _sanitize(F, J):
    bad = ~(np.isfinite(J).all(axis=(1, 2)) & np.isfinite(F).all(axis=1))
    F[bad] = 0.0
    J[bad] = 0.0


def _lm_step(J, F, lam=1e-14):
    """Minimum-norm Gauss-Newton step with a tiny Levenberg-Marquardt shift.

    Works for singular Jacobians, which occur on non-isolated solution sets.
    """
    JH = J.conj().transpose(0, 2, 1)
    M = J @ JH
    scale = np.maximum(np.abs(M).max(axis=(1, 2)), 1e-300)
    M = M + (lam * scale)[:, None, None] * np.eye(M.shape[1])
    return (JH @ np.linalg.solve(M, F[..., None]))[..., 0]


def _newton(sys_: _BatchSystem, U, tol, max_iter):
    """Damped Newton in u-coordinates: a step is halved (up to 30 times) while
    it increases the residual; a start that cannot descend is dropped."""
    S = U.shape[0]
    alive = np.ones(S, dtype=bool)
    with np.errstate(all="ignore"):
        F, J = sys_.FJ(U)
        res = _resid(F)
        for _ in range(max_iter):
            active = alive & (res >= tol)
            if not active.any():
                break
            ia = np.flatnonzero(active)
            Fa, Ja = F[ia].copy(), J[ia].copy()
            _sanitize(Fa, Ja)
            step = _lm_step(Ja, Fa)
            lam = np.ones(len(ia))
            pending = np.ones(len(ia), dtype=bool)
            for _halving in range(31):
                ip = np.flatnonzero(pending)
                if not len(ip):
                    break
                trial = U[ia[ip]] - lam[ip, None] * step[ip]
                tres = _resid(sys_.F(trial))
                ok = tres < res[ia[ip]]
                acc = ip[ok]
                U[ia[acc]] = trial[ok]
                pending[acc] = False
                lam[ip[~ok]] *= 0.5
            alive[ia[pending]] = False
            upd = ia[~pending]
            if len(upd):
                Fn, Jn = sys_.FJ(U[upd])
                F[upd], J[upd] = Fn, Jn
                res[upd] = _resid(Fn)
            escaped = np.abs(U).max(axis=1) > ESCAPE_RADIUS if U.shape[1] else np.zeros(S, dtype=bool)
            alive &= ~escaped
    return U, alive & (res < tol)


# ---------------------------------------------------------------------------
# seeding chart: Wronskian equations with Bezout certificates


def _pmul(a, b):
    """Batched product of ascending coefficient arrays (S, n) and (S, m)."""
    if a.shape[1] > b.shape[1]:
        a, b = b, a
    n, m = a.shape[1], b.shape[1]
    out = np.zeros((a.shape[0], n + m - 1), dtype=complex)
    for i in range(n):
        out[:, i : i + m] += a[:, i : i + 1] * b
    return out


def _pder(a):
    if a.shape[1] == 1:
        return np.zeros_like(a)
    return a[:, 1:] * np.arange(1, a.shape[1])


def _shifted(f, n, powers, deriv=False):
    """(S, n, len(powers)) whose column q holds f * x**m or f * (x**m)' for m = powers[q]."""
    S, L = f.shape
    out = np.zeros((S, n, len(powers)), dtype=complex)
    for q, m in enumerate(powers):
        if deriv:
            if m == 0:
                continue
            ln = min(L, n - m + 1)
            out[:, m - 1 : m - 1 + ln, q] += m * f[:, :ln]
        else:
            ln = min(L, n - m)
            out[:, m : m + ln, q] += f[:, :ln]
    return out


class _WronskianChart:
    """Polynomial system whose solutions are exactly the generic critical tuples.

    Unknowns: the non-leading coefficients of each monic y_j; a partner
    ytilde_j of degree max(k_j, ktilde_j) with its x**k_j coefficient pinned to
    zero; and Bezout cofactors (a, b) with a f + b g = 1 for each coprimality
    requirement (y_j with y_j', y_j with T_j, adjacent y_i with y_j).  The
    equations W(y_j, ytilde_j) = T_j prod y_i**(-a_ji) are polynomial, so
    Newton cannot run off through a pole, and the cofactors keep iterates
    away from the degenerate components.
    """

    def __init__(self, p: ProblemData, k: Sequence[int]):
        r = p.r
        A = p.cartan.A
        self.p, self.k = p, tuple(k)
        self.kt = [km.degree_transform(p, k, j)[j] for j in range(r)]
        self.D = [max(k[j], self.kt[j]) for j in range(r)]
        self.T = [np.array([complex(c) for c in p.T[j].coeffs], dtype=complex) for j in range(r)]
        off = 0
        self.yo, self.to = [], []
        for j in range(r):
            self.yo.append(off)
            off += k[j]
        for j in range(r):
            self.to.append(off)
            off += self.D[j]
        self.tpow = [[m for m in range(self.D[j] + 1) if m != k[j]] for j in range(r)]
        self.factors = [[(i, -A[j][i]) for i in range(r) if i != j and A[j][i]] for j in range(r)]
        self.nrows = [max(k[j] + self.D[j], len(self.T[j]) + sum(e * k[i] for i, e in self.factors[j])) for j in range(r)]
        pairs = []
        for j in range(r):
            if k[j] >= 2:
                pairs.append((("y", j), ("dy", j)))
            if k[j] >= 1 and p.tau[j] > 0:
                pairs.append((("y", j), ("T", j)))
        for i in range(r):
            for j in range(i + 1, r):
                if A[i][j] and k[i] and k[j]:
                    pairs.append((("y", i), ("y", j)))
        self.pairs = []
        for f, g in pairs:
            n, m = self._deg(*f), self._deg(*g)
            self.pairs.append((f, g, off, m, n))
            off += n + m
        self.N = off

    @property
    def feasible(self) -> bool:
        # a generic critical tuple needs a partner of degree ktilde_j >= 0
        return all(v >= 0 for v in self.kt)

    def _deg(self, kind, j):
        return {"y": self.k[j], "dy": self.k[j] - 1, "T": self.p.tau[j]}[kind]

    def ys(self, X):
        ones = np.ones((X.shape[0], 1), dtype=complex)
        return [np.concatenate([X[:, self.yo[j] : self.yo[j] + self.k[j]], ones], axis=1) for j in range(self.p.r)]

    def EJ(self, X):
        S, N = X.shape
        ys = self.ys(X)
        Tb = [np.broadcast_to(t, (S, len(t))) for t in self.T]
        E, J = [], []
        for j in range(self.p.r):
            n = self.nrows[j]
            t = np.zeros((S, self.D[j] + 1), dtype=complex)
            t[:, self.tpow[j]] = X[:, self.to[j] : self.to[j] + self.D[j]]
            P = Tb[j]
            for i, e in self.factors[j]:
                for _ in range(e):
                    P = _pmul(P, ys[i])
            e_ = np.zeros((S, n), dtype=complex)
            for part, sign in ((_pmul(ys[j], _pder(t)), 1), (_pmul(_pder(ys[j]), t), -1), (P, -1)):
                ln = min(n, part.shape[1])
                e_[:, :ln] += sign * part[:, :ln]
            Jb = np.zeros((S, n, N), dtype=complex)
            Jb[:, :, self.to[j] : self.to[j] + self.D[j]] = _shifted(ys[j], n, self.tpow[j], True) - _shifted(_pder(ys[j]), n, self.tpow[j])
            pw = list(range(self.k[j]))
            Jb[:, :, self.yo[j] : self.yo[j] + self.k[j]] += _shifted(_pder(t), n, pw) - _shifted(t, n, pw, True)
            for i, e in self.factors[j]:
                if not self.k[i]:
                    continue
                Q = Tb[j] * e
                for i2, e2 in self.factors[j]:
                    for _ in range(e2 - (i2 == i)):
                        Q = _pmul(Q, ys[i2])
                Jb[:, :, self.yo[i] : self.yo[i] + self.k[i]] -= _shifted(Q, n, list(range(self.k[i])))
            E.append(e_)
            J.append(Jb)
        get = {"y": lambda j: ys[j], "dy": lambda j: _pder(ys[j]), "T": lambda j: Tb[j]}
        for f, g, o, m, n in self.pairs:
            L = n + m
            fv, gv = get[f[0]](f[1]), get[g[0]](g[1])
            a, b = X[:, o : o + m], X[:, o + m : o + L]
            e_ = np.zeros((S, L), dtype=complex)
            for coef, poly in ((a, fv), (b, gv)):
                if coef.shape[1]:
                    prod = _pmul(coef, poly)
                    e_[:, : prod.shape[1]] += prod[:, :L]
            e_[:, 0] -= 1.0
            Jb = np.zeros((S, L, N), dtype=complex)
            Jb[:, :, o : o + m] = _shifted(fv, L, list(range(m)))
            Jb[:, :, o + m : o + L] = _shifted(gv, L, list(range(n)))
            for (kind, jj), coef in ((f, a), (g, b)):
                if kind != "T" and coef.shape[1]:
                    Jb[:, :, self.yo[jj] : self.yo[jj] + self.k[jj]] += _shifted(coef, L, list(range(self.k[jj])), kind == "dy")
            E.append(e_)
            J.append(Jb)
        return np.concatenate(E, axis=1), np.concatenate(J, axis=1)

    def roots(self, X) -> np.ndarray:
        ys = self.ys(X)
        rows = []
        for s in range(X.shape[0]):
            rows.append(np.concatenate([npoly.polyroots(ys[j][s]) if self.k[j] else np.zeros(0, dtype=complex) for j in range(self.p.r)]))
        return np.array(rows, dtype=complex).reshape(X.shape[0], sum(self.k))


def _chart_seeds(chart: _WronskianChart, X, max_iter, accept=1e-6):
    """Newton on the chart; returns u-coordinates of the starts that converged."""
    S = X.shape[0]
    active = np.ones(S, dtype=bool)
    checkpoint = np.full(S, np.inf)
    with np.errstate(all="ignore"):
        for it in range(max_iter):
            idx = np.flatnonzero(active)
            if not len(idx):
                break
            E, J = chart.EJ(X[idx])
            _sanitize(E, J)
            res = np.abs(E).max(axis=1)
            done = (res < 1e-13) | (np.abs(X[idx]).max(axis=1) > ESCAPE_RADIUS)
            if it and it % STALL_WINDOW == 0:
                # stalled starts (residual not halved over a window) are dropped
                done |= (res > 0.5 * checkpoint[idx]) & (res > accept)
                checkpoint[idx] = res
            active[idx[done]] = False
            keep = ~done
            X[idx[keep]] -= _lm_step(J[keep], E[keep])
        E, _ = chart.EJ(X)
        res = np.abs(E).max(axis=1)
        good = np.isfinite(res) & (res < accept) & np.isfinite(X).all(axis=1)
    return chart.roots(X[good]) if good.any() else np.zeros((0, sum(chart.k)), dtype=complex)


def _is_generic_point(pt: BethePoint, p: ProblemData, window: float) -> bool:
    cd = p.cartan
    for j, grp in enumerate(pt.u):
        for i, u in enumerate(grp):
            for a in range(p.n):
                if p.weights[a][j] and abs(u - complex(p.z[a])) < window:
                    return False
            for jj in range(j, cd.r):
                if jj != j and cd.A[j][jj] == 0:
                    continue
                for ii, w in enumerate(pt.u[jj]):
                    if (jj, ii) <= (j, i):
                        continue
                    if abs(u - w) < window:
                        return False
    return True


def _point_distance(a: BethePoint, b: BethePoint) -> float:
    return float(np.abs(a.flat() - b.flat()).max()) if a.flat().size else 0.0


@dataclass(frozen=True)
class SolveOptions:
    starts: int = 200
    max_iter: int = 100
    tol: float = 1e-12
    seed: Optional[int] = 0


def solve_bethe(p: ProblemData, k: Sequence[int], starts: int = 200, max_iter: int = 100, tol: float = 1e-12, seed: Optional[int] = 0) -> SolveResult:
    """Multistart search for generic critical points with degree vector k.

    Two kinds of start share one damped Newton loop in u-coordinates:
    random complex points, and roots of tuples obtained by Newton on the
    Wronskian chart from random coefficients.  Only the residual of the
    critical-point equations themselves decides acceptance.
    """
    k = tuple(int(v) for v in k)
    if any(v < 0 for v in k) or tol <= 0:
        raise ValueError("degree vector must be nonnegative and tol positive")
    if len(k) != p.r:
        raise ValueError(f"degree vector has length {len(k)}, expected {p.r}")
    stats = SolveStats(starts=starts)
    if sum(k) == 0:
        stats.converged = 1
        return SolveResult([BethePoint.build(p, [() for _ in k])], stats)
    sys_ = _BatchSystem(p, k)
    rng = np.random.default_rng(seed)
    scale = 1.0 + max((abs(float(v)) for v in p.z), default=0.0)
    U0 = scale * (rng.standard_normal((starts, sys_.N)) + 1j * rng.standard_normal((starts, sys_.N)))
    chart = _WronskianChart(p, k)
    if chart.feasible:
        X0 = rng.standard_normal((starts, chart.N)) + 1j * rng.standard_normal((starts, chart.N))
        seeds = _chart_seeds(chart, X0, max_iter)
        stats.chart_seeds = len(seeds)
        U0 = np.concatenate([seeds, U0], axis=0)
    U, ok = _newton(sys_, U0, tol, max_iter)
    stats.converged = int(ok.sum())
    stats.diverged = len(U0) - stats.converged
    points = []
    offsets = np.cumsum((0,) + k)
    for s in np.flatnonzero(ok):
        groups = [U[s, offsets[j] : offsets[j + 1]] for j in range(len(k))]
        pt = BethePoint.build(p, groups)
        if not pt.residual < tol:
            stats.diverged += 1
            stats.converged -= 1
            continue
        if not _is_generic_point(pt, p, GENERICITY_WINDOW):
            stats.non_generic += 1
            continue
        if any(_point_distance(pt, q) < 10 * tol for q in points):
            stats.duplicates += 1
            continue
        points.append(pt)
    points.sort(key=lambda pt: tuple((round(v.real, 9), round(v.imag, 9)) for g in pt.u for v in g))
    return SolveResult(points, stats)


def master_real_part(p: ProblemData, pt: BethePoint) -> float:
    """Real part sum(coeff * ln|arg|) of the master function at a point (diagnostic)."""
    C, L, z = _coupling(p)
    total = 0.0
    if p.gram is not None:
        for a in range(p.n):
            for b in range(a + 1, p.n):
                total += float(p.gram[a][b]) * math.log(abs(z[a] - z[b]))
    for j, grp in enumerate(pt.u):
        for u in grp:
            for a in range(p.n):
                if L[j, a]:
                    total -= L[j, a] * math.log(abs(u - z[a]))
    for j, gj in enumerate(pt.u):
        for jj, gjj in enumerate(pt.u):
            for i, u in enumerate(gj):
                for ii, w in enumerate(gjj):
                    if (j, i) < (jj, ii) and C[j, jj]:
                        total += C[j, jj] * math.log(abs(u - w))
    return total


# ---------------------------------------------------------------------------
# numeric tuples


@dataclass(frozen=True)
class NumericTuple:
    """Monic polynomials with complex coefficients, ascending order."""

    polys: tuple

    @property
    def k(self) -> tuple:
        return tuple(len(c) - 1 for c in self.polys)

    @property
    def r(self) -> int:
        return len(self.polys)

    @classmethod
    def from_exact(cls, t: PolyTuple) -> "NumericTuple":
        return cls(tuple(np.array([complex(c) for c in y.coeffs], dtype=complex) for y in t.y))

    @classmethod
    def from_roots(cls, groups) -> "NumericTuple":
        return cls(tuple(npoly.polyfromroots(list(g)).astype(complex) if len(g) else np.ones(1, dtype=complex) for g in groups))


def to_numeric_tuple(pt: BethePoint) -> NumericTuple:
    return NumericTuple.from_roots(pt.u)


def _roots(c: np.ndarray) -> np.ndarray:
    if len(c) <= 1:
        return np.zeros(0, dtype=complex)
    roots = npoly.polyroots(c).astype(complex)
    d1 = npoly.polyder(c)
    for _ in range(2):
        fv = npoly.polyval(roots, c)
        dv = npoly.polyval(roots, d1)
        safe = np.abs(dv) > 0
        roots = np.where(safe, roots - fv / np.where(safe, dv, 1), roots)
    return roots


def _wronskian_rhs_numeric(t: NumericTuple, p: ProblemData, j: int) -> np.ndarray:
    out = np.array([complex(c) for c in p.T[j].coeffs], dtype=complex)
    for i, y in enumerate(t.polys):
        e = -p.cartan.A[j][i]
        if i != j and e:
            for _ in range(e):
                out = npoly.polymul(out, y)
    return out


def eval_critical_form(t: NumericTuple, p: ProblemData, x) -> np.ndarray:
    """The critical form R evaluated at the points x."""
    cd = p.cartan
    x = np.asarray(x, dtype=complex)
    z = np.array([complex(v) for v in p.z])
    logd, second = [], []
    for y in t.polys:
        v = npoly.polyval(x, y)
        logd.append(npoly.polyval(x, npoly.polyder(y)) / v)
        second.append(npoly.polyval(x, npoly.polyder(y, 2)) / v if len(y) > 2 else np.zeros_like(x))
    R = np.zeros_like(x)
    for j in range(cd.r):
        bjj = km.root_bilinear(cd, j, j)
        tlog = sum(p.weights[a][j] / (x - z[a]) for a in range(p.n)) if p.n else np.zeros_like(x)
        R += bjj * second[j] - bjj * tlog * logd[j]
        for i in range(cd.r):
            if i != j and cd.A[i][j]:
                R += km.root_bilinear(cd, i, j) * logd[i] * logd[j]
    return R


def _poles(t: NumericTuple, p: ProblemData) -> np.ndarray:
    pts = [complex(v) for v in p.z]
    for y in t.polys:
        pts.extend(_roots(y))
    return np.array(pts, dtype=complex)


def _circle(center: complex, radius: float, n: int = 64) -> np.ndarray:
    return center + radius * np.exp(2j * np.pi * np.arange(n) / n)


def numeric_residue(f, center: complex, radius: float, n: int = 64) -> complex:
    """(1/2 pi i) times the contour integral of f over a circle (trapezoid rule)."""
    x = _circle(center, radius, n)
    return complex(np.mean(f(x) * (x - center)))


def numeric_mu(t: NumericTuple, p: ProblemData) -> np.ndarray:
    """mu_a = S_a - residue of R at z_a, residues from small contour integrals."""
    if p.gram is None:
        raise MissingGram("mu extraction needs the weight Gram matrix")
    poles = _poles(t, p)
    mu = []
    for a, za in enumerate(p.z):
        za = complex(za)
        others = np.abs(np.delete(poles, a) - za)
        others = others[others > 1e-12]
        radius = 0.5 * others.min() if others.size else 0.5
        res = numeric_residue(lambda x: eval_critical_form(t, p, x), za, radius)
        mu.append(float(p.S(a)) - res)
    return np.array(mu, dtype=complex)


def numeric_charge(p: ProblemData, mu) -> complex:
    """x**-2 coefficient at infinity of -sum_a (mu_a - S_a)/(x - z_a)."""
    return complex(-sum((mu[a] - float(p.S(a))) * complex(p.z[a]) for a in range(p.n)))


def numeric_laurent_coefficient(t: NumericTuple, p: ProblemData, power: int = -2) -> complex:
    """Coefficient of x**power of R at infinity via a large contour."""
    poles = _poles(t, p)
    radius = 2.0 * (np.abs(poles).max() if poles.size else 1.0) + 1.0
    x = _circle(0j, radius, 128)
    return complex(np.mean(eval_critical_form(t, p, x) * x ** (-power)))


def _sample_radius(poles: np.ndarray) -> float:
    mods = np.sort(np.unique(np.round(np.abs(poles), 12)))
    edges = np.concatenate([[0.0], mods, [mods[-1] + 1.0 if mods.size else 1.0]])
    gaps = np.diff(edges)
    i = int(np.argmax(gaps))
    return float(edges[i] + gaps[i] / 2)


def numeric_nb_residual(t: NumericTuple, p: ProblemData, mu) -> float:
    """Max modulus of R + sum_a (mu_a - S_a)/(x - z_a) on a pole-free circle."""
    if p.gram is None:
        raise MissingGram("identity residual needs the weight Gram matrix")
    radius = _sample_radius(_poles(t, p))
    x = _circle(0j, radius)
    val = eval_critical_form(t, p, x)
    for a in range(p.n):
        val = val + (mu[a] - float(p.S(a))) / (x - complex(p.z[a]))
    return float(np.abs(val).max())


def numeric_fertility(t: NumericTuple, p: ProblemData, j: int, tol: float = 1e-9) -> bool:
    """All residues of T_j prod y_i^(-a_ji) / y_j**2 at the roots of y_j vanish."""
    y = t.polys[j]
    if len(y) <= 1:
        return True
    roots = _roots(y)
    if len(roots) > 1:
        # a double root comes back split by about sqrt(eps), so tol alone misses it
        gap = np.abs(roots[:, None] - roots[None, :])
        np.fill_diagonal(gap, np.inf)
        floor = 1e-7 * (1.0 + np.abs(roots))
        if np.any(gap.min(axis=1) <= np.maximum(tol, floor)):
            raise ClusteredRoots(f"roots of component {j} closer than {tol}")
    P = _wronskian_rhs_numeric(t, p, j)
    d1, d2 = npoly.polyder(y), npoly.polyder(y, 2)
    Pv, dPv = npoly.polyval(roots, P), npoly.polyval(roots, npoly.polyder(P))
    y1, y2 = npoly.polyval(roots, d1), npoly.polyval(roots, d2)
    res = (dPv * y1 - Pv * y2) / y1**3
    return bool(np.all(np.abs(res) < tol))


# ---------------------------------------------------------------------------
# matching numeric tuples against explored populations


@dataclass(frozen=True)
class MatchStep:
    kind: str  # "node", "family" or "descend"
    k: tuple
    j: Optional[int] = None
    c: Optional[complex] = None
    residual: float = 0.0


@dataclass
class MatchResult:
    matched: bool
    steps: list = field(default_factory=list)
    reason: str = ""

    @property
    def residual(self) -> float:
        return max((s.residual for s in self.steps), default=0.0)

    def to_json(self) -> dict:
        return {
            "matched": self.matched,
            "reason": self.reason,
            "fit_residual": self.residual,
            "steps": [
                {
                    "kind": s.kind,
                    "k": list(s.k),
                    "j": s.j,
                    "c": None if s.c is None else [s.c.real, s.c.imag],
                    "residual": s.residual,
                }
                for s in self.steps
            ],
        }


class PopulationIndex:
    """Numeric view of an explored graph, built once for repeated matching."""

    def __init__(self, g: PopulationGraph):
        self.graph = g
        self.by_degree = {}
        for nd in g.node_list():
            self.by_degree.setdefault(nd.k, []).append((nd.tuple.key(), NumericTuple.from_exact(nd.tuple)))
        self.families = []
        for (key, j), fam in g.families.items():
            parent = NumericTuple.from_exact(g.nodes[key].tuple)
            base = np.array([complex(c) for c in fam.base.coeffs], dtype=complex)
            direction = np.array([complex(c) for c in fam.direction.coeffs], dtype=complex)
            self.families.append((key, j, parent, base, direction))


def _rel_diff(a: np.ndarray, b: np.ndarray) -> float:
    if len(a) != len(b):
        return math.inf
    return float(np.abs(a - b).max() / max(1.0, np.abs(b).max()))


def _fit_family(y: np.ndarray, base: np.ndarray, direction: np.ndarray):
    """Least-squares s, c with s*y - c*direction ~ base; returns (c, relative residual)."""
    n = max(len(y), len(base), len(direction))
    pad = lambda v: np.concatenate([v, np.zeros(n - len(v), dtype=complex)])
    M = np.stack([pad(y), -pad(direction)], axis=1)
    rhs = pad(base)
    sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    if abs(sol[0]) < 1e-300:
        return None, math.inf
    res = np.linalg.norm(M @ sol - rhs) / max(np.linalg.norm(rhs), 1e-300)
    return complex(sol[1]), float(res)


def _direct_match(index: PopulationIndex, t: NumericTuple, tol: float) -> Optional[MatchStep]:
    for key, nt in index.by_degree.get(t.k, []):
        diff = max((_rel_diff(a, b) for a, b in zip(t.polys, nt.polys)), default=0.0)
        if diff < tol:
            return MatchStep("node", t.k, residual=diff)
    for key, j, parent, base, direction in index.families:
        if any(parent.k[i] != t.k[i] for i in range(t.r) if i != j):
            continue
        if t.k[j] > max(len(base), len(direction)) - 1:
            continue
        diff = max((_rel_diff(t.polys[i], parent.polys[i]) for i in range(t.r) if i != j), default=0.0)
        if diff >= tol:
            continue
        c, res = _fit_family(t.polys[j], base, direction)
        if res < tol:
            return MatchStep("family", t.k, j, c, max(res, diff))
    return None


def _numeric_lower(t: NumericTuple, p: ProblemData, j: int, degree: int):
    """Monic g of the given degree with W(y_j, g) proportional to the Wronskian right side."""
    y = t.polys[j]
    dy = npoly.polyder(y) if len(y) > 1 else np.zeros(1, dtype=complex)
    P = _wronskian_rhs_numeric(t, p, j)
    cols = []
    for m in range(degree + 1):
        mono = np.zeros(m + 1, dtype=complex)
        mono[m] = 1.0
        cols.append(npoly.polysub(npoly.polymul(y, npoly.polyder(mono)) if m else np.zeros(1), npoly.polymul(dy, mono)))
    n = max([len(P)] + [len(c) for c in cols])
    pad = lambda v: np.concatenate([v, np.zeros(n - len(v), dtype=complex)])
    M = np.stack([pad(c) for c in cols], axis=1)
    rhs = pad(P)
    sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    res = float(np.linalg.norm(M @ sol - rhs) / max(np.linalg.norm(rhs), 1e-300))
    if abs(sol[degree]) < 1e-300:
        return None, math.inf
    g = sol / sol[degree]
    polys = list(t.polys)
    polys[j] = g
    return NumericTuple(tuple(polys)), res


def match_population(g: PopulationGraph, t: NumericTuple, tol: float = 1e-8, index: Optional[PopulationIndex] = None) -> MatchResult:
    """Decide whether a numeric tuple lies in the explored population.

    Tries a direct node or stored-family fit; otherwise lowers the degree in
    some direction j (the unique member of the generation family of lower
    degree, by linear least squares) and recurses.  Reaching a graph node or
    family this way shows the tuple is a descendant, since generating twice
    in one direction returns to the start.
    """
    if index is None:
        index = PopulationIndex(g)
    p = g.problem
    steps = []
    cur = t
    while True:
        hit = _direct_match(index, cur, tol)
        if hit is not None:
            steps.append(hit)
            return MatchResult(True, steps)
        lowering = [j for j in range(p.r) if km.degree_transform(p, cur.k, j)[j] < cur.k[j]]
        if not lowering:
            return MatchResult(False, steps, f"minimal degree {cur.k} reached without a match")
        j = lowering[0]
        target = km.degree_transform(p, cur.k, j)[j]
        if target < 0:
            return MatchResult(False, steps, f"lowering direction {j} gives negative degree {target}")
        lower, res = _numeric_lower(cur, p, j, target)
        steps.append(MatchStep("descend", cur.k, j, None, res))
        if lower is None or res >= tol:
            return MatchResult(False, steps, f"no lower-degree solution in direction {j} (residual {res:.3g})")
        cur = lower
