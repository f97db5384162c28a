"""Cartan data, bilinear forms and shifted Weyl combinatorics.

Weights are never materialized in h*; a weight is represented by its vector
of coroot pairings ``m_i = <lambda, alpha_i^vee>`` (a plain tuple of ints),
and degree vectors are plain tuples of nonnegative ints.  Indices are
0-based throughout.

Functions that need the marked-point data take a ``problem`` argument; any
object with ``cartan`` and ``tau`` attributes works (normally a
:class:`mfpop.tuplegen.ProblemData`).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import NonPositiveSymmetrizer, NotGCM, NotSymmetrizable, SingularCartan


def exact_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    M = [list(map(int, row)) for row in rows]
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((i for i in range(rank, nrows) if M[i][col] != 0), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        for i in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                M[i][c] = (M[rank][col] * M[i][c] - M[i][col] * M[rank][c]) // prev
            M[i][col] = 0
        prev = M[rank][col]
        rank += 1
        if rank == nrows:
            break
    return rank


def _inverse(rows: Sequence[Sequence[int]]) -> list:
    n = len(rows)
    M = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if M[i][col] != 0), None)
        if pivot is None:
            raise SingularCartan("Cartan matrix is singular")
        M[col], M[pivot] = M[pivot], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[col])]
    return [row[n:] for row in M]


@dataclass(frozen=True)
class CartanData:
    """Validated symmetrizable generalized Cartan matrix.

    ``d`` is the kernel dimension of ``A``; ``d > 0`` means affine or other
    degenerate type and disables the default weight Gram matrix.
    """

    A: tuple
    b: tuple
    r: int = field(init=False)
    d: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "r", len(self.A))
        object.__setattr__(self, "d", len(self.A) - exact_rank(self.A))

    def a(self, i: int, j: int) -> int:
        return self.A[i][j]

    @property
    def invertible(self) -> bool:
        return self.d == 0

    def inverse(self) -> list:
        """Exact inverse of A as nested lists of Fractions."""
        if self.d:
            raise SingularCartan(f"Cartan matrix has kernel of dimension {self.d}")
        return _inverse(self.A)

    def is_finite_type(self) -> bool:
        """True iff the symmetrized matrix (b_i a_ij) is positive definite."""
        S = [[Fraction(self.b[i] * self.A[i][j]) for j in range(self.r)] for i in range(self.r)]
        # leading principal minors by Gaussian elimination (no pivoting needed while positive)
        for col in range(self.r):
            if S[col][col] <= 0:
                return False
            for i in range(col + 1, self.r):
                f = S[i][col] / S[col][col]
                S[i] = [a - f * b for a, b in zip(S[i], S[col])]
        return True


def validate_cartan(A, b) -> CartanData:
    A = tuple(tuple(int(v) for v in row) for row in A)
    b = tuple(int(v) for v in b)
    r = len(A)
    if any(len(row) != r for row in A):
        raise NotGCM("Cartan matrix is not square")
    if len(b) != r:
        raise NotGCM(f"symmetrizer has length {len(b)}, expected {r}")
    for i in range(r):
        if A[i][i] != 2:
            raise NotGCM(f"diagonal entry a[{i}][{i}] = {A[i][i]} != 2")
        for j in range(r):
            if i == j:
                continue
            if A[i][j] > 0:
                raise NotGCM(f"positive off-diagonal entry a[{i}][{j}] = {A[i][j]}")
            if (A[i][j] == 0) != (A[j][i] == 0):
                raise NotGCM(f"zero pattern not symmetric at ({i}, {j})")
    if any(v <= 0 for v in b):
        raise NonPositiveSymmetrizer(f"symmetrizer {b} has a non-positive entry")
    for i in range(r):
        for j in range(i + 1, r):
            if b[i] * A[i][j] != b[j] * A[j][i]:
                raise NotSymmetrizable(f"b_{i} a_{i}{j} != b_{j} a_{j}{i}")
    return CartanData(A, b)


def root_bilinear(cd: CartanData, i: int, j: int) -> int:
    """(alpha_i, alpha_j) = b_i a_ij."""
    if not (0 <= i < cd.r and 0 <= j < cd.r):
        raise IndexError(f"root index out of range for rank {cd.r}")
    return cd.b[i] * cd.A[i][j]


def shifted_reflection(cd: CartanData, j: int, m: Sequence[int]) -> tuple:
    """Pairings of s_j . lambda = s_j(lambda + rho) - rho."""
    if not 0 <= j < cd.r:
        raise IndexError(f"reflection index {j} out of range for rank {cd.r}")
    step = m[j] + 1
    return tuple(m[i] - step * cd.A[i][j] for i in range(cd.r))


def is_dominant(m: Sequence[int]) -> bool:
    return all(v >= 0 for v in m)


def infinity_pairings(cd: CartanData, tau: Sequence[int], k: Sequence[int]) -> tuple:
    return tuple(tau[i] - sum(cd.A[i][j] * k[j] for j in range(cd.r)) for i in range(cd.r))


def infinity_weight(problem, k: Sequence[int]) -> tuple:
    """Pairings of the weight at infinity sum(Lambda_a) - sum(k_j alpha_j)."""
    return infinity_pairings(problem.cartan, problem.tau, k)


def degree_transform(problem, k: Sequence[int], j: int) -> tuple:
    """Degree vector after generation in direction j (entry may be negative)."""
    cd = problem.cartan
    if not 0 <= j < cd.r:
        raise IndexError(f"direction {j} out of range for rank {cd.r}")
    new = problem.tau[j] + 1 - k[j] - sum(cd.A[j][i] * k[i] for i in range(cd.r) if i != j)
    return tuple(new if i == j else k[i] for i in range(cd.r))


def charge_form(problem, k: Sequence[int]) -> int:
    """B(k) = sum_j (a_j,a_j) k_j (k_j - 1 - tau_j) + sum_{i != j} (a_i,a_j) k_i k_j."""
    cd = problem.cartan
    tau = problem.tau
    total = 0
    for j in range(cd.r):
        total += root_bilinear(cd, j, j) * k[j] * (k[j] - 1 - tau[j])
        for i in range(cd.r):
            if i != j:
                total += root_bilinear(cd, i, j) * k[i] * k[j]
    return total


def is_minimal_degree(problem, k: Sequence[int]) -> bool:
    """tau_j + 1 - sum_i a_ji k_i > 0 for every j."""
    cd = problem.cartan
    return all(
        problem.tau[j] + 1 - sum(cd.A[j][i] * k[i] for i in range(cd.r)) > 0 for j in range(cd.r)
    )


def weight_gram(cd: CartanData) -> list:
    """Gram matrix of the fundamental weights, (w_i, w_l) = b_i (A^-1)_il."""
    inv = cd.inverse()
    return [[cd.b[i] * inv[i][l] for l in range(cd.r)] for i in range(cd.r)]


def pairing_form(G, m: Sequence, n: Sequence) -> Fraction:
    return sum((Fraction(m[i]) * n[l] * G[i][l] for i in range(len(m)) for l in range(len(n))), Fraction(0))


def gram_default(cd: CartanData, weights: Sequence[Sequence[int]]) -> list:
    """(Lambda_a, Lambda_b) from coroot pairings; requires invertible A."""
    if cd.d:
        raise SingularCartan("default Gram needs an invertible Cartan matrix; supply one explicitly")
    G = weight_gram(cd)
    return [[pairing_form(G, ma, mb) for mb in weights] for ma in weights]


def shifted_norm_difference(cd: CartanData, tau: Sequence[int], k: Sequence[int]) -> Fraction:
    """(rho + L - sum k_j a_j, same) - (rho + L, same) with L = sum of the weights.

    Computed from the weight Gram matrix on pairing vectors, so it is an
    independent route to the charge form (invertible A only).
    """
    G = weight_gram(cd)
    top = [t + 1 for t in tau]
    shifted = [v + 1 for v in infinity_pairings(cd, tau, k)]
    return pairing_form(G, shifted, shifted) - pairing_form(G, top, top)


def shifted_orbit(cd: CartanData, m: Sequence[int], radius: int, limit: int = 100_000) -> set:
    """Closure of {m} under all shifted reflections, pruned to max|m_i| <= radius."""
    start = tuple(m)
    seen = {start}
    queue = deque([start])
    while queue and len(seen) < limit:
        cur = queue.popleft()
        for j in range(cd.r):
            nxt = shifted_reflection(cd, j, cur)
            if nxt not in seen and max(abs(v) for v in nxt) <= radius:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def degree_orbit(problem, k0: Sequence[int], max_degree: int, max_steps: int | None = None) -> dict:
    """Degree vectors reachable from k0 by degree transforms.

    Only nonnegative vectors with entries <= max_degree are kept.  Returns a
    mapping from degree vector to its BFS distance from ``k0``.
    """
    start = tuple(k0)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if max_steps is not None and dist[cur] >= max_steps:
            continue
        for j in range(problem.cartan.r):
            nxt = degree_transform(problem, cur, j)
            if nxt in dist or min(nxt) < 0 or max(nxt) > max_degree:
                continue
            dist[nxt] = dist[cur] + 1
            queue.append(nxt)
    return dist
