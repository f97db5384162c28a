"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from mfpop.kacmoody import validate_cartan
from mfpop.polyring import Poly

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polys(draw, max_degree=6, coeffs=small_rationals):
    return Poly(draw(st.lists(coeffs, max_size=max_degree + 1)))


@st.composite
def nonzero_polys(draw, max_degree=6):
    p = draw(polys(max_degree))
    return p if not p.is_zero() else Poly([draw(small_rationals.filter(bool))])


@st.composite
def squarefree_polys(draw, max_degree=6):
    roots = draw(st.lists(st.integers(-6, 6), unique=True, max_size=max_degree))
    lc = draw(st.integers(1, 3))
    return Poly.from_roots(roots) * lc


@st.composite
def cartan_data(draw, max_rank=4):
    """Random symmetrizable GCM: (b_i a_ij) = -b_i b_j n_ij off the diagonal."""
    r = draw(st.integers(1, max_rank))
    b = draw(st.lists(st.integers(1, 3), min_size=r, max_size=r))
    A = [[2 if i == j else 0 for j in range(r)] for i in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            n = draw(st.integers(0, 2))
            A[i][j] = -b[j] * n
            A[j][i] = -b[i] * n
    return validate_cartan(A, b)


# finite-type Cartan matrices of rank <= 3, with symmetrizers
_FINITE = [
    ([[2]], [1]),
    ([[2, -1], [-1, 2]], [1, 1]),
    ([[2, -2], [-1, 2]], [1, 2]),
    ([[2, -3], [-1, 2]], [1, 3]),
    ([[2, 0], [0, 2]], [1, 1]),
    ([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], [1, 1, 1]),
    ([[2, -1, 0], [-1, 2, -2], [0, -1, 2]], [1, 1, 2]),
    ([[2, -1, 0], [-1, 2, -1], [0, -2, 2]], [2, 2, 1]),
    ([[2, 0, 0], [0, 2, -1], [0, -1, 2]], [1, 1, 1]),
    ([[2, 0, 0], [0, 2, -3], [0, -1, 2]], [5, 1, 3]),
    ([[2, 0, 0], [0, 2, 0], [0, 0, 2]], [1, 2, 3]),
]


@st.composite
def finite_cartan(draw):
    A, b = draw(st.sampled_from(_FINITE))
    perm = draw(st.permutations(range(len(b))))
    return validate_cartan([[A[i][j] for j in perm] for i in perm], [b[i] for i in perm])


def dominant_weights(r, n, max_entry=3):
    return st.lists(st.lists(st.integers(0, max_entry), min_size=r, max_size=r).map(tuple), min_size=n, max_size=n)


def distinct_points(n):
    return st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=n, max_size=n, unique=True)


def degree_vectors(r, max_entry=20):
    return st.lists(st.integers(0, max_entry), min_size=r, max_size=r).map(tuple)


@st.composite
def problems(draw, cartan=None, max_points=3, max_entry=2):
    from mfpop.tuplegen import build_problem

    cd = draw(cartan if cartan is not None else finite_cartan())
    n = draw(st.integers(1, max_points))
    z = draw(distinct_points(n))
    weights = draw(dominant_weights(cd.r, n, max_entry))
    return build_problem(cd, z, weights)


@st.composite
def walks(draw, p, max_steps=3, max_degree=8):
    """A tuple reached from the constant tuple by random generation steps."""
    from mfpop.errors import NotSquarefreeDirection
    from mfpop.tuplegen import NotFertile, PolyTuple, fertility, generate, is_generic

    t = PolyTuple.empty(p.r)
    for _ in range(draw(st.integers(0, max_steps))):
        j = draw(st.integers(0, p.r - 1))
        c = draw(st.fractions(min_value=-3, max_value=3, max_denominator=4))
        try:
            fam = fertility(t, p, j)
        except NotSquarefreeDirection:
            break
        if isinstance(fam, NotFertile):
            raise AssertionError(f"population member {t} not fertile in direction {j}")
        member = fam.member(c)
        if member.is_zero() or member.degree > max_degree:
            continue
        nxt = generate(fam, c)
        if not is_generic(nxt, p).ok:
            break
        t = nxt
    return t


@st.composite
def random_tuples(draw, r, max_degree=3):
    from mfpop.tuplegen import PolyTuple

    out = []
    for _ in range(r):
        k = draw(st.integers(0, max_degree))
        coeffs = draw(st.lists(st.integers(-4, 4), min_size=k, max_size=k))
        out.append(Poly(coeffs + [1]))
    return PolyTuple(tuple(out))
