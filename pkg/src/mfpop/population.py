"""Breadth-first exploration of a population and population-level checks.

A population is infinite (a union of parameter families), so exploration
samples each family at finitely many rational parameters and truncates by
depth and by component degree.  Nodes are keyed by their exact monic
coefficient lists.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import kacmoody as km
from .errors import NotSquarefreeDirection, StartNotFertile
from .polyring import format_rational, squarefree, wronskian
from .tuplegen import (
    GenerationFamily,
    NotFertile,
    PolyTuple,
    ProblemData,
    fertility,
    generate,
    is_generic,
    mu_extract,
    solve_wronskian_linear,
    wronskian_rhs,
)

DEFAULT_C_SAMPLES = tuple(Fraction(c) for c in (0, 1, -1, 2, -2))


@dataclass(frozen=True)
class ExploreLimits:
    max_depth: int = 3
    c_samples: tuple = DEFAULT_C_SAMPLES
    max_component_degree: int = 12

    def __post_init__(self):
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if not self.c_samples:
            raise ValueError("c_samples must be nonempty")
        object.__setattr__(self, "c_samples", tuple(Fraction(c) for c in self.c_samples))


@dataclass
class Node:
    tuple: PolyTuple
    generic: bool
    depth: int

    @property
    def k(self) -> tuple:
        return self.tuple.k


@dataclass(frozen=True)
class Edge:
    src: tuple
    dst: tuple
    j: int
    c: Fraction


@dataclass
class PopulationGraph:
    problem: ProblemData
    root: PolyTuple
    nodes: dict = field(default_factory=dict)
    edges: list = field(default_factory=list)
    families: dict = field(default_factory=dict)
    # directions in which a generated node failed the fertility test
    anomalies: list = field(default_factory=list)
    limits: Optional[ExploreLimits] = None

    def add_node(self, t: PolyTuple, generic: bool, depth: int) -> bool:
        key = t.key()
        if key in self.nodes:
            return False
        self.nodes[key] = Node(t, generic, depth)
        return True

    def node_list(self) -> list:
        """Nodes in canonical order: depth, degree vector, coefficient key."""
        return sorted(self.nodes.values(), key=lambda nd: (nd.depth, nd.k, nd.tuple.key()))

    def degree_vectors(self) -> set:
        return {nd.k for nd in self.nodes.values()}


def _expand(problem: ProblemData, node: Node, lim: ExploreLimits):
    out = []
    t = node.tuple
    for j in range(problem.r):
        fam = fertility(t, problem, j)
        if isinstance(fam, NotFertile):
            out.append(("anomaly", j, fam))
            continue
        out.append(("family", j, fam))
        cs = list(lim.c_samples)
        drop = fam.degree_drop_c()
        if drop is not None and drop not in cs:
            cs.append(drop)
        for c in cs:
            member = fam.member(c)
            if member.is_zero() or member.degree > lim.max_component_degree:
                continue
            child = generate(fam, c)
            out.append(("child", j, c, child, is_generic(child, problem).ok))
    return out


def explore(p: ProblemData, start: PolyTuple, lim: ExploreLimits = ExploreLimits(), workers: Optional[int] = None) -> PopulationGraph:
    if workers is None:
        workers = int(os.environ.get("MFPOP_THREADS", "1") or 1)
    for j in range(p.r):
        try:
            ok = isinstance(fertility(start, p, j), GenerationFamily)
        except NotSquarefreeDirection:
            ok = False
        if not ok:
            raise StartNotFertile(f"start tuple {start} is not fertile in direction {j}")
    g = PopulationGraph(p, start, limits=lim)
    g.add_node(start, is_generic(start, p).ok, 0)
    frontier = [g.nodes[start.key()]]
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for depth in range(lim.max_depth):
            expandable = sorted((nd for nd in frontier if nd.generic), key=lambda nd: nd.tuple.key())
            if pool is not None:
                results = list(pool.map(lambda nd: _expand(p, nd, lim), expandable))
            else:
                results = [_expand(p, nd, lim) for nd in expandable]
            nxt = []
            for nd, items in zip(expandable, results):
                src = nd.tuple.key()
                for item in items:
                    if item[0] == "anomaly":
                        g.anomalies.append((src, item[1], item[2].residual))
                    elif item[0] == "family":
                        g.families[(src, item[1])] = item[2]
                    else:
                        _, j, c, child, generic = item
                        if g.add_node(child, generic, depth + 1):
                            nxt.append(g.nodes[child.key()])
                        g.edges.append(Edge(src, child.key(), j, c))
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    return g


# ---------------------------------------------------------------------------
# verification


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    witnesses: list = field(default_factory=list)


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    charge: Optional[int] = None
    mu: Optional[tuple] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _proportional(f, g) -> bool:
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    return f * g.lc == g * f.lc


def verify_population(g: PopulationGraph, fertility_sample: int = 50, radius: Optional[int] = None) -> VerificationReport:
    p = g.problem
    cd = p.cartan
    nodes = g.node_list()
    report = VerificationReport()

    # orbit membership of weights at infinity
    weights = {nd.tuple.key(): km.infinity_weight(p, nd.k) for nd in nodes}
    root_w = km.infinity_weight(p, g.root.k)
    if radius is None:
        radius = 3 * max(max(abs(v) for v in w) for w in weights.values()) + 3
    orbit = km.shifted_orbit(cd, root_w, radius)
    outside = [nd.k for nd in nodes if weights[nd.tuple.key()] not in orbit]
    report.checks.append(CheckResult("orbit", not outside, f"radius {radius}, {len(orbit)} orbit elements", outside))

    # charge constancy
    charges = {km.charge_form(p, nd.k) for nd in nodes}
    report.charge = km.charge_form(p, g.root.k)
    report.checks.append(CheckResult("charge", charges == {report.charge}, f"charge values {sorted(charges)}", sorted(charges) if len(charges) > 1 else []))

    # mu constancy and criticality across generic nodes
    if p.gram is None:
        report.checks.append(CheckResult("mu", True, "skipped: no Gram matrix"))
    else:
        mus = {}
        bad = []
        for nd in nodes:
            if not nd.generic:
                continue
            res = mu_extract(nd.tuple, p)
            if not res.identity_ok:
                bad.append(nd.k)
            mus.setdefault(res.mu, []).append(nd.k)
        if len(mus) == 1:
            report.mu = next(iter(mus))
        ok = len(mus) <= 1 and not bad
        report.checks.append(CheckResult("mu", ok, f"{len(mus)} distinct mu vectors", bad + [list(map(str, m)) for m in mus][1:]))

    # Wronskian identity along every edge
    bad_edges = []
    for e in g.edges:
        src, dst = g.nodes[e.src].tuple, g.nodes[e.dst].tuple
        same_rest = all(src.y[i] == dst.y[i] for i in range(p.r) if i != e.j)
        w = wronskian(src.y[e.j], dst.y[e.j])
        if not (same_rest and _proportional(w, wronskian_rhs(src, p, e.j))):
            bad_edges.append((src.k, dst.k, e.j, str(e.c)))
    report.checks.append(CheckResult("edges", not bad_edges, f"{len(g.edges)} edges", bad_edges))

    # every generated member is fertile (spot check)
    not_fertile = []
    for nd in nodes[:fertility_sample]:
        t = nd.tuple
        for j in range(p.r):
            y = t.y[j]
            if squarefree(y):
                ok = not isinstance(fertility(t, p, j), NotFertile)
            else:
                bound = max(y.degree, km.degree_transform(p, t.k, j)[j])
                ok = solve_wronskian_linear(y, wronskian_rhs(t, p, j), bound) is not None
            if not ok:
                not_fertile.append((nd.k, j))
    report.checks.append(CheckResult("fertile", not not_fertile and not g.anomalies, f"sampled {min(len(nodes), fertility_sample)} nodes", not_fertile + [(k, j) for k, j, _ in g.anomalies]))
    return report


def find_minimal(g: PopulationGraph) -> list:
    return [nd.tuple for nd in g.node_list() if km.is_minimal_degree(g.problem, nd.k)]


def charge_dichotomy(problem: ProblemData, k, charge: int) -> list:
    """Violations of: minimal k = 0 with charge 0, or k != 0 with charge < 0 and
    charge + sum_j b_j (tau_j + 1) k_j < 0."""
    b = problem.cartan.b
    if not any(k):
        return [] if charge == 0 else [f"k = 0 but charge {charge} != 0"]
    out = []
    if charge >= 0:
        out.append(f"minimal k = {tuple(k)} != 0 but charge {charge} >= 0")
    bound = charge + sum(b[j] * (problem.tau[j] + 1) * k[j] for j in range(problem.cartan.r))
    if bound >= 0:
        out.append(f"charge + sum b_j (tau_j + 1) k_j = {bound} >= 0 at k = {tuple(k)}")
    return out


@dataclass
class ChargeReport:
    charge: int
    status: str  # "zero-branch", "negative-branch", "inconclusive" or "violated"
    minimal: list
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations


def check_charge_theorems(g: PopulationGraph) -> ChargeReport:
    p = g.problem
    charge = km.charge_form(p, g.root.k)
    minimal = find_minimal(g)
    violations = []
    for t in minimal:
        violations.extend(charge_dichotomy(p, t.k, charge))
    if charge == 0 and PolyTuple.empty(p.r).key() not in g.nodes and minimal:
        violations.append("charge 0 population without the constant tuple")
    if violations:
        status = "violated"
    elif not minimal:
        status = "inconclusive"
    elif charge == 0:
        status = "zero-branch"
    else:
        status = "negative-branch"
    return ChargeReport(charge, status, minimal, violations)


# ---------------------------------------------------------------------------
# export


def _node_ids(g: PopulationGraph) -> dict:
    return {nd.tuple.key(): i for i, nd in enumerate(g.node_list())}


def to_dot(g: PopulationGraph) -> str:
    ids = _node_ids(g)
    lines = ["digraph population {"]
    for nd in g.node_list():
        label = ",".join(map(str, nd.k))
        style = "" if nd.generic else ", style=dashed"
        lines.append(f'  n{ids[nd.tuple.key()]} [label="({label})"{style}];')
    for e in g.edges:
        lines.append(f'  n{ids[e.src]} -> n{ids[e.dst]} [label="{e.j}, {format_rational(e.c)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(g: PopulationGraph) -> dict:
    ids = _node_ids(g)
    return {
        "nodes": [
            {
                "id": ids[nd.tuple.key()],
                "degree": list(nd.k),
                "generic": nd.generic,
                "depth": nd.depth,
                "y": [p.to_strings() for p in nd.tuple.y],
            }
            for nd in g.node_list()
        ],
        "edges": [
            {"from": ids[e.src], "to": ids[e.dst], "j": e.j, "c": format_rational(e.c)}
            for e in g.edges
        ],
    }
