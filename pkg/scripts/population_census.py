"""Census of an explored population next to the numeric solution counts.

For each degree vector reached by exploration: the number of exact nodes
and how many numeric critical points the solver finds, with the number of
those matched to the population.
"""

import json
from collections import Counter
from dataclasses import dataclass

from _config import parse_config

from mfpop import kacmoody as km
from mfpop.bethe_oracle import PopulationIndex, match_population, solve_bethe, to_numeric_tuple
from mfpop.cli import load_problem
from mfpop.population import ExploreLimits, explore, verify_population
from mfpop.tuplegen import PolyTuple


@dataclass(frozen=True)
class Config:
    problem: str = "data/sl3_remark.json"
    depth: int = 2
    max_degree: int = 8
    starts: int = 100
    seed: int = 0
    json_out: str = ""


def main(cfg: Config):
    p, _ = load_problem(cfg.problem)
    g = explore(p, PolyTuple.empty(p.r), ExploreLimits(max_depth=cfg.depth, max_component_degree=cfg.max_degree))
    rep = verify_population(g)
    print(f"{len(g.nodes)} nodes, {len(g.edges)} edges, checks passed: {rep.passed}, charge {rep.charge}, mu {None if rep.mu is None else [str(v) for v in rep.mu]}")
    nodes = Counter(nd.k for nd in g.nodes.values())
    index = PopulationIndex(g)
    rows = []
    for k in sorted(nodes):
        pts = solve_bethe(p, k, starts=cfg.starts, seed=cfg.seed)
        matched = sum(match_population(g, to_numeric_tuple(pt), index=index).matched for pt in pts)
        rows.append({"k": list(k), "charge": km.charge_form(p, k), "nodes": nodes[k], "numeric": len(pts), "matched": matched})
        print(f"k={str(k):10s} nodes {nodes[k]:4d}  numeric {len(pts):4d}  matched {matched:4d}")
    if cfg.json_out:
        with open(cfg.json_out, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
