"""One marked point: every numeric critical point lies in one population.

For sl2 with weight m and for A2 with weight (1, 1) at a single point,
solve over the degree vectors of the orbit of 0 and match each numeric
point against the explored population of the constant tuple.
"""

import time
from dataclasses import dataclass

from _config import parse_config

from mfpop import kacmoody as km
from mfpop.bethe_oracle import PopulationIndex, match_population, solve_bethe, to_numeric_tuple
from mfpop.population import ExploreLimits, explore
from mfpop.tuplegen import PolyTuple, build_problem


@dataclass(frozen=True)
class Config:
    sl2_weights: tuple = (1, 2, 3, 4)
    max_degree: int = 10
    depth: int = 3
    starts: int = 500
    seed: int = 0


def run(name, p, cfg):
    g = explore(p, PolyTuple.empty(p.r), ExploreLimits(max_depth=cfg.depth, max_component_degree=cfg.max_degree))
    index = PopulationIndex(g)
    for k in sorted(km.degree_orbit(p, (0,) * p.r, cfg.max_degree)):
        t0 = time.perf_counter()
        pts = solve_bethe(p, k, starts=cfg.starts, seed=cfg.seed)
        matched = sum(match_population(g, to_numeric_tuple(pt), index=index).matched for pt in pts)
        print(f"{name:10s} k={str(k):8s} points {len(pts):4d}  matched {matched:4d}  unmatched {len(pts) - matched}  {time.perf_counter() - t0:.1f} s")


def main(cfg: Config):
    a1 = km.validate_cartan([[2]], [1])
    a2 = km.validate_cartan([[2, -1], [-1, 2]], [1, 1])
    for m in cfg.sl2_weights:
        run(f"sl2 m={m}", build_problem(a1, [0], [(m,)]), cfg)
    run("a2 (1,1)", build_problem(a2, [0], [(1, 1)]), cfg)


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
