"""The charge -10 critical points of the sl3 example with two marked points.

Solves the degree (1, 1) system, then reports for each point the numeric mu
vector, the residual of the critical-form identity, the x^-2 coefficient at
infinity against the exact charge, and the verdict of matching against the
population of the constant tuple.
"""

import math
import time
from dataclasses import dataclass

from _config import parse_config

from mfpop import kacmoody as km
from mfpop.bethe_oracle import (
    match_population,
    numeric_laurent_coefficient,
    numeric_mu,
    numeric_nb_residual,
    solve_bethe,
    to_numeric_tuple,
)
from mfpop.population import ExploreLimits, explore
from mfpop.tuplegen import PolyTuple, build_problem


@dataclass(frozen=True)
class Config:
    starts: int = 200
    seed: int = 0
    depth: int = 2


def main(cfg: Config):
    a2 = km.validate_cartan([[2, -1], [-1, 2]], [1, 1])
    p = build_problem(a2, [1, -1], [(1, 1), (1, 1)])
    t0 = time.perf_counter()
    res = solve_bethe(p, (1, 1), starts=cfg.starts, seed=cfg.seed)
    print(f"{len(res)} points in {time.perf_counter() - t0:.2f} s (5^-1/2 = {1 / math.sqrt(5):.16f})")
    g = explore(p, PolyTuple.empty(2), ExploreLimits(max_depth=cfg.depth))
    print(f"exact charge B(1,1) = {km.charge_form(p, (1, 1))}")
    for pt in res:
        t = to_numeric_tuple(pt)
        mu = numeric_mu(t, p)
        (u,), (w,) = pt.u
        print(f"  u = {u.real:+.16f}, w = {w.real:+.16f}")
        print(f"    mu = ({mu[0].real:.12f}, {mu[1].real:.12f}), identity residual {numeric_nb_residual(t, p, mu):.2e}")
        print(f"    x^-2 coefficient {numeric_laurent_coefficient(t, p).real:.12f}")
        m = match_population(g, t)
        print(f"    in the population of the constant tuple: {m.matched} ({m.reason})")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
