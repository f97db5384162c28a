"""Exact populations of critical points for Kac-Moody Bethe equations.

Modules:

* ``kacmoody``: Cartan data, the charge form and shifted Weyl combinatorics.
* ``polyring``: exact polynomials over Q, gcds, Wronskians, Hermite reduction.
* ``tuplegen``: problems, tuples, the generation step and the critical form.
* ``population``: exploration of a population and its consistency checks.
* ``bethe_oracle``: floating-point solver and numeric cross-checks.
* ``cli``: the ``mfpop`` command.
"""

from importlib import metadata as _metadata

try:
    __version__ = _metadata.version("artifact")
except _metadata.PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .errors import MfpopError
from .kacmoody import CartanData, charge_form, degree_transform, shifted_reflection, validate_cartan
from .polyring import Poly, format_rational, parse_rational
from .population import ExploreLimits, check_charge_theorems, explore, verify_population
from .tuplegen import PolyTuple, ProblemData, build_problem, fertility, generate, is_generic, mu_extract

__all__ = [
    "CartanData",
    "ExploreLimits",
    "MfpopError",
    "Poly",
    "PolyTuple",
    "ProblemData",
    "build_problem",
    "charge_form",
    "check_charge_theorems",
    "degree_transform",
    "explore",
    "fertility",
    "format_rational",
    "generate",
    "is_generic",
    "mu_extract",
    "parse_rational",
    "shifted_reflection",
    "validate_cartan",
    "verify_population",
]
