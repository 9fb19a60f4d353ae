"""Random MAX-2-SAT, MAX-k-SAT and MAX-CUT: generators, exact oracles, heuristics,
structural analyzers, closed-form predictions and a Monte Carlo harness."""

from .core import (ConstraintFn, CspFormula, Formula, Graph, Literal, complement,
                   count_satisfied, count_unsatisfied, cut_size)
from .errors import ConfigError, DegenerateInputError, DomainError, PhaselabError, ResourceLimitError
from .generators import Seed, gen_csp, gen_gnm, gen_gnp, gen_ksat

__version__ = "0.1.0"

__all__ = [
    "ConstraintFn", "CspFormula", "Formula", "Graph", "Literal", "complement",
    "count_satisfied", "count_unsatisfied", "cut_size", "ConfigError",
    "DegenerateInputError", "DomainError", "PhaselabError", "ResourceLimitError",
    "Seed", "gen_csp", "gen_gnm", "gen_gnp", "gen_ksat",
]
