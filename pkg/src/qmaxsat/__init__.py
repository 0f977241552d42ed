"""Partial-negation amplitude amplification for MAX-E3-SAT: simulation and analysis."""
from .formula import (Clause, Formula, FormulaError, Literal, generate_complete,
                      generate_random, parse_dimacs, serialize_dimacs, truth_vector)
from .kernels import BACKEND

__all__ = [
    "BACKEND", "Clause", "Formula", "FormulaError", "Literal", "generate_complete",
    "generate_random", "parse_dimacs", "serialize_dimacs", "truth_vector",
]
__version__ = "0.1.0"
