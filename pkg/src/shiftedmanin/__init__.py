"""Exact verification of 1-shifted Lie bialgebras, Manin triples, their quantization
and the truncated DG 1-shifted Yangian."""

from .bialg import ManinTriple, ShiftedBialgebra, build_double, cobracket_from_triple
from .exactnum import HbarPoly, rational
from .graded import GradedBasis, SparseTensor
from .liealg import GradedLieAlgebra, ShiftedMetric
from .report import Report

__version__ = "0.1.0"

__all__ = [
    "GradedBasis", "GradedLieAlgebra", "HbarPoly", "ManinTriple", "Report", "ShiftedBialgebra",
    "ShiftedMetric", "SparseTensor", "build_double", "cobracket_from_triple", "rational",
]
