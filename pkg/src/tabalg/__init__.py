"""Exact arithmetic for normalized integral table algebras.

Distinguished bases with nonnegative integer structure constants: axiom
verification, closed-subset and quotient analysis, exact isomorphism
testing, a file format with bundled verified datasets, and a deduction
engine that completes partially specified product tables.
"""

from .core import (
    BasisElement,
    Element,
    MalformedElementError,
    StructureConstants,
    TableAlgebra,
    TableAlgebraError,
    TableBasis,
    VerificationReport,
)
from .fileformat import ParseError, parse, parse_element_expr, parse_partial, serialize
from .structure import (
    ClosedSubset,
    GroupTable,
    PowerTable,
    QuotientClassTable,
    all_closed_subsets,
    closure,
    is_group_like,
    power_supports,
    quotient_by,
)
from .iso import IsoCertificate, NotClosedError, UnverifiedAlgebraError, exact_isomorphic, restrict
from .deduction import DeductionTrace, PartialTable, complete_or_refute, propagate
from .bundled import bundled, load, resolve

__version__ = "0.1.0"

__all__ = [
    "BasisElement",
    "Element",
    "TableBasis",
    "StructureConstants",
    "TableAlgebra",
    "VerificationReport",
    "TableAlgebraError",
    "MalformedElementError",
    "ParseError",
    "parse",
    "parse_partial",
    "parse_element_expr",
    "serialize",
    "ClosedSubset",
    "PowerTable",
    "QuotientClassTable",
    "GroupTable",
    "closure",
    "all_closed_subsets",
    "power_supports",
    "quotient_by",
    "is_group_like",
    "IsoCertificate",
    "NotClosedError",
    "UnverifiedAlgebraError",
    "restrict",
    "exact_isomorphic",
    "PartialTable",
    "DeductionTrace",
    "propagate",
    "complete_or_refute",
    "bundled",
    "load",
    "resolve",
]
