"""Zero sets of linear recurrences over commutative rings of positive characteristic."""

from .driver import HAS_ZERO, NO_ZERO, UNKNOWN_BOUNDED, ZeroSetReport, decide_skolem, emit_report
from .errors import InvalidProblem, ParseError, SkolemError
from .lrs import LRS
from .problem import Problem, emit_problem, parse_problem
from .ring import QuotientRing

__all__ = [
    "HAS_ZERO",
    "NO_ZERO",
    "UNKNOWN_BOUNDED",
    "LRS",
    "InvalidProblem",
    "ParseError",
    "Problem",
    "QuotientRing",
    "SkolemError",
    "ZeroSetReport",
    "decide_skolem",
    "emit_problem",
    "emit_report",
    "parse_problem",
]
