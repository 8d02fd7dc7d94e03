"""Exact and certified lower bounds on binomial upper tails at and above the mean."""

from .bounds import BOUND_IDS, BoundValue, Event, evaluate_bound
from .enclosure import DEFAULT_PRECISION, Enclosure
from .errors import DomainError, IndeterminateError
from .exact import BinomialSpec, cdf, median, mode, pmf, prob_exceeds_mean, tail_ge
from .report import Cell, VerificationReport, Verdict

__all__ = [
    "BOUND_IDS", "BoundValue", "Event", "evaluate_bound",
    "DEFAULT_PRECISION", "Enclosure",
    "DomainError", "IndeterminateError",
    "BinomialSpec", "cdf", "median", "mode", "pmf", "prob_exceeds_mean", "tail_ge",
    "Cell", "VerificationReport", "Verdict",
]
__version__ = "0.1.0"
