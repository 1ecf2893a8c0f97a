"""Semantic exception hierarchy.

Public functions never raise bare ``ValueError``; every contract violation
maps to one of the classes below so callers (and the CLI's exit-code logic)
can distinguish input errors from internal failures.
"""

from __future__ import annotations


class TruncvarError(Exception):
    """Base class for all errors raised by this package."""


class NonPositiveProbability(TruncvarError, ValueError):
    """An outcome probability is zero or negative."""


class ProbabilitiesDoNotSumToOne(TruncvarError, ValueError):
    """Outcome probabilities do not sum exactly to 1; carries the deficit."""

    def __init__(self, deficit):
        self.deficit = deficit
        super().__init__(f"probabilities sum to 1 - ({deficit}); deficit {deficit}")


class SpaceMismatch(TruncvarError, ValueError):
    """Random variables defined on different sample spaces were combined."""


class InvalidInterval(TruncvarError, ValueError):
    """Truncation interval has its lower endpoint above its upper one."""


class EmptyGrid(TruncvarError, ValueError):
    """A grid of threshold values is empty."""


class UnsortedGrid(TruncvarError, ValueError):
    """A grid of threshold values is not strictly increasing."""


class InvalidSpec(TruncvarError, ValueError):
    """A sampler specification violates its invariants."""


class OutOfRange(TruncvarError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class InvalidConfig(TruncvarError, ValueError):
    """A simulator configuration violates its invariants."""


class EmptyTrace(TruncvarError, ValueError):
    """A simulation trace with no records was given where records are required."""


class DocumentError(TruncvarError, ValueError):
    """A serialized distribution document failed to parse or validate."""
