"""Exact finite discrete joint distributions and truncation transforms.

Conventions
-----------
A :class:`SampleSpace` is a finite set of outcomes with exact positive
rational probabilities summing to 1.  A :class:`RandomVariable` assigns an
exact rational value to each outcome of one space.  Dependence between
variables is encoded by co-definition on a shared space (the coupling);
variables on distinct spaces are never combined implicitly — every binary
operation raises :class:`~truncvar.errors.SpaceMismatch` instead.

Because zero-probability outcomes are rejected at construction, "almost
surely" coincides with "for every outcome", and dominance or constancy checks
reduce to finite pointwise scans.

All arithmetic is big-rational (:class:`fractions.Fraction`); no floating
point enters this module.  Every value is immutable after construction, so
instances are safe to share across threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    InvalidInterval,
    NonPositiveProbability,
    ProbabilitiesDoNotSumToOne,
    SpaceMismatch,
)

RationalLike = Union[Fraction, int, str, float]

_ONE = Fraction(1)
_ZERO = Fraction(0)

_space_tokens = itertools.count(1)


def as_fraction(x: RationalLike) -> Fraction:
    """Coerce to an exact Fraction.

    Strings must be ``"a/b"`` or integer literals.  Floats convert to their
    exact binary value (use with intent; ``0.1`` is not one tenth).
    """
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class SampleSpace:
    """Finite outcome set with exact positive probabilities summing to 1.

    Two spaces are distinct couplings even if numerically identical: identity
    is tracked by a construction token, and random variables interoperate only
    when they reference the same space.
    """

    __slots__ = ("ids", "probs", "token")

    def __init__(self, probs: Sequence[RationalLike], ids: Sequence[str] | None = None):
        ps = tuple(as_fraction(p) for p in probs)
        if not ps:
            raise NonPositiveProbability("a sample space needs at least one outcome")
        for i, p in enumerate(ps):
            if p <= 0:
                raise NonPositiveProbability(
                    f"outcome {i + 1} has probability {p}; all must be > 0"
                )
        total = sum(ps, _ZERO)
        if total != 1:
            raise ProbabilitiesDoNotSumToOne(_ONE - total)
        if ids is None:
            ids = tuple(f"w{i + 1}" for i in range(len(ps)))
        else:
            ids = tuple(str(i) for i in ids)
            if len(ids) != len(ps) or len(set(ids)) != len(ids):
                raise NonPositiveProbability("outcome ids must be unique, one per outcome")
        self.ids = ids
        self.probs = ps
        self.token = next(_space_tokens)

    def __len__(self) -> int:
        return len(self.probs)

    def __repr__(self) -> str:
        body = ", ".join(f"{i}:{p}" for i, p in zip(self.ids, self.probs))
        return f"SampleSpace#{self.token}({body})"

    def rv(self, values: Sequence[RationalLike]) -> "RandomVariable":
        return RandomVariable(self, values)

    def constant(self, value: RationalLike) -> "RandomVariable":
        return RandomVariable(self, [value] * len(self))


def make_space(probs: Sequence[RationalLike], ids: Sequence[str] | None = None) -> SampleSpace:
    """Build a sample space with a fresh identity token."""
    return SampleSpace(probs, ids)


class RandomVariable:
    """Exact rational value per outcome of one :class:`SampleSpace`."""

    __slots__ = ("space", "values")

    def __init__(self, space: SampleSpace, values: Sequence[RationalLike]):
        vals = tuple(as_fraction(v) for v in values)
        if len(vals) != len(space):
            raise SpaceMismatch(
                f"{len(vals)} values for a space with {len(space)} outcomes"
            )
        self.space = space
        self.values = vals

    def __repr__(self) -> str:
        return f"RandomVariable({', '.join(map(str, self.values))})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RandomVariable):
            return NotImplemented
        return self.space is other.space and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.space.token, self.values))

    def _zip(self, other: "RandomVariable") -> Iterable[tuple[Fraction, Fraction]]:
        require_same_space(self, other)
        return zip(self.values, other.values)

    def __add__(self, other):
        if isinstance(other, RandomVariable):
            return RandomVariable(self.space, [a + b for a, b in self._zip(other)])
        c = as_fraction(other)
        return RandomVariable(self.space, [a + c for a in self.values])

    __radd__ = __add__

    def __neg__(self):
        return RandomVariable(self.space, [-a for a in self.values])

    def __sub__(self, other):
        if isinstance(other, RandomVariable):
            return RandomVariable(self.space, [a - b for a, b in self._zip(other)])
        c = as_fraction(other)
        return RandomVariable(self.space, [a - c for a in self.values])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RandomVariable):
            return RandomVariable(self.space, [a * b for a, b in self._zip(other)])
        c = as_fraction(other)
        return RandomVariable(self.space, [a * c for a in self.values])

    __rmul__ = __mul__

    def is_constant(self) -> bool:
        first = self.values[0]
        return all(v == first for v in self.values[1:])


@dataclass(frozen=True)
class MomentReport:
    """First and second moments of one variable; variance = E[X²] − E[X]²."""

    mean: Fraction
    variance: Fraction
    second_moment: Fraction


@dataclass(frozen=True)
class Dominance:
    """Outcome-wise comparison verdict; carries one violating outcome if any."""

    holds: bool
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.holds


def require_same_space(*rvs: RandomVariable) -> SampleSpace:
    space = rvs[0].space
    for rv in rvs[1:]:
        if rv.space is not space:
            raise SpaceMismatch(
                f"variables live on different spaces "
                f"(tokens {space.token} and {rv.space.token})"
            )
    return space


def expectation(x: RandomVariable) -> Fraction:
    """Exact E[X] = Σ p(ω)·X(ω)."""
    return sum((p * v for p, v in zip(x.space.probs, x.values)), _ZERO)


def covariance(x: RandomVariable, w: RandomVariable) -> Fraction:
    """Exact E[XW] − E[X]E[W]; requires a shared space."""
    require_same_space(x, w)
    e_xw = sum(
        (p * v * u for p, v, u in zip(x.space.probs, x.values, w.values)), _ZERO
    )
    return e_xw - expectation(x) * expectation(w)


def variance(x: RandomVariable) -> Fraction:
    """Exact var(X) = cov(X, X)."""
    return covariance(x, x)


def moments(x: RandomVariable) -> MomentReport:
    mean = expectation(x)
    second = sum((p * v * v for p, v in zip(x.space.probs, x.values)), _ZERO)
    return MomentReport(mean=mean, variance=second - mean * mean, second_moment=second)


def pointwise_min(x: RandomVariable, w: RandomVariable) -> RandomVariable:
    """Outcome-wise minimum of two variables on one space."""
    require_same_space(x, w)
    return RandomVariable(x.space, [min(a, b) for a, b in zip(x.values, w.values)])


def pointwise_max(x: RandomVariable, w: RandomVariable) -> RandomVariable:
    """Outcome-wise maximum of two variables on one space."""
    require_same_space(x, w)
    return RandomVariable(x.space, [max(a, b) for a, b in zip(x.values, w.values)])


def clamp(x: RandomVariable, lower: RandomVariable, upper: RandomVariable) -> RandomVariable:
    """min(upper, max(x, lower)), outcome-wise.

    The bounds may themselves be random and need not satisfy lower ≤ upper;
    crossed bounds follow the formula (the upper bound wins).
    """
    require_same_space(x, lower, upper)
    return RandomVariable(
        x.space,
        [min(u, max(v, lo)) for v, lo, u in zip(x.values, lower.values, upper.values)],
    )


def indicator_truncate(x: RandomVariable, a: RationalLike, c: RationalLike) -> RandomVariable:
    """X·1{a ≤ X ≤ c}: keep the value inside [a, c], zero outside."""
    a = as_fraction(a)
    c = as_fraction(c)
    if a > c:
        raise InvalidInterval(f"lower endpoint {a} exceeds upper endpoint {c}")
    return RandomVariable(x.space, [v if a <= v <= c else _ZERO for v in x.values])


def dominates_as(x: RandomVariable, w: RandomVariable) -> Dominance:
    """Does X ≥ W hold on every outcome?

    All outcomes carry positive probability, so this pointwise check is
    exactly almost-sure dominance.  On failure the verdict names one
    violating outcome.
    """
    require_same_space(x, w)
    for oid, a, b in zip(x.space.ids, x.values, w.values):
        if a < b:
            return Dominance(False, witness=oid)
    return Dominance(True)
