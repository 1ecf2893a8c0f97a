"""Sharp bounds for min/max/clamp transforms, with machine-checkable certificates.

For a pair X₁, X₂ on one space write Y = min(X₁, X₂) and Z = max(X₁, X₂).
The quantities this module computes are exact rationals tied together by two
always-true identities:

    gap := cov(Y, Z) − cov(X₁, X₂) = (E[X₁] − E[Y])·(E[X₂] − E[Y]) ≥ 0
    var(Y) + var(Z) + 2·gap = var(X₁) + var(X₂)

and by equality characterizations that are decidable on finite spaces:
the gap vanishes exactly when one variable dominates the other on every
outcome; var(Y) = var(X₁) + var(X₂) exactly when the dominant variable is a
constant; and var(clamp) = var(X) + var(X₁) + var(X₂) exactly when one of
four pointwise constancy/ordering patterns holds.

The ``certify_*`` / ``classify_*`` functions are pure pointwise decision
procedures: they never look at the moment arithmetic whose tightness they
witness.  That keeps the two routes independent, so the verification suite
can cross-check one against the other.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, NamedTuple, Sequence

from .dist import (
    RandomVariable,
    RationalLike,
    as_fraction,
    clamp,
    covariance,
    dominates_as,
    expectation,
    pointwise_max,
    pointwise_min,
    require_same_space,
    variance,
)
from .errors import EmptyGrid, UnsortedGrid


@dataclass(frozen=True)
class GapReport:
    """Covariance gap of a pair, both routes, and the variance-sum ledger.

    Invariants (exact): gap = cov_min_max − cov_pair = gap_via_formula ≥ 0,
    and var_sum_minmax + 2·gap = var_sum_pair.
    """

    cov_min_max: Fraction
    cov_pair: Fraction
    gap: Fraction
    gap_via_formula: Fraction
    var_sum_pair: Fraction
    var_sum_minmax: Fraction


class CertificateKind(enum.Enum):
    STRICT = "strict"
    EQUAL_DOMINANCE = "equal_dominance"


class Direction(enum.Enum):
    X1_GE_X2 = "x1_ge_x2"
    X2_GE_X1 = "x2_ge_x1"
    BOTH = "both"


class ClampCondition(NamedTuple):
    """One satisfied tightness pattern for the clamp bound, with its constants."""

    index: int
    c1: Fraction
    c2: Fraction


@dataclass(frozen=True)
class EqualityCertificate:
    """Witness that a bound is tight, or a claim of strictness.

    ``kind`` is EQUAL_DOMINANCE exactly when the queried bound holds with
    equality; the witness fields are filled per query type:

    - pair queries carry ``direction`` (which variable dominates; BOTH means
      the variables coincide on every outcome);
    - min-variance queries additionally carry ``constant_value``, the value
      the dominant variable is stuck at;
    - clamp queries carry ``satisfied_conditions``, every pattern index in
      {1, 2, 3, 4} that holds together with its constants (c1, c2).

    Each field is re-checkable against the distribution with
    :func:`truncvar.dist.dominates_as` and pointwise scans.
    """

    kind: CertificateKind
    direction: Direction | None = None
    constant_value: Fraction | None = None
    satisfied_conditions: tuple[ClampCondition, ...] = field(default=())

    @property
    def is_equality(self) -> bool:
        return self.kind is CertificateKind.EQUAL_DOMINANCE


class VarianceSumCheck(NamedTuple):
    lhs: Fraction  # var(min) + var(max)
    rhs: Fraction  # var(x1) + var(x2)
    equal: bool


class ClampVarianceBound(NamedTuple):
    var_clamp: Fraction
    var_sum: Fraction


@dataclass(frozen=True)
class MonotoneCurve:
    """Variance of min(X, s) (or max(X, s)) along an increasing grid of s."""

    mode: Literal["min", "max"]
    grid: tuple[Fraction, ...]
    values: tuple[Fraction, ...]


def covariance_gap(x1: RandomVariable, x2: RandomVariable) -> GapReport:
    """Exact covariance gap of the pair and the variance-sum ledger."""
    require_same_space(x1, x2)
    y = pointwise_min(x1, x2)
    z = pointwise_max(x1, x2)
    cov_yz = covariance(y, z)
    cov_pair = covariance(x1, x2)
    e_y = expectation(y)
    return GapReport(
        cov_min_max=cov_yz,
        cov_pair=cov_pair,
        gap=cov_yz - cov_pair,
        gap_via_formula=(expectation(x1) - e_y) * (expectation(x2) - e_y),
        var_sum_pair=variance(x1) + variance(x2),
        var_sum_minmax=variance(y) + variance(z),
    )


def _dominance_direction(x1: RandomVariable, x2: RandomVariable) -> Direction | None:
    d12 = dominates_as(x1, x2)
    d21 = dominates_as(x2, x1)
    if d12 and d21:
        return Direction.BOTH
    if d12:
        return Direction.X1_GE_X2
    if d21:
        return Direction.X2_GE_X1
    return None


def certify_cov_equality(x1: RandomVariable, x2: RandomVariable) -> EqualityCertificate:
    """Decide whether the covariance gap vanishes, by pure dominance scan.

    The gap is zero exactly when one variable dominates the other on every
    outcome; the certificate records which direction holds (BOTH when the
    variables coincide).
    """
    require_same_space(x1, x2)
    direction = _dominance_direction(x1, x2)
    if direction is None:
        return EqualityCertificate(kind=CertificateKind.STRICT)
    return EqualityCertificate(kind=CertificateKind.EQUAL_DOMINANCE, direction=direction)


def variance_sum_check(x1: RandomVariable, x2: RandomVariable) -> VarianceSumCheck:
    """var(min) + var(max) vs var(X₁) + var(X₂); equal exactly under dominance."""
    report = covariance_gap(x1, x2)
    return VarianceSumCheck(
        lhs=report.var_sum_minmax,
        rhs=report.var_sum_pair,
        equal=report.var_sum_minmax == report.var_sum_pair,
    )


def certify_min_variance_equality(
    x1: RandomVariable, x2: RandomVariable
) -> EqualityCertificate:
    """Decide whether var(min(X₁,X₂)) = var(X₁) + var(X₂) can be tight.

    Tightness requires the dominant variable to be a constant c: either
    X₁ ≡ c with X₁ ≥ X₂ everywhere, or X₂ ≡ c with X₂ ≥ X₁ everywhere (the
    other variable then is the min and supplies all the variance).  Decided
    by pointwise scan; the certificate carries c and the direction.
    """
    require_same_space(x1, x2)
    x1_const = x1.is_constant()
    x2_const = x2.is_constant()
    via_x1 = x1_const and bool(dominates_as(x1, x2))
    via_x2 = x2_const and bool(dominates_as(x2, x1))
    if not (via_x1 or via_x2):
        return EqualityCertificate(kind=CertificateKind.STRICT)
    if via_x1 and via_x2:
        direction = Direction.BOTH
    elif via_x1:
        direction = Direction.X1_GE_X2
    else:
        direction = Direction.X2_GE_X1
    c = x1.values[0] if via_x1 else x2.values[0]
    return EqualityCertificate(
        kind=CertificateKind.EQUAL_DOMINANCE, direction=direction, constant_value=c
    )


def clamp_variance_bound(
    x: RandomVariable, x1: RandomVariable, x2: RandomVariable
) -> ClampVarianceBound:
    """var(min(X₂, max(X, X₁))) against var(X₂) + var(X₁) + var(X), both exact."""
    require_same_space(x, x1, x2)
    var_clamp = variance(clamp(x, x1, x2))
    var_sum = variance(x2) + variance(x1) + variance(x)
    return ClampVarianceBound(var_clamp=var_clamp, var_sum=var_sum)


def classify_clamp_equality(
    x: RandomVariable, x1: RandomVariable, x2: RandomVariable
) -> EqualityCertificate:
    """Find every pointwise pattern that makes the clamp variance bound tight.

    With constants read off the almost-surely constant variables, the four
    patterns are:

        (1) X₂ ≡ c₂, X₁ ≡ c₁, and c₁ ≤ X ≤ c₂ everywhere
        (2) X ≡ c₂, X₁ ≡ c₁, c₂ ≥ c₁, and X₂ ≤ c₂ everywhere
        (3) X₂ ≡ c₂, X ≡ c₁, and c₁ ≤ X₁ ≤ c₂ everywhere
        (4) X₁ ≡ c₂, X ≡ c₁, c₂ ≥ c₁, and X₂ ≤ c₂ everywhere

    The set of satisfied patterns is nonempty exactly when
    var(clamp) = var(X) + var(X₁) + var(X₂).  (1)/(3) and (2)/(4) exchange
    under swapping X and X₁, mirroring the symmetry of max(X, X₁).
    """
    require_same_space(x, x1, x2)
    vx, v1, v2 = x.values, x1.values, x2.values
    x_const = x.is_constant()
    x1_const = x1.is_constant()
    x2_const = x2.is_constant()

    conditions: list[ClampCondition] = []
    if x2_const and x1_const:
        c2, c1 = v2[0], v1[0]
        if all(c1 <= v <= c2 for v in vx):
            conditions.append(ClampCondition(1, c1, c2))
    if x_const and x1_const:
        c2, c1 = vx[0], v1[0]
        if c2 >= c1 and all(v <= c2 for v in v2):
            conditions.append(ClampCondition(2, c1, c2))
    if x2_const and x_const:
        c2, c1 = v2[0], vx[0]
        if all(c1 <= v <= c2 for v in v1):
            conditions.append(ClampCondition(3, c1, c2))
    if x1_const and x_const:
        c2, c1 = v1[0], vx[0]
        if c2 >= c1 and all(v <= c2 for v in v2):
            conditions.append(ClampCondition(4, c1, c2))

    if not conditions:
        return EqualityCertificate(kind=CertificateKind.STRICT)
    return EqualityCertificate(
        kind=CertificateKind.EQUAL_DOMINANCE,
        satisfied_conditions=tuple(conditions),
    )


def variance_monotonicity_curve(
    x: RandomVariable,
    grid: Sequence[RationalLike],
    mode: Literal["min", "max"],
) -> MonotoneCurve:
    """Variance of min(X, s) (non-decreasing in s) or max(X, s) (non-increasing).

    The grid must be strictly increasing.
    """
    pts = tuple(as_fraction(s) for s in grid)
    if not pts:
        raise EmptyGrid("grid must contain at least one threshold")
    if any(a >= b for a, b in zip(pts, pts[1:])):
        raise UnsortedGrid("grid must be strictly increasing")
    if mode not in ("min", "max"):
        raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
    transform = pointwise_min if mode == "min" else pointwise_max
    values = tuple(variance(transform(x, x.space.constant(s))) for s in pts)
    return MonotoneCurve(mode=mode, grid=pts, values=values)


def positive_correlation_check(x1: RandomVariable, x2: RandomVariable) -> bool:
    """Did "cov(X₁,X₂) ≥ 0 implies cov(min,max) ≥ 0" hold on this instance?

    Always true (the gap is nonnegative); exposed so property suites can
    assert it instance by instance rather than trusting the derivation.
    """
    report = covariance_gap(x1, x2)
    if report.cov_pair < 0:
        return True
    return report.cov_min_max >= 0
