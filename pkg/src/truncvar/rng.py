"""Reproducible random streams and marginal sampling.

Every random draw in this package comes from a Philox4x64 counter-based
bit generator keyed by ``(seed, stream_id)``.  Distinct stream ids give
statistically independent substreams of one seed, so parallel or chunked
generation is reproducible by construction: the partition into substreams
is fixed by configuration, never by thread count.

Stream-id layout:

- ``0 .. 2**32``        pair-sampler chunks (one id per chunk of 2**16 pairs)
- ``DEMAND_STREAM``     inventory demand draws
- ``INTERARRIVAL_STREAM`` / ``SERVICE_STREAM``  queue draws

Marginal families draw through the inverse CDF from uniform doubles where a
closed form exists (uniform, exponential, two-point) and through the
generator's normal method otherwise, in a fixed order and fixed count per
substream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InvalidSpec

U64_MASK = (1 << 64) - 1

DEMAND_STREAM = 1 << 48
INTERARRIVAL_STREAM = (1 << 48) + 1
SERVICE_STREAM = (1 << 48) + 2


def substream(seed: int, stream_id: int) -> np.random.Generator:
    """Generator for substream ``stream_id`` of ``seed``."""
    key = np.array([seed & U64_MASK, stream_id & U64_MASK], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def check_seed(seed: int) -> int:
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed <= U64_MASK:
        raise InvalidSpec(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return seed


@dataclass(frozen=True)
class Uniform:
    a: float
    b: float

    def validate(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise InvalidSpec(f"uniform needs finite a < b, got ({self.a}, {self.b})")

    def support_min(self) -> float:
        return self.a

    def sample(self, g: np.random.Generator, size: int) -> np.ndarray:
        return self.a + (self.b - self.a) * g.random(size)

    def spec_string(self) -> str:
        return f"uniform:{self.a!r}:{self.b!r}"


@dataclass(frozen=True)
class Exponential:
    rate: float

    def validate(self):
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise InvalidSpec(f"exponential needs rate > 0, got {self.rate}")

    def support_min(self) -> float:
        return 0.0

    def sample(self, g: np.random.Generator, size: int) -> np.ndarray:
        return -np.log1p(-g.random(size)) / self.rate

    def spec_string(self) -> str:
        return f"exp:{self.rate!r}"


@dataclass(frozen=True)
class Normal:
    mean: float
    sd: float

    def validate(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.sd) and self.sd >= 0):
            raise InvalidSpec(f"normal needs sd >= 0, got ({self.mean}, {self.sd})")

    def support_min(self) -> float:
        return self.mean if self.sd == 0 else -math.inf

    def sample(self, g: np.random.Generator, size: int) -> np.ndarray:
        return self.mean + self.sd * g.standard_normal(size)

    def spec_string(self) -> str:
        return f"normal:{self.mean!r}:{self.sd!r}"


@dataclass(frozen=True)
class TwoPoint:
    """Takes value v1 with probability p, else v2."""

    v1: float
    v2: float
    p: float

    def validate(self):
        if not (math.isfinite(self.v1) and math.isfinite(self.v2) and 0 < self.p < 1):
            raise InvalidSpec(
                f"two_point needs finite values and 0 < p < 1, got "
                f"({self.v1}, {self.v2}, {self.p})"
            )

    def support_min(self) -> float:
        return min(self.v1, self.v2)

    def sample(self, g: np.random.Generator, size: int) -> np.ndarray:
        return np.where(g.random(size) < self.p, self.v1, self.v2)

    def spec_string(self) -> str:
        return f"two_point:{self.v1!r}:{self.v2!r}:{self.p!r}"


@dataclass(frozen=True)
class Constant:
    """Degenerate marginal; accepted by the simulators, not by pair samplers."""

    value: float

    def validate(self):
        if not math.isfinite(self.value):
            raise InvalidSpec(f"const needs a finite value, got {self.value}")

    def support_min(self) -> float:
        return self.value

    def sample(self, g: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, self.value, dtype=float)

    def spec_string(self) -> str:
        return f"const:{self.value!r}"


Marginal = Union[Uniform, Exponential, Normal, TwoPoint, Constant]

_MARGINAL_ARITY = {
    "uniform": (Uniform, 2),
    "exp": (Exponential, 1),
    "exponential": (Exponential, 1),
    "normal": (Normal, 2),
    "two_point": (TwoPoint, 3),
    "const": (Constant, 1),
}


def parse_marginal(text: str) -> Marginal:
    """Parse ``family:arg[:arg...]`` strings, e.g. ``exp:0.5`` or ``two_point:0:10:0.5``."""
    parts = text.split(":")
    family = parts[0].strip().lower()
    if family not in _MARGINAL_ARITY:
        raise InvalidSpec(
            f"unknown marginal family {family!r}; "
            f"expected one of {sorted(set(_MARGINAL_ARITY))}"
        )
    cls, arity = _MARGINAL_ARITY[family]
    args = parts[1:]
    if len(args) != arity:
        raise InvalidSpec(f"{family} takes {arity} argument(s), got {len(args)} in {text!r}")
    try:
        values = [float(a) for a in args]
    except ValueError as exc:
        raise InvalidSpec(f"non-numeric argument in marginal {text!r}: {exc}") from None
    marginal = cls(*values)
    marginal.validate()
    return marginal
