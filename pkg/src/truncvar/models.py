"""Seeded simulators whose per-step quantities are truncated random variables.

Two models:

- A periodic-review inventory process under an order-up-to (base-stock)
  policy: each period the stock is raised to max(previous level, S), demand
  arrives, and the period cost charges the order plus coefficients on the
  two truncated quantities max(D − y, 0) and max(y − D, 0).  Unmet demand is
  either back-ordered (inventory may go negative) or lost (supply truncated
  at min(D, y), inventory floored at zero).

- A single-server FCFS queue: waits follow the recursion
  W_{k+1} = max(W_k + S_k − A_k, 0) with W_1 = 0 (the first customer waits
  zero; indices are customer numbers).

Traces are columnar, immutable once produced, and exportable as one JSON
object per step.  ``empirical_distribution`` bridges a trace to the exact
engine: the empirical joint law of any selected step fields is a finite
discrete distribution, so every exact bound applies to it verbatim.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterator, Sequence

import numpy as np

from .dist import RandomVariable, SampleSpace, make_space
from .errors import EmptyTrace, InvalidConfig
from .rng import (
    DEMAND_STREAM,
    INTERARRIVAL_STREAM,
    SERVICE_STREAM,
    Marginal,
    check_seed,
    substream,
)

MODES = ("back_order", "lost_sales")
COST_CONVENTIONS = ("as_written", "conventional")


@dataclass(frozen=True)
class TraceSummary:
    mean: float
    variance: float
    minimum: float
    maximum: float


@dataclass(frozen=True)
class SimulationTrace:
    """Per-step records stored column-wise, plus summary moments of one column."""

    kind: str
    columns: dict[str, np.ndarray]
    tracked: str
    summary: TraceSummary = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "summary", _summarize(self.columns[self.tracked]))

    def __len__(self) -> int:
        return len(self.columns[self.tracked])

    def iter_records(self) -> Iterator[dict]:
        names = list(self.columns)
        cols = [self.columns[n] for n in names]
        for row in zip(*cols):
            yield {
                n: (int(v) if np.issubdtype(type(v), np.integer) else float(v))
                for n, v in zip(names, row)
            }

    def write_jsonl(self, fp: IO[str]) -> None:
        for record in self.iter_records():
            fp.write(json.dumps(record) + "\n")


def _summarize(arr: np.ndarray) -> TraceSummary:
    # Population variance: the trace is treated as an empirical law, not a sample.
    return TraceSummary(
        mean=float(np.mean(arr)),
        variance=float(np.mean(arr * arr) - np.mean(arr) ** 2),
        minimum=float(np.min(arr)),
        maximum=float(np.max(arr)),
    )


@dataclass(frozen=True)
class InventoryConfig:
    c: float  # unit purchase cost
    h: float  # coefficient on max(D - y, 0)
    p: float  # coefficient on max(y - D, 0)
    base_stock: float
    initial_inventory: float
    demand: Marginal
    horizon: int
    seed: int
    mode: str = "back_order"
    cost_convention: str = "as_written"

    def validate(self):
        check_seed(self.seed)
        if not isinstance(self.horizon, int) or self.horizon < 1:
            raise InvalidConfig(f"horizon must be an integer >= 1, got {self.horizon!r}")
        for name, v in (("c", self.c), ("h", self.h), ("p", self.p)):
            if v < 0:
                raise InvalidConfig(f"{name} must be >= 0, got {v}")
        if self.base_stock < 0:
            raise InvalidConfig(f"base stock must be >= 0, got {self.base_stock}")
        if self.mode not in MODES:
            raise InvalidConfig(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.cost_convention not in COST_CONVENTIONS:
            raise InvalidConfig(
                f"cost convention must be one of {COST_CONVENTIONS}, "
                f"got {self.cost_convention!r}"
            )
        self.demand.validate()


@dataclass(frozen=True)
class QueueConfig:
    interarrival: Marginal
    service: Marginal
    n_customers: int
    seed: int

    def validate(self):
        check_seed(self.seed)
        if not isinstance(self.n_customers, int) or self.n_customers < 1:
            raise InvalidConfig(
                f"n_customers must be an integer >= 1, got {self.n_customers!r}"
            )
        for name, m in (("interarrival", self.interarrival), ("service", self.service)):
            m.validate()
            if m.support_min() < 0:
                raise InvalidConfig(
                    f"{name} marginal can take negative values ({m.spec_string()}); "
                    f"queue marginals must be nonnegative-valued"
                )


def simulate_inventory(cfg: InventoryConfig) -> SimulationTrace:
    """Run the base-stock inventory process; the tracked quantity is the cost.

    Per period: y = max(I_prev, S) (orders are never negative), cost terms per
    the configured convention, then I = y − D (back orders) or max(y − D, 0)
    with supplied = min(D, y) (lost sales).
    """
    cfg.validate()
    n = cfg.horizon
    demand = substream(cfg.seed, DEMAND_STREAM)
    d = cfg.demand.sample(demand, n)

    inv_start = np.empty(n)
    order_up_to = np.empty(n)
    order_qty = np.empty(n)
    shortage = np.empty(n)
    surplus = np.empty(n)
    supplied = np.empty(n)
    cost = np.empty(n)
    inv_end = np.empty(n)

    lost_sales = cfg.mode == "lost_sales"
    inv = float(cfg.initial_inventory)
    s_level = float(cfg.base_stock)
    for k in range(n):
        y = max(inv, s_level)
        dk = float(d[k])
        short = max(dk - y, 0.0)
        over = max(y - dk, 0.0)
        if cfg.cost_convention == "as_written":
            ck = cfg.c * (y - inv) + cfg.h * short + cfg.p * over
        else:
            ck = cfg.c * (y - inv) + cfg.h * over + cfg.p * short
        inv_start[k] = inv
        order_up_to[k] = y
        order_qty[k] = y - inv
        shortage[k] = short
        surplus[k] = over
        supplied[k] = min(dk, y)
        cost[k] = ck
        inv = max(y - dk, 0.0) if lost_sales else y - dk
        inv_end[k] = inv

    columns = {
        "period": np.arange(1, n + 1),
        "inventory_start": inv_start,
        "order_up_to": order_up_to,
        "order_qty": order_qty,
        "demand": d,
        "shortage": shortage,
        "surplus": surplus,
        "supplied": supplied,
        "cost": cost,
        "inventory_end": inv_end,
    }
    return SimulationTrace(kind="inventory", columns=columns, tracked="cost")


def lindley_waits(increments: Sequence[float]) -> list[float]:
    """Waits from the recursion W_{k+1} = max(W_k + u_k, 0), starting at 0.

    Returns len(increments) + 1 waits, computed serially so that
    W_{k+1} >= W_k + u_k holds exactly in floating point.
    """
    w = 0.0
    waits = [w]
    for u in increments:
        w = max(w + u, 0.0)
        waits.append(w)
    return waits


def simulate_queue(cfg: QueueConfig) -> SimulationTrace:
    """Run the FCFS single-server queue; the tracked quantity is the wait."""
    cfg.validate()
    n = cfg.n_customers
    a = cfg.interarrival.sample(substream(cfg.seed, INTERARRIVAL_STREAM), n)
    s = cfg.service.sample(substream(cfg.seed, SERVICE_STREAM), n)
    increments = (s[: n - 1] - a[: n - 1]).tolist()
    w = np.array(lindley_waits(increments))
    columns = {
        "customer": np.arange(1, n + 1),
        "interarrival": a,
        "service": s,
        "wait": w,
    }
    return SimulationTrace(kind="queue", columns=columns, tracked="wait")


def verify_trace(trace: SimulationTrace) -> list[str]:
    """Zero-tolerance internal consistency checks; returns violation messages.

    Every check compares float quantities recomputed by the same operations
    the simulator used, so a clean simulator passes bit-exactly.
    """
    violations: list[str] = []
    cols = trace.columns
    if trace.kind == "queue":
        w = cols["wait"]
        if not (w >= 0).all():
            violations.append("negative wait")
        u = cols["service"][:-1] - cols["interarrival"][:-1]
        if not (w[1:] >= w[:-1] + u).all():
            violations.append("wait recursion violated")
    elif trace.kind == "inventory":
        d, y = cols["demand"], cols["order_up_to"]
        if not (cols["order_qty"] == y - cols["inventory_start"]).all():
            violations.append("order quantity mismatch")
        if not (cols["order_qty"] >= 0).all():
            violations.append("negative order")
        m = np.minimum(d, y)
        if not (cols["shortage"] == d - m).all():
            violations.append("shortage identity violated")
        if not (cols["surplus"] == y - m).all():
            violations.append("surplus identity violated")
        if not (cols["supplied"] == m).all():
            violations.append("supplied identity violated")
    return violations


def empirical_distribution(
    trace: SimulationTrace, fields: Sequence[str]
) -> tuple[SampleSpace, dict[str, RandomVariable]]:
    """Exact empirical joint law of the selected per-step fields.

    Duplicate field tuples merge; each distinct tuple becomes one outcome
    with probability count/n.  Float values convert to their exact binary
    rationals, so every exact-engine theorem applies to the result verbatim.
    """
    n = len(trace)
    if n == 0:
        raise EmptyTrace("cannot build an empirical distribution from an empty trace")
    unknown = [f for f in fields if f not in trace.columns]
    if unknown:
        raise KeyError(f"unknown trace fields {unknown}; have {list(trace.columns)}")
    counts: dict[tuple, int] = {}
    cols = [trace.columns[f] for f in fields]
    for row in zip(*cols):
        key = tuple(float(v) for v in row)
        counts[key] = counts.get(key, 0) + 1
    support = sorted(counts)
    space = make_space([Fraction(counts[t], n) for t in support])
    variables = {
        f: RandomVariable(space, [Fraction(t[i]) for t in support])
        for i, f in enumerate(fields)
    }
    return space, variables
