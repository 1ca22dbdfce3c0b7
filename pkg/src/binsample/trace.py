"""Query traces shared by the binary sampler and the Piyavskii-Shubert baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .dyadic import DyadicPoint
from .errors import EvaluationError, InvalidDomain


@dataclass(frozen=True)
class QueryRecord:
    """One query. ``u`` is the normalized location in ``[0, 1]``, ``x`` the original one.

    ``bracket`` holds the normalized neighbours ``(u_l, u_r)`` of a popped
    candidate, ``queue_lb`` the lowest live score right after the query and
    ``repeat`` marks re-queries of the incumbent once the queue ran dry.
    """

    t: int
    u: float
    x: float
    fx: float
    popped_score: Optional[float] = None
    point: Optional[DyadicPoint] = None
    bracket: Optional[tuple[float, float]] = None
    queue_lb: float = math.nan
    repeat: bool = False


@dataclass
class QueryTrace:
    records: list[QueryRecord]
    best_value: float
    best_x: float
    domain: tuple[float, float]
    best_point: Optional[DyadicPoint] = None
    algorithm: str = "binary"
    stop_reason: str = ""
    depth_cap_hit: bool = False
    live_candidates: int = 0
    suppressed: int = 0

    @property
    def T(self) -> int:
        return len(self.records)

    @property
    def xs(self) -> list[float]:
        return [r.x for r in self.records]

    @property
    def values(self) -> list[float]:
        return [r.fx for r in self.records]


def check_domain(lo: float, hi: float) -> tuple[float, float]:
    lo, hi = float(lo), float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise InvalidDomain(f"need finite lo < hi, got ({lo!r}, {hi!r})")
    return lo, hi


@dataclass
class ScaledObjective:
    """Objective viewed on ``[0, 1]`` through ``x = lo + u * (hi - lo)``."""

    objective: Callable[[float], float]
    lo: float
    hi: float
    calls: int = field(default=0)

    def to_x(self, u: float) -> float:
        if u == 1.0:
            return self.hi
        return self.lo + u * (self.hi - self.lo)

    def __call__(self, u: float) -> tuple[float, float]:
        x = self.to_x(u)
        fx = float(self.objective(x))
        self.calls += 1
        if not math.isfinite(fx):
            raise EvaluationError(x, fx)
        return x, fx
