"""Binary sampling: best-first querying of interval midpoints ranked by lower-bound scores.

Both boundaries of the (normalized) domain are queried first. Every pair of
adjacent queried points then brackets exactly one candidate, its midpoint,
scored with :func:`binsample.regularity.score`. Each step queries the live
candidate with the lowest score (oldest first on ties) and replaces it with
the two midpoints of the halves it created.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .dyadic import MAX_DEPTH, ONE, ZERO, DyadicPoint, decode_point, encode_point
from .errors import ConditionViolation, Exhausted, InvalidInput
from .regularity import DistanceSpec, RegularityCondition, score, validate_custom
from .trace import QueryRecord, QueryTrace, ScaledObjective, check_domain

__all__ = [
    "Candidate",
    "DyadicPoint",
    "OptimizerState",
    "StoppingRule",
    "decode_point",
    "encode_point",
    "init",
    "normalize_domain",
    "optimize",
    "run",
    "step",
]

logger = logging.getLogger(__name__)

CUSTOM_GRID = 1001


@dataclass(frozen=True)
class StoppingRule:
    max_queries: Optional[int] = None
    epsilon: Optional[float] = None

    def __post_init__(self):
        if self.max_queries is None and self.epsilon is None:
            raise InvalidInput("stopping rule needs a query budget, an epsilon, or both")
        if self.max_queries is not None and self.max_queries < 3:
            raise InvalidInput(f"query budget must be >= 3, got {self.max_queries}")
        if self.epsilon is not None and not self.epsilon > 0:
            raise InvalidInput(f"epsilon must be > 0, got {self.epsilon}")

    @classmethod
    def queries(cls, T: int) -> "StoppingRule":
        return cls(max_queries=T)

    @classmethod
    def score_gap(cls, epsilon: float) -> "StoppingRule":
        return cls(epsilon=epsilon)

    @classmethod
    def either(cls, T: int, epsilon: float) -> "StoppingRule":
        return cls(max_queries=T, epsilon=epsilon)


@dataclass(frozen=True)
class Candidate:
    point: DyadicPoint
    left: tuple[DyadicPoint, float]
    right: tuple[DyadicPoint, float]
    score: float
    birth: int

    @property
    def width(self) -> float:
        return self.right[0].value - self.left[0].value


def normalize_domain(lo: float, hi: float, cond: RegularityCondition) -> RegularityCondition:
    """Express ``cond`` in the coordinate ``u = (x - lo) / (hi - lo)``."""
    lo, hi = check_domain(lo, hi)
    w = hi - lo
    if w == 1.0:
        return cond
    d = cond.distance
    if d.is_power:
        return RegularityCondition(cond.constant * w**d.p, d)
    g = d.g

    def g_scaled(u, g=g, w=w):
        return g(u * w)

    spec = DistanceSpec("convex", math.nan, g_scaled, float(g(w)), d.support / w)
    return RegularityCondition(cond.constant, spec)


@dataclass
class OptimizerState:
    objective: ScaledObjective
    cond: RegularityCondition
    ncond: RegularityCondition
    prune: bool = False
    records: list[QueryRecord] = field(default_factory=list)
    heap: list = field(default_factory=list)
    births: int = 0
    best_value: float = math.inf
    best_u: float = math.nan
    best_point: Optional[DyadicPoint] = None
    depth_cap_hit: bool = False
    suppressed: int = 0

    @property
    def domain(self) -> tuple[float, float]:
        return self.objective.lo, self.objective.hi

    def live_candidates(self) -> list[Candidate]:
        return [entry[2] for entry in self.heap if not self._stale(entry[0])]

    def lowest_score(self) -> float:
        """Lowest live score, or ``+inf`` when nothing is left."""
        self._drop_stale()
        return self.heap[0][0] if self.heap else math.inf

    def _stale(self, s: float) -> bool:
        return self.prune and s >= self.best_value

    def _drop_stale(self):
        while self.heap and self._stale(self.heap[0][0]):
            heapq.heappop(self.heap)

    def _record(self, point: DyadicPoint, fx: float, x: float, **kw) -> QueryRecord:
        u = point.value
        if fx < self.best_value:
            self.best_value, self.best_u, self.best_point = fx, u, point
        rec = QueryRecord(t=len(self.records) + 1, u=u, x=x, fx=fx, point=point, **kw)
        self.records.append(rec)
        return rec

    def _push(self, left: tuple[DyadicPoint, float], right: tuple[DyadicPoint, float]):
        mid = left[0].midpoint(right[0])
        if mid.depth > MAX_DEPTH:
            self.depth_cap_hit = True
            self.suppressed += 1
            return
        u_l, u_r = left[0].value, right[0].value
        assert (u_l + u_r) / 2 == mid.value
        s = score(self.ncond, u_l, u_r, left[1], right[1])
        if self._stale(s):
            return
        cand = Candidate(mid, left, right, s, self.births)
        self.births += 1
        heapq.heappush(self.heap, (s, cand.birth, cand))

    def _finish_query(self, rec: QueryRecord) -> QueryRecord:
        lb = self.lowest_score()
        rec = replace(rec, queue_lb=lb)
        self.records[-1] = rec
        return rec


def init(
    objective: Callable[[float], float],
    domain: tuple[float, float],
    cond: RegularityCondition,
    prune: bool = False,
) -> OptimizerState:
    """Query both boundaries and seed the queue with the midpoint candidate."""
    lo, hi = check_domain(*domain)
    if cond.distance.kind == "convex":
        report = validate_custom(cond.distance, CUSTOM_GRID)
        if not report.passed:
            raise ConditionViolation("; ".join(report.violations[:5]))
    state = OptimizerState(ScaledObjective(objective, lo, hi), cond, normalize_domain(lo, hi, cond), prune)
    x0, f0 = state.objective(0.0)
    state._record(ZERO, f0, x0)
    x1, f1 = state.objective(1.0)
    state._record(ONE, f1, x1)
    state._push((ZERO, f0), (ONE, f1))
    state._finish_query(state.records[-1])
    return state


def step(state: OptimizerState) -> QueryRecord:
    """Query the lowest-scored live candidate and enqueue its two children."""
    state._drop_stale()
    if not state.heap:
        raise Exhausted("no live candidates left")
    s, _, cand = heapq.heappop(state.heap)
    x, fx = state.objective(cand.point.value)
    # The first midpoint belongs to the initial three-query block.
    popped = None if len(state.records) == 2 else s
    state._record(
        cand.point,
        fx,
        x,
        popped_score=popped,
        bracket=(cand.left[0].value, cand.right[0].value),
    )
    state._push(cand.left, (cand.point, fx))
    state._push((cand.point, fx), cand.right)
    return state._finish_query(state.records[-1])


def _repeat_best(state: OptimizerState) -> QueryRecord:
    x, fx = state.objective(state.best_u)
    rec = state._record(state.best_point, fx, x, repeat=True)
    return state._finish_query(rec)


def _gap_reached(state: OptimizerState, epsilon: float) -> bool:
    lb = state.lowest_score()
    if lb == math.inf:
        return True
    return state.best_value - lb <= epsilon


def finish(state: OptimizerState, stop_reason: str = "") -> QueryTrace:
    return QueryTrace(
        records=list(state.records),
        best_value=state.best_value,
        best_x=state.objective.to_x(state.best_u),
        domain=state.domain,
        best_point=state.best_point,
        algorithm="binary",
        stop_reason=stop_reason,
        depth_cap_hit=state.depth_cap_hit,
        live_candidates=len(state.live_candidates()),
        suppressed=state.suppressed,
    )


def run(
    objective: Callable[[float], float],
    domain: tuple[float, float],
    cond: RegularityCondition,
    rule: StoppingRule,
    prune: bool = False,
) -> QueryTrace:
    """Run binary sampling until ``rule`` fires and return the query trace.

    With ``prune`` set, candidates scoring at or above the incumbent value are
    dropped; if the queue empties before the budget is spent, the incumbent
    point is re-queried for the remaining budget (records flagged ``repeat``).
    """
    state = init(objective, domain, cond, prune=prune)
    T, eps = rule.max_queries, rule.epsilon
    reason = ""
    while True:
        if T is not None and len(state.records) >= T:
            reason = "max_queries"
            break
        if eps is not None and _gap_reached(state, eps):
            reason = "score_gap"
            break
        try:
            step(state)
        except Exhausted:
            if T is None:
                reason = "exhausted"
                break
            _repeat_best(state)
    logger.debug("binary sampling stopped after %d queries (%s)", len(state.records), reason)
    return finish(state, reason)


def optimize(objective, domain, cond, T: int, prune: bool = False) -> QueryTrace:
    """Shorthand for a fixed budget of ``T`` queries."""
    return run(objective, domain, cond, StoppingRule.queries(T), prune)
