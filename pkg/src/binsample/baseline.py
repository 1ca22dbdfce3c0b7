"""Piyavskii-Shubert lower-envelope method for L-Lipschitz objectives.

The envelope on a cell ``[x_l, x_r]`` is ``max(f_l - L|x - x_l|, f_r - L|x - x_r|)``;
its minimum sits where the two cones cross. Each step queries the lowest
trough over all cells and splits that cell in two.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

from .errors import ConditionViolation, InvalidInput, InvalidInterval
from .trace import QueryRecord, QueryTrace, ScaledObjective, check_domain

# Relative slack on the Lipschitz consistency check and on the endpoint test
# for degenerate troughs; both absorb rounding in f and in trough_x.
CONSISTENCY_RTOL = 1e-12
ENDPOINT_RTOL = 1e-12


@dataclass(frozen=True)
class EnvelopeCell:
    x_l: float
    x_r: float
    f_l: float
    f_r: float
    trough_x: float
    trough_v: float
    birth: int = 0

    @property
    def degenerate(self) -> bool:
        """Trough on an endpoint: the cell's lower bound is an already seen value."""
        tol = ENDPOINT_RTOL * (self.x_r - self.x_l)
        return self.trough_x - self.x_l <= tol or self.x_r - self.trough_x <= tol


def ps_trough(x_l: float, x_r: float, f_l: float, f_r: float, L: float) -> tuple[float, float]:
    """Minimizer and minimum of the two-cone envelope on ``[x_l, x_r]``."""
    if not x_l < x_r:
        raise InvalidInterval(f"need x_l < x_r, got [{x_l!r}, {x_r!r}]")
    if not L > 0:
        raise InvalidInput(f"L must be > 0, got {L!r}")
    w = x_r - x_l
    if abs(f_l - f_r) > L * w * (1 + CONSISTENCY_RTOL) + 1e-15:
        raise ConditionViolation(
            f"|f({x_l!r}) - f({x_r!r})| = {abs(f_l - f_r)!r} exceeds L*|dx| = {L * w!r}"
        )
    tx = (f_l - f_r + L * (x_l + x_r)) / (2 * L)
    tx = min(max(tx, x_l), x_r)
    tv = (f_l + f_r) / 2 - L * w / 2
    return tx, tv


def _cell(x_l, x_r, f_l, f_r, L, birth) -> EnvelopeCell:
    tx, tv = ps_trough(x_l, x_r, f_l, f_r, L)
    return EnvelopeCell(x_l, x_r, f_l, f_r, tx, tv, birth)


def ps_run(objective: Callable[[float], float], domain: tuple[float, float], L: float, T: int) -> QueryTrace:
    """Run Piyavskii-Shubert for exactly ``T`` queries.

    Works on the normalized domain with constant ``L * (hi - lo)``. Cells
    whose trough lands on an endpoint are retired without a query. Whenever
    the incumbent value is below every live trough, the envelope minimum is
    the incumbent itself and it is re-queried (``repeat`` records).
    """
    lo, hi = check_domain(*domain)
    if T < 3:
        raise InvalidInput(f"T must be >= 3, got {T}")
    if not L > 0:
        raise InvalidInput(f"L must be > 0, got {L!r}")
    Ln = L * (hi - lo)
    f = ScaledObjective(objective, lo, hi)
    records: list[QueryRecord] = []
    heap: list = []
    births = 0
    best = [math.inf, math.nan]

    def lowest() -> float:
        return heap[0][0] if heap else math.inf

    def record(u, x, fx, **kw):
        if fx < best[0]:
            best[0], best[1] = fx, u
        records.append(QueryRecord(t=len(records) + 1, u=u, x=x, fx=fx, **kw))

    def push(u_l, u_r, f_l, f_r):
        nonlocal births
        cell = _cell(u_l, u_r, f_l, f_r, Ln, births)
        births += 1
        if not cell.degenerate:
            heapq.heappush(heap, (cell.trough_v, cell.birth, cell))

    x0, f0 = f(0.0)
    record(0.0, x0, f0)
    x1, f1 = f(1.0)
    push(0.0, 1.0, f0, f1)
    record(1.0, x1, f1, queue_lb=lowest())

    while len(records) < T:
        # The envelope minimum is min(best, lowest live trough); when the
        # incumbent attains it, re-query the incumbent.
        if not heap or heap[0][0] > best[0]:
            x, fx = f(best[1])
            record(best[1], x, fx, queue_lb=lowest(), repeat=True)
            continue
        tv, _, cell = heapq.heappop(heap)
        u = cell.trough_x
        x, fx = f(u)
        push(cell.x_l, u, cell.f_l, fx)
        push(u, cell.x_r, fx, cell.f_r)
        record(u, x, fx, popped_score=tv, bracket=(cell.x_l, cell.x_r), queue_lb=lowest())

    return QueryTrace(
        records=records,
        best_value=best[0],
        best_x=f.to_x(best[1]),
        domain=(lo, hi),
        algorithm="ps",
        stop_reason="max_queries",
        live_candidates=len(heap),
    )

