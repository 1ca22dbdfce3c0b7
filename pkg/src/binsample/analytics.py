"""Regret series, a brute-force grid oracle for the global minimum, and regret bounds.

All closed-form bounds use base-2 logarithms. The Lipschitz bound's final
step needs ``log 3 >= 3/2``, which holds for ``log2`` and fails for ``ln``.
Bounds are stated for the normalized domain ``[0, 1]``; pass a condition
already rescaled with :func:`binsample.sampler.normalize_domain`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import EvaluationError, InvalidInput
from .regularity import RegularityCondition, eval_distance
from .sampler import normalize_domain
from .trace import QueryTrace, check_domain

DEFAULT_GRID = 1_000_001


@dataclass(frozen=True)
class OracleResult:
    x_star: float
    f_star: float
    grid_points: int
    error_bound: float
    source: str = "grid"


def exact_oracle(x_star: float, f_star: float) -> OracleResult:
    """Oracle for an analytically known minimum (zero error)."""
    return OracleResult(float(x_star), float(f_star), 0, 0.0, "analytic")


def evaluate_many(objective: Callable, xs: np.ndarray) -> np.ndarray:
    """Evaluate on an array, vectorized when the objective supports it."""
    try:
        ys = np.asarray(objective(xs), dtype=float)
        if ys.shape == xs.shape:
            return ys
    except (TypeError, ValueError):
        pass
    return np.array([float(objective(float(x))) for x in xs])


def oracle_min(
    objective: Callable[[float], float],
    domain: tuple[float, float],
    cond: RegularityCondition,
    grid_points: int = DEFAULT_GRID,
) -> OracleResult:
    """Minimum over a uniform grid, with certified gap ``C * d(half spacing)``."""
    lo, hi = check_domain(*domain)
    if grid_points < 2:
        raise InvalidInput(f"grid_points must be >= 2, got {grid_points}")
    xs = np.linspace(lo, hi, grid_points)
    ys = evaluate_many(objective, xs)
    bad = ~np.isfinite(ys)
    if bad.any():
        i = int(np.argmax(bad))
        raise EvaluationError(float(xs[i]), float(ys[i]))
    i = int(np.argmin(ys))
    err = cond.bound((hi - lo) / (2 * (grid_points - 1)))
    return OracleResult(float(xs[i]), float(ys[i]), grid_points, err)


@dataclass
class RegretReport:
    cumulative: np.ndarray
    simple: np.ndarray
    bound: np.ndarray
    bound_name: str
    f_star_source: OracleResult

    @property
    def R_T(self) -> float:
        return float(self.cumulative[-1])

    @property
    def slack(self) -> float:
        """``T * oracle error``, the allowance added to every bound check."""
        return len(self.cumulative) * self.f_star_source.error_bound

    def satisfied(self) -> bool:
        return bool(self.R_T <= self.bound[-1] + self.slack)


def regret(
    trace: QueryTrace,
    oracle: OracleResult,
    cond: Optional[RegularityCondition] = None,
) -> RegretReport:
    """Cumulative and simple regret of ``trace`` against ``oracle.f_star``.

    ``cond`` is given in the trace's original coordinates; when present the
    matching closed-form bound is attached for every ``t >= 3`` (``nan`` before).
    """
    if not trace.records:
        raise InvalidInput("empty trace")
    fx = np.array(trace.values, dtype=float)
    inst = fx - oracle.f_star
    cumulative = np.cumsum(inst)
    simple = np.minimum.accumulate(fx) - oracle.f_star
    bound = np.full(len(fx), math.nan)
    name = ""
    if cond is not None:
        ncond = normalize_domain(*trace.domain, cond)
        name, fn = applicable_bound(ncond)
        for t in range(3, len(fx) + 1):
            bound[t - 1] = fn(t)
    return RegretReport(cumulative, simple, bound, name, oracle)


def decompose_T(T: int) -> tuple[int, int]:
    """The unique ``(a, B)`` with ``2**a + B + 1 == T`` and ``1 <= B <= 2**a``."""
    if T < 3:
        raise InvalidInput(f"T must be >= 3, got {T}")
    a = (T - 2).bit_length() - 1
    return a, T - 1 - (1 << a)


def bound_general(cond: RegularityCondition, T: int) -> float:
    """``C d(1/2) + C sum_{i<a} 2^i d(2^-i) + C B d(2^-a)`` on ``[0, 1]``."""
    a, B = decompose_T(T)
    d = cond.distance
    total = eval_distance(d, 0.5)
    total += math.fsum(math.ldexp(eval_distance(d, math.ldexp(1.0, -i)), i) for i in range(a))
    total += B * eval_distance(d, math.ldexp(1.0, -a))
    return cond.constant * total


def bound_lipschitz(L: float, T: int) -> float:
    if T < 3 or not L > 0:
        raise InvalidInput("need T >= 3 and L > 0")
    return L * math.log2(3 * T)


def bound_smooth(H: float, T: Optional[int] = None) -> float:
    if not H > 0:
        raise InvalidInput("need H > 0")
    return 2.25 * H


def bound_power(K: float, p: float, T: float) -> float:
    """``K/2^p + K (1 - (2T)^(1-p)) / (1 - 2^(1-p))``; the Lipschitz bound at ``p = 1``.

    ``T = math.inf`` gives the large-horizon limit.
    """
    if not (K > 0 and p >= 1 and T >= 3):
        raise InvalidInput("need K > 0, p >= 1, T >= 3")
    if p == 1:
        return bound_lipschitz(K, T) if math.isfinite(T) else math.inf
    r = 2.0 ** (1 - p)
    tail = 0.0 if math.isinf(T) else (2 * T) ** (1 - p)
    return K / 2**p + K * (1 - tail) / (1 - r)


def power_limit(K: float, p: float) -> float:
    """``(1 + 2^-p + 1 / (2^(p-1) - 1)) K``, the large-horizon bound for ``p > 1``."""
    return (1 + 2.0**-p + 1 / (2.0 ** (p - 1) - 1)) * K


def bound_convex(M: float, g_one: float, T: int) -> float:
    if not (M > 0 and g_one >= 0 and T >= 3):
        raise InvalidInput("need M > 0, g(1) >= 0, T >= 3")
    return M * g_one * math.log2(3 * T)


def applicable_bound(cond: RegularityCondition) -> tuple[str, Callable[[int], float]]:
    """Name and evaluator of the closed-form bound matching ``cond``'s class."""
    C, d = cond.constant, cond.distance
    if d.kind == "abs":
        return "lipschitz", lambda T: bound_lipschitz(C, T)
    if d.kind == "square":
        return "smooth", lambda T: bound_smooth(C, T)
    if d.kind == "power":
        return f"power_p{d.p:g}", lambda T: bound_power(C, d.p, T)
    return "convex", lambda T: bound_convex(C, d.g_one, T)
