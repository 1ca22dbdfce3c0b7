"""Regularity conditions ``|f(x) - f(x_E)| <= C * d(x - x_E)`` and interval scores.

A condition pairs a positive constant with a distance function ``d``. Four
distance families are supported: ``|u|``, ``|u|**2``, ``|u|**p`` for ``p >= 1``
and a user-supplied convex ``g``. Distances are always evaluated on ``|u|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConditionViolation, InvalidInput, InvalidInterval

ZERO_TOL = 1e-12
CONVEXITY_SLACK = 1e-9


@dataclass(frozen=True)
class DistanceSpec:
    """Distance function ``d``.

    ``kind`` is one of ``"abs"``, ``"square"``, ``"power"`` or ``"convex"``.
    The first three share one evaluation path through the exponent ``p``, so
    ``abs`` and ``power(1)`` (and ``square`` and ``power(2)``) agree bitwise.
    For ``convex``, ``g`` is defined on ``[0, support]`` and ``g_one = g(1)``.
    """

    kind: str
    p: float = 1.0
    g: Optional[Callable[[float], float]] = field(default=None, compare=False)
    g_one: float = math.nan
    support: float = 1.0

    def __post_init__(self):
        if self.kind not in ("abs", "square", "power", "convex"):
            raise InvalidInput(f"unknown distance kind {self.kind!r}")
        if self.kind == "convex":
            if self.g is None:
                raise InvalidInput("convex distance needs a callable g")
        elif not (math.isfinite(self.p) and self.p >= 1.0):
            raise InvalidInput(f"power exponent must be >= 1, got {self.p!r}")

    @classmethod
    def absolute(cls) -> "DistanceSpec":
        return cls("abs", 1.0)

    @classmethod
    def square(cls) -> "DistanceSpec":
        return cls("square", 2.0)

    @classmethod
    def power(cls, p: float) -> "DistanceSpec":
        return cls("power", float(p))

    @classmethod
    def convex(cls, g: Callable[[float], float], support: float = 1.0) -> "DistanceSpec":
        return cls("convex", math.nan, g, float(g(1.0)), float(support))

    @property
    def is_power(self) -> bool:
        return self.kind != "convex"

    def __call__(self, u: float) -> float:
        return eval_distance(self, u)


def _power(m: float, p: float) -> float:
    if p == 1.0:
        return m
    if p == 2.0:
        return m * m
    return m**p


def eval_distance(spec: DistanceSpec, u: float) -> float:
    """Return ``d(|u|)``."""
    u = float(u)
    if not math.isfinite(u):
        raise InvalidInput(f"distance argument must be finite, got {u!r}")
    m = abs(u)
    if spec.is_power:
        return _power(m, spec.p)
    if m > spec.support * (1.0 + 1e-12):
        raise InvalidInput(f"|u|={m!r} outside the support [0, {spec.support}] of g")
    v = float(spec.g(m))
    if not math.isfinite(v) or v < 0.0:
        raise ConditionViolation(f"g({m!r}) = {v!r} is negative or non-finite")
    return v


@dataclass(frozen=True)
class RegularityCondition:
    constant: float
    distance: DistanceSpec

    def __post_init__(self):
        c = float(self.constant)
        if not (math.isfinite(c) and c > 0.0):
            raise InvalidInput(f"regularity constant must be > 0, got {self.constant!r}")
        object.__setattr__(self, "constant", c)

    @classmethod
    def lipschitz(cls, L: float) -> "RegularityCondition":
        return cls(L, DistanceSpec.absolute())

    @classmethod
    def smooth(cls, H: float) -> "RegularityCondition":
        return cls(H, DistanceSpec.square())

    @classmethod
    def polynomial(cls, K: float, p: float) -> "RegularityCondition":
        return cls(K, DistanceSpec.power(p))

    @classmethod
    def general(cls, M: float, g: Callable[[float], float]) -> "RegularityCondition":
        return cls(M, DistanceSpec.convex(g))

    def bound(self, u: float) -> float:
        """``C * d(u)``."""
        return self.constant * eval_distance(self.distance, u)

    def __str__(self):
        return format_condition(self)


def score(cond: RegularityCondition, x0: float, x1: float, f0: float, f1: float) -> float:
    """Lower bound ``min(f0, f1) - C * d((x1 - x0) / 2)`` for ``f`` on ``[x0, x1]``."""
    if not x0 < x1:
        raise InvalidInterval(f"need x0 < x1, got [{x0!r}, {x1!r}]")
    if not (math.isfinite(f0) and math.isfinite(f1)):
        raise InvalidInput("endpoint values must be finite")
    return min(f0, f1) - cond.constant * eval_distance(cond.distance, (x1 - x0) / 2)


@dataclass
class ValidationReport:
    passed: bool
    violations: list[str]


def validate_custom(spec: DistanceSpec, grid_size: int) -> ValidationReport:
    """Grid check of a convex distance: ``g(0) = 0``, ``g >= 0`` and convexity."""
    if spec.kind != "convex":
        raise InvalidInput("validate_custom applies to convex distances only")
    if grid_size < 3:
        raise InvalidInput("grid_size must be >= 3")
    us = np.linspace(0.0, 1.0, grid_size)
    vals = np.array([float(spec.g(u)) for u in us])
    violations = []
    bad = ~np.isfinite(vals)
    for u in us[bad]:
        violations.append(f"non-finite value at u={u:.6g}")
    if abs(vals[0]) > ZERO_TOL:
        violations.append(f"g(0) = {vals[0]:.6g}, expected 0")
    for u, v in zip(us, vals):
        if v < -ZERO_TOL:
            violations.append(f"negative value {v:.6g} at u={u:.6g}")
    # On a uniform grid, discrete convexity is equivalent to non-negative
    # second differences, i.e. midpoint convexity between neighbours.
    second = vals[:-2] - 2 * vals[1:-1] + vals[2:]
    for i in np.nonzero(second < -2 * CONVEXITY_SLACK)[0]:
        violations.append(f"midpoint convexity fails around u={us[i + 1]:.6g}")
    return ValidationReport(not violations, violations)


def parse_condition(text: str) -> RegularityCondition:
    """Parse ``abs:<C>``, ``square:<C>`` or ``power:<p>:<C>``."""
    parts = text.strip().split(":")
    try:
        if parts[0] == "abs" and len(parts) == 2:
            return RegularityCondition.lipschitz(float(parts[1]))
        if parts[0] == "square" and len(parts) == 2:
            return RegularityCondition.smooth(float(parts[1]))
        if parts[0] == "power" and len(parts) == 3:
            return RegularityCondition.polynomial(float(parts[2]), float(parts[1]))
    except ValueError as exc:
        raise InvalidInput(f"bad condition spec {text!r}: {exc}") from None
    raise InvalidInput(f"bad condition spec {text!r}; expected abs:C, square:C or power:p:C")


def format_condition(cond: RegularityCondition) -> str:
    d = cond.distance
    c = f"{cond.constant:g}"
    if d.kind == "abs":
        return f"abs:{c}"
    if d.kind == "square":
        return f"square:{c}"
    if d.kind == "power":
        return f"power:{d.p:g}:{c}"
    return f"convex:{c}"
