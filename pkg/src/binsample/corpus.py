"""Univariate test objectives with known regularity constants and minima.

Every objective accepts scalars and numpy arrays. Each attached condition is
tagged with where its constant came from (``analytic`` or ``numeric``) and
whether it holds between arbitrary pairs of points (``pointwise``) or only
around interior local extrema.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .analytics import evaluate_many
from .errors import EvaluationError, InvalidInput
from .regularity import RegularityCondition

SAFETY_MARGIN = 1.05
CERTIFY_GRID = 100_001
PAIR_TOL = 1e-9


@dataclass(frozen=True)
class AttachedCondition:
    cond: RegularityCondition
    provenance: str
    pointwise: bool

    def __str__(self):
        return f"{self.cond} ({self.provenance}{', pointwise' if self.pointwise else ''})"


@dataclass(frozen=True)
class TestFunction:
    id: str
    evaluate: Callable
    domain: tuple[float, float]
    known_min: Optional[tuple[float, float]] = None
    conditions: tuple[AttachedCondition, ...] = field(default=())
    description: str = ""

    __test__ = False  # keep pytest from collecting this class

    def __call__(self, x):
        return self.evaluate(x)

    def condition(self, kind: str) -> RegularityCondition:
        """First attached condition whose distance kind is ``kind``."""
        for ac in self.conditions:
            if ac.cond.distance.kind == kind:
                return ac.cond
        raise KeyError(f"{self.id} has no {kind} condition")

    def attached(self, kind: str) -> AttachedCondition:
        for ac in self.conditions:
            if ac.cond.distance.kind == kind:
                return ac
        raise KeyError(f"{self.id} has no {kind} condition")

    def with_condition(self, ac: AttachedCondition) -> "TestFunction":
        return TestFunction(self.id, self.evaluate, self.domain, self.known_min,
                            self.conditions + (ac,), self.description)


def v1(x):
    return np.abs(x - 1 / 3)


def q1(x):
    return (x - 0.5) ** 2


def s1(x):
    return np.sin(13 * x) * np.sin(27 * x) + 1


W1_CENTERS = (0.13, 0.37, 0.61, 0.87)
W1_DEPTHS = (0.4, 0.15, 0.0, 0.25)
W1_SLOPE = 3.0


def w1(x):
    x = np.asarray(x, dtype=float)
    teeth = [h + W1_SLOPE * np.abs(x - c) for c, h in zip(W1_CENTERS, W1_DEPTHS)]
    out = np.minimum.reduce(teeth)
    return float(out) if out.ndim == 0 else out


def p3(x):
    return np.abs(x - 0.4) ** 3


def c1(x):
    return np.cosh(x - 0.3) - 1


def certify_constant(f: TestFunction, kind: str, grid_points: int = CERTIFY_GRID) -> AttachedCondition:
    """Numeric Lipschitz (``"abs"``) or smoothness (``"square"``) constant.

    Takes the largest central first (resp. second) difference on a uniform
    grid and inflates it by 5%. For ``"square"`` the constant is half the
    second-derivative bound.
    """
    if grid_points < 3:
        raise InvalidInput("grid_points must be >= 3")
    lo, hi = f.domain
    xs = np.linspace(lo, hi, grid_points)
    h = (hi - lo) / (grid_points - 1)
    ys = evaluate_many(f.evaluate, xs)
    if kind == "abs":
        diffs = (ys[2:] - ys[:-2]) / (2 * h)
        pointwise = True
    elif kind == "square":
        diffs = (ys[2:] - 2 * ys[1:-1] + ys[:-2]) / (h * h) / 2
        pointwise = False
    else:
        raise InvalidInput(f"can only certify abs or square constants, not {kind!r}")
    if not np.all(np.isfinite(diffs)):
        i = int(np.argmax(~np.isfinite(diffs)))
        raise EvaluationError(float(xs[i + 1]), float(diffs[i]))
    c = float(np.max(np.abs(diffs))) * SAFETY_MARGIN
    cond = RegularityCondition.lipschitz(c) if kind == "abs" else RegularityCondition.smooth(c)
    return AttachedCondition(cond, "numeric", pointwise)


def interior_extrema(f: TestFunction, grid_points: int = 20_001) -> list[float]:
    """Interior local minima and maxima, located on a grid and refined by golden section."""
    lo, hi = f.domain
    xs = np.linspace(lo, hi, grid_points)
    ys = evaluate_many(f.evaluate, xs)
    found = []
    for i in range(1, grid_points - 1):
        a, b, c = ys[i - 1], ys[i], ys[i + 1]
        if b <= a and b <= c and (b < a or b < c):
            found.append(_golden(f.evaluate, xs[i - 1], xs[i + 1], 1.0))
        elif b >= a and b >= c and (b > a or b > c):
            found.append(_golden(f.evaluate, xs[i - 1], xs[i + 1], -1.0))
    if f.known_min is not None and lo < f.known_min[0] < hi:
        found.append(f.known_min[0])
    return sorted(set(found))


def _golden(fn, a, b, sign, tol=1e-13):
    invphi = (math.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = sign * float(fn(c)), sign * float(fn(d))
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = sign * float(fn(c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = sign * float(fn(d))
    return (a + b) / 2


def validate_condition(f: TestFunction, ac: AttachedCondition, n_pairs: int = 10_000, seed: int = 0) -> list[str]:
    """Random-sample check of ``|f(x) - f(y)| <= C d(x - y)``.

    Pointwise conditions are checked on ``n_pairs`` random pairs; the others
    between ``n_pairs`` random points and every interior local extremum.
    """
    rng = np.random.default_rng(seed)
    lo, hi = f.domain
    xs = rng.uniform(lo, hi, n_pairs)
    if ac.pointwise:
        ys = rng.uniform(lo, hi, n_pairs)
        pairs = [(xs, ys)]
    else:
        pairs = [(xs, np.full(n_pairs, e)) for e in interior_extrema(f)]
    d = ac.cond.distance
    bad = []
    for a, b in pairs:
        lhs = np.abs(evaluate_many(f.evaluate, a) - evaluate_many(f.evaluate, b))
        rhs = ac.cond.constant * np.array([d(u) for u in a - b])
        for i in np.nonzero(lhs > rhs + PAIR_TOL)[0][:5]:
            bad.append(f"{f.id} {ac.cond}: |f({a[i]:.6g}) - f({b[i]:.6g})| = {lhs[i]:.3g} > {rhs[i]:.3g}")
    return bad


def _analytic(cond, pointwise):
    return AttachedCondition(cond, "analytic", pointwise)


@lru_cache(maxsize=1)
def builtin_corpus() -> tuple[TestFunction, ...]:
    L, H, K = RegularityCondition.lipschitz, RegularityCondition.smooth, RegularityCondition.polynomial
    fns = [
        TestFunction("V1", v1, (0.0, 1.0), (1 / 3, 0.0),
                     (_analytic(L(1.0), True),),
                     "|x - 1/3|, non-dyadic minimizer"),
        TestFunction("Q1", q1, (0.0, 1.0), (0.5, 0.0),
                     (_analytic(H(1.0), False), _analytic(L(1.0), True)),
                     "(x - 0.5)^2"),
        TestFunction("W1", w1, (0.0, 1.0), (0.61, 0.0),
                     (_analytic(L(W1_SLOPE), True),),
                     "4-tooth piecewise-linear sawtooth, slope 3"),
        TestFunction("P3", p3, (0.0, 1.0), (0.4, 0.0),
                     (_analytic(K(1.0, 3), False), _analytic(L(3 * 0.6**2), True),
                      _analytic(H(3 * 0.6), False)),
                     "|x - 0.4|^3"),
        TestFunction("C1", c1, (0.0, 1.0), (0.3, 0.0),
                     (_analytic(H(math.cosh(0.7) / 2), False), _analytic(L(math.sinh(0.7)), True)),
                     "cosh(x - 0.3) - 1"),
    ]
    s = TestFunction("S1", s1, (0.0, 1.0), None, (), "sin(13x) sin(27x) + 1, multimodal")
    s = s.with_condition(certify_constant(s, "abs")).with_condition(certify_constant(s, "square"))
    fns.insert(2, s)
    return tuple(fns)


def get(fn_id: str) -> TestFunction:
    for f in builtin_corpus():
        if f.id == fn_id:
            return f
    raise KeyError(fn_id)
