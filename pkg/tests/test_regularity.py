import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from binsample.errors import ConditionViolation, InvalidInput, InvalidInterval
from binsample.regularity import (
    DistanceSpec,
    RegularityCondition,
    eval_distance,
    format_condition,
    parse_condition,
    score,
    validate_custom,
)

unit = st.floats(-1.0, 1.0, allow_nan=False)
finite = st.floats(-1e6, 1e6, allow_nan=False)
powers = st.floats(1.0, 8.0)


def test_distance_examples():
    assert eval_distance(DistanceSpec.absolute(), -0.5) == 0.5
    assert eval_distance(DistanceSpec.square(), 0.25) == 0.0625
    assert eval_distance(DistanceSpec.power(3), 0.5) == 0.125


def test_distance_rejects_non_finite():
    with pytest.raises(InvalidInput):
        eval_distance(DistanceSpec.absolute(), math.nan)
    with pytest.raises(InvalidInput):
        eval_distance(DistanceSpec.square(), math.inf)


def test_power_below_one_rejected():
    with pytest.raises(InvalidInput):
        DistanceSpec.power(0.5)


def test_convex_negative_value_is_violation():
    spec = DistanceSpec.convex(lambda u: -u)
    with pytest.raises(ConditionViolation):
        eval_distance(spec, 0.5)


def test_convex_outside_support():
    with pytest.raises(InvalidInput):
        eval_distance(DistanceSpec.convex(lambda u: u * u), 1.5)


@given(unit, powers)
def test_distance_even_nonnegative(u, p):
    for spec in (DistanceSpec.absolute(), DistanceSpec.square(), DistanceSpec.power(p),
                 DistanceSpec.convex(lambda v: v * v)):
        assert eval_distance(spec, u) == eval_distance(spec, -u)
        assert eval_distance(spec, u) >= 0
    assert eval_distance(DistanceSpec.power(p), 0.0) == 0.0


@given(unit, unit, powers)
def test_distance_monotone_in_magnitude(u, v, p):
    if abs(u) > abs(v):
        u, v = v, u
    for spec in (DistanceSpec.absolute(), DistanceSpec.square(), DistanceSpec.power(p),
                 DistanceSpec.convex(lambda w: math.exp(w) - 1)):
        assert eval_distance(spec, u) <= eval_distance(spec, v)


@given(finite, finite, st.floats(-10, 10), st.floats(1e-6, 10), st.floats(1e-3, 100))
def test_power_aliases_bitwise(f0, f1, x0, w, c):
    x1 = x0 + w
    assume(x0 < x1)
    pairs = [(DistanceSpec.absolute(), DistanceSpec.power(1)), (DistanceSpec.square(), DistanceSpec.power(2))]
    for a, b in pairs:
        assert score(RegularityCondition(c, a), x0, x1, f0, f1) == score(RegularityCondition(c, b), x0, x1, f0, f1)


def test_score_examples():
    assert score(RegularityCondition.lipschitz(1), 0, 1, 0, 0) == -0.5
    assert score(RegularityCondition.lipschitz(2), 0, 0.5, 1, 3) == 0.5
    assert score(RegularityCondition.smooth(4), 0.5, 1, 2, 1) == 0.75


@pytest.mark.parametrize("x0,x1", [(1.0, 1.0), (1.0, 0.0)])
def test_score_bad_interval(x0, x1):
    with pytest.raises(InvalidInterval):
        score(RegularityCondition.lipschitz(1), x0, x1, 0, 0)


@given(st.floats(1e-9, 1), st.floats(0, 1), finite, finite, finite, powers)
def test_score_monotone(w, shrink, f0, f1, bump, p):
    cond = RegularityCondition.polynomial(2.0, p)
    base = score(cond, -w, w, f0, f1)
    h = w * (1 - shrink)
    assume(h > 0)
    assert score(cond, -h, h, f0, f1) >= base
    assert score(cond, -w, w, f0 + abs(bump), f1 + abs(bump)) >= base


def test_constant_must_be_positive():
    for c in (0.0, -1.0, math.nan, math.inf):
        with pytest.raises(InvalidInput):
            RegularityCondition.lipschitz(c)


def test_validate_custom_examples():
    assert validate_custom(DistanceSpec.convex(lambda u: u), 101).passed
    assert validate_custom(DistanceSpec.convex(lambda u: u * u), 101).passed
    rep = validate_custom(DistanceSpec.convex(lambda u: -u), 101)
    assert not rep.passed
    assert any("u=0.5" in v and "negative" in v for v in rep.violations)


def test_validate_custom_catches_nonconvex_and_offset():
    assert not validate_custom(DistanceSpec.convex(lambda u: math.sqrt(u)), 101).passed
    rep = validate_custom(DistanceSpec.convex(lambda u: u + 0.1), 101)
    assert any("g(0)" in v for v in rep.violations)


@pytest.mark.parametrize(
    "text,kind,c,p",
    [("abs:1", "abs", 1.0, 1.0), ("square:2.5", "square", 2.5, 2.0), ("power:3:1", "power", 1.0, 3.0)],
)
def test_parse_condition(text, kind, c, p):
    cond = parse_condition(text)
    assert (cond.distance.kind, cond.constant, cond.distance.p) == (kind, c, p)
    assert format_condition(cond) == text


@pytest.mark.parametrize("text", ["", "abs", "abs:x", "abs:-1", "cube:1", "power:0.5:1", "power:3"])
def test_parse_condition_rejects(text):
    with pytest.raises(InvalidInput):
        parse_condition(text)
