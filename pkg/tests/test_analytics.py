import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from binsample import sampler
from binsample.analytics import (
    applicable_bound,
    bound_convex,
    bound_general,
    bound_lipschitz,
    bound_power,
    bound_smooth,
    decompose_T,
    exact_oracle,
    oracle_min,
    power_limit,
    regret,
)
from binsample.errors import EvaluationError, InvalidInput
from binsample.regularity import RegularityCondition
from oracles import brute_decompose, exact_general_bound

L1 = RegularityCondition.lipschitz(1.0)
H1 = RegularityCondition.smooth(1.0)
K3 = RegularityCondition.polynomial(1.0, 3)


def v1(x):
    return np.abs(x - 1 / 3)


# --- grid oracle ----------------------------------------------------------------

def test_oracle_v1_fine_grid():
    res = oracle_min(v1, (0, 1), L1, 10**6 + 1)
    assert res.f_star <= 5e-7
    assert res.error_bound == pytest.approx(5e-7, rel=1e-12)
    assert res.f_star - res.error_bound <= 0.0


def test_oracle_constant():
    res = oracle_min(lambda x: 7.0, (0, 1), L1, 11)
    assert res.f_star == 7.0


def test_oracle_minimizer_on_grid():
    res = oracle_min(lambda x: (x - 0.5) ** 2, (0, 1), H1, 101)
    assert res.x_star == 0.5 and res.f_star == 0.0


def test_oracle_scalar_only_objective():
    res = oracle_min(lambda x: abs(float(x) - 0.25), (0, 1), L1, 101)
    assert res.x_star == 0.25


def test_oracle_errors():
    with pytest.raises(InvalidInput):
        oracle_min(v1, (0, 1), L1, 1)
    with pytest.raises(EvaluationError), np.errstate(all="ignore"):
        oracle_min(lambda x: np.log(x - 0.5), (0, 1), L1, 11)


# --- regret series -----------------------------------------------------------------

def test_regret_at_optimum():
    tr = sampler.optimize(lambda x: 0.0, (0, 1), L1, 3)
    rep = regret(tr, exact_oracle(0.5, 0.0))
    assert list(rep.cumulative) == [0, 0, 0] and list(rep.simple) == [0, 0, 0]


def test_regret_hand_sequence():
    tr = sampler.optimize(v1, (0, 1), L1, 4)
    rep = regret(tr, exact_oracle(1 / 3, 0.0), L1)
    assert rep.cumulative == pytest.approx([1 / 3, 1, 7 / 6, 5 / 4], abs=1e-12)
    assert rep.simple == pytest.approx([1 / 3, 1 / 3, 1 / 6, 1 / 12], abs=1e-12)
    assert math.isnan(rep.bound[0]) and math.isnan(rep.bound[1])
    assert rep.bound[3] == pytest.approx(math.log2(12))
    assert rep.bound_name == "lipschitz"


@pytest.mark.parametrize("T", [10, 100, 500])
def test_regret_consistency(T):
    f = lambda x: np.sin(13 * x) * np.sin(27 * x) + 1
    cond = RegularityCondition.lipschitz(40)
    tr = sampler.optimize(f, (0, 1), cond, T)
    rep = regret(tr, oracle_min(f, (0, 1), cond, 100_001))
    inc = np.array(tr.values) - rep.f_star_source.f_star
    assert rep.R_T == pytest.approx(math.fsum(inc), rel=1e-9)
    assert np.all(np.diff(rep.simple) <= 0)
    assert np.all(np.diff(rep.cumulative) >= -2 * rep.f_star_source.error_bound)


def test_regret_bound_uses_normalized_condition():
    tr = sampler.optimize(lambda x: abs(x - 1.3), (0, 2), L1, 10)
    rep = regret(tr, exact_oracle(1.3, 0.0), L1)
    assert rep.bound[-1] == pytest.approx(bound_lipschitz(2.0, 10))


# --- decomposition ------------------------------------------------------------------

@pytest.mark.parametrize("T,expected", [(3, (0, 1)), (5, (1, 2)), (10, (3, 1))])
def test_decompose_examples(T, expected):
    assert decompose_T(T) == expected


def test_decompose_bijection():
    for T in range(3, 2**20 + 1, 7):
        a, B = decompose_T(T)
        assert 2**a + B + 1 == T and 1 <= B <= 2**a
    for T in list(range(3, 200)) + [2**20, 2**20 - 1, 2**19 + 2]:
        assert brute_decompose(T) == [decompose_T(T)]


def test_decompose_invalid():
    with pytest.raises(InvalidInput):
        decompose_T(2)


# --- bounds -----------------------------------------------------------------------

@pytest.mark.parametrize(
    "cond,T,expected", [(L1, 5, 2.5), (H1, 5, 1.75), (L1, 3, 1.5)]
)
def test_general_examples(cond, T, expected):
    assert bound_general(cond, T) == expected


@pytest.mark.parametrize("p", [1, 2, 3, 4])
@pytest.mark.parametrize("T", [3, 4, 5, 6, 17, 100, 1023, 1025, 12345])
def test_general_matches_exact_rational(p, T):
    cond = RegularityCondition.polynomial(1.5, p)
    assert bound_general(cond, T) == pytest.approx(float(exact_general_bound(1.5, p, T)), rel=1e-14)


def test_lipschitz_examples():
    assert bound_lipschitz(1, 5) == pytest.approx(3.9068905956, abs=1e-9)
    assert bound_lipschitz(2, 3) == pytest.approx(6.3398500029, abs=1e-9)
    assert bound_lipschitz(1, 2**10) == pytest.approx(11.5849625007, abs=1e-9)
    assert bound_lipschitz(1, 5) >= bound_general(L1, 5)


def test_smooth_examples():
    assert bound_smooth(1) == 2.25
    assert bound_smooth(4) == 9.0
    assert bound_smooth(1, 10**9) == 2.25


def test_power_examples():
    assert bound_power(1, 1, 5) == pytest.approx(math.log2(15))
    assert bound_power(1, 2, math.inf) == 2.25
    assert bound_power(1, 3, math.inf) == pytest.approx(1 + 0.125 + 1 / 3, abs=1e-12)
    assert power_limit(1, 3) == pytest.approx(bound_power(1, 3, math.inf), abs=1e-12)


def test_convex_examples():
    assert bound_convex(1, 1, 5) == pytest.approx(math.log2(15))
    assert bound_convex(1, 0, 100) == 0
    assert bound_convex(2, 0.5, 3) == pytest.approx(3.1699250014, abs=1e-9)


def test_bound_domain_errors():
    with pytest.raises(InvalidInput):
        bound_lipschitz(1, 2)
    with pytest.raises(InvalidInput):
        bound_power(1, 0.5, 10)
    with pytest.raises(InvalidInput):
        bound_convex(1, -1, 10)


@given(st.integers(3, 10**5))
def test_general_below_closed_forms(T):
    assert bound_general(L1, T) <= bound_lipschitz(1, T)
    assert bound_general(H1, T) <= bound_smooth(1, T)
    assert bound_general(K3, T) <= bound_power(1, 3, T)
    g = RegularityCondition.general(1.0, lambda u: math.exp(u) - 1)
    assert bound_general(g, T) <= bound_convex(1, g.distance.g_one, T)


@given(st.integers(3, 10**5), st.floats(1, 6), st.floats(0, 3))
def test_power_nonincreasing_in_p(T, p, dp):
    assert bound_power(1, p + dp, T) <= bound_power(1, p, T) * (1 + 1e-12)


@given(st.integers(3, 10**5))
def test_power2_between_general_and_smooth(T):
    assert bound_general(H1, T) <= bound_power(1, 2, T) <= 2.25


def test_applicable_bound_names():
    assert applicable_bound(L1)[0] == "lipschitz"
    assert applicable_bound(H1)[0] == "smooth"
    assert applicable_bound(K3)[0] == "power_p3"
    assert applicable_bound(RegularityCondition.general(1, lambda u: u))[0] == "convex"
