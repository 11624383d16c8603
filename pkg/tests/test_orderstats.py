import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bayesinfo import oracle, orderstats, tte
from bayesinfo.core import DomainError
from bayesinfo.orderstats import OrderStatPlan
from bayesinfo.specfn import kl_gamma_step

# mpmath, 30 digits
MARKOV_REF = {(2, 1): 0.30685281944005469, (6, 3): 0.70426772644600901, (26, 13): 1.3740609333583889,
              (26, 5): 1.1516420351641438, (10, 7): 0.85219079690049369}


def test_markov_reference_values():
    for (n, r), ref in MARKOV_REF.items():
        assert orderstats.markov_dependence_info(n, r) == pytest.approx(ref, abs=1e-12)
    assert orderstats.markov_dependence_info(2, 1) == pytest.approx(1 - math.log(2), abs=1e-14)


def test_markov_symmetry_and_median():
    assert abs(orderstats.markov_dependence_info(26, 5) - orderstats.markov_dependence_info(26, 21)) <= 1e-12
    assert orderstats.markov_argmax(26) == [13]
    assert orderstats.markov_argmax(7) == [3, 4]
    for n in range(2, 61):
        vals = [orderstats.markov_dependence_info(n, r) for r in range(1, n)]
        assert min(vals) >= 0
        for r in range(1, n):
            assert abs(vals[r - 1] - vals[n - r - 1]) <= 1e-12
        best = max(vals)
        top = [r for r, v in zip(range(1, n), vals) if best - v <= 1e-12]
        assert top == sorted({n // 2, (n + 1) // 2})
        assert orderstats.markov_argmax(n) == top


def test_markov_increasing_in_n():
    for r in range(1, 30):
        vals = [orderstats.markov_dependence_info(n, r) for n in range(r + 1, 80)]
        assert np.all(np.diff(vals) > 0)


@pytest.mark.parametrize("n", range(2, 11))
def test_markov_matches_uniform_quadrature(n):
    for r in range(1, n):
        q = oracle.mi_quadrature_consecutive_uniform_order_stats(n, r)
        assert q.converged
        assert abs(orderstats.markov_dependence_info(n, r) - q.estimate) <= 1e-6


@pytest.mark.parametrize("n,r", [(4, 1), (5, 2), (8, 6)])
def test_parent_invariance_by_monte_carlo(n, r):
    ref = orderstats.markov_dependence_info(n, r)
    est = {}
    for k, (parent, theta) in enumerate([("exponential", 1.0), ("exponential", 7.0), ("weibull", 0.3)]):
        m = oracle.OrderStatModel(n, r, parent=parent, theta=theta, q=2.5)
        est[parent, theta] = oracle.mi_montecarlo(
            m, "conditional-dependence", oracle.MonteCarloSettings(seed=40 + k, replications=60_000))
        assert abs(est[parent, theta].estimate - ref) <= 3 * est[parent, theta].standard_error
    a, b = est["exponential", 1.0], est["weibull", 0.3]
    assert abs(a.estimate - b.estimate) <= 3 * math.hypot(a.standard_error, b.standard_error)


def test_block_dependence():
    assert orderstats.block_dependence_info(20, 3, 4) == orderstats.markov_dependence_info(20, 7)
    with pytest.raises(DomainError):
        orderstats.block_dependence_info(5, 3, 2)


def test_plan_validation():
    with pytest.raises(DomainError):
        OrderStatPlan(1, 1)
    with pytest.raises(DomainError):
        OrderStatPlan(5, 0)
    with pytest.raises(DomainError):
        OrderStatPlan(5, 6)
    with pytest.raises(DomainError):
        orderstats.markov_dependence_info(5, 5)
    assert OrderStatPlan(5, 5).r == 5


def test_joint_info_next_order_stat():
    for a in (0.5, 1.0, 2.0, 4.0):
        for r in range(1, 26):
            t = orderstats.joint_info_next_order_stat(26, a, r)
            assert t.parameter == tte.parameter_info(a, r)
            assert t.dependence == orderstats.markov_dependence_info(26, r)
            assert t.joint > t.parameter
            assert t.predictive is None


def test_dependence_is_free_of_the_prior():
    curves = [orderstats.joint_curve(26, a) for a in (0.5, 1.0, 2.0, 4.0)]
    assert len({c.dependence for c in curves}) == 1


def test_joint_curve_argmax():
    c = orderstats.joint_curve(26, 0.5)
    assert c.r == tuple(range(1, 26))
    assert c.argmax == (17,)
    assert c.joint[16] == pytest.approx(3.3837647441903986, abs=1e-12)
    for a in (1.0, 2.0, 4.0):
        assert orderstats.joint_curve(26, a).argmax == (17,)


@given(st.integers(2, 40), st.floats(0.1, 20), st.data())
def test_joint_decomposition(n, alpha, data):
    r = data.draw(st.integers(1, n - 1))
    t = orderstats.joint_info_next_order_stat(OrderStatPlan(n, r), tte.GammaPriorSpec(alpha, 3.0))
    assert t.joint == t.parameter + t.dependence


@pytest.mark.parametrize("n,r,alpha", [(5, 2, 1.0), (10, 5, 2.0), (4, 1, 0.5), (8, 6, 3.0)])
def test_theorem4b_consistency(n, r, alpha):
    c = orderstats.theorem4b_order_check(n, alpha, r)
    assert c.converged
    assert c.parameter_step == kl_gamma_step(alpha + r)
    assert c.lhs_ge["i"] is not None and c.lhs_ge["ii"] is not None
    assert c.consistent is True
    # chain rule: both gaps are the same number
    assert abs((c.predictive - c.markov) - (c.theta_next - c.parameter_step)) <= 1e-7


def test_theorem4b_example_values():
    c = orderstats.theorem4b_order_check(5, 1.0, 2)
    assert c.theta_next == pytest.approx(0.79700, abs=1e-5)
    assert c.parameter_step == pytest.approx(0.15751, abs=1e-5)
    assert c.predictive == pytest.approx(1.25358, abs=1e-5)
    assert c.markov == pytest.approx(0.61408, abs=1e-5)
    assert c.lhs_ge == {"i": True, "ii": True}
    d = c.as_dict()
    assert d["consistent"] is True and d["n"] == 5


def test_theorem4b_indeterminate_with_wide_tolerance():
    c = orderstats.theorem4b_order_check(5, 1.0, 2, tolerance=10.0)
    assert c.lhs_ge == {"i": None, "ii": None}
    assert c.consistent is None


def test_theorem4b_unconverged_is_reported():
    tight = oracle.QuadratureSettings(relative_tolerance=1e-15, absolute_tolerance=1e-16, max_subdivisions=16)
    c = orderstats.theorem4b_order_check(5, 1.0, 2, settings=tight)
    assert not c.converged
    assert c.consistent is None and c.lhs_ge == {"i": None, "ii": None}


def test_order_stat_parameter_oracle_matches_sufficiency():
    # the minimum of n exponentials carries the information of one exponential observation
    for n, a in [(3, 1.0), (6, 2.5)]:
        q = oracle.mi_quadrature_order_stat_parameter(n, 1, a)
        assert q.converged
        assert q.estimate == pytest.approx(tte.parameter_info(a, 1), abs=1e-8)


def test_bridge_measures():
    b = orderstats.bridge_measures(26, 0.5, 13)
    assert b.correction == pytest.approx(math.log(2), abs=1e-15)
    assert b.bridge_param + b.correction == tte.parameter_info(0.5, 13)
    assert b.bridge_pred == pytest.approx(b.predictive - math.log(2), abs=1e-15)
    assert b.meta["converged"]
    small = orderstats.bridge_measures(10 ** 6, 1.0, 1)
    assert small.correction < 2e-6
    assert small.bridge_param == pytest.approx(small.parameter, abs=2e-6)
    with pytest.raises(DomainError):
        orderstats.bridge_measures(5, 1.0, 5)


def test_bridge_predictive_agrees_with_chain_rule():
    n, r, a = 6, 3, 1.5
    b = orderstats.bridge_measures(n, a, r)
    c = orderstats.theorem4b_order_check(n, a, r)
    assert b.predictive == pytest.approx(c.predictive, abs=1e-9)
