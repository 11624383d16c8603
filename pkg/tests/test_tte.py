import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bayesinfo import oracle, tte
from bayesinfo.core import DomainError, ImproperPriorError
from bayesinfo.specfn import EULER_GAMMA, digamma, kl_gamma_step, pareto_entropy
from bayesinfo.tte import GammaPriorSpec, TTESampleSpec

# mpmath, 30 digits
PARAM_REF = {(1.0, 1): 0.42278433509846714, (2.0, 3): 0.50696584161412247,
             (0.5, 5): 1.4573183055163267, (1.0, 25): 1.7809157760723371,
             (4.0, 26): 1.0433938088985904}
PRED_REF = {(1.0, 1): 0.19314718055994531, (2.0, 3): 0.13295739854082173,
            (0.5, 5): 0.64147391637701412, (1.0, 25): 0.40367682180643671,
            (4.0, 26): 0.10324922295520702}


def test_reference_values():
    for (a, n), ref in PARAM_REF.items():
        assert tte.parameter_info(a, n) == pytest.approx(ref, abs=1e-12)
    for (a, n), ref in PRED_REF.items():
        assert tte.predictive_info(a, n) == pytest.approx(ref, abs=1e-12)


def test_parameter_info_examples():
    assert tte.parameter_info(1.0, 0) == 0.0
    assert tte.parameter_info(1.0, 1) == pytest.approx(1 - EULER_GAMMA, abs=1e-12)
    step = tte.parameter_info(1.0, 26) - tte.parameter_info(1.0, 25)
    assert step == pytest.approx(kl_gamma_step(26.0), abs=1e-12)
    assert step == pytest.approx(0.0190, abs=2e-4)


def test_recursion_examples():
    assert tte.parameter_info_recursive(3.0, 1) == kl_gamma_step(3.0)
    assert tte.parameter_info_recursive(2.0, 3) == pytest.approx(
        kl_gamma_step(2.0) + kl_gamma_step(3.0) + kl_gamma_step(4.0), abs=1e-15)
    with pytest.raises(DomainError):
        tte.parameter_info_recursive(1.0, 2.5)


@pytest.mark.parametrize("alpha", [0.25, 1.0, 3.5])
def test_recursion_matches_closed_form(alpha):
    ns = list(range(0, 101)) + [500, 2000, 10_000]
    for n in ns:
        assert abs(tte.parameter_info_recursive(alpha, n) - tte.parameter_info(alpha, n)) <= 1e-10


def test_predictive_info_examples():
    assert tte.predictive_info(1.0, 0) == 0.0
    assert tte.predictive_info(1.0, 1e9) == pytest.approx(1 - EULER_GAMMA, abs=1e-8)
    assert tte.predictive_info(1.0, 5) == pytest.approx(
        tte.parameter_info(1.0, 5) - tte.parameter_info(2.0, 5), abs=1e-12)


def test_predictive_limit_is_one_step_divergence():
    for a in (0.5, 2.0, 7.0):
        assert tte.predictive_info(a, 1e10) == pytest.approx(kl_gamma_step(a), abs=1e-8)


def test_observed_info_examples():
    assert tte.observed_param_info(1.0, TTESampleSpec(1, 0.0)) == pytest.approx(-EULER_GAMMA, abs=1e-12)
    assert tte.observed_predictive_info(1.0, TTESampleSpec(1, 0.0)) == pytest.approx(1.1931471805599453,
                                                                                      abs=1e-12)
    with pytest.raises(DomainError):
        tte.observed_param_info(1.0, TTESampleSpec(3))


@pytest.mark.parametrize("alpha,beta,n", [(1.0, 1.0, 1), (2.5, 0.3, 7), (0.5, 4.0, 20)])
def test_observed_info_plug_in(alpha, beta, n):
    prior = GammaPriorSpec(alpha, beta)
    s = beta * math.expm1(digamma(alpha + n) - digamma(alpha))
    sample = TTESampleSpec(n, s)
    assert tte.observed_param_info(prior, sample) == pytest.approx(tte.parameter_info(prior, n), abs=1e-12)
    expected = (pareto_entropy(alpha) - pareto_entropy(alpha + n)
                - (digamma(alpha + n) - digamma(alpha)))
    assert tte.observed_predictive_info(prior, sample) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("alpha,beta,n", [(1.0, 1.0, 3), (2.0, 5.0, 10)])
def test_observed_info_averages_to_expected(alpha, beta, n):
    rng = np.random.default_rng(11)
    N = 40_000
    theta = rng.gamma(alpha, 1.0 / beta, N)
    s = rng.gamma(n, 1.0 / theta)
    prior = GammaPriorSpec(alpha, beta)
    vals = np.array([tte.observed_param_info(prior, TTESampleSpec(n, x)) for x in s])
    se = vals.std(ddof=1) / math.sqrt(N)
    assert abs(vals.mean() - tte.parameter_info(prior, n)) <= 3 * se
    vals = np.array([tte.observed_predictive_info(prior, TTESampleSpec(n, x)) for x in s])
    se = vals.std(ddof=1) / math.sqrt(N)
    assert abs(vals.mean() - tte.predictive_info(prior, n)) <= 3 * se


def test_info_triple():
    for a in (0.5, 1.0, 2.0, 4.0):
        gaps = []
        for n in range(1, 51):
            t = tte.info_triple(a, n)
            assert t.meta["decomposition_holds"]
            assert abs(t.meta["decomposition_residual"]) <= 1e-12
            assert t.joint == t.parameter and t.dependence == 0.0
            gaps.append(t.parameter - t.predictive)
        assert np.all(np.diff(gaps) > 0)
    t0 = tte.info_triple(1.0, 0)
    assert (t0.parameter, t0.predictive, t0.joint) == (0.0, 0.0, 0.0)


def test_gap_is_shifted_parameter_info_so_falls_in_alpha():
    # the gap is the parameter information under shape alpha+1, hence decreasing in alpha
    for n in (1, 5, 25):
        alphas = np.linspace(0.25, 8, 32)
        gaps = [tte.parameter_info(a, n) - tte.predictive_info(a, n) for a in alphas]
        assert np.allclose(gaps, [tte.parameter_info(a + 1, n) for a in alphas], atol=1e-12)
        assert np.all(np.diff(gaps) < 0)


def test_monotone_in_alpha_and_n():
    alphas = np.linspace(0.25, 8, 32)
    ns = np.arange(1, 201)
    for f in (tte.parameter_info, tte.predictive_info):
        grid = np.array([[f(a, n) for n in ns] for a in alphas])
        assert np.all(np.diff(grid, axis=0) < 0)
        assert np.all(np.diff(grid, axis=1) > 0)


@given(st.floats(0.01, 100), st.floats(0.0, 1e4))
def test_predictive_bounded_by_parameter(a, n):
    mp = tte.predictive_info(a, n)
    assert -1e-12 <= mp <= tte.parameter_info(a, n) + 1e-12


def test_beta_invariance():
    for (a, n) in PARAM_REF:
        vals = {(tte.parameter_info(GammaPriorSpec(a, b), n), tte.predictive_info(GammaPriorSpec(a, b), n),
                 tte.censoring_loss(GammaPriorSpec(a, b), max(n, 2), 1).param_loss)
                for b in (0.1, 1.0, 10.0)}
        assert len(vals) == 1


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_closed_form_matches_quadrature(alpha, n):
    q = oracle.mi_quadrature_tte(alpha, n)
    assert q.converged
    assert tte.parameter_info(alpha, n) == pytest.approx(q.estimate, abs=1e-6)


def test_monte_carlo_agrees_and_weibull_is_invariant():
    s = oracle.MonteCarloSettings(seed=5, replications=50_000)
    exp_ = oracle.mi_montecarlo(oracle.TTEModel(2.0, 4), "parameter", s)
    wei = oracle.mi_montecarlo(oracle.TTEModel(2.0, 4, transform="weibull", q=2.0), "parameter",
                               oracle.MonteCarloSettings(seed=6, replications=50_000))
    ref = tte.parameter_info(2.0, 4)
    assert abs(exp_.estimate - ref) <= 3 * exp_.standard_error
    assert abs(wei.estimate - ref) <= 3 * wei.standard_error
    assert abs(wei.estimate - exp_.estimate) <= 3 * math.hypot(wei.standard_error, exp_.standard_error)
    pred = oracle.mi_montecarlo(oracle.TTEModel(2.0, 4, beta=3.0, transform="weibull"), "predictive", s)
    assert abs(pred.estimate - tte.predictive_info(2.0, 4)) <= 3 * pred.standard_error


def test_censoring_loss():
    assert tte.censoring_loss(1.0, 25, 25) == tte.CensoringLoss(0.0, 0.0)
    loss = tte.censoring_loss(1.0, 25, 20)
    assert loss.param_loss == pytest.approx(math.fsum(kl_gamma_step(k) for k in range(21, 26)), abs=1e-12)
    assert loss.param_loss == pytest.approx(0.10831273483915924, abs=1e-12)
    assert loss.predictive_loss == pytest.approx(0.0045130888457432488, abs=1e-12)
    for a in (1.0, 2.0):
        losses = [tte.censoring_loss(a, 25, r) for r in range(1, 26)]
        p = [l.param_loss for l in losses]
        q = [l.predictive_loss for l in losses]
        assert np.all(np.diff(p) < 0) and np.all(np.diff(q) < 0)
        assert all(b < a_ for a_, b in zip(p[:-1], q[:-1]))
    with pytest.raises(DomainError):
        tte.censoring_loss(1.0, 5, 6)
    with pytest.raises(DomainError):
        tte.censoring_loss(1.0, 5, 0)


def test_transforms_and_statistics():
    y = np.array([0.5, 1.0, 2.0])
    assert tte.sufficient_statistic(y).s_n == pytest.approx(3.5)
    assert tte.sufficient_statistic(y, "weibull", q=2.0).s_n == pytest.approx(5.25)
    assert tte.sufficient_statistic([2.0, 4.0], "pareto1", a=2.0).s_n == pytest.approx(math.log(2))
    assert tte.sufficient_statistic(y, "pareto2").s_n == pytest.approx(math.log(1.5 * 2 * 3))
    with pytest.raises(DomainError):
        tte.transform("lognormal", y)
    with pytest.raises(DomainError):
        tte.sufficient_statistic([0.5], "pareto1", a=1.0)
    assert tte.total_time_on_test([3.0, 1.0, 2.0, 5.0], 2) == pytest.approx(1.0 + 3 * 2.0)
    assert tte.total_time_on_test([3.0, 1.0, 2.0], 3) == pytest.approx(6.0)


@pytest.mark.parametrize("alpha", [0.0, -1.0, math.nan])
def test_improper_prior_rejected(alpha):
    with pytest.raises(ImproperPriorError):
        tte.parameter_info(alpha, 3)
    with pytest.raises(ImproperPriorError):
        GammaPriorSpec(1.0, 0.0)
