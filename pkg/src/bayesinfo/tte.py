"""Information for time-transformed exponential (TTE) models with gamma priors.

A TTE model has survival exp(-theta * phi(y)) for a one-to-one transform
phi; with a Gamma(alpha, beta) prior on theta the sufficient statistic is
s_n = sum phi(y_i). The expected measures depend only on (alpha, n): they
are unchanged by beta and by phi, so the transform is used only when
computing s_n from raw observations.

Closed forms accept real n >= 0 for design exploration; integer n is the
sample-size reading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bayesinfo.core import (
    DomainError,
    ImproperPriorError,
    InfoTriple,
    check_nonnegative,
)
from bayesinfo.specfn import digamma, gamma_entropy, kl_gamma_step, pareto_entropy

__all__ = [
    "CensoringLoss",
    "GammaPriorSpec",
    "TRANSFORMS",
    "TTESampleSpec",
    "censoring_loss",
    "info_triple",
    "observed_param_info",
    "observed_predictive_info",
    "parameter_info",
    "parameter_info_recursive",
    "predictive_info",
    "sufficient_statistic",
    "total_time_on_test",
    "transform",
]


@dataclass(frozen=True)
class GammaPriorSpec:
    alpha: float
    beta: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0:
                raise ImproperPriorError(
                    f"gamma prior {name} must be > 0 (got {value!r}); the improper "
                    "Jeffreys limit alpha -> 0 is not supported because entropy-based "
                    "measures under it depend on the parametrization"
                )
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class TTESampleSpec:
    n: int
    s_n: float | None = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"n must be a non-negative integer, got {self.n!r}")
        if self.s_n is not None:
            check_nonnegative("s_n", self.s_n)


def _prior(prior) -> GammaPriorSpec:
    if isinstance(prior, GammaPriorSpec):
        return prior
    return GammaPriorSpec(float(prior))


def _count(n) -> float:
    return check_nonnegative("n", n)


def parameter_info(prior, n: float) -> float:
    """M(Y; Theta), which is also the joint parameter-predictive information."""
    a = _prior(prior).alpha
    n = _count(n)
    if n == 0:
        return 0.0
    return gamma_entropy(a) - gamma_entropy(a + n) + digamma(a + n) - digamma(a)


def parameter_info_recursive(prior, n: int) -> float:
    """Sum of one-observation increments K_G(alpha + k), k = 0..n-1."""
    a = _prior(prior).alpha
    if int(n) != n or n < 0:
        raise DomainError("the recursion needs an integer n >= 0")
    return math.fsum(kl_gamma_step(a + k) for k in range(int(n)))


def predictive_info(prior, n: float) -> float:
    """M(Y; Y_nu) for one future observation; Pareto prior/posterior predictive."""
    a = _prior(prior).alpha
    n = _count(n)
    if n == 0:
        return 0.0
    return pareto_entropy(a) - pareto_entropy(a + n) - digamma(a + n) + digamma(a)


def _sample(sample) -> TTESampleSpec:
    if not isinstance(sample, TTESampleSpec):
        sample = TTESampleSpec(*sample)
    if sample.s_n is None:
        raise DomainError("observed information needs the sufficient statistic s_n")
    return sample


def observed_param_info(prior, sample) -> float:
    """Entropy reduction H(prior) - H(posterior) for an observed s_n (may be < 0)."""
    prior = _prior(prior)
    sample = _sample(sample)
    a = prior.alpha
    return (gamma_entropy(a) - gamma_entropy(a + sample.n)
            + math.log1p(sample.s_n / prior.beta))


def observed_predictive_info(prior, sample) -> float:
    prior = _prior(prior)
    sample = _sample(sample)
    a = prior.alpha
    return (pareto_entropy(a) - pareto_entropy(a + sample.n)
            - math.log1p(sample.s_n / prior.beta))


def info_triple(prior, n: float) -> InfoTriple:
    """Parameter/predictive/joint triple with the alpha -> alpha+1 decomposition.

    ``meta['decomposition_residual']`` is
    M(Theta | alpha) - M(Y_nu | alpha) - M(Theta | alpha + 1).
    """
    prior = _prior(prior)
    m = parameter_info(prior, n)
    mp = predictive_info(prior, n)
    m_next = parameter_info(GammaPriorSpec(prior.alpha + 1.0, prior.beta), n)
    resid = m - mp - m_next
    return InfoTriple(parameter=m, predictive=mp, joint=m, dependence=0.0,
                      meta={"parameter_alpha_plus_one": m_next,
                            "decomposition_residual": resid,
                            "decomposition_holds": abs(resid) <= 1e-12})


@dataclass(frozen=True)
class CensoringLoss:
    param_loss: float
    predictive_loss: float


def censoring_loss(prior, n: int, r: int) -> CensoringLoss:
    """Information lost by Type II censoring at the r-th of n failures."""
    if int(n) != n or int(r) != r or not 1 <= r <= n:
        raise DomainError(f"need integers 1 <= r <= n, got r={r!r}, n={n!r}")
    prior = _prior(prior)
    return CensoringLoss(
        param_loss=parameter_info(prior, n) - parameter_info(prior, r),
        predictive_loss=predictive_info(prior, n) - predictive_info(prior, r),
    )


def _weibull(y, q=1.0):
    return np.power(y, q)


def _pareto1(y, a=1.0):
    return np.log(np.asarray(y) / a)


def _pareto6(y, a=1.0):
    return np.log1p(np.power(y, a))


TRANSFORMS = {
    "exponential": lambda y: np.asarray(y, dtype=float),
    "weibull": _weibull,
    "pareto1": _pareto1,
    "pareto2": lambda y: np.log1p(y),
    "pareto6": _pareto6,
    "extreme-value": lambda y: np.exp(y),
}


def transform(name: str, y, **params) -> np.ndarray:
    """Apply the named TTE transform phi to observations."""
    try:
        phi = TRANSFORMS[name]
    except KeyError:
        raise DomainError(f"unknown TTE transform {name!r}; choose from {sorted(TRANSFORMS)}") from None
    return np.asarray(phi(np.asarray(y, dtype=float), **params), dtype=float)


def sufficient_statistic(y, name: str = "exponential", **params) -> TTESampleSpec:
    """TTESampleSpec with s_n = sum phi(y_i)."""
    values = transform(name, y, **params)
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise DomainError("observations fall outside the support of the transform")
    return TTESampleSpec(int(values.size), float(values.sum()))


def total_time_on_test(y_sorted, r: int) -> float:
    """t_r = y_1 + ... + y_{r-1} + (n - r + 1) y_r for ordered data."""
    y = np.sort(np.asarray(y_sorted, dtype=float))
    n = y.size
    if not 1 <= r <= n:
        raise DomainError("need 1 <= r <= n")
    return float(y[: r - 1].sum() + (n - r + 1) * y[r - 1])
