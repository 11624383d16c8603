"""Information measures for the conjugate normal linear model.

Everything is expressed in rotated coordinates: ``eigenvalues`` is the
spectrum of X'X and ``prior_variances`` the diagonal of V0, where the prior
is N(m0, s0^2 V0) and the noise variance is s1^2 = eta * s0^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from bayesinfo.core import DomainError, InfoTriple, check_positive

__all__ = [
    "LinearModelSpec",
    "WeightedUtility",
    "component_info",
    "condition_number",
    "joint_info",
    "parameter_info",
    "predictive_info",
    "predictive_info_many",
    "weighted_utility",
]


def _as_vector(name, values) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"{name} must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class LinearModelSpec:
    eigenvalues: Sequence[float]
    prior_variances: Sequence[float]
    eta: float
    prior_scale: float = 1.0
    prior_mean: Sequence[float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if np.ndim(self.prior_variances) == 2:
            raise DomainError("prior_variances must be the diagonal of V0; "
                              "non-diagonal prior covariances are not supported")
        lam = _as_vector("eigenvalues", self.eigenvalues)
        v0 = _as_vector("prior_variances", self.prior_variances)
        if lam.shape != v0.shape:
            raise DomainError("eigenvalues and prior_variances must have equal length")
        if np.any(lam <= 0) or np.any(v0 <= 0):
            raise DomainError("eigenvalues and prior variances must be > 0")
        check_positive("eta", self.eta)
        check_positive("prior_scale", self.prior_scale)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "prior_variances", v0)
        if self.prior_mean is not None:
            m0 = _as_vector("prior_mean", self.prior_mean)
            if m0.shape != lam.shape:
                raise DomainError("prior_mean must have length p")
            object.__setattr__(self, "prior_mean", m0)

    @classmethod
    def from_variances(cls, eigenvalues, prior_variances, noise_variance: float,
                       prior_scale: float, prior_mean=None) -> "LinearModelSpec":
        """Build from s1^2 and s0^2; only their ratio is retained."""
        eta = check_positive("noise_variance", noise_variance) / check_positive("prior_scale", prior_scale)
        return cls(eigenvalues, prior_variances, eta, prior_scale, prior_mean)

    @property
    def p(self) -> int:
        return int(self.eigenvalues.size)

    def posterior_variances(self) -> np.ndarray:
        """Diagonal of V1 = (eta V0^{-1} + Lambda)^{-1}."""
        return 1.0 / (self.eta / self.prior_variances + self.eigenvalues)


def component_info(spec: LinearModelSpec) -> np.ndarray:
    """Per-component information 0.5 ln(1 + v0j lambda_j / eta)."""
    return 0.5 * np.log1p(spec.prior_variances * spec.eigenvalues / spec.eta)


def parameter_info(spec: LinearModelSpec) -> float:
    """Lindley's measure M(Y; Theta).

    The posterior covariance does not depend on the data, so this is also
    the observed entropy reduction for every sample.
    """
    return float(np.sum(component_info(spec)))


def _point(spec: LinearModelSpec, z_nu) -> np.ndarray:
    z = _as_vector("z_nu", z_nu)
    if z.shape != spec.eigenvalues.shape:
        raise DomainError(f"prediction point must have length {spec.p}")
    return z


def predictive_info(spec: LinearModelSpec, z_nu) -> float:
    """M(Y; Y_nu) for a future outcome at rotated covariates ``z_nu``."""
    z = _point(spec, z_nu)
    z2 = z * z
    prior = float(np.dot(z2, spec.prior_variances)) / spec.eta + 1.0
    post = float(np.dot(z2, spec.posterior_variances())) + 1.0
    return 0.5 * math.log(prior / post)


def predictive_info_many(spec: LinearModelSpec, points) -> np.ndarray:
    """Marginal predictive information at each row of ``points``.

    No joint multi-point predictive covariance is formed.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return np.array([predictive_info(spec, z) for z in pts])


def joint_info(spec: LinearModelSpec, z_nu) -> InfoTriple:
    m = parameter_info(spec)
    return InfoTriple(parameter=m, predictive=predictive_info(spec, z_nu),
                      joint=m, dependence=0.0,
                      meta={"observed_equals_expected": True})


@dataclass(frozen=True)
class WeightedUtility:
    value: float
    parameter: float
    predictive: float
    # w1 * M(Y; Theta | Y_nu) + (w1 + w2) * M(Y; Y_nu)
    regrouped: float


def weighted_utility(spec: LinearModelSpec, z_nu, w1: float, w2: float) -> WeightedUtility:
    if w1 < 0 or w2 < 0:
        raise DomainError("utility weights must be >= 0")
    m = parameter_info(spec)
    mp = predictive_info(spec, z_nu)
    return WeightedUtility(value=w1 * m + w2 * mp, parameter=m, predictive=mp,
                           regrouped=w1 * (m - mp) + (w1 + w2) * mp)


def condition_number(spec_or_eigenvalues) -> float:
    """sqrt(lambda_max / lambda_min) of X'X."""
    lam = (spec_or_eigenvalues.eigenvalues if isinstance(spec_or_eigenvalues, LinearModelSpec)
           else _as_vector("eigenvalues", spec_or_eigenvalues))
    if np.any(lam <= 0):
        raise DomainError("eigenvalues must be > 0")
    return math.sqrt(float(lam.max() / lam.min()))
