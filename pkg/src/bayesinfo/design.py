"""Closed-form optimal allocations for the normal linear model.

Three allocation problems are solved:

* sample sizes n_j (ANOVA design, lambda_j = n_j) maximizing parameter
  information under sum n_j = n;
* sample sizes maximizing predictive information at a point z_nu;
* prior variances v0j maximizing parameter information under sum v0j = c,
  for a fixed (possibly ill-conditioned) spectrum of X'X.

Allocations are continuous. :func:`integer_allocations` enumerates the
floor/ceil neighbours of a continuous allocation for callers that need whole
sample sizes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from bayesinfo import linmodel
from bayesinfo.core import DomainError, check_positive

__all__ = [
    "AllocationResult",
    "integer_allocations",
    "optimal_prior_variance_allocation",
    "optimal_sample_allocation_parameter",
    "optimal_sample_allocation_predictive",
    "orthogonal_prior_allocation",
    "gprior_allocation",
]


@dataclass(frozen=True)
class AllocationResult:
    weights: np.ndarray
    objective_value: float
    feasible: bool
    binding_minimum: float
    continuous: bool = True
    budget: float = math.nan
    meta: dict = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        return {
            "weights": [float(w) for w in self.weights],
            "objective_value": float(self.objective_value),
            "feasible": bool(self.feasible),
            "binding_minimum": float(self.binding_minimum),
            "continuous": self.continuous,
            "budget": float(self.budget),
            **{k: v for k, v in self.meta.items() if isinstance(v, (int, float, str, bool, list))},
        }


def _positive_vector(name, values) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0 or not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} must be a non-empty sequence of positive numbers")
    return arr


def _equalizing_allocation(total: float, eta: float, recip: np.ndarray) -> tuple[np.ndarray, float]:
    """Solve max sum ln(eta + a_j x_j) s.t. sum x_j = total, with recip = 1/a_j.

    Stationarity gives x_j + eta/a_j equal across j. Returns the allocation
    and the bound x_1 must exceed for every x_j to be positive.
    """
    p = recip.size
    d = eta * (recip - recip[0])
    x1 = total / p + d[1:].sum() / p
    x = x1 - d
    x[0] = x1
    bound = float(d[1:].max()) if p > 1 else 0.0
    return x, bound


def optimal_sample_allocation_parameter(n: float, eta: float, prior_variances) -> AllocationResult:
    """Sample allocation maximizing M(Y; Theta) for an ANOVA-type design."""
    n = check_positive("n", n)
    eta = check_positive("eta", eta)
    v0 = _positive_vector("prior_variances", prior_variances)
    x, bound = _equalizing_allocation(n, eta, 1.0 / v0)
    feasible = bool(x[0] > bound and np.all(x > 0))
    obj = (linmodel.parameter_info(linmodel.LinearModelSpec(x, v0, eta))
           if feasible else math.nan)
    return AllocationResult(x, obj, feasible, bound, budget=n,
                            meta={"method": "closed_form", "criterion": "parameter"})


def _predictive_objective(x, v0, eta, z):
    if np.all(x > 0):
        return linmodel.predictive_info(linmodel.LinearModelSpec(x, v0, eta), z)
    # boundary allocations (some n_j = 0) lie outside LinearModelSpec's lambda > 0 domain
    z2 = np.asarray(z, dtype=float) ** 2
    prior = float(z2 @ v0) / eta + 1.0
    post = float(z2 @ (1.0 / (eta / v0 + x))) + 1.0
    return 0.5 * math.log(prior / post)


def _water_fill(n, eta, v0, az):
    """KKT solution with n_j >= 0: n_j = max(0, lam*|z_j| - eta/v0j)."""
    floor = eta / v0

    def excess(lam):
        return np.maximum(0.0, lam * az - floor).sum() - n

    active = az > 0
    hi = (n + floor[active].sum()) / az[active].min() + 1.0
    lam = brentq(excess, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    x = np.maximum(0.0, lam * az - floor)
    x *= n / x.sum()
    return x


def optimal_sample_allocation_predictive(n: float, eta: float, prior_variances, point,
                                         fallback: bool = False) -> AllocationResult:
    """Sample allocation maximizing M(Y; Y_nu) for prediction at ``point``.

    Stationarity of sum_j v0j z_j^2/(eta + v0j n_j) under the budget gives
    n_j + eta/v0j proportional to |z_j|; the first component is fixed by the
    budget. When some z_j is zero the closed form does not apply and the
    constrained maximizer is found numerically (``meta['method']``). With
    ``fallback=True`` an infeasible closed form is replaced the same way,
    giving the optimum on the boundary n_j >= 0.
    """
    n = check_positive("n", n)
    eta = check_positive("eta", eta)
    v0 = _positive_vector("prior_variances", prior_variances)
    z = np.atleast_1d(np.asarray(point, dtype=float))
    if z.shape != v0.shape or not np.all(np.isfinite(z)):
        raise DomainError("point must be finite with one entry per component")
    az = np.abs(z)
    if not np.any(az > 0):
        raise DomainError("prediction point must not be the zero vector")

    if np.any(az == 0):
        x = _water_fill(n, eta, v0, az)
        obj = _predictive_objective(x, v0, eta, z)
        return AllocationResult(x, obj, True, 0.0, budget=n,
                                meta={"method": "numerical", "criterion": "predictive",
                                      "reason": "zero covariate entry"})

    S = az.sum()
    inv = 1.0 / v0
    n1 = az[0] * n / S + (eta / S) * np.sum(az[0] * inv[1:] - az[1:] * inv[0])
    x = np.empty_like(v0)
    x[0] = n1
    x[1:] = (az[1:] / az[0]) * n1 - (eta / az[0]) * (az[0] * inv[1:] - az[1:] * inv[0])
    if v0.size > 1:
        bound = float(np.max((eta / az[1:]) * (az[0] * inv[1:] - az[1:] * inv[0])))
    else:
        bound = 0.0
    feasible = bool(n1 > max(bound, 0.0) and np.all(x > 0))
    if not feasible and fallback:
        x = _water_fill(n, eta, v0, az)
        return AllocationResult(x, _predictive_objective(x, v0, eta, z), True, bound, budget=n,
                                meta={"method": "numerical", "criterion": "predictive",
                                      "reason": "closed form infeasible"})
    obj = _predictive_objective(x, v0, eta, z) if feasible else math.nan
    return AllocationResult(x, obj, feasible, bound, budget=n,
                            meta={"method": "closed_form", "criterion": "predictive"})


def optimal_prior_variance_allocation(c: float, eta: float, eigenvalues) -> AllocationResult:
    """Prior-variance allocation maximizing M(Y; Theta) under sum v0j = c.

    ``eigenvalues`` must be sorted in descending order. The result also
    carries the condition-index residuals
    (lambda_1 v01 + eta)/(lambda_j v0j + eta) - kappa_j^2.
    """
    c = check_positive("c", c)
    eta = check_positive("eta", eta)
    lam = _positive_vector("eigenvalues", eigenvalues)
    if np.any(np.diff(lam) > 0):
        raise DomainError("eigenvalues must be sorted in descending order")
    v, _ = _equalizing_allocation(c, eta, 1.0 / lam)
    bound = float(eta * (1.0 / lam[-1] - 1.0 / lam[0]))
    feasible = bool(v[0] > bound and np.all(v > 0))
    obj = (linmodel.parameter_info(linmodel.LinearModelSpec(lam, v, eta))
           if feasible else math.nan)
    kappa2 = lam[0] / lam
    residual = (lam[0] * v[0] + eta) / (lam * v + eta) - kappa2
    return AllocationResult(v, obj, feasible, bound, budget=c, meta={
        "method": "closed_form",
        "criterion": "parameter",
        "eigenvalue_sum": float(lam.sum()),
        "normalized": bool(math.isclose(lam.sum(), lam.size, rel_tol=1e-12)),
        "condition_index_residual": [float(r) for r in residual],
    })


def orthogonal_prior_allocation(c: float, eta: float, eigenvalues) -> AllocationResult:
    """Equal prior variances c/p."""
    lam = _positive_vector("eigenvalues", eigenvalues)
    v = np.full(lam.size, check_positive("c", c) / lam.size)
    obj = linmodel.parameter_info(linmodel.LinearModelSpec(lam, v, eta))
    return AllocationResult(v, obj, True, 0.0, budget=c, meta={"method": "orthogonal"})


def gprior_allocation(c: float, eta: float, eigenvalues) -> AllocationResult:
    """Prior variances proportional to 1/lambda_j (g-prior style), summing to c."""
    lam = _positive_vector("eigenvalues", eigenvalues)
    v = (1.0 / lam) * check_positive("c", c) / np.sum(1.0 / lam)
    obj = linmodel.parameter_info(linmodel.LinearModelSpec(lam, v, eta))
    return AllocationResult(v, obj, True, 0.0, budget=c, meta={"method": "gprior"})


def integer_allocations(result: AllocationResult, objective) -> list[tuple[tuple[int, ...], float]]:
    """Evaluate every floor/ceil rounding of ``result.weights`` that keeps the budget.

    ``objective`` maps an integer allocation (numpy array) to nats. Returns
    (allocation, value) pairs sorted best first. Allocations with a zero
    component are skipped.
    """
    budget = int(round(result.budget))
    if not math.isclose(budget, result.budget, abs_tol=1e-9):
        raise DomainError("integer rounding needs an integral budget")
    lo = np.floor(result.weights).astype(int)
    out = []
    for bumps in itertools.product((0, 1), repeat=lo.size):
        cand = lo + np.array(bumps)
        if cand.sum() != budget or np.any(cand <= 0):
            continue
        out.append((tuple(int(c) for c in cand), float(objective(cand.astype(float)))))
    out = sorted(set(out), key=lambda t: -t[1])
    return out
