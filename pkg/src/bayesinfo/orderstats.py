"""Information carried by order statistics.

The dependence between consecutive order statistics of an i.i.d. sample does
not depend on the parent distribution or the prior, so it reduces to the
uniform case and has a closed form in log-beta and digamma terms. The
parameter term for the first r failure times of an exponential sample with a
gamma prior is the TTE measure for r observations, since the total time on
test is sufficient.

Predictive quantities between order statistics have no closed form here and
are always taken from :mod:`bayesinfo.oracle`; records that contain them mark
them as oracle-valued.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from bayesinfo import oracle, tte
from bayesinfo.core import DomainError, InfoTriple
from bayesinfo.specfn import digamma, kl_gamma_step, log_beta

__all__ = [
    "BridgeMeasures",
    "OrderCheck",
    "OrderStatPlan",
    "block_dependence_info",
    "bridge_measures",
    "joint_curve",
    "joint_info_next_order_stat",
    "markov_argmax",
    "markov_dependence_info",
    "theorem4b_order_check",
]


@dataclass(frozen=True)
class OrderStatPlan:
    n: int
    r: int

    def __post_init__(self):
        if int(self.n) != self.n or int(self.r) != self.r:
            raise DomainError("n and r must be integers")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "r", int(self.r))
        if self.n < 2:
            raise DomainError(f"n must be >= 2, got {self.n}")
        if not 1 <= self.r <= self.n:
            raise DomainError(f"r must satisfy 1 <= r <= n, got r={self.r}, n={self.n}")

    def require_interior(self) -> "OrderStatPlan":
        if self.r >= self.n:
            raise DomainError(f"this measure needs r < n, got r={self.r}, n={self.n}")
        return self


def _plan(plan_or_n, r=None) -> OrderStatPlan:
    if isinstance(plan_or_n, OrderStatPlan):
        return plan_or_n
    return OrderStatPlan(plan_or_n, r)


def markov_dependence_info(plan_or_n, r: int | None = None) -> float:
    """M_n(r), the information between the r-th and (r+1)-th order statistics."""
    p = _plan(plan_or_n, r).require_interior()
    n, r = p.n, p.r
    psi_n = digamma(n)
    value = (log_beta(r + 1, n - r + 1) + math.log(n + 1) - 1.0
             - r * (digamma(r) - psi_n) - (n - r) * (digamma(n - r) - psi_n))
    # exact value is >= 0; clip rounding only
    return max(value, 0.0)


def block_dependence_info(n: int, k: int, r: int) -> float:
    """Information between the first k+r and the following order statistics.

    By the Markov property this is M_n(k + r); only consecutive blocks are
    supported.
    """
    if int(k) != k or k < 0:
        raise DomainError("k must be a non-negative integer")
    return markov_dependence_info(n, int(k) + int(r))


def markov_argmax(n: int) -> list[int]:
    """Maximizing r of M_n(r) over 1..n-1; two values when n is odd."""
    if int(n) != n or n < 2:
        raise DomainError("n must be an integer >= 2")
    values = [markov_dependence_info(n, r) for r in range(1, int(n))]
    best = max(values)
    return [r for r, v in zip(range(1, int(n)), values) if best - v <= 1e-13]


def joint_info_next_order_stat(plan_or_n, prior, r: int | None = None) -> InfoTriple:
    """Information the first r order statistics carry about (Theta, Y_{r+1}).

    Exponential parent with a gamma prior. The predictive term is left unset.
    """
    p = _plan(plan_or_n, r).require_interior()
    m = tte.parameter_info(prior, p.r)
    dep = markov_dependence_info(p)
    return InfoTriple(parameter=m, predictive=None, joint=m + dep, dependence=dep,
                      meta={"n": p.n, "r": p.r})


@dataclass(frozen=True)
class JointCurve:
    n: int
    alpha: float
    r: tuple[int, ...]
    parameter: tuple[float, ...]
    dependence: tuple[float, ...]
    joint: tuple[float, ...]
    argmax: tuple[int, ...]


def joint_curve(n: int, prior) -> JointCurve:
    """Parameter, dependence and joint information for r = 1..n-1."""
    rs = tuple(range(1, int(n)))
    triples = [joint_info_next_order_stat(n, prior, r) for r in rs]
    joint = tuple(t.joint for t in triples)
    best = max(joint)
    alpha = prior.alpha if isinstance(prior, tte.GammaPriorSpec) else float(prior)
    return JointCurve(int(n), alpha, rs, tuple(t.parameter for t in triples),
                      tuple(t.dependence for t in triples), joint,
                      tuple(r for r, v in zip(rs, joint) if best - v <= 1e-13))


@dataclass(frozen=True)
class OrderCheck:
    """Both sides of the two equivalent orderings.

    ``lhs_ge`` maps each side to True/False, or None when the gap is within
    ``tolerance`` (indeterminate) or the oracle did not converge.
    """
    plan: OrderStatPlan
    alpha: float
    theta_next: float          # M(Theta; Y_{r+1}), oracle
    parameter_step: float      # K_G(alpha + r), closed form
    predictive: float          # M(Y_r; Y_{r+1}), oracle
    markov: float              # M_n(r), closed form
    lhs_ge: dict
    consistent: bool | None
    tolerance: float
    converged: bool
    meta: dict = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        return {"n": self.plan.n, "r": self.plan.r, "alpha": self.alpha,
                "theta_next": self.theta_next, "parameter_step": self.parameter_step,
                "predictive": self.predictive, "markov": self.markov,
                "lhs_ge": dict(self.lhs_ge), "consistent": self.consistent,
                "tolerance": self.tolerance, "converged": self.converged}


def _direction(lhs: float, rhs: float, tol: float) -> bool | None:
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        return None
    gap = lhs - rhs
    if abs(gap) < tol:
        return None
    return gap > 0


def theorem4b_order_check(plan_or_n, prior, r: int | None = None,
                          settings: oracle.QuadratureSettings = oracle.QuadratureSettings(),
                          tolerance: float = 1e-6) -> OrderCheck:
    """Compare (i) M(Y_r; Y_{r+1}) with M_n(r) and (ii) M(Theta; Y_{r+1}) with K_G(alpha + r).

    The two comparisons should point the same way. The oracle terms come from
    nested quadrature; an unconverged oracle is reported, not asserted.
    """
    p = _plan(plan_or_n, r).require_interior()
    pr = prior if isinstance(prior, tte.GammaPriorSpec) else tte.GammaPriorSpec(float(prior))
    hm = oracle.order_stat_marginal_entropy(p.n, p.r + 1, pr.alpha, pr.beta, settings)
    th = oracle.mi_quadrature_order_stat_parameter(p.n, p.r + 1, pr.alpha, pr.beta,
                                                   settings, marginal_entropy=hm)
    pred = oracle.mi_quadrature_order_stat_predictive(p.n, p.r, pr.alpha, pr.beta,
                                                      settings, marginal_entropy=hm)
    step = kl_gamma_step(pr.alpha + p.r)
    mk = markov_dependence_info(p)
    converged = th.converged and pred.converged
    tol_ii = max(tolerance, th.error_bound) if converged else tolerance
    tol_i = max(tolerance, pred.error_bound) if converged else tolerance
    d_i = _direction(pred.estimate, mk, tol_i) if converged else None
    d_ii = _direction(th.estimate, step, tol_ii) if converged else None
    consistent = None if d_i is None or d_ii is None else d_i == d_ii
    return OrderCheck(p, pr.alpha, th.estimate, step, pred.estimate, mk,
                      {"i": d_i, "ii": d_ii}, consistent, tolerance, converged,
                      meta={"oracle_valued": ["theta_next", "predictive"],
                            "message": th.message or pred.message})


@dataclass(frozen=True)
class BridgeMeasures:
    bridge_param: float
    bridge_pred: float
    correction: float
    parameter: float
    predictive: float
    predictive_error_bound: float
    meta: dict = field(default_factory=dict, compare=False)


def bridge_measures(plan_or_n, prior, r: int | None = None,
                    settings: oracle.QuadratureSettings = oracle.QuadratureSettings()) -> BridgeMeasures:
    """Mutual informations less the finite-sample correction ln(n/(n-r)).

    Either bridge value can be negative. The predictive term is
    oracle-valued.
    """
    p = _plan(plan_or_n, r)
    if p.r >= p.n:
        raise DomainError("r = n makes the correction ln(n/(n-r)) infinite")
    pr = prior if isinstance(prior, tte.GammaPriorSpec) else tte.GammaPriorSpec(float(prior))
    corr = math.log(p.n / (p.n - p.r))
    m = tte.parameter_info(pr, p.r)
    pred = oracle.mi_quadrature_order_stat_predictive(p.n, p.r, pr.alpha, pr.beta, settings)
    return BridgeMeasures(m - corr, pred.estimate - corr, corr, m, pred.estimate,
                          pred.error_bound,
                          meta={"oracle_valued": ["predictive", "bridge_pred"],
                                "converged": pred.converged})
