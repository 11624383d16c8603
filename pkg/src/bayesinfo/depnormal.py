"""Information for conditionally dependent normal samples.

Model: y | theta ~ N(theta * 1, s1^2 R), theta ~ N(mu0, s0^2), eta = s1^2/s0^2.
Three correlation families are supported:

* ``UC``: R = I;
* ``IC``: intraclass, all off-diagonal entries rho;
* ``SC``: serial, R_ij = rho**|i-j| (AR(1)-type).

The prediction target is the next observation y_{n+1}, which continues the
same conditional correlation structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from bayesinfo import gaussmi
from bayesinfo.core import DomainError, InfoTriple, check_positive

__all__ = [
    "DepNormalSpec",
    "FAMILIES",
    "JointMinimum",
    "SampleSizeResult",
    "augmented_conditional_matrix",
    "conditional_correlation_matrix",
    "conditional_dependence_info",
    "conditional_r_squared",
    "determinant",
    "joint_info",
    "joint_minimizer_rho",
    "min_joint_info",
    "parameter_info",
    "predictive_info",
    "predictive_r_squared",
    "sample_size_for_info",
    "sc_predictive_table_r2",
    "supremum",
    "t_n",
    "table_determinant",
    "unconditional_correlation_matrix",
]

Family = Literal["UC", "IC", "SC"]
FAMILIES = ("UC", "IC", "SC")


@dataclass(frozen=True)
class DepNormalSpec:
    family: Family
    n: int
    eta: float
    rho: float = 0.0

    def __post_init__(self):
        fam = str(self.family).upper()
        if fam not in FAMILIES:
            raise DomainError(f"family must be one of {FAMILIES}, got {self.family!r}")
        object.__setattr__(self, "family", fam)
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        check_positive("eta", self.eta)
        rho = float(self.rho)
        if fam == "UC":
            if rho != 0.0:
                raise DomainError("the UC family has no correlation parameter")
        elif not 0.0 <= rho < 1.0:
            raise DomainError(f"rho must lie in [0, 1), got {rho!r}")
        object.__setattr__(self, "rho", rho)

    def with_(self, **changes) -> "DepNormalSpec":
        values = {"family": self.family, "n": self.n, "eta": self.eta, "rho": self.rho}
        values.update(changes)
        return DepNormalSpec(**values)


# -- closed forms ---------------------------------------------------------

def _t(family: str, n: int, rho: float) -> float:
    if family == "UC":
        return float(n)
    if family == "IC":
        return n / (1.0 + (n - 1) * rho)
    return (n - (n - 2) * rho) / (1.0 + rho)


def t_n(spec: DepNormalSpec) -> float:
    """Sum of all elements of R^{-1} (the effective sample size)."""
    return _t(spec.family, spec.n, spec.rho)


def parameter_info(spec: DepNormalSpec) -> float:
    return 0.5 * math.log1p(t_n(spec) / spec.eta)


def conditional_r_squared(spec: DepNormalSpec) -> float:
    """Squared multiple correlation of y_{n+1} on y given theta."""
    rho, n = spec.rho, spec.n
    if spec.family == "UC":
        return 0.0
    if spec.family == "IC":
        return gaussmi.equicorrelated_r_squared(n, rho)
    return rho * rho


def conditional_dependence_info(spec: DepNormalSpec) -> float:
    """M(Y; Y_nu | Theta)."""
    return gaussmi.mi_from_multiple_correlation(conditional_r_squared(spec))


def predictive_r_squared(spec: DepNormalSpec) -> float:
    """Squared unconditional multiple correlation of y_{n+1} on y.

    UC and IC are equicorrelated after marginalizing theta, with common
    correlation rho_p = (1 + eta*rho)/(1 + eta). For SC the unconditional
    correlation matrix is (11' + eta*A)/(1 + eta) with A the AR(1) matrix;
    Sherman-Morrison with the tridiagonal A^{-1} gives [C^{-1}]_{nu,nu} in
    closed form.
    """
    n, eta, rho = spec.n, spec.eta, spec.rho
    if spec.family == "UC":
        return n / ((1.0 + eta) * (n + eta))
    rho_p = gaussmi.predictive_correlation(rho, eta)
    if spec.family == "IC":
        return gaussmi.equicorrelated_r_squared(n, rho_p)
    t_next = _t("SC", n + 1, rho)
    cinv = ((1.0 + eta) / eta) * (1.0 / (1.0 - rho * rho)
                                   - 1.0 / ((1.0 + rho) ** 2 * (eta + t_next)))
    return 1.0 - 1.0 / cinv


def sc_predictive_table_r2(spec: DepNormalSpec, k: int = 1) -> float:
    """Tabulated SC value rho_p**2 with rho_p = (1 + eta*rho**k)/(1 + eta).

    Regression on the single observation k steps back; kept for audit and
    k-step exploration. It does not use the whole sample.
    """
    if spec.family != "SC":
        raise DomainError("only defined for the SC family")
    rho_p = gaussmi.predictive_correlation(spec.rho ** k, spec.eta)
    return rho_p * rho_p


def predictive_info(spec: DepNormalSpec) -> float:
    """M(Y; Y_nu) for the next observation (one step ahead for SC)."""
    return gaussmi.mi_from_multiple_correlation(predictive_r_squared(spec))


def joint_info(spec: DepNormalSpec) -> InfoTriple:
    m = parameter_info(spec)
    dep = conditional_dependence_info(spec)
    return InfoTriple(parameter=m, predictive=predictive_info(spec), joint=m + dep,
                      dependence=dep, meta={"family": spec.family})


def table_determinant(spec: DepNormalSpec) -> float:
    """|R| as tabulated: 1, [1+(n-1)rho](1-rho)^(n-1), and 1-rho^2 for SC."""
    rho, n = spec.rho, spec.n
    if spec.family == "UC":
        return 1.0
    if spec.family == "IC":
        return (1.0 + (n - 1) * rho) * (1.0 - rho) ** (n - 1)
    return 1.0 - rho * rho


def determinant(spec: DepNormalSpec) -> float:
    """|R| of the n-dimensional conditional correlation matrix.

    Same as :func:`table_determinant` except SC, where it is (1-rho^2)^(n-1).
    """
    if spec.family == "SC":
        return (1.0 - spec.rho ** 2) ** (spec.n - 1)
    return table_determinant(spec)


# -- explicit matrices (brute-force routes) --------------------------------

def _conditional(family: str, dim: int, rho: float) -> np.ndarray:
    idx = np.arange(dim)
    lag = np.abs(idx[:, None] - idx[None, :])
    if family == "UC":
        return np.eye(dim)
    if family == "IC":
        return np.where(lag == 0, 1.0, rho)
    return np.power(rho, lag).astype(float)


def conditional_correlation_matrix(spec: DepNormalSpec) -> np.ndarray:
    """R, the n x n conditional correlation of y given theta."""
    return _conditional(spec.family, spec.n, spec.rho)


def augmented_conditional_matrix(spec: DepNormalSpec) -> np.ndarray:
    """(n+1) x (n+1) conditional correlation of (y, y_{n+1}) given theta."""
    return _conditional(spec.family, spec.n + 1, spec.rho)


def unconditional_correlation_matrix(spec: DepNormalSpec) -> np.ndarray:
    """(n+1) x (n+1) correlation of (y, y_{n+1}) after integrating out theta."""
    return (1.0 + spec.eta * augmented_conditional_matrix(spec)) / (1.0 + spec.eta)


# -- minimization of the joint measure over rho ---------------------------

def _quadratic(family: str, n: int, eta: float) -> tuple[float, float, float]:
    inv = 1.0 / eta
    c = (1.0 - n) * inv
    if family == "IC":
        return n - 1.0, 2.0 * (1.0 + n * inv), c
    # d/d rho of the SC joint information vanishes on this quadratic
    return 1.0 - (n - 2) * inv, 1.0 + (2 * n - 1) * inv, c


def _printed_sc_quadratic(n: int, eta: float) -> tuple[float, float, float]:
    inv = 1.0 / eta
    return 1.0 + (2 * n - 1) * inv, 1.0 + (2 * n - 1) * inv, (1.0 - n) * inv


def _unit_root(a: float, b: float, c: float) -> float | None:
    if a == 0.0:
        roots = [-c / b] if b != 0.0 else []
    else:
        disc = b * b - 4.0 * a * c
        if disc < 0:
            return None
        sq = math.sqrt(disc)
        # numerically stable pair
        q = -0.5 * (b + math.copysign(sq, b))
        roots = [q / a] + ([c / q] if q != 0.0 else [])
    inside = [r for r in roots if 0.0 < r < 1.0]
    return min(inside) if inside else None


@dataclass(frozen=True)
class JointMinimum:
    family: str
    n: int
    eta: float
    rho0: float
    min_joint: float
    boundary: bool
    coefficients: tuple[float, float, float]
    diagnostics: dict = field(default_factory=dict, compare=False)


def joint_minimizer_rho(family: str, n: int, eta: float) -> JointMinimum:
    """rho minimizing the joint information, as the root in (0, 1) of a quadratic."""
    family = str(family).upper()
    if family not in ("IC", "SC"):
        raise DomainError("joint minimization is defined for the IC and SC families")
    if int(n) != n or n < 2:
        raise DomainError("joint minimization needs n >= 2")
    n = int(n)
    eta = check_positive("eta", eta)
    coef = _quadratic(family, n, eta)
    root = _unit_root(*coef)
    diag = {}
    if family == "SC":
        printed = _unit_root(*_printed_sc_quadratic(n, eta))
        diag["printed_coefficient_root"] = printed
        if printed is not None:
            diag["joint_at_printed_root"] = joint_info(DepNormalSpec("SC", n, eta, printed)).joint
    if root is None:
        # boundary minimum over [0, 1)
        spec0 = DepNormalSpec(family, n, eta, 0.0)
        diag["reason"] = "no quadratic root in (0, 1)"
        return JointMinimum(family, n, eta, 0.0, joint_info(spec0).joint, True, coef, diag)
    value = joint_info(DepNormalSpec(family, n, eta, root)).joint
    return JointMinimum(family, n, eta, root, value, False, coef, diag)


def min_joint_info(family: str, n: int, eta: float) -> float:
    return joint_minimizer_rho(family, n, eta).min_joint


# -- sample-size search ----------------------------------------------------

Measure = Literal["parameter", "predictive", "joint"]


def _measure(spec: DepNormalSpec, measure: str) -> float:
    if measure == "parameter":
        return parameter_info(spec)
    if measure == "predictive":
        return predictive_info(spec)
    if measure == "joint":
        return joint_info(spec).joint
    raise DomainError(f"unknown measure {measure!r}")


def supremum(family: str, eta: float, measure: str, rho: float = 0.0,
             minimized: bool = False) -> float:
    """Limit of the measure as n -> infinity (math.inf when unbounded)."""
    family = str(family).upper()
    eta = check_positive("eta", eta)
    if minimized:
        if measure != "joint":
            raise DomainError("minimization over rho applies to the joint measure")
        if family == "SC":
            return math.inf
        # IC root tends to the solution of rho^2 + 2 rho/eta - 1/eta = 0
        r = -1.0 / eta + math.sqrt(1.0 / eta ** 2 + 1.0 / eta)
        return 0.5 * math.log1p(1.0 / (r * eta)) - 0.5 * math.log1p(-r)
    if family == "UC" or rho == 0.0:
        if measure == "predictive":
            return 0.5 * math.log((1.0 + eta) / eta)
        return math.inf
    if family == "IC":
        par = 0.5 * math.log1p(1.0 / (rho * eta))
        if measure == "parameter":
            return par
        if measure == "predictive":
            return -0.5 * math.log1p(-gaussmi.predictive_correlation(rho, eta))
        return par - 0.5 * math.log1p(-rho)
    if measure == "predictive":
        return 0.5 * math.log((1.0 + eta) / (eta * (1.0 - rho * rho)))
    return math.inf


@dataclass(frozen=True)
class SampleSizeResult:
    n: int | None
    reachable: bool
    value: float | None
    supremum: float
    rule: str
    target: float


def sample_size_for_info(family: str, eta: float, target: float,
                         measure: Measure = "parameter", rho: float = 0.0,
                         minimized: bool = False, rule: str = "nearest",
                         n_max: int = 1_000_000) -> SampleSizeResult:
    """Sample size at which a measure reaches ``target`` nats.

    ``rule="at_least"`` returns the smallest n whose measure is >= target.
    ``rule="nearest"`` returns the n whose measure is closest to the target
    (of the two values either side of the crossing; ties go to the larger).
    With ``minimized=True`` the joint information is first minimized over rho.
    Bounded measures whose supremum does not exceed the target are reported
    as unreachable together with the supremum.
    """
    target = check_positive("target", target)
    if rule not in ("nearest", "at_least"):
        raise DomainError("rule must be 'nearest' or 'at_least'")
    family = str(family).upper()
    sup = supremum(family, eta, measure, rho, minimized)
    if sup <= target:
        return SampleSizeResult(None, False, None, sup, rule, target)

    if minimized:
        n_min = 2

        def value(n):
            return min_joint_info(family, n, eta)
    else:
        n_min = 1
        base = DepNormalSpec(family, n_min, eta, rho)

        def value(n):
            return _measure(base.with_(n=n), measure)

    prev = None
    for n in range(n_min, n_max + 1):
        m = value(n)
        if m >= target:
            if rule == "nearest" and prev is not None and target - prev < m - target:
                return SampleSizeResult(n - 1, True, prev, sup, rule, target)
            return SampleSizeResult(n, True, m, sup, rule, target)
        prev = m
    return SampleSizeResult(None, False, None, sup, rule, target)
