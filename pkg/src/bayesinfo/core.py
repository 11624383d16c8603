"""Shared result record and exception types."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class ImproperPriorError(DomainError):
    """A prior hyperparameter is at or beyond the improper (Jeffreys) limit."""


class NotPositiveDefiniteError(DomainError):
    """A correlation or covariance matrix failed Cholesky factorization."""


class OracleError(RuntimeError):
    """A verification oracle refused a request it cannot evaluate reliably."""


def check_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


def check_nonnegative(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
    return value


@dataclass(frozen=True)
class InfoTriple:
    """Parameter, predictive and joint information for one configuration.

    ``dependence`` is the conditional dependence between the sample and the
    future outcome given the parameter, so ``joint == parameter + dependence``.
    It is zero for conditionally independent models. ``predictive`` may be
    ``None`` when no closed form is available (order statistics).
    """

    parameter: float
    predictive: float | None
    joint: float
    dependence: float
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not math.isclose(self.joint, self.parameter + self.dependence,
                            rel_tol=0.0, abs_tol=1e-12 * max(1.0, abs(self.joint))):
            raise ValueError("joint must equal parameter + dependence")

    def as_dict(self) -> dict:
        out = asdict(self)
        out.pop("meta")
        return out
