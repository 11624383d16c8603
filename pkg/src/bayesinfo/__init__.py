"""Bayesian sample information about parameters and predictions.

Closed-form mutual-information measures (parameter, predictive and joint)
for conjugate normal linear models, the time-transformed exponential family,
dependent normal sequences and order statistics, together with the optimal
allocation rules that follow from them and independent numerical oracles.

All information quantities are in nats.
"""

from bayesinfo.core import (
    DomainError,
    ImproperPriorError,
    InfoTriple,
    NotPositiveDefiniteError,
    OracleError,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "ImproperPriorError",
    "InfoTriple",
    "NotPositiveDefiniteError",
    "OracleError",
    "__version__",
]
