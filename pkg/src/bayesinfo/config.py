"""Validated run configurations for the command-line interface.

Each subcommand has a pydantic model; unknown keys are rejected. Values come
from an optional JSON config file overlaid by explicit flags.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class _Base(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    format: Literal["csv", "json"] = "csv"
    unit: Literal["nats", "bits"] = "nats"
    seed: int | None = Field(default=None, ge=0, lt=2 ** 64)
    out: str | None = None


class LinmodelConfig(_Base):
    n: float = Field(default=10.0, gt=0)
    eta: float = Field(default=1.0, gt=0)
    prior_variances: list[float] = Field(default=[1.0, 1.0], min_length=2, max_length=2)
    sweep: int = Field(default=21, ge=0, le=100_000)

    @model_validator(mode="after")
    def _positive(self):
        if any(v <= 0 for v in self.prior_variances):
            raise ValueError("prior_variances must be > 0")
        return self


class DesignConfig(_Base):
    mode: Literal["prior", "sample"] = "prior"
    c: float = Field(default=100.0, gt=0)
    eta: float = Field(default=1.0, gt=0)
    kappa_max: float = Field(default=10.0, ge=1)
    sweep: int = Field(default=19, ge=0, le=100_000)
    eigenvalues: list[float] | None = None
    # sample mode
    n: float = Field(default=10.0, gt=0)
    prior_variances: list[float] = Field(default=[1.0, 1.0], min_length=1)
    point: list[float] | None = None

    @model_validator(mode="after")
    def _shapes(self):
        if self.eigenvalues is not None and (len(self.eigenvalues) < 1
                                             or any(v <= 0 for v in self.eigenvalues)):
            raise ValueError("eigenvalues must be a non-empty list of positive numbers")
        if any(v <= 0 for v in self.prior_variances):
            raise ValueError("prior_variances must be > 0")
        if self.point is not None and len(self.point) != len(self.prior_variances):
            raise ValueError("point must have one entry per prior variance")
        return self


class TTEConfig(_Base):
    table: Literal["decomposition", "censoring"] = "decomposition"
    alphas: list[float] = Field(default=[1.0, 2.0], min_length=1)
    n_max: int = Field(default=25, ge=0, le=1_000_000)

    @model_validator(mode="after")
    def _alphas(self):
        if any(a <= 0 for a in self.alphas):
            raise ValueError("alphas must be > 0 (improper priors are not supported)")
        if self.table == "censoring" and self.n_max < 1:
            raise ValueError("censoring needs n_max >= 1")
        return self


class DepConfig(_Base):
    table: Literal["curves", "joint", "minjoint", "samplesize"] = "curves"
    families: list[Literal["UC", "IC", "SC"]] = ["UC", "IC", "SC"]
    etas: list[float] = Field(default=[0.5], min_length=1)
    rhos: list[float] = Field(default=[0.5, 0.75])
    n_max: int = Field(default=50, ge=0, le=100_000)
    ns: list[int] = Field(default=[5, 10, 25])
    sweep: int = Field(default=20, ge=0, le=100_000)
    target: float = Field(default=1.0, gt=0)
    rule: Literal["nearest", "at_least"] = "nearest"

    @model_validator(mode="after")
    def _ranges(self):
        if any(e <= 0 for e in self.etas):
            raise ValueError("etas must be > 0")
        if any(not 0 <= r < 1 for r in self.rhos):
            raise ValueError("rhos must lie in [0, 1)")
        if any(n < 2 for n in self.ns):
            raise ValueError("ns entries must be >= 2")
        return self


class OrderstatsConfig(_Base):
    n: int = Field(default=26, ge=2, le=100_000)
    alphas: list[float] = Field(default=[0.5, 1.0, 2.0, 4.0], min_length=1)

    @model_validator(mode="after")
    def _alphas(self):
        if any(a <= 0 for a in self.alphas):
            raise ValueError("alphas must be > 0")
        return self


class VerifyConfig(_Base):
    format: Literal["json"] = "json"
    tight: bool = False
    replications: int = Field(default=100_000, ge=1000)


CONFIGS = {
    "linmodel": LinmodelConfig,
    "design": DesignConfig,
    "tte": TTEConfig,
    "dep": DepConfig,
    "orderstats": OrderstatsConfig,
    "verify": VerifyConfig,
}
