"""Tabular data for each CLI subcommand.

Builders are pure: they take a validated config and return a :class:`Table`
in nats. Unit conversion and serialization happen at output time.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from bayesinfo import depnormal, design, linmodel, orderstats, tte
from bayesinfo.config import DepConfig, DesignConfig, LinmodelConfig, OrderstatsConfig, TTEConfig

__all__ = ["Table", "build_dep", "build_design", "build_linmodel", "build_orderstats", "build_tte"]

LN2 = math.log(2.0)


@dataclass
class Table:
    command: str
    columns: list[str]
    info_columns: frozenset[str]
    rows: list[list] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError("row width does not match the header")
        self.rows.append(list(values))

    def in_unit(self, unit: str) -> "Table":
        if unit == "nats":
            return self
        idx = [i for i, c in enumerate(self.columns) if c in self.info_columns]
        rows = []
        for row in self.rows:
            row = list(row)
            for i in idx:
                if isinstance(row[i], float):
                    row[i] = row[i] / LN2
            rows.append(row)
        return Table(self.command, self.columns, self.info_columns, rows, self.meta)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def jsonable(value):
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else None
    return value


def to_json(table: Table, unit: str) -> str:
    doc = {
        "command": table.command,
        "unit": unit,
        "columns": table.columns,
        "rows": [dict(zip(table.columns, row)) for row in table.rows],
        "meta": table.meta,
    }
    return json.dumps(jsonable(doc), indent=2) + "\n"


# -- linmodel --------------------------------------------------------------

def build_linmodel(cfg: LinmodelConfig) -> Table:
    """Unit-norm z sweep for p = 2.

    For each direction: information under the D-optimal allocation, and the
    predictive information under the allocation that is optimal for that
    direction.
    """
    v0 = np.asarray(cfg.prior_variances, dtype=float)
    t = Table("linmodel",
              ["angle", "z1", "z2", "n1", "n2", "parameter", "predictive", "joint",
               "n1_predictive_opt", "n2_predictive_opt", "predictive_opt"],
              frozenset({"parameter", "predictive", "joint", "predictive_opt"}))
    dopt = design.optimal_sample_allocation_parameter(cfg.n, cfg.eta, v0)
    spec = linmodel.LinearModelSpec(dopt.weights, v0, cfg.eta)
    t.meta["d_optimal"] = dopt.as_dict()
    for angle in np.linspace(0.0, math.pi / 2, cfg.sweep):
        z = np.array([math.cos(angle), math.sin(angle)])
        z[np.abs(z) < 1e-15] = 0.0
        trip = linmodel.joint_info(spec, z)
        popt = design.optimal_sample_allocation_predictive(cfg.n, cfg.eta, v0, z, fallback=True)
        t.add(float(angle), float(z[0]), float(z[1]), float(dopt.weights[0]), float(dopt.weights[1]),
              trip.parameter, trip.predictive, trip.joint,
              float(popt.weights[0]), float(popt.weights[1]), float(popt.objective_value))
    if t.rows:
        k = int(np.argmin([row[-1] for row in t.rows]))
        t.meta["predictive_opt_minimizer"] = {"z1": t.rows[k][1], "z2": t.rows[k][2]}
    return t


# -- design ----------------------------------------------------------------

def _prior_row(t: Table, c, eta, lam):
    opt = design.optimal_prior_variance_allocation(c, eta, lam)
    orth = design.orthogonal_prior_allocation(c, eta, lam)
    gp = design.gprior_allocation(c, eta, lam)
    t.add(linmodel.condition_number(lam), *[float(x) for x in lam],
          *[float(x) for x in opt.weights], float(opt.objective_value),
          orth.objective_value, gp.objective_value, opt.feasible, opt.binding_minimum)


def build_design(cfg: DesignConfig) -> Table:
    if cfg.mode == "sample":
        v0 = np.asarray(cfg.prior_variances, dtype=float)
        p = v0.size
        t = Table("design", ["criterion", *[f"n{j + 1}" for j in range(p)],
                             "objective", "feasible", "binding_minimum", "method"],
                  frozenset({"objective"}))
        res = [("parameter", design.optimal_sample_allocation_parameter(cfg.n, cfg.eta, v0))]
        if cfg.point is not None:
            res.append(("predictive",
                        design.optimal_sample_allocation_predictive(cfg.n, cfg.eta, v0, cfg.point)))
        for name, r in res:
            t.add(name, *[float(w) for w in r.weights], float(r.objective_value), r.feasible,
                  r.binding_minimum, r.meta.get("method", ""))
        return t

    p = 2 if cfg.eigenvalues is None else len(cfg.eigenvalues)
    t = Table("design", ["kappa", *[f"lambda{j + 1}" for j in range(p)],
                         *[f"v{j + 1}" for j in range(p)],
                         "optimal", "orthogonal", "gprior", "feasible", "binding_minimum"],
              frozenset({"optimal", "orthogonal", "gprior"}))
    if cfg.eigenvalues is not None:
        lam = np.sort(np.asarray(cfg.eigenvalues, dtype=float))[::-1]
        _prior_row(t, cfg.c, cfg.eta, lam)
        return t
    # spectra normalized to sum p = 2 with condition number kappa
    for kappa in np.linspace(1.0, cfg.kappa_max, cfg.sweep):
        k2 = kappa * kappa
        _prior_row(t, cfg.c, cfg.eta, np.array([2 * k2 / (1 + k2), 2 / (1 + k2)]))
    return t


# -- tte -------------------------------------------------------------------

def build_tte(cfg: TTEConfig) -> Table:
    if cfg.table == "censoring":
        t = Table("tte", ["alpha", "n", "r", "param_loss", "predictive_loss",
                          "parameter_r", "predictive_r"],
                  frozenset({"param_loss", "predictive_loss", "parameter_r", "predictive_r"}))
        n = cfg.n_max
        for a in cfg.alphas:
            for r in range(1, n + 1):
                loss = tte.censoring_loss(a, n, r)
                t.add(float(a), n, r, loss.param_loss, loss.predictive_loss,
                      tte.parameter_info(a, r), tte.predictive_info(a, r))
        return t
    t = Table("tte", ["alpha", "n", "parameter", "predictive", "parameter_alpha_plus_one",
                      "residual", "identity_holds"],
              frozenset({"parameter", "predictive", "parameter_alpha_plus_one", "residual"}))
    for a in cfg.alphas:
        for n in range(0, cfg.n_max + 1):
            tr = tte.info_triple(a, n)
            t.add(float(a), n, tr.parameter, tr.predictive, tr.meta["parameter_alpha_plus_one"],
                  tr.meta["decomposition_residual"], tr.meta["decomposition_holds"])
    return t


# -- dependent normals -------------------------------------------------------

def _family_rhos(family, rhos):
    return [0.0] if family == "UC" else list(rhos)


def build_dep(cfg: DepConfig) -> Table:
    info = {"parameter", "predictive", "joint", "min_joint", "value", "supremum"}
    if cfg.table == "curves":
        t = Table("dep", ["family", "eta", "rho", "n", "parameter", "predictive", "joint"],
                  frozenset(info))
        for fam in cfg.families:
            for eta in cfg.etas:
                for rho in _family_rhos(fam, cfg.rhos):
                    for n in range(1, cfg.n_max + 1):
                        tr = depnormal.joint_info(depnormal.DepNormalSpec(fam, n, eta, rho))
                        t.add(fam, float(eta), float(rho), n, tr.parameter, tr.predictive, tr.joint)
        return t
    if cfg.table == "joint":
        t = Table("dep", ["family", "eta", "n", "rho", "rho_squared", "joint", "rho0", "min_joint"],
                  frozenset(info))
        for fam in cfg.families:
            if fam == "UC":
                continue
            for eta in cfg.etas:
                for n in cfg.ns:
                    jm = depnormal.joint_minimizer_rho(fam, n, eta)
                    for rho in np.linspace(0.0, 0.99, cfg.sweep):
                        j = depnormal.joint_info(depnormal.DepNormalSpec(fam, n, eta, float(rho))).joint
                        t.add(fam, float(eta), n, float(rho), float(rho * rho), j, jm.rho0, jm.min_joint)
        return t
    if cfg.table == "minjoint":
        t = Table("dep", ["family", "eta", "n", "rho0", "min_joint", "boundary"], frozenset(info))
        for fam in cfg.families:
            if fam == "UC":
                continue
            for eta in cfg.etas:
                for n in range(2, cfg.n_max + 1):
                    jm = depnormal.joint_minimizer_rho(fam, n, eta)
                    t.add(fam, float(eta), n, jm.rho0, jm.min_joint, jm.boundary)
        return t
    t = Table("dep", ["family", "eta", "rho", "target", "rule", "n", "reachable", "value", "supremum"],
              frozenset(info | {"target"}))
    for fam in cfg.families:
        for eta in cfg.etas:
            for rho in _family_rhos(fam, cfg.rhos):
                res = depnormal.sample_size_for_info(fam, eta, cfg.target, rho=rho, rule=cfg.rule)
                t.add(fam, float(eta), float(rho), float(cfg.target), cfg.rule, res.n, res.reachable,
                      res.value, res.supremum)
    return t


# -- order statistics --------------------------------------------------------

REPORTED_R_STAR = 17


def build_orderstats(cfg: OrderstatsConfig) -> Table:
    t = Table("orderstats", ["alpha", "n", "r", "parameter", "markov", "markov_mirror", "joint",
                             "is_argmax"],
              frozenset({"parameter", "markov", "markov_mirror", "joint"}))
    n = cfg.n
    argmax = {}
    for a in cfg.alphas:
        curve = orderstats.joint_curve(n, a)
        argmax[repr(float(a))] = list(curve.argmax)
        for r, par, dep, joint in zip(curve.r, curve.parameter, curve.dependence, curve.joint):
            t.add(float(a), n, r, par, dep, orderstats.markov_dependence_info(n, n - r), joint,
                  r in curve.argmax)
    t.meta = {"joint_argmax": argmax, "markov_argmax": orderstats.markov_argmax(n)}
    if n == 26:
        t.meta["reported_r_star"] = REPORTED_R_STAR
    return t
