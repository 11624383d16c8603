"""Oracle-agreement report.

Each check compares closed forms with an independent route (quadrature,
seeded Monte Carlo, grid search or explicit matrices) and records ``pass``,
``fail`` or ``expected-mismatch``. The last status marks the documented
places where a value quoted in the source does not follow from its own
formulas; the computed value is shown next to the quoted one.

The report contains no timings or paths, so a fixed seed gives
byte-identical output.
"""

from __future__ import annotations

import itertools
import json
import math

import numpy as np

from bayesinfo import depnormal, design, gaussmi, linmodel, oracle, orderstats, tte
from bayesinfo.tables import jsonable

__all__ = ["Check", "run_checks", "simplex_grid_max", "report_json"]

TIGHT_TOLERANCE = 1e-15

REPORTED_SAMPLE_SIZES = {("UC", 0.0): 3, ("IC", 0.5): 26, ("IC", 0.75): 37,
                      ("SC", 0.5): 8, ("SC", 0.75): 16}
REPORTED_MIN_JOINT_SIZES = {0.25: 9, 0.5: 25, 0.75: 37}


def Check(id: str, status: str, **fields) -> dict:
    return {"id": id, "status": status, **fields}


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def simplex_grid_max(objective, budget: float, p: int, m: int = 200) -> float:
    """Largest objective over an m-point-per-dimension interior grid of {x > 0, sum x = budget}."""
    axis = np.linspace(0.0, budget, m + 2)[1:-1]
    best = -math.inf
    for head in itertools.product(axis, repeat=p - 1):
        last = budget - sum(head)
        if last <= 0:
            continue
        best = max(best, objective(np.array([*head, last])))
    return best


# -- individual check groups ---------------------------------------------------

def _sample_size_checks() -> list[dict]:
    out = []
    closed = {("UC", 0.0): 0.973, ("SC", 0.5): 1.019, ("SC", 0.75): 0.993}
    for (fam, rho), reported_n in REPORTED_SAMPLE_SIZES.items():
        res = depnormal.sample_size_for_info(fam, 0.5, 1.0, rho=rho)
        cid = f"depnormal.sample_size.{fam}.rho={rho}"
        if fam == "IC":
            out.append(Check(cid, "pass" if res.n == reported_n else "expected-mismatch",
                             computed_n=res.n, reported_n=reported_n, reachable=res.reachable,
                             supremum=res.supremum,
                             note="parameter information is bounded by 0.5 ln(1 + 1/(rho eta)) < 1 nat"))
            continue
        ok = res.n == reported_n and abs(res.value - closed[(fam, rho)]) <= 1e-3
        out.append(Check(cid, _status(ok), computed_n=res.n, reported_n=reported_n, value=res.value))
    return out


def _tte_checks(tol: float, use_bounds: bool, mc: oracle.MonteCarloSettings) -> list[dict]:
    out = []
    worst = max(abs(tte.info_triple(a, n).meta["decomposition_residual"])
                for a in (0.5, 1.0, 2.0, 4.0) for n in range(1, 51))
    out.append(Check("tte.decomposition_identity", _status(worst <= 1e-12),
                     max_abs_residual=worst, tolerance=1e-12))
    for a, n in itertools.product((0.5, 1.0, 2.0), (1, 2, 3, 5)):
        q = oracle.mi_quadrature_tte(a, n)
        closed = tte.parameter_info(a, n)
        allow = max(tol, q.error_bound) if use_bounds else tol
        ok = q.converged and abs(q.estimate - closed) <= allow
        out.append(Check(f"tte.quadrature.alpha={a}.n={n}", _status(ok), closed_form=closed,
                         estimate=q.estimate, error_bound=q.error_bound, tolerance=allow))
    e = oracle.mi_montecarlo(oracle.TTEModel(1.0, 3), "parameter", mc)
    w = oracle.mi_montecarlo(oracle.TTEModel(1.0, 3, transform="weibull", q=2.0), "parameter", mc)
    closed = tte.parameter_info(1.0, 3)
    se = math.hypot(e.standard_error, w.standard_error)
    out.append(Check("tte.montecarlo.weibull_invariance", _status(abs(e.estimate - w.estimate) <= 3 * se),
                     exponential=e.estimate, weibull=w.estimate, standard_error=se))
    out.append(Check("tte.montecarlo.closed_form", _status(abs(e.estimate - closed) <= 3 * e.standard_error),
                     closed_form=closed, estimate=e.estimate, standard_error=e.standard_error))
    p = oracle.mi_montecarlo(oracle.TTEModel(2.0, 5), "predictive", mc)
    closed = tte.predictive_info(2.0, 5)
    out.append(Check("tte.montecarlo.predictive", _status(abs(p.estimate - closed) <= 3 * p.standard_error),
                     closed_form=closed, estimate=p.estimate, standard_error=p.standard_error))
    return out


def _orderstat_checks(tol: float, use_bounds: bool, mc: oracle.MonteCarloSettings) -> list[dict]:
    out = []
    worst, worst_case, ok_all = 0.0, None, True
    for n in range(2, 11):
        for r in range(1, n):
            q = oracle.mi_quadrature_consecutive_uniform_order_stats(n, r)
            closed = orderstats.markov_dependence_info(n, r)
            allow = max(tol, q.error_bound) if use_bounds else tol
            gap = abs(q.estimate - closed)
            ok_all &= q.converged and gap <= allow
            if gap >= worst:
                worst, worst_case = gap, [n, r]
    out.append(Check("orderstats.quadrature.n<=10", _status(ok_all), max_abs_gap=worst,
                     worst_case=worst_case, tolerance=tol))
    sym = max(abs(orderstats.markov_dependence_info(n, r) - orderstats.markov_dependence_info(n, n - r))
              for n in range(2, 61) for r in range(1, n))
    out.append(Check("orderstats.symmetry", _status(sym <= 1e-12), max_abs_gap=sym))
    med = all(orderstats.markov_argmax(n) == sorted({n // 2, (n + 1) // 2}) for n in range(2, 61))
    out.append(Check("orderstats.median_argmax.n<=60", _status(med)))
    curve = orderstats.joint_curve(26, 0.5)
    out.append(Check("orderstats.r_star.n=26.alpha=0.5", _status(set(curve.argmax) <= {16, 17, 18}),
                     computed=list(curve.argmax), reported=17))
    for n, r, a in ((5, 2, 1.0), (10, 5, 2.0)):
        c = orderstats.theorem4b_order_check(n, a, r)
        chain = c.markov + c.theta_next - c.parameter_step - c.predictive
        out.append(Check(f"orderstats.theorem4b.n={n}.r={r}.alpha={a}",
                         _status(c.converged and c.consistent is True and abs(chain) <= 1e-7),
                         directions=c.lhs_ge, chain_rule_gap=chain))
    e = oracle.mi_montecarlo(oracle.OrderStatModel(5, 2), "conditional-dependence", mc)
    w = oracle.mi_montecarlo(oracle.OrderStatModel(5, 2, parent="weibull", theta=2.0, q=1.5),
                             "conditional-dependence", mc)
    se = math.hypot(e.standard_error, w.standard_error)
    closed = orderstats.markov_dependence_info(5, 2)
    out.append(Check("orderstats.montecarlo.parent_invariance",
                     _status(abs(e.estimate - w.estimate) <= 3 * se
                             and abs(e.estimate - closed) <= 3 * e.standard_error),
                     exponential=e.estimate, weibull=w.estimate, closed_form=closed, standard_error=se))
    return out


def _table1_checks() -> list[dict]:
    out = []
    worst = {"t_n": 0.0, "r2": 0.0, "det": 0.0}
    sc_table_gap = 0.0
    for fam in ("UC", "IC", "SC"):
        for n in range(1, 13):
            for rho in ([0.0] if fam == "UC" else [k / 10 for k in range(1, 10)]):
                spec = depnormal.DepNormalSpec(fam, n, 0.5, rho)
                R = depnormal.conditional_correlation_matrix(spec)
                Rinv = np.linalg.inv(R)
                worst["t_n"] = max(worst["t_n"], abs(Rinv.sum() - depnormal.t_n(spec)))
                worst["det"] = max(worst["det"], abs(np.linalg.det(R) - depnormal.determinant(spec)))
                if fam == "SC" and n >= 3:
                    sc_table_gap = max(sc_table_gap,
                                       abs(np.linalg.det(R) - depnormal.table_determinant(spec)))
                aug = depnormal.augmented_conditional_matrix(spec)
                r2 = 1.0 - 1.0 / gaussmi.inverse_correlation(aug)[-1, -1]
                worst["r2"] = max(worst["r2"], abs(r2 - depnormal.conditional_r_squared(spec)))
    for key, gap in worst.items():
        out.append(Check(f"depnormal.table1.{key}", _status(gap <= 1e-10), max_abs_gap=gap))
    out.append(Check("depnormal.table1.sc_determinant_entry",
                     "expected-mismatch" if sc_table_gap > 1e-10 else "pass",
                     max_abs_gap=sc_table_gap,
                     note="n-dimensional SC determinant is (1 - rho^2)^(n-1); the table lists 1 - rho^2"))
    return out


def _dep_checks(mc: oracle.MonteCarloSettings) -> list[dict]:
    out = []
    cases = [(oracle.DepNormalModel("UC", 5, 0.5), "parameter"),
             (oracle.DepNormalModel("UC", 5, 0.5), "predictive"),
             (oracle.DepNormalModel("IC", 5, 0.5, 0.5), "joint"),
             (oracle.DepNormalModel("SC", 6, 0.5, 0.6), "predictive")]
    for model, target in cases:
        spec = depnormal.DepNormalSpec(model.family, model.n, model.eta, model.rho)
        closed = {"parameter": depnormal.parameter_info(spec),
                  "predictive": depnormal.predictive_info(spec),
                  "joint": depnormal.joint_info(spec).joint}[target]
        res = oracle.mi_montecarlo(model, target, mc)
        out.append(Check(f"depnormal.montecarlo.{model.family}.n={model.n}.rho={model.rho}.{target}",
                         _status(abs(res.estimate - closed) <= 3 * res.standard_error),
                         closed_form=closed, estimate=res.estimate, standard_error=res.standard_error))
    grid = np.linspace(0.0, 0.999, 99901)  # every 10th point is used: step 1e-4
    for fam, n, eta in itertools.product(("IC", "SC"), (5, 10, 25), (0.25, 0.5, 0.75)):
        jm = depnormal.joint_minimizer_rho(fam, n, eta)
        vals = np.array([depnormal.joint_info(depnormal.DepNormalSpec(fam, n, eta, float(r))).joint
                         for r in grid[::10]])
        k = int(np.argmin(vals))
        ok = abs(grid[::10][k] - jm.rho0) <= 1e-3 and abs(vals[k] - jm.min_joint) <= 1e-6
        out.append(Check(f"depnormal.joint_minimizer.{fam}.n={n}.eta={eta}", _status(ok),
                         rho0=jm.rho0, grid_rho=float(grid[::10][k]), min_joint=jm.min_joint))
    jm = depnormal.joint_minimizer_rho("SC", 9, 0.25)
    out.append(Check("depnormal.joint_minimizer.SC.printed_coefficients", "expected-mismatch",
                     corrected_root=jm.rho0, corrected_min=jm.min_joint,
                     printed_root=jm.diagnostics["printed_coefficient_root"],
                     joint_at_printed_root=jm.diagnostics["joint_at_printed_root"]))
    for eta, reported_n in REPORTED_MIN_JOINT_SIZES.items():
        res = depnormal.sample_size_for_info("SC", eta, 1.5, measure="joint", minimized=True,
                                             rule="at_least")
        ok = res.n is not None and abs(res.n - reported_n) <= 1
        out.append(Check(f"depnormal.sc_min_joint_sample_size.min_joint_1.5.eta={eta}",
                         "pass" if ok else "expected-mismatch", computed_n=res.n, reported_n=reported_n,
                         tolerance_n=1))
    return out


def _design_checks() -> list[dict]:
    out = []
    n, eta = 10.0, 1.0
    for v in ((1.0, 1.0), (1.0, 0.5)):
        res = design.optimal_sample_allocation_parameter(n, eta, v)
        grid = simplex_grid_max(lambda x: linmodel.parameter_info(linmodel.LinearModelSpec(x, v, eta)), n, 2)
        ok = res.objective_value >= grid - 1e-9 and abs(res.weights.sum() - n) <= 1e-9
        out.append(Check(f"design.parameter_allocation.v={list(v)}", _status(ok),
                         weights=list(res.weights), objective=res.objective_value, grid_max=grid))
    for z in ((0.9, 0.4359), (0.6, 0.8)):
        v = (1.0, 1.0)
        res = design.optimal_sample_allocation_predictive(n, eta, v, z)
        grid = simplex_grid_max(lambda x: linmodel.predictive_info(linmodel.LinearModelSpec(x, v, eta), z), n, 2)
        ok = res.feasible and res.objective_value >= grid - 1e-9 and abs(res.weights.sum() - n) <= 1e-9
        out.append(Check(f"design.predictive_allocation.z={list(z)}", _status(ok),
                         weights=list(res.weights), objective=res.objective_value, grid_max=grid))
    lam = np.array([1.6, 0.4])
    res = design.optimal_prior_variance_allocation(100.0, 1.0, lam)
    grid = simplex_grid_max(lambda x: linmodel.parameter_info(linmodel.LinearModelSpec(lam, x, 1.0)), 100.0, 2)
    resid = max(abs(r) for r in res.meta["condition_index_residual"])
    ok = res.objective_value >= grid - 1e-9 and resid <= 1e-9 and abs(res.weights.sum() - 100.0) <= 1e-9
    out.append(Check("design.prior_variance_allocation.lambda=[1.6,0.4]", _status(ok),
                     weights=list(res.weights), objective=res.objective_value, grid_max=grid,
                     condition_index_residual=resid))
    return out


def _linmodel_checks() -> list[dict]:
    eta, v0 = 1.0, np.array([1.0, 1.0])
    dopt = design.optimal_sample_allocation_parameter(10.0, eta, v0)
    spec = linmodel.LinearModelSpec(dopt.weights, v0, eta)
    angles = np.linspace(0.0, math.pi / 2, 181)
    env, below = [], True
    for a in angles:
        z = np.array([math.cos(a), math.sin(a)])
        z[np.abs(z) < 1e-15] = 0.0
        below &= linmodel.predictive_info(spec, z) <= linmodel.parameter_info(spec) + 1e-15
        env.append(design.optimal_sample_allocation_predictive(10.0, eta, v0, z, fallback=True).objective_value)
    k = int(np.argmin(env))
    return [
        Check("linmodel.example1.d_optimal", _status(np.allclose(dopt.weights, [5.0, 5.0], atol=1e-12)),
              weights=list(dopt.weights)),
        Check("linmodel.example1.predictive_envelope_min", _status(abs(angles[k] - math.pi / 4) < 1e-12),
              minimizer=[math.cos(angles[k]), math.sin(angles[k])]),
        Check("linmodel.example1.predictive_below_parameter", _status(bool(below))),
    ]


# -- driver --------------------------------------------------------------------

def run_checks(seed: int = 0, tight: bool = False, replications: int = 100_000) -> dict:
    """Run every check; ``tight`` drops the quadrature error-bound allowance (negative control)."""
    tol = TIGHT_TOLERANCE if tight else 1e-6
    use_bounds = not tight
    mc = oracle.MonteCarloSettings(seed=seed, replications=replications, batches=20)
    checks = []
    checks += _sample_size_checks()
    checks += _tte_checks(tol, use_bounds, mc)
    checks += _orderstat_checks(tol, use_bounds, mc)
    checks += _table1_checks()
    checks += _dep_checks(mc)
    checks += _design_checks()
    checks += _linmodel_checks()
    summary = {s: sum(c["status"] == s for c in checks) for s in ("pass", "fail", "expected-mismatch")}
    return {"seed": seed, "tight": tight, "replications": replications,
            "summary": summary, "ok": summary["fail"] == 0, "checks": checks}


def report_json(report: dict) -> str:
    return json.dumps(jsonable(report), indent=2) + "\n"
