"""Independent numerical estimates of the mutual informations.

Nothing here calls the closed-form modules. Quadrature integrates the
defining integrals (expected KL divergence, or f log(f / f1 f2)) with
:func:`scipy.integrate.quad`, and reference special functions come from
:mod:`scipy.special`. Monte Carlo averages log density ratios of the
generative model.

Reproducibility: a Monte Carlo run with seed ``s`` is split into ``batches``
batches. Batch ``b`` draws from ``PCG64(SeedSequence(s).spawn(batches)[b])``,
so estimates are bit-identical for a fixed (seed, replications, batches)
however many workers evaluate the batches.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import integrate, special, stats

from bayesinfo.core import DomainError, OracleError

__all__ = [
    "DepNormalModel",
    "MCResult",
    "MonteCarloSettings",
    "OrderStatModel",
    "QuadratureResult",
    "QuadratureSettings",
    "TTEModel",
    "entropy_quadrature",
    "kl_quadrature",
    "mi_montecarlo",
    "mi_quadrature_consecutive_uniform_order_stats",
    "mi_quadrature_order_stat_parameter",
    "mi_quadrature_order_stat_predictive",
    "mi_quadrature_tte",
    "order_stat_marginal_entropy",
]

UNIFORM_ORDER_STAT_MAX_N = 12


@dataclass(frozen=True)
class QuadratureSettings:
    relative_tolerance: float = 1e-8
    absolute_tolerance: float = 1e-11
    max_subdivisions: int = 2000
    tail_mass: float = 1e-10

    def __post_init__(self):
        if not self.relative_tolerance > 0 or not self.absolute_tolerance > 0:
            raise DomainError("quadrature tolerances must be > 0")
        if self.max_subdivisions < 16:
            raise DomainError("max_subdivisions must be >= 16")
        if not 0 < self.tail_mass < 1e-3:
            raise DomainError("tail_mass must lie in (0, 1e-3)")


@dataclass(frozen=True)
class QuadratureResult:
    estimate: float
    error_bound: float
    converged: bool = True
    message: str = ""


class _NotConverged(Exception):
    pass


def _quad(f, a, b, settings: QuadratureSettings, **kw) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, a, b, epsabs=settings.absolute_tolerance,
                                      epsrel=settings.relative_tolerance,
                                      limit=settings.max_subdivisions, **kw)
        except integrate.IntegrationWarning as exc:
            raise _NotConverged(str(exc).strip().splitlines()[0]) from None
    return val, err


def _run(fn) -> QuadratureResult:
    try:
        est, err = fn()
    except _NotConverged as exc:
        return QuadratureResult(math.nan, math.inf, False, str(exc))
    return QuadratureResult(est, err, True, "")


# -- generic 1-D pieces ----------------------------------------------------

def entropy_quadrature(logpdf, lower: float, upper: float,
                       settings: QuadratureSettings = QuadratureSettings()) -> QuadratureResult:
    """-integral f log f over [lower, upper] for a scalar log density."""
    def integrand(x):
        lp = logpdf(x)
        return 0.0 if lp == -math.inf else -math.exp(lp) * lp

    return _run(lambda: _quad(integrand, lower, upper, settings))


def kl_quadrature(logp, logq, lower: float, upper: float,
                  settings: QuadratureSettings = QuadratureSettings()) -> QuadratureResult:
    """integral p log(p/q) over [lower, upper]."""
    def integrand(x):
        lp = logp(x)
        return 0.0 if lp == -math.inf else math.exp(lp) * (lp - logq(x))

    return _run(lambda: _quad(integrand, lower, upper, settings))


def _gamma_logpdf(shape: float, rate: float):
    c = shape * math.log(rate) - math.lgamma(shape)

    def f(x):
        if x <= 0.0:
            return -math.inf
        return c + (shape - 1.0) * math.log(x) - rate * x

    return f


# -- TTE / gamma prior -----------------------------------------------------

def mi_quadrature_tte(alpha: float, n: int,
                      settings: QuadratureSettings = QuadratureSettings()) -> QuadratureResult:
    """E over s_n of KL(posterior : prior), by nested quadrature.

    With beta = 1 (the measure is scale free), s_n has the inverted-beta
    marginal; u = s/(1+s) is Beta(n, alpha), handled with an algebraic
    weight. The inner KL between Gamma(alpha+n, 1+s) and Gamma(alpha, 1) is
    integrated over the central 1 - tail_mass of the posterior.
    """
    if int(n) != n or n < 1:
        raise DomainError("n must be an integer >= 1")
    if not alpha > 0:
        raise DomainError("alpha must be > 0")
    a1 = alpha + n
    log_prior = _gamma_logpdf(alpha, 1.0)
    half_tail = 0.5 * settings.tail_mass
    t_lo = special.gammaincinv(a1, half_tail)
    t_hi = special.gammainccinv(a1, half_tail)
    inner_err = [0.0]

    def kl_at(u):
        # the weighted rule samples the endpoints; keep 1 - u representable
        rate = 1.0 / max(1.0 - u, 2.0 ** -52)  # 1 + s
        logp = _gamma_logpdf(a1, rate)
        val, err = _quad(lambda th: math.exp(logp(th)) * (logp(th) - log_prior(th)),
                         t_lo / rate, t_hi / rate, settings)
        inner_err[0] = max(inner_err[0], err)
        return val

    log_beta = special.betaln(n, alpha)

    def outer():
        val, err = _quad(kl_at, 0.0, 1.0, settings, weight="alg", wvar=(n - 1.0, alpha - 1.0))
        scale = math.exp(-log_beta)
        return val * scale, (err + inner_err[0]) * scale + settings.tail_mass

    return _run(outer)


# -- order statistics ------------------------------------------------------

def mi_quadrature_consecutive_uniform_order_stats(
        n: int, r: int, settings: QuadratureSettings = QuadratureSettings()) -> QuadratureResult:
    """MI between the r-th and (r+1)-th order statistics of n uniforms.

    Integrates f(u, v) log[f(u, v) / (f_r(u) f_{r+1}(v))] over 0 < u < v < 1,
    with f_r, f_{r+1} the Beta(r, n-r+1) and Beta(r+1, n-r) marginals.
    """
    if int(n) != n or int(r) != r or not 1 <= r <= n - 1:
        raise DomainError("need integers 1 <= r <= n-1")
    if n > UNIFORM_ORDER_STAT_MAX_N:
        raise OracleError(f"n={n} exceeds the quadrature cost bound "
                          f"({UNIFORM_ORDER_STAT_MAX_N}); use mi_montecarlo with OrderStatModel")
    log_c = math.lgamma(n + 1) - math.lgamma(r) - math.lgamma(n - r)
    log_b1 = special.betaln(r, n - r + 1)
    log_b2 = special.betaln(r + 1, n - r)

    def log_joint(u, v):
        return log_c + (r - 1) * math.log(u) + (n - r - 1) * math.log1p(-v)

    def log_f1(u):
        return (r - 1) * math.log(u) + (n - r) * math.log1p(-u) - log_b1

    def log_f2(v):
        return r * math.log(v) + (n - r - 1) * math.log1p(-v) - log_b2

    inner_err = [0.0]

    def inner(u):
        if u <= 0.0 or u >= 1.0:
            return 0.0
        lf1 = log_f1(u)

        def g(v):
            if v <= u or v >= 1.0:
                return 0.0
            lj = log_joint(u, v)
            return math.exp(lj) * (lj - lf1 - log_f2(v))

        val, err = _quad(g, u, 1.0, settings)
        inner_err[0] = max(inner_err[0], err)
        return val

    def outer():
        val, err = _quad(inner, 0.0, 1.0, settings)
        return val, err + inner_err[0]

    return _run(outer)


def _exp_order_stat_logpdf(n: int, k: int):
    """log density of the k-th of n order statistics of Exp(1)."""
    log_c = math.lgamma(n + 1) - math.lgamma(k) - math.lgamma(n - k + 1)

    def f(x):
        if x <= 0.0:
            return -math.inf
        return log_c + (k - 1) * math.log(-math.expm1(-x)) - (n - k + 1) * x

    return f


def order_stat_marginal_entropy(n: int, k: int, alpha: float, beta: float = 1.0,
                                settings: QuadratureSettings = QuadratureSettings()) -> QuadratureResult:
    """Entropy of the k-th order statistic of n exponentials with a Gamma(alpha, beta) rate.

    The marginal density f(y) = integral theta f_X(theta y) pi(theta) d theta
    is itself evaluated by quadrature; the entropy integral runs over
    w = log y, in which both tails decay exponentially.
    """
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    log_fx = _exp_order_stat_logpdf(n, k)
    log_prior = _gamma_logpdf(alpha, beta)
    inner_err = [0.0]

    def log_marginal(y):
        if y >= 1.0:
            # t = theta * y keeps the order-statistic factor at a fixed scale
            def g(t):
                return t * math.exp(log_fx(t) + log_prior(t / y))
            v, e = _quad(g, 0.0, math.inf, settings)
            v, e = v / (y * y), e / (y * y)
        else:
            def g(th):
                return th * math.exp(log_fx(th * y) + log_prior(th))
            v, e = _quad(g, 0.0, math.inf, settings)
        inner_err[0] = max(inner_err[0], e)
        return math.log(v) if v > 0 else -math.inf

    # y = exp(w): f_W(w) = f_Y(e^w) e^w
    center = math.log(beta / max(alpha, 1e-3)) - math.log(n - k + 1)
    span_hi = 40.0 / min(alpha, 1.0) + 10.0
    span_lo = 40.0 / k + 10.0

    def integrand(w):
        lf = log_marginal(math.exp(w)) + w
        return 0.0 if lf == -math.inf else -math.exp(lf) * lf

    def run():
        h_w, err = _quad(integrand, center - span_lo, center + span_hi, settings)

        # H(Y) = H(W) + E[W]
        def ew(w):
            lf = log_marginal(math.exp(w)) + w
            return 0.0 if lf == -math.inf else math.exp(lf) * w

        e_w, err2 = _quad(ew, center - span_lo, center + span_hi, settings)
        return h_w + e_w, err + err2 + 2 * inner_err[0]

    return _run(run)


def _exp_order_stat_entropy(n: int, k: int, settings: QuadratureSettings) -> QuadratureResult:
    return entropy_quadrature(_exp_order_stat_logpdf(n, k), 0.0, math.inf, settings)


def mi_quadrature_order_stat_parameter(n: int, k: int, alpha: float, beta: float = 1.0,
                                       settings: QuadratureSettings = QuadratureSettings(),
                                       marginal_entropy: QuadratureResult | None = None) -> QuadratureResult:
    """M(Theta; Y_k) for the k-th order statistic of an exponential sample.

    H(Y_k) - E_theta H(Y_k | theta), with H(Y_k | theta) = H(X_k) - log theta.
    """
    hm = marginal_entropy or order_stat_marginal_entropy(n, k, alpha, beta, settings)
    hx = _exp_order_stat_entropy(n, k, settings)
    if not (hm.converged and hx.converged):
        return QuadratureResult(math.nan, math.inf, False, hm.message or hx.message)
    e_log_theta = float(special.digamma(alpha)) - math.log(beta)
    return QuadratureResult(hm.estimate - (hx.estimate - e_log_theta),
                            hm.error_bound + hx.error_bound)


def mi_quadrature_order_stat_predictive(n: int, r: int, alpha: float, beta: float = 1.0,
                                        settings: QuadratureSettings = QuadratureSettings(),
                                        marginal_entropy: QuadratureResult | None = None) -> QuadratureResult:
    """M(Y_1..Y_r; Y_{r+1}) for an exponential sample with a gamma prior.

    Given the first r order statistics, Y_{r+1} - y_r is Lomax with shape
    alpha + r and scale (beta + t_r)/(n - r), where t_r is the total time on
    test; E log(beta + t_r) = log beta + psi(alpha + r) - psi(alpha).
    """
    if not 1 <= r <= n - 1:
        raise DomainError("need 1 <= r <= n-1")
    hm = marginal_entropy or order_stat_marginal_entropy(n, r + 1, alpha, beta, settings)
    if not hm.converged:
        return hm
    lomax_h = float(stats.lomax(alpha + r).entropy())
    e_log_scale = (math.log(beta) + float(special.digamma(alpha + r) - special.digamma(alpha))
                   - math.log(n - r))
    return QuadratureResult(hm.estimate - (lomax_h + e_log_scale), hm.error_bound)


# -- Monte Carlo -----------------------------------------------------------

@dataclass(frozen=True)
class MonteCarloSettings:
    seed: int = 0
    replications: int = 100_000
    batches: int = 20
    workers: int = 1

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError("seed must be an unsigned 64-bit integer")
        if self.replications < 1000:
            raise DomainError("replications must be >= 1000")
        if self.batches < 10:
            raise DomainError("batches must be >= 10")
        if self.workers < 1:
            raise DomainError("workers must be >= 1")


@dataclass(frozen=True)
class MCResult:
    estimate: float
    standard_error: float
    replications: int
    batch_means: tuple[float, ...] = ()


@dataclass(frozen=True)
class TTEModel:
    alpha: float
    n: int
    beta: float = 1.0
    transform: Literal["exponential", "weibull"] = "exponential"
    q: float = 2.0


@dataclass(frozen=True)
class DepNormalModel:
    family: Literal["UC", "IC", "SC"]
    n: int
    eta: float
    rho: float = 0.0


@dataclass(frozen=True)
class OrderStatModel:
    n: int
    r: int
    parent: Literal["exponential", "weibull"] = "exponential"
    theta: float = 1.0
    q: float = 2.0


def _tte_batch(model: TTEModel, target: str, rng: np.random.Generator, size: int) -> np.ndarray:
    a, b, n = model.alpha, model.beta, int(model.n)
    theta = rng.gamma(a, 1.0 / b, size=size)
    if model.transform == "exponential":
        y = rng.exponential(1.0, size=(size, n)) / theta[:, None]
        phi = y
        log_jac = np.zeros(size)
    elif model.transform == "weibull":
        q = model.q
        y = rng.weibull(q, size=(size, n)) * theta[:, None] ** (-1.0 / q)
        phi = y ** q
        log_jac = np.sum(np.log(q) + (q - 1.0) * np.log(y), axis=1)
    else:
        raise DomainError(f"unsupported transform {model.transform!r}")
    s = phi.sum(axis=1)
    if target in ("parameter", "joint"):
        loglik = n * np.log(theta) - theta * s + log_jac
        logmarg = (a * math.log(b) + special.gammaln(a + n) - special.gammaln(a)
                   - (a + n) * np.log(b + s) + log_jac)
        return loglik - logmarg
    if target == "predictive":
        if model.transform == "exponential":
            ynu = rng.exponential(1.0, size=size) / theta
            pnu, jnu = ynu, 0.0
        else:
            q = model.q
            ynu = rng.weibull(q, size=size) * theta ** (-1.0 / q)
            pnu = ynu ** q
            jnu = np.log(q) + (q - 1.0) * np.log(ynu)
        post = (np.log(a + n) + (a + n) * np.log(b + s)
                - (a + n + 1) * np.log(b + s + pnu) + jnu)
        prior = math.log(a) + a * math.log(b) - (a + 1) * np.log(b + pnu) + jnu
        return post - prior
    if target == "conditional-dependence":
        return np.zeros(size)
    raise DomainError(f"unknown target {target!r}")


def _dep_covariance(model: DepNormalModel) -> np.ndarray:
    """Covariance of (theta, y_1..y_n, y_{n+1}) with s1^2 = 1, s0^2 = 1/eta."""
    if model.eta <= 0:
        raise DomainError("eta must be > 0")
    m = model.n + 1
    idx = np.arange(m)
    lag = np.abs(idx[:, None] - idx[None, :])
    fam = model.family.upper()
    if fam == "UC":
        R = np.eye(m)
    elif fam == "IC":
        R = np.where(lag == 0, 1.0, model.rho)
    elif fam == "SC":
        R = np.power(float(model.rho), lag)
    else:
        raise DomainError(f"unknown family {model.family!r}")
    s0 = 1.0 / model.eta
    cov = np.empty((m + 1, m + 1))
    cov[0, :] = s0
    cov[:, 0] = s0
    cov[1:, 1:] = s0 + R
    return cov


def _gauss_cond_logpdf(cov, x, q_idx, d_idx):
    """log p(x_Q | x_D) for zero-mean Gaussian rows of x."""
    q_idx = list(q_idx)
    d_idx = list(d_idx)
    Sqq = cov[np.ix_(q_idx, q_idx)]
    xq = x[:, q_idx]
    if d_idx:
        Sdd = cov[np.ix_(d_idx, d_idx)]
        Sqd = cov[np.ix_(q_idx, d_idx)]
        K = np.linalg.solve(Sdd, Sqd.T).T
        mean = x[:, d_idx] @ K.T
        S = Sqq - K @ Sqd.T
    else:
        mean = 0.0
        S = Sqq
    L = np.linalg.cholesky(S)
    z = np.linalg.solve(L, (xq - mean).T)
    logdet = 2.0 * np.sum(np.log(np.diag(L)))
    k = len(q_idx)
    return -0.5 * (np.sum(z * z, axis=0) + logdet + k * math.log(2 * math.pi))


def _dep_batch(model: DepNormalModel, target: str, rng: np.random.Generator, size: int) -> np.ndarray:
    cov = _dep_covariance(model)
    try:
        L = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise DomainError("degenerate model: covariance is not positive definite") from exc
    x = rng.standard_normal((size, cov.shape[0])) @ L.T
    n = model.n
    theta, ys, ynu = [0], list(range(1, n + 1)), [n + 1]
    cond = _gauss_cond_logpdf
    if target == "parameter":
        return cond(cov, x, theta, ys) - cond(cov, x, theta, [])
    if target == "predictive":
        return cond(cov, x, ynu, ys) - cond(cov, x, ynu, [])
    if target == "joint":
        return cond(cov, x, theta + ynu, ys) - cond(cov, x, theta + ynu, [])
    if target == "conditional-dependence":
        return cond(cov, x, ynu, theta + ys) - cond(cov, x, ynu, theta)
    raise DomainError(f"unknown target {target!r}")


def _os_batch(model: OrderStatModel, target: str, rng: np.random.Generator, size: int) -> np.ndarray:
    if target != "conditional-dependence":
        raise DomainError("order-statistic Monte Carlo supports target='conditional-dependence'")
    n, r, th = int(model.n), int(model.r), float(model.theta)
    if not 1 <= r <= n - 1:
        raise DomainError("need 1 <= r <= n-1")
    if model.parent == "exponential":
        x = rng.exponential(1.0 / th, size=(size, n))
        cum = th * x  # cumulative hazard
    elif model.parent == "weibull":
        x = rng.weibull(model.q, size=(size, n)) * th ** (-1.0 / model.q)
        cum = th * x ** model.q
    else:
        raise DomainError(f"unsupported parent {model.parent!r}")
    cum.sort(axis=1)
    h_r, h_next = cum[:, r - 1], cum[:, r]
    log_c = math.lgamma(n + 1) - math.lgamma(r + 1) - math.lgamma(n - r)
    # log f(y_{r+1} | y_r) - log f_{r+1}(y_{r+1}); density factors g(y_{r+1})
    # and S(y_{r+1})^(n-r-1) cancel
    log_cdf_next = np.log(-np.expm1(-h_next))
    return math.log(n - r) + (n - r) * h_r - log_c - r * log_cdf_next


def mi_montecarlo(model, target: str,
                  settings: MonteCarloSettings = MonteCarloSettings()) -> MCResult:
    """Seeded Monte Carlo estimate of a mutual information with its standard error.

    ``target`` is one of ``parameter``, ``predictive``, ``joint`` or
    ``conditional-dependence``. The standard error uses the pooled per-draw
    variance across batches.
    """
    if isinstance(model, TTEModel):
        batch = _tte_batch
    elif isinstance(model, DepNormalModel):
        batch = _dep_batch
    elif isinstance(model, OrderStatModel):
        batch = _os_batch
    else:
        raise DomainError(f"unsupported model {type(model).__name__}")
    B = settings.batches
    sizes = [settings.replications // B + (1 if b < settings.replications % B else 0)
             for b in range(B)]
    children = np.random.SeedSequence(int(settings.seed)).spawn(B)

    def one(b):
        rng = np.random.Generator(np.random.PCG64(children[b]))
        vals = batch(model, target, rng, sizes[b])
        return float(vals.sum()), float(np.square(vals).sum())

    if settings.workers > 1:
        with ThreadPoolExecutor(settings.workers) as pool:
            parts = list(pool.map(one, range(B)))
    else:
        parts = [one(b) for b in range(B)]
    N = settings.replications
    total = math.fsum(p[0] for p in parts)
    total_sq = math.fsum(p[1] for p in parts)
    mean = total / N
    var = max(total_sq / N - mean * mean, 0.0) * N / (N - 1)
    return MCResult(mean, math.sqrt(var / N), N,
                    tuple(p[0] / s for p, s in zip(parts, sizes)))
