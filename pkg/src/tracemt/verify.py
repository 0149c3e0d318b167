"""Theorem-level checks: exponential integrals, sharpness sweeps, Hardy lemmas, HBW.

Conventions shared by every check here:

* ``exp_integral`` always uses a linear-level coefficient kappa inside
  ``exp((kappa |u|)^q')``; exponent-level constants are ``kappa ** q'``.
* A sweep is BOUNDED when max/min of the exponential integral over the fit
  window stays below ``bounded_ratio``, and BLOWUP when the log-log fit is
  valid (R^2 gate) with slope above ``slope_zero_tol``.
* Logs of exponential integrals are carried throughout, so overflow never
  destroys a sweep.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, stats
from scipy.special import logsumexp

from .config import Tolerances
from .constants import INF, DomainError, Params, ell_combinatorial, riesz_gamma, riesz_gamma_tilde, \
    theorem_threshold, unit_ball_volume
from .grid import GridFunction
from .measures import (
    GrowthCertificate,
    NonDegeneracyCertificate,
    RadonMeasure,
    certify_growth,
    certify_nondegeneracy,
)
from .potentials import (
    adams_derivative,
    domain_volume,
    grad_k,
    lebesgue_profile,
    oneil_theta,
    riesz_potential,
)
from .rearrangement import StepProfile, double_star, lorentz_norm, rearrange
from .testfun import (
    FamilyKind,
    alberico_profile,
    alberico_ua,
    capacitary_fr,
    capacitary_potential,
    log_cap_profile,
    log_cap_u_eps,
    weak_endpoint_f,
    weak_endpoint_norm_bound,
)

# ------------------------------------------------------- exponential integrals


def log_exp_integral(u, nu: RadonMeasure, kappa: float, qprime: float) -> float:
    if kappa < 0 or qprime < 1:
        raise DomainError("need kappa >= 0 and q' >= 1")
    vals = np.abs(nu.values_of(u))
    keep = nu.weights > 0
    if not np.any(keep):
        return -math.inf
    return float(logsumexp((kappa * vals[keep]) ** qprime + np.log(nu.weights[keep])))


def exp_integral(u, nu: RadonMeasure, kappa: float, qprime: float) -> float:
    """Sum of exp((kappa |u|)^q') against nu; +inf once the value leaves double range."""
    le = log_exp_integral(u, nu, kappa, qprime)
    return math.exp(le) if le < 709.0 else math.inf


# ------------------------------------------------------------------ sweeps


@dataclass(frozen=True)
class SweepRecord:
    param: float
    norm: float
    expint: float
    log_expint: float
    beta_multiple: float
    kappa: float


@dataclass(frozen=True)
class BlowupFit:
    slope: float
    intercept: float
    r2: float
    predicted: float
    rel_err: float
    valid: bool


def fit_blowup(params: Sequence[float], log_expints: Sequence[float], predicted: float,
               window: int = 4, r2_min: float = 0.95) -> BlowupFit:
    if len(params) < window:
        raise DomainError(f"need at least {window} sweep points")
    x = np.log(1.0 / np.asarray(params, float))[-window:]
    y = np.asarray(log_expints, float)[-window:]
    if np.ptp(y) == 0:
        slope, icpt, r2 = 0.0, float(y[0]), 1.0
    else:
        res = stats.linregress(x, y)
        slope, icpt, r2 = float(res.slope), float(res.intercept), float(res.rvalue**2)
    rel = abs(slope - predicted) / abs(predicted) if predicted else abs(slope)
    return BlowupFit(slope, icpt, r2, float(predicted), float(rel), r2 >= r2_min)


def predicted_slope(beta_multiple: float, p: Params) -> float:
    """d (m^q' - 1): the blow-up exponent in 1/param, zero exactly at the threshold."""
    return p.d * (beta_multiple**p.qprime - 1.0)


def window_ratio(log_expints: Sequence[float], window: int = 4) -> float:
    y = np.asarray(log_expints, float)[-window:]
    return float(math.exp(y.max() - y.min()))


def classify(fit: BlowupFit, ratio: float, certified: bool, tol: Tolerances) -> str:
    if not certified:
        return "INCONCLUSIVE"
    if fit.valid and fit.slope > tol.slope_zero_tol:
        return f"BLOWUP({fit.slope:.4f})"
    if ratio < tol.bounded_ratio:
        return "BOUNDED"
    return "INCONCLUSIVE"


THEOREM_FAMILY = {
    "T1": FamilyKind.CAPACITARY_FR,
    "T1_0": FamilyKind.LOG_CAP_U_EPS,
    "T1_1": FamilyKind.LOG_CAP_U_EPS,
}


@dataclass
class SweepData:
    """Family values on the measure and their normalising norms, shared across multiples."""

    theorem_id: str
    params: Params
    family_params: list
    values: list
    norms: list
    h: float


def sweep_data(theorem_id: str, family_params: Sequence[float], nu: RadonMeasure, p: Params,
               h: float | None = None) -> SweepData:
    if theorem_id not in THEOREM_FAMILY:
        raise DomainError(f"no sharpness family for {theorem_id}")
    if p.q is INF:
        raise DomainError("sharpness sweeps need finite q")
    h = nu.h if h is None else h
    if h is None:
        raise DomainError("grid spacing needed for atom measures")
    n = p.n
    rho = np.linalg.norm(nu.points, axis=1)
    vals, norms = [], []
    for par in family_params:
        if theorem_id == "T1":
            f = capacitary_fr(par, p.alpha, n, h)
            norms.append(lorentz_norm(lebesgue_profile(f), n / p.alpha, p.q))
            vals.append(capacitary_potential(par, p.alpha, n, h, nu.points))
        else:
            u = log_cap_u_eps(par, n, h)
            op = grad_k if theorem_id == "T1_0" else adams_derivative
            norms.append(lorentz_norm(lebesgue_profile(op(u, p.k)), n / p.k, p.q))
            vals.append(log_cap_profile(par)(rho))
    return SweepData(theorem_id, p, list(family_params), vals, norms, h)


@dataclass
class SweepResult:
    theorem_id: str
    beta_multiple: float
    kappa: float
    records: list
    fit: BlowupFit
    ratio: float
    verdict: str
    growth: GrowthCertificate | None = None
    nondegeneracy: NonDegeneracyCertificate | None = None
    notes: list = field(default_factory=list)


def certify_for_sweep(nu: RadonMeasure, tol: Tolerances, rho0: float = 0.5):
    if nu.dimension is None or nu.growth_constant is None:
        return None, None
    g = certify_growth(nu, nu.dimension, nu.growth_constant, tol=tol.cert_tol)
    nd = certify_nondegeneracy(nu, np.zeros(nu.n), rho0, nu.dimension, tol=tol.cert_tol)
    return g, nd


def sharpness_sweep(theorem_id: str, family_params: Sequence[float], nu: RadonMeasure, beta_multiple: float,
                    p: Params, h: float | None = None, tol: Tolerances | None = None,
                    data: SweepData | None = None, certificates=None, window: int = 4) -> SweepResult:
    """Exponential integrals of a normalised extremal family at kappa = multiple * threshold."""
    tol = Tolerances() if tol is None else tol
    if beta_multiple <= 0:
        raise DomainError("beta multiple must be positive")
    data = sweep_data(theorem_id, family_params, nu, p, h) if data is None else data
    kappa = beta_multiple * theorem_threshold(theorem_id, p).linear
    records = []
    for par, u, nrm in zip(data.family_params, data.values, data.norms):
        le = log_exp_integral(u / nrm, nu, kappa, p.qprime)
        records.append(SweepRecord(float(par), float(nrm), math.exp(le) if le < 709 else math.inf, le,
                                   float(beta_multiple), float(kappa)))
    pred = predicted_slope(beta_multiple, p)
    fit = fit_blowup([r.param for r in records], [r.log_expint for r in records], pred, window, tol.r2_min)
    ratio = window_ratio([r.log_expint for r in records], window)
    g, nd = certify_for_sweep(nu, tol) if certificates is None else certificates
    notes = []
    certified = g is not None and g.passed and nd is not None and nd.passed
    if not certified:
        notes.append("measure lacks growth or non-degeneracy certificate; sharpness not claimed")
    verdict = classify(fit, ratio, certified, tol)
    return SweepResult(theorem_id, float(beta_multiple), float(kappa), records, fit, ratio, verdict, g, nd, notes)


def sweep_csv(result: SweepResult) -> str:
    lines = ["param,norm,expint,log_expint,beta_multiple,kappa"]
    for r in result.records:
        lines.append(f"{r.param:.10g},{r.norm:.10g},{r.expint:.10g},{r.log_expint:.10g},"
                     f"{r.beta_multiple:.6g},{r.kappa:.10g}")
    return "\n".join(lines) + "\n"


def sweep_summary(result: SweepResult) -> list[str]:
    return [
        f"theorem={result.theorem_id}",
        f"threshold_multiple={result.beta_multiple:.6g}",
        f"kappa={result.kappa:.10g}",
        f"fitted_slope={result.fit.slope:.6f}",
        f"predicted_slope={result.fit.predicted:.6f}",
        f"r2={result.fit.r2:.6f}",
        f"window_ratio={result.ratio:.6f}",
        f"verdict={result.verdict}",
    ]


# --------------------------------------------------------- weak endpoints


@dataclass
class DivergenceReport:
    theorem_id: str
    multiple: float
    hs: list
    log_expints: list
    growth: float
    monotone: bool
    diverges: bool
    bounded: bool
    verdict: str


def weak_endpoint_divergence(theorem_id: str, nu_factory: Callable[[float], RadonMeasure], p: Params,
                             hs: Sequence[float] = (1 / 64, 1 / 128, 1 / 256), multiple: float = 1.0,
                             a: float = math.exp(3.0), tol: Tolerances | None = None,
                             norm_h: float | None = None) -> DivergenceReport:
    """Exponential integrals at (a multiple of) a q = inf endpoint over refining measures.

    For Tinf the potential of the weak-endpoint datum is recomputed on each grid.
    For Tinf1/Tinf2 the Alberico profile is evaluated exactly on ``nu_factory(h)``,
    so shell measures with inner radius tied to h resolve the singular integral.
    """
    tol = Tolerances() if tol is None else tol
    if theorem_id not in ("Tinf", "Tinf1", "Tinf2"):
        raise DomainError("weak-endpoint checks cover Tinf, Tinf1, Tinf2")
    p = p.with_(q=INF)
    kappa = multiple * theorem_threshold(theorem_id, p).linear
    n = p.n
    if theorem_id != "Tinf":
        # the weak norm of the derivative is computed once, on the finest grid
        hn = min(hs) if norm_h is None else norm_h
        op = grad_k if theorem_id == "Tinf1" else adams_derivative
        s_min = unit_ball_volume(n) * (8 * hn) ** n
        deriv_norm = lorentz_norm(lebesgue_profile(op(alberico_ua(a, n, hn), p.k)), n / p.k, INF, s_min=s_min)
    logs = []
    for h in hs:
        nu = nu_factory(h)
        if theorem_id == "Tinf":
            f = weak_endpoint_f(p.alpha, n, h)
            u = riesz_potential(f, p.alpha, nu.points, symmetric=True)
            nrm = weak_endpoint_norm_bound(p.alpha, n)
        else:
            nrm = deriv_norm
            u = alberico_profile(a)(np.linalg.norm(nu.points, axis=1))
        logs.append(log_exp_integral(u / nrm, nu, kappa, 1.0))
    growth = math.exp(logs[-1] - logs[0])
    monotone = bool(np.all(np.diff(logs) > 0))
    diverges = monotone and growth >= tol.divergence_factor
    bounded = math.exp(max(logs) - min(logs)) < tol.bounded_ratio
    if theorem_id != "Tinf" and multiple == 1.0:
        verdict = "REPORTED"
    elif diverges:
        verdict = "DIVERGENT"
    elif bounded:
        verdict = "BOUNDED"
    else:
        verdict = "UNDECIDED"
    return DivergenceReport(theorem_id, float(multiple), list(hs), logs, growth, monotone, diverges,
                            bounded, verdict)


# ------------------------------------------------------------ Hardy lemmas


@dataclass(frozen=True)
class Piecewise:
    """Nonnegative step function, value values[i] on [edges[i], edges[i+1]); zero elsewhere."""

    edges: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, float)
        v = np.asarray(self.values, float)
        if len(e) != len(v) + 1 or np.any(np.diff(e) <= 0) or e[0] < 0 or np.any(v < 0):
            raise DomainError("need increasing edges from >= 0 and nonnegative values")
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "values", v)

    def truncated(self, R: float) -> "Piecewise":
        e = np.minimum(self.edges, R)
        keep = np.diff(e) > 0
        if not np.any(keep):
            return Piecewise(np.array([0.0, R]), np.array([0.0]))
        idx = np.flatnonzero(keep)
        return Piecewise(np.concatenate([e[idx], [e[idx[-1] + 1]]]), self.values[idx])


def random_piecewise(rng: np.random.Generator, pieces: int = 6, t_max: float = 3.0) -> Piecewise:
    edges = np.concatenate([[0.0], np.sort(rng.uniform(0, t_max, pieces - 1)), [t_max]])
    edges = np.unique(edges)
    vals = rng.uniform(0, 2, len(edges) - 1) * (rng.random(len(edges) - 1) > 0.2)
    return Piecewise(edges, vals)


@dataclass(frozen=True)
class HardyReport:
    passed: bool
    lhs: float
    rhs: float
    constant: float
    skipped: bool = False


_QUAD = dict(limit=200, epsabs=1e-13, epsrel=1e-11)


def hardy_classical_check(psi: Piecewise, p: float, w: float, tol: float = 1e-9) -> HardyReport:
    """Weighted Hardy inequality for the running integral of psi."""
    if not (p > 1 and w > 1):
        raise DomainError("need p > 1 and w > 1")
    const = (p / (w - 1)) ** p
    e = p - w + 1
    lhs = rhs = 0.0
    Psi = 0.0
    for a, b, v in zip(psi.edges[:-1], psi.edges[1:], psi.values):
        if v > 0:
            if a == 0 and e <= 0:
                return HardyReport(True, math.inf, math.inf, const, skipped=True)
            rhs += v**p * (b**e - a**e) / e if e != 0 else v**p * math.log(b / a)
            if a == 0:
                lhs += v**p * b**e / e
            else:
                lhs += integrate.quad(lambda t: t ** (-w) * (Psi + v * (t - a)) ** p, a, b, **_QUAD)[0]
        elif Psi > 0:
            lhs += Psi**p * (a ** (1 - w) - b ** (1 - w)) / (w - 1)
        Psi += v * (b - a)
    end = psi.edges[-1]
    lhs += Psi**p * end ** (1 - w) / (w - 1)
    return HardyReport(lhs <= const * rhs * (1 + tol), lhs, rhs, const)


def hardy_log_check(psi: Piecewise, p: float, R: float, tol: float = 1e-9) -> HardyReport:
    """Logarithmic Hardy inequality for the tail integral of psi on (0, R)."""
    if not (p > 1 and R > 0):
        raise DomainError("need p > 1 and R > 0")
    const = (p / (p - 1)) ** p
    psi = psi.truncated(R)
    rhs = float(np.sum(psi.values**p * (psi.edges[1:] ** p - psi.edges[:-1] ** p)) / p)
    # tail[i] = integral of psi over [edges[i+1], R]
    seg = psi.values * np.diff(psi.edges)
    tail = np.concatenate([np.cumsum(seg[::-1])[::-1][1:], [0.0]])
    lhs = 0.0
    for i, (a, b, v) in enumerate(zip(psi.edges[:-1], psi.edges[1:], psi.values)):
        # x = log(R/t); piece [a, b) maps to (log(R/b), log(R/a)]
        def g(x, b=b, v=v, T=tail[i]):
            t = R * math.exp(-x)
            return (T + v * (b - t)) ** p / (1 + x) ** p

        x_lo = math.log(R / b)
        x_hi = math.inf if a == 0 else math.log(R / a)
        lhs += integrate.quad(g, x_lo, x_hi, **_QUAD)[0]
    return HardyReport(lhs <= const * rhs * (1 + tol), lhs, rhs, const)


# ---------------------------------------------------------- Moser lemma


@dataclass(frozen=True)
class MoserReport:
    passed: bool
    b: float
    value: float
    cap: float
    phi_norm: float
    calibrated: bool


def moser_b(a_kernel, q: float, t_grid=None, s_max: float = math.inf) -> float:
    qp = q / (q - 1)
    ts = np.linspace(0.0, 20.0, 81) if t_grid is None else np.asarray(t_grid, float)
    best = 0.0
    for t in ts:
        val = integrate.quad(lambda s: a_kernel(s, t) ** qp, t, s_max, limit=200)[0]
        best = max(best, val ** (1 / qp))
    return best


def adams_moser_check(a_kernel, phi, q: float, phi_support: float = math.inf, t_grid=None,
                      cap: float | None = None) -> MoserReport:
    """Finiteness of the integral of exp(-F) for F(t) = t - (int a(s,t) phi(s) ds)^q'."""
    if not q > 1:
        raise DomainError("q must exceed 1")
    qp = q / (q - 1)
    phi_norm = integrate.quad(lambda s: phi(s) ** q, 0, phi_support, limit=200)[0]
    if phi_norm > 1 + 1e-9:
        raise DomainError("phi must satisfy int phi^q <= 1")
    b = moser_b(a_kernel, q, t_grid)
    if not math.isfinite(b):
        return MoserReport(False, b, math.inf, 0.0, phi_norm, False)

    def F(t):
        lo = integrate.quad(lambda s: a_kernel(s, t) * phi(s), 0, min(t, phi_support), limit=200)[0]
        hi = integrate.quad(lambda s: a_kernel(s, t) * phi(s), t, phi_support, limit=200)[0] \
            if t < phi_support else 0.0
        return t - (lo + hi) ** qp

    total, T = 0.0, 0.0
    # kinks of F inherited from phi trip quad's convergence heuristics without hurting accuracy
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        while True:
            total += integrate.quad(lambda t: math.exp(-F(t)), T, T + 1.0, limit=100)[0]
            T += 1.0
            if F(T) > 50 or T > 1e4:
                break
    calibrated = cap is not None
    if cap is None:
        from .calibration import moser_cap

        cap, calibrated = moser_cap(q, b)
    return MoserReport(math.isfinite(total) and total <= cap, b, total, cap, phi_norm, calibrated)


def oneil_moser_kernel(H: float, theta: float, y1: float = 0.0):
    """The kernel built from the O'Neil bound: 1 below the diagonal, H e^((t-s)/theta) above."""

    def a(s, t):
        if t < y1 or s < y1:
            return 0.0
        return 1.0 if s <= t else H * math.exp((t - s) / theta)

    return a


def moser_b_display(theta: float, qprime: float, H: float) -> float:
    """theta/q' * H^q', which equals b^q' for the kernel above."""
    return theta / qprime * H**qprime


# ------------------------------------------------------------------- HBW


def hbw_functional(prof: StepProfile, M: float, q: float) -> float:
    """(int_0^M [p(t) / (1 + log(M/t))]^q dt/t)^(1/q), exact on steps."""
    if M <= 0:
        raise DomainError("total mass must be positive")
    t = np.minimum(prof.t, M)
    with np.errstate(divide="ignore"):
        w = 1.0 + np.log(M / t)
    wp = np.where(np.isinf(w), 0.0, w ** (1 - q))
    total = np.sum(prof.v**q * (wp[1:] - wp[:-1])) / (q - 1)
    return float(max(total, 0.0) ** (1 / q))


def _moment_cum(p: StepProfile, e: float, x: np.ndarray) -> np.ndarray:
    """Integral of p(u) u^e over [0, x] for each x."""
    x = np.asarray(x, float)
    cum = np.concatenate([[0.0], np.cumsum(p.v * (p.t[1:] ** (e + 1) - p.t[:-1] ** (e + 1)) / (e + 1))])
    i = np.clip(np.searchsorted(p.t, x, side="right") - 1, 0, len(p.v))
    vi = np.concatenate([p.v, [0.0]])[i]
    xc = np.minimum(x, p.support_end)
    return cum[i] + vi * (xc ** (e + 1) - p.t[i] ** (e + 1)).clip(min=0) / (e + 1)


def oneil_bound_terms(fstar: StepProfile, alpha: float, n: int, d: float, r_exp: float, C: float,
                      vol: float, t: np.ndarray):
    """C t^(-1/theta) int_0^tau f* u^(-1+1/r) and the far-field term, at tau = t^(n/d)."""
    theta = oneil_theta(r_exp, alpha, n, d)
    tau = np.asarray(t, float) ** (n / d)
    A1 = C * np.maximum(tau ** (-d / (n * theta)), np.asarray(t) ** (-1 / theta)) * \
        _moment_cum(fstar, -1 + 1 / r_exp, tau)
    e2 = -(n - alpha) / n
    far = _moment_cum(fstar, e2, np.full_like(tau, vol)) - _moment_cum(fstar, e2, np.minimum(tau, vol))
    A2 = unit_ball_volume(n) ** ((n - alpha) / n) / riesz_gamma(alpha, n) * far
    return A1, A2


@dataclass(frozen=True)
class HBWReport:
    passed: bool
    lhs: float
    rhs: float
    ratio: float
    I1: float
    I2: float
    pointwise_ok: bool
    pointwise_worst: float


def hbw_trace_check(f: GridFunction, nu: RadonMeasure, alpha: float, q: float, d: float | None = None,
                    r_exp: float = 1.5, C: float | None = None, n_t: int = 32, tol: float = 1e-9,
                    symmetric: bool = False) -> HBWReport:
    n = f.n
    d = nu.dimension if d is None else d
    M = nu.total_mass
    if M <= 0:
        raise DomainError("nu(Omega) must be positive")
    fstar = lebesgue_profile(f)
    rhs = lorentz_norm(fstar, n / alpha, q)
    if not np.any(f.values):
        return HBWReport(True, 0.0, rhs, 0.0, 0.0, 0.0, True, 0.0)
    if C is None:
        from .calibration import oneil_constant

        C = oneil_constant(n, alpha, d, r_exp)
    prof = rearrange(riesz_potential(f, alpha, nu.points, symmetric=symmetric), nu)
    lhs = hbw_functional(prof, M, q)
    vol = domain_volume(nu, f)

    ts = np.geomspace(M * 1e-14, M, 4000)
    A1, A2 = oneil_bound_terms(fstar, alpha, n, d, r_exp, C, vol, ts)
    wgt = (1 + np.log(M / ts)) ** (-q)
    lg = np.log(ts)
    I1q = integrate.trapezoid(A1**q * wgt, lg)
    I2q = integrate.trapezoid(A2**q * wgt, lg) + A2[0] ** q * (1 + math.log(M / ts[0])) ** (1 - q) / (q - 1)
    I1, I2 = I1q ** (1 / q), I2q ** (1 / q)

    tk = np.geomspace(max(prof.t[1], M * 1e-6), M, n_t)
    b1, b2 = oneil_bound_terms(fstar, alpha, n, d, r_exp, C, vol, tk)
    pw = double_star(prof, tk) / (b1 + b2)
    worst = float(pw.max())
    pointwise_ok = worst <= 1 + tol
    passed = pointwise_ok and lhs <= (I1 + I2) * (1 + tol)
    return HBWReport(passed, lhs, rhs, lhs / rhs, float(I1), float(I2), pointwise_ok, worst)


@dataclass(frozen=True)
class HBWSobolevReport:
    passed: bool
    lhs: float
    rhs: float
    ratio: float
    lhs_representation: float


def hbw_sobolev_check(u: GridFunction, nu: RadonMeasure, k: int, q: float, operator: str = "grad",
                      tol: float = 0.05) -> HBWSobolevReport:
    """Log-weighted trace functional of u against the Lorentz norm of its k-th derivative."""
    n = u.n
    if not 1 <= k < n:
        raise DomainError("need 1 <= k < n")
    M = nu.total_mass
    if M <= 0:
        raise DomainError("nu(Omega) must be positive")
    if operator == "grad":
        G = grad_k(u, k)
        c = riesz_gamma(k, n) / (n * unit_ball_volume(n) * math.sqrt(float(ell_combinatorial(k, n))))
    elif operator == "adams":
        G = adams_derivative(u, k)
        c = 1.0 if k % 2 == 0 else riesz_gamma(k, n) / riesz_gamma_tilde(k - 1, n)
    else:
        raise DomainError("operator must be 'grad' or 'adams'")
    lhs = hbw_functional(rearrange(u, nu), M, q)
    rhs = lorentz_norm(lebesgue_profile(G), n / k, q)
    if rhs == 0:
        return HBWSobolevReport(lhs == 0, lhs, 0.0, 0.0, 0.0)
    rep = hbw_functional(rearrange(c * riesz_potential(G, k, nu.points), nu), M, q)
    return HBWSobolevReport(lhs <= rep * (1 + tol), lhs, rhs, lhs / rhs, rep)
