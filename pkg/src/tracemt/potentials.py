"""Riesz potentials, finite-difference derivatives and sphere potentials.

Quadrature rule for the Riesz potential on a grid: each source cell
contributes ``f_j h^n |x - y_j|^(alpha-n)``, except the cell containing the
target, which is replaced by the exact integral of the kernel over the ball
of equal volume centred at the target.  Grid-to-grid sums run through an
integer offset table; arbitrary targets fall back to a direct sum.
"""
from __future__ import annotations

import hashlib
import itertools
import functools
import math
import warnings
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.ndimage import correlate1d

from . import _kernels
from .constants import (
    DomainError,
    ell_combinatorial,
    riesz_gamma,
    riesz_gamma_tilde,
    sphere_area,
    unit_ball_volume,
)
from .grid import Ball, GridFunction, GridSpec
from .measures import RadonMeasure, make_lebesgue
from .rearrangement import StepProfile, double_star, profile_from_samples, rearrange

# ---------------------------------------------------------------- Riesz sums


def ball_self_integral(alpha: float, n: int, h: float) -> float:
    """Integral of |y|^(alpha-n) over the ball whose volume equals h^n."""
    w = unit_ball_volume(n)
    rho = (h**n / w) ** (1.0 / n)
    return n * w * rho**alpha / alpha


def kernel_table(spec: GridSpec, alpha: float) -> np.ndarray:
    n, h = spec.n, spec.h
    mesh = np.meshgrid(*[np.arange(s) * h for s in spec.shape], indexing="ij", sparse=True)
    r2 = sum(m * m for m in mesh)
    with np.errstate(divide="ignore"):
        T = h**n * r2 ** ((alpha - n) / 2.0)
    T[(0,) * n] = ball_self_integral(alpha, n, h)
    return T


_CACHE: OrderedDict = OrderedDict()
_CACHE_SIZE = 48


def _digest(*arrays) -> str:
    hsh = hashlib.sha1()
    for a in arrays:
        a = np.ascontiguousarray(a)
        hsh.update(str(a.shape).encode())
        hsh.update(a.tobytes())
    return hsh.hexdigest()


def _table_path(f: GridFunction, alpha: float, tidx: np.ndarray) -> np.ndarray:
    spec = f.spec
    n = spec.n
    lead_shape = spec.shape[:-1]
    f2 = np.ascontiguousarray(f.values.reshape(-1, spec.shape[-1]))
    nz = f2 != 0
    any_nz = nz.any(axis=1)
    row_lo = np.where(any_nz, nz.argmax(axis=1), 0).astype(np.int64)
    row_hi = np.where(any_nz, spec.shape[-1] - nz[:, ::-1].argmax(axis=1), 0).astype(np.int64)
    row_lead = np.stack(np.unravel_index(np.arange(f2.shape[0]), lead_shape), axis=-1).astype(np.int64)
    tstride = np.array([int(np.prod(lead_shape[a + 1:])) for a in range(n - 1)], dtype=np.int64)
    table2 = np.ascontiguousarray(kernel_table(spec, alpha).reshape(-1, spec.shape[-1]))
    out = np.zeros(len(tidx))
    _kernels.table_sum(f2, row_lead, row_lo, row_hi, table2, tstride,
                       np.ascontiguousarray(tidx, dtype=np.int64), out)
    return out


def _direct_path(f: GridFunction, alpha: float, targets: np.ndarray) -> np.ndarray:
    spec = f.spec
    flat = f.values.ravel()
    nzi = np.flatnonzero(flat)
    src_idx = np.stack(np.unravel_index(nzi, spec.shape), axis=-1).astype(np.int64)
    src_pts = np.asarray(spec.lo) + (src_idx + 0.5) * spec.h
    out = np.zeros(len(targets))
    _kernels.direct_sum(np.ascontiguousarray(src_pts), src_idx, np.ascontiguousarray(flat[nzi]),
                        np.ascontiguousarray(targets, dtype=float), spec.index_of(targets),
                        float(alpha - spec.n), spec.cell_volume,
                        ball_self_integral(alpha, spec.n, spec.h), out)
    return out


def _canonical(points: np.ndarray):
    """Representatives under coordinate reflections and permutations."""
    canon = -np.sort(-np.abs(points), axis=1)
    uniq, inv = np.unique(canon, axis=0, return_inverse=True)
    return uniq, inv.ravel()


def riesz_potential(f: GridFunction, alpha: float, targets=None, symmetric: bool = False):
    """I_alpha f at the targets (array) or at every cell centre (GridFunction).

    ``symmetric`` declares f invariant under reflections and permutations of
    the coordinates on a grid symmetric about the origin; the sum is then
    evaluated once per orbit.
    """
    n = f.n
    if not 0 < alpha < n:
        raise DomainError(f"alpha must lie in (0, {n}), got {alpha}")
    whole = targets is None
    pts = f.spec.centers() if whole else np.atleast_2d(np.asarray(targets, float))
    key = (_digest(f.values, pts), f.spec, float(alpha), bool(symmetric))
    if key in _CACHE:
        _CACHE.move_to_end(key)
        vals = _CACHE[key]
    else:
        if symmetric:
            eval_pts, inv = _canonical(pts)
        else:
            eval_pts, inv = pts, None
        if not np.any(f.values):
            raw = np.zeros(len(eval_pts))
        else:
            tidx = f.spec.center_index(eval_pts)
            raw = _table_path(f, alpha, tidx) if tidx is not None else _direct_path(f, alpha, eval_pts)
        raw = raw / riesz_gamma(alpha, n)
        vals = raw if inv is None else raw[inv]
        vals.setflags(write=False)
        _CACHE[key] = vals
        if len(_CACHE) > _CACHE_SIZE:
            _CACHE.popitem(last=False)
    vals = vals.copy()
    return GridFunction(f.spec, vals) if whole else vals


# ------------------------------------------------------- finite differences

_STENCILS = {
    0: np.array([1.0]),
    1: np.array([-0.5, 0.0, 0.5]),
    2: np.array([1.0, -2.0, 1.0]),
    3: np.array([-0.5, 1.0, 0.0, -1.0, 0.5]),
    4: np.array([1.0, -4.0, 6.0, -4.0, 1.0]),
}
MAX_ORDER = 4


def multi_indices(n: int, k: int):
    """(counts, multiplicity) for each multiset of k axes."""
    for combo in itertools.combinations_with_replacement(range(n), k):
        counts = np.bincount(combo, minlength=n)
        mult = math.factorial(k) // int(np.prod([math.factorial(c) for c in counts]))
        yield counts, mult


def _check_order(k: int, n: int):
    if not 1 <= k <= MAX_ORDER:
        raise DomainError(f"derivative order must lie in 1..{MAX_ORDER}, got {k}")


def _partial_grid(values: np.ndarray, counts, h: float) -> np.ndarray:
    out = values
    for axis, c in enumerate(counts):
        if c:
            if c > MAX_ORDER:
                raise DomainError("per-axis order above 4 is not supported")
            out = correlate1d(out, _STENCILS[c] / h**c, axis=axis, mode="constant")
    return out


def _zero_margin(a: np.ndarray, m: int) -> np.ndarray:
    for axis in range(a.ndim):
        sl = [slice(None)] * a.ndim
        sl[axis] = slice(0, m)
        a[tuple(sl)] = 0.0
        sl[axis] = slice(a.shape[axis] - m, None)
        a[tuple(sl)] = 0.0
    return a


def _check_margin(u: GridFunction, k: int):
    if min(u.spec.shape) < 2 * k + 1:
        raise DomainError(f"grid too small for order-{k} stencils")


def grad_k(u: GridFunction, k: int) -> GridFunction:
    """|grad^k u| by centred second-order differences; k boundary layers are zeroed."""
    _check_order(k, u.n)
    _check_margin(u, k)
    acc = np.zeros(u.spec.shape)
    for counts, mult in multi_indices(u.n, k):
        acc += mult * _partial_grid(u.values, counts, u.h) ** 2
    return GridFunction(u.spec, _zero_margin(np.sqrt(acc), k))


def laplacian(values: np.ndarray, h: float) -> np.ndarray:
    out = np.zeros_like(values)
    for axis in range(values.ndim):
        out += correlate1d(values, _STENCILS[2] / h**2, axis=axis, mode="constant")
    return out


def adams_derivative(u: GridFunction, k: int) -> GridFunction:
    """|D^k u|: iterated 2n+1 point Laplacian, finished by a centred gradient when k is odd."""
    _check_order(k, u.n)
    _check_margin(u, k)
    w = u.values
    for _ in range(k // 2):
        w = -laplacian(w, u.h)
    if k % 2:
        w = np.sqrt(sum(_partial_grid(w, np.eye(u.n, dtype=int)[a], u.h) ** 2 for a in range(u.n)))
    return GridFunction(u.spec, _zero_margin(np.abs(w), k))


def _offsets(counts):
    axes = []
    for c in counts:
        s = _STENCILS[int(c)]
        half = len(s) // 2
        axes.append((np.arange(-half, half + 1), s))
    pos = np.stack([m.ravel() for m in np.meshgrid(*[a[0] for a in axes], indexing="ij")], axis=-1)
    wts = np.prod(np.stack([m.ravel() for m in np.meshgrid(*[a[1] for a in axes], indexing="ij")]), axis=0)
    keep = wts != 0
    return pos[keep].astype(float), wts[keep]


def partial_at(fn, x: np.ndarray, counts, h, richardson: bool = True) -> np.ndarray:
    """Mixed partial derivative of a callable at points, Richardson extrapolated when asked."""
    x = np.atleast_2d(np.asarray(x, float))
    counts = np.asarray(counts, int)
    if np.any(counts > MAX_ORDER):
        raise DomainError("per-axis order above 4 is not supported")
    h = np.broadcast_to(np.asarray(h, float), (len(x),))
    pos, wts = _offsets(counts)
    order = int(counts.sum())

    def once(step):
        pts = x[:, None, :] + pos[None, :, :] * step[:, None, None]
        return (fn(pts) @ wts) / step**order

    d1 = once(h)
    if not richardson:
        return d1
    return (4.0 * once(h / 2) - d1) / 3.0


def grad_k_at(fn, x, k: int, h=None, rel: float = 0.05, richardson: bool = True) -> np.ndarray:
    """|grad^k u|(x) for a callable u; default step is rel * |x|."""
    x = np.atleast_2d(np.asarray(x, float))
    _check_order(k, x.shape[1])
    step = rel * np.linalg.norm(x, axis=1) if h is None else h
    acc = np.zeros(len(x))
    for counts, mult in multi_indices(x.shape[1], k):
        acc += mult * partial_at(fn, x, counts, step, richardson) ** 2
    return np.sqrt(acc)


def adams_derivative_at(fn, x, k: int, h=None, rel: float = 0.05, richardson: bool = True) -> np.ndarray:
    """|D^k u|(x) for a callable, with (-Delta)^j expanded into pure partials."""
    x = np.atleast_2d(np.asarray(x, float))
    n = x.shape[1]
    _check_order(k, n)
    step = rel * np.linalg.norm(x, axis=1) if h is None else h
    j = k // 2
    sign = (-1.0) ** j
    terms = [(2 * c, m) for c, m in multi_indices(n, j)] if j else [(np.zeros(n, int), 1)]
    if k % 2 == 0:
        val = sum(m * partial_at(fn, x, c, step, richardson) for c, m in terms)
        return np.abs(sign * val)
    comps = []
    for a in range(n):
        e = np.eye(n, dtype=int)[a]
        comps.append(sign * sum(m * partial_at(fn, x, c + e, step, richardson) for c, m in terms))
    return np.sqrt(sum(c * c for c in comps))


def log_abs(pts: np.ndarray) -> np.ndarray:
    return np.log(np.linalg.norm(pts, axis=-1))


@dataclass(frozen=True)
class RepresentationReport:
    passed: bool
    worst_ratio_adams: float
    worst_ratio_natural: float
    worst_point: tuple
    points: int


def representation_check(u: GridFunction, k: int, count: int = 32, seed: int = 0,
                         tol: float = 0.05) -> RepresentationReport:
    """|u| against both Riesz representations of u through D^k u and grad^k u."""
    n = u.n
    if not 1 <= k < n:
        raise DomainError("need 1 <= k < n")
    c_adams = 1.0 if k % 2 == 0 else riesz_gamma(k, n) / riesz_gamma_tilde(k - 1, n)
    c_nat = riesz_gamma(k, n) / (n * unit_ball_volume(n) * math.sqrt(float(ell_combinatorial(k, n))))
    live = np.flatnonzero(np.abs(u.values.ravel()) > 0)
    if len(live) == 0:
        return RepresentationReport(True, 0.0, 0.0, (), 0)
    rng = np.random.default_rng(seed)
    pick = np.sort(rng.choice(live, size=min(count, len(live)), replace=False))
    pts = u.spec.centers()[pick]
    lhs = np.abs(u.values.ravel()[pick])
    ra = lhs / (c_adams * riesz_potential(adams_derivative(u, k), k, pts))
    rn = lhs / (c_nat * riesz_potential(grad_k(u, k), k, pts))
    worst = int(np.argmax(np.maximum(ra, rn)))
    wa, wn = float(ra.max()), float(rn.max())
    return RepresentationReport(wa <= 1 + tol and wn <= 1 + tol, wa, wn, tuple(pts[worst]), len(pick))


# -------------------------------------------------------- sphere potentials


def _quiet(fn):
    """Silence quad's roundoff warnings; accuracy is covered by closed-form oracles."""

    @functools.wraps(fn)
    def wrapped(*args, **kw):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            return fn(*args, **kw)

    return wrapped


def _sphere_integrand(alpha, n, t):
    e = (alpha - n) / 2.0

    def g(phi):
        # |t e_1 - w|^2 written without cancellation near t = 1, phi = 0
        return ((1.0 - t) ** 2 + 4.0 * t * np.sin(phi / 2) ** 2) ** e * np.sin(phi) ** (n - 2)

    return g


@_quiet
def sphere_potential(alpha: float, n: int, t):
    """Mean of |t e_1 - w|^(alpha-n) over the unit sphere, as a polar-angle integral."""
    if not 0 < alpha < n:
        raise DomainError(f"alpha must lie in (0, {n})")
    ts = np.atleast_1d(np.asarray(t, float))
    if np.any(ts < 0):
        raise DomainError("t must be nonnegative")
    coef = sphere_area(n - 1) / sphere_area(n)
    out = np.empty(len(ts))
    for i, ti in enumerate(ts):
        if ti == 0.0:
            out[i] = 1.0
            continue
        if ti == 1.0 and alpha <= 1.0:
            out[i] = math.inf
            continue
        g = _sphere_integrand(alpha, n, ti)
        cut = min(abs(1.0 - ti), 1.0) or 1e-3
        a = integrate.quad(g, 0.0, cut, limit=200, epsabs=1e-14, epsrel=1e-12)[0]
        b = integrate.quad(g, cut, math.pi, limit=200, epsabs=1e-14, epsrel=1e-12)[0]
        out[i] = coef * (a + b)
    return out if np.ndim(t) else float(out[0])


def sphere_v(alpha: float, n: int, t: float) -> float:
    u = sphere_potential(alpha, n, t)
    return (u - 1.0) / t if t < 1 else u / t


@_quiet
def sphere_V(alpha: float, n: int, t: float) -> float:
    """Integral of v over [t, inf)."""
    if t < 0:
        raise DomainError("t must be nonnegative")

    def v(s):
        return sphere_v(alpha, n, s) if s > 0 else 0.0

    kw = dict(limit=200, epsabs=1e-11, epsrel=1e-10)
    total = 0.0
    if t < 1:
        total += integrate.quad(v, t, 1.0, **kw)[0]
    lo = max(t, 1.0)
    mid = max(lo, 2.0)
    if mid > lo:
        total += integrate.quad(v, lo, mid, **kw)[0]
    total += integrate.quad(v, mid, math.inf, **kw)[0]
    return total


@_quiet
def fuglede_integral(alpha: float, n: int, rho: float, R: float) -> float:
    """(1/(n omega_n)) * integral over |z| <= R of |x - z|^(alpha-n) |z|^(-alpha), |x| = rho.

    Polar coordinates centred at x; the inner radial integral is split where
    the ray passes closest to the origin.
    """
    if not 0 < rho < R:
        raise DomainError("need 0 < |x| < R")

    def inner(theta):
        c = math.cos(theta)
        smax = -rho * c + math.sqrt(R * R - (rho * math.sin(theta)) ** 2)

        def g(s):
            return (rho * rho + s * s + 2 * rho * s * c) ** (-alpha / 2)

        kw = dict(limit=200, epsabs=1e-13, epsrel=1e-11)
        split = min(max(-rho * c, 0.0), smax)
        head = split if split > 0 else smax
        val = integrate.quad(g, 0.0, head, weight="alg", wvar=(alpha - 1.0, 0.0), **kw)[0]
        if split > 0:
            val += integrate.quad(lambda s: g(s) * s ** (alpha - 1.0), split, smax, **kw)[0]
        return val * math.sin(theta) ** (n - 2)

    outer = integrate.quad(inner, 0.0, math.pi, limit=400, epsabs=1e-11, epsrel=1e-10)[0]
    return sphere_area(n - 1) * outer / sphere_area(n)


@dataclass(frozen=True)
class FugledeReport:
    passed: bool
    direct: float
    log_term: float
    V: float
    abs_err: float


def fuglede_check(alpha: float, n: int, x, R: float, tol: float = 1e-3) -> FugledeReport:
    rho = float(np.linalg.norm(np.atleast_1d(np.asarray(x, float))))
    direct = fuglede_integral(alpha, n, rho, R)
    lg = math.log(max(R / rho, 1.0))
    V = sphere_V(alpha, n, rho / R)
    err = abs(direct - (lg + V))
    return FugledeReport(err <= tol, direct, lg, V, err)


# ------------------------------------------------- kernel rearrangements


def k1_star(alpha: float, n: int, t):
    t = np.asarray(t, float)
    return unit_ball_volume(n) ** ((n - alpha) / n) * t ** (-(n - alpha) / n) / riesz_gamma(alpha, n)


def k2_bound(alpha: float, n: int, d: float, C_d_prime: float, t):
    t = np.asarray(t, float)
    return C_d_prime ** ((n - alpha) / d) * t ** (-(n - alpha) / d) / riesz_gamma(alpha, n)


@dataclass(frozen=True)
class KernelRearrangements:
    k1: StepProfile
    k2_bound: StepProfile
    empirical_max_rel_err: float
    k2_worst_ratio: float
    passed: bool


def _sampled_profile(fn, t_lo: float, t_hi: float, count: int = 256) -> StepProfile:
    t = np.concatenate([[0.0], np.geomspace(t_lo, t_hi, count)])
    # value on [t_{i-1}, t_i) taken at the left end so the profile dominates the closed form
    v = fn(np.concatenate([[t_lo / 2], t[1:-1]]))
    return StepProfile(t, v)


def kernel_rearrangements(alpha: float, n: int, nu: RadonMeasure | None = None, d: float | None = None,
                          C_d_prime: float | None = None, h: float = 1 / 64, tol: float = 0.02,
                          centers=None) -> KernelRearrangements:
    """Closed-form k1* and k2 bound, plus an empirical rearrangement of the sampled kernel."""
    if not 0 < alpha < n:
        raise DomainError(f"alpha must lie in (0, {n})")
    w = unit_ball_volume(n)
    if nu is not None:
        d = nu.dimension if d is None else d
        C_d_prime = nu.growth_constant if C_d_prime is None else C_d_prime
    d = float(n) if d is None else float(d)
    C_d_prime = w if C_d_prime is None else float(C_d_prime)
    t_hi = w if nu is None else max(nu.total_mass, w)
    k1p = _sampled_profile(lambda t: k1_star(alpha, n, t), t_hi * 1e-8, t_hi)
    k2p = _sampled_profile(lambda t: k2_bound(alpha, n, d, C_d_prime, t), t_hi * 1e-8, t_hi)

    leb = make_lebesgue(Ball((0.0,) * n, 1.0), h)
    xs = np.array([[0.0] * n, [h] + [0.0] * (n - 1), [2 * h, h] + [0.0] * (n - 2)]) if centers is None \
        else np.atleast_2d(centers)
    worst = 0.0
    for x in xs:
        dist = np.linalg.norm(leb.points - x, axis=1)
        prof = profile_from_samples(dist ** (alpha - n) / riesz_gamma(alpha, n), leb.weights)
        reach = 1.0 - np.linalg.norm(x)
        ts = np.geomspace(w * (16 * h) ** n, 0.9 * w * reach**n, 12)
        worst = max(worst, float(np.max(np.abs(prof(ts) / k1_star(alpha, n, ts) - 1))))

    k2_ratio = 0.0
    if nu is not None:
        blur = 8 * (nu.h or 0.0)
        for y in nu.points[np.linspace(0, len(nu.points) - 1, 5).astype(int)]:
            dist = np.linalg.norm(nu.points - y, axis=1)
            with np.errstate(divide="ignore"):
                kv = np.where(dist > 0, dist ** (alpha - n), 0.0) / riesz_gamma(alpha, n)
            prof = profile_from_samples(kv, nu.weights)
            t_min = max(C_d_prime * blur**d, prof.t[1])
            ts = np.geomspace(t_min, prof.support_end * 0.99, 12)
            k2_ratio = max(k2_ratio, float(np.max(prof(ts) / k2_bound(alpha, n, d, C_d_prime, ts))))
    return KernelRearrangements(k1p, k2p, worst, k2_ratio, worst <= tol)


# ------------------------------------------------------------------ O'Neil


def oneil_theta(r_exp: float, alpha: float, n: int, d: float) -> float:
    lo = max(1.0, (n - d) / alpha)
    if not lo < r_exp < n / alpha:
        raise DomainError(f"r must lie in ({lo:g}, {n / alpha:g}), got {r_exp}")
    return r_exp * d / (n - alpha * r_exp)


def power_moment(p: StepProfile, e: float, a: float, b: float) -> float:
    """Exact integral of p(u) u^e over [a, b] (e > -1)."""
    if b <= a:
        return 0.0
    lo = np.clip(p.t[:-1], a, b)
    hi = np.clip(p.t[1:], a, b)
    return float(np.sum(p.v * (hi ** (e + 1) - lo ** (e + 1))) / (e + 1))


def oneil_terms(fstar: StepProfile, alpha: float, n: int, d: float, r_exp: float, tau: float, t: float,
                omega_volume: float):
    """The two bracketed integrals of the O'Neil-type bound (without the constant C)."""
    theta = oneil_theta(r_exp, alpha, n, d)
    first = max(tau ** (-d / (n * theta)), t ** (-1 / theta)) * power_moment(fstar, -1 + 1 / r_exp, 0.0, tau)
    second = unit_ball_volume(n) ** ((n - alpha) / n) / riesz_gamma(alpha, n) * \
        power_moment(fstar, -(n - alpha) / n, tau, omega_volume)
    return first, second


@dataclass(frozen=True)
class ONeilReport:
    passed: bool
    theta: float
    lhs: float
    first: float
    second: float
    C: float

    @property
    def rhs(self) -> float:
        return self.C * self.first + self.second


def potential_on(f: GridFunction, alpha: float, nu: RadonMeasure, symmetric: bool = False) -> np.ndarray:
    return riesz_potential(f, alpha, nu.points, symmetric=symmetric)


def oneil_check(f: GridFunction, alpha: float, n: int, d: float, nu: RadonMeasure, r_exp: float,
                tau: float, t: float, C: float | None = None, tol: float = 1e-9) -> ONeilReport:
    theta = oneil_theta(r_exp, alpha, n, d)
    if not (tau > 0 and t > 0):
        raise DomainError("tau and t must be positive")
    if C is None:
        from .calibration import oneil_constant

        C = oneil_constant(n, alpha, d, r_exp)
    fstar = lebesgue_profile(f)
    vol = domain_volume(nu, f)
    if not np.any(f.values):
        return ONeilReport(True, theta, 0.0, 0.0, 0.0, C)
    prof = rearrange(potential_on(f, alpha, nu), nu)
    lhs = float(double_star(prof, t))
    first, second = oneil_terms(fstar, alpha, n, d, r_exp, tau, t, vol)
    return ONeilReport(lhs <= (C * first + second) * (1 + tol), theta, lhs, first, second, C)


def lebesgue_profile(f: GridFunction) -> StepProfile:
    """Rearrangement of f with respect to Lebesgue measure on its grid."""
    return profile_from_samples(np.abs(f.values.ravel()), np.full(f.spec.size, f.spec.cell_volume))


def domain_volume(nu: RadonMeasure, f: GridFunction) -> float:
    """|Omega| for the domain carrying nu, or the whole grid box when none is recorded."""
    if nu.domain is not None:
        return make_lebesgue(nu.domain, f.h).total_mass
    return f.spec.size * f.spec.cell_volume
