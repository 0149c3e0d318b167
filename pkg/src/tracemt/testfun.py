"""Extremal test-function families, sampled on grids centred at the origin."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import BPoly

from .constants import DomainError, Params, ell_combinatorial, unit_ball_volume
from .grid import Ball, GridFunction, GridSpec, symmetric_box
from .measures import radial_lebesgue
from .potentials import grad_k_at, riesz_potential
from .rearrangement import norm_of


class FamilyKind(enum.Enum):
    CAPACITARY_FR = "capacitary_fr"
    LOG_CAP_U_EPS = "log_cap_u_eps"
    ALBERICO_UA = "alberico_ua"
    WEAK_ENDPOINT_F = "weak_endpoint_f"
    LOG_CORRECTED_F = "log_corrected_f"


# ------------------------------------------------------------ capacitary f_r


def capacitary_profile(r: float, alpha: float, n: int):
    L = math.log(1.0 / r)
    c = 1.0 / (n * unit_ball_volume(n) * L)

    def prof(rho):
        rho = np.asarray(rho, float)
        out = np.zeros_like(rho)
        m = (rho > r) & (rho < 1.0)
        out[m] = c * rho[m] ** (-alpha)
        return out

    return prof


def capacitary_fr(r: float, alpha: float, n: int, h: float) -> GridFunction:
    if not 0 < r < 1:
        raise DomainError("r must lie in (0, 1)")
    if h > r / 4:
        raise DomainError(f"grid too coarse: h={h} exceeds r/4={r / 4}")
    return GridFunction.from_radial(symmetric_box(n, 1.0, h), capacitary_profile(r, alpha, n))


def capacitary_fr_star(s, r: float, alpha: float, n: int):
    """Closed-form decreasing rearrangement of f_r with respect to Lebesgue measure."""
    w = unit_ball_volume(n)
    s = np.asarray(s, float)
    val = (s / w + r**n) ** (-alpha / n) / (n * w * math.log(1.0 / r))
    return np.where(s < w * (1 - r**n), val, 0.0)


def capacitary_norm_bound(r: float, alpha: float, n: int, q: float, delta: float = 0.0) -> float:
    """n^(1-q) omega^((alpha-n)q/n) (1+delta)^(q/q') log(1/r)^(1-q), the q-th power of the norm."""
    qp = q / (q - 1)
    w = unit_ball_volume(n)
    return n ** (1 - q) * w ** ((alpha - n) * q / n) * (1 + delta) ** (q / qp) * math.log(1 / r) ** (1 - q)


def capacitary_potential(r: float, alpha: float, n: int, h: float, targets) -> np.ndarray:
    """I_alpha f_r at the targets, through linearity.

    f_r = (g - g 1_{|y|<=r}) / log(1/r) with g = |y|^-alpha / (n omega) on the unit
    ball, so the expensive sum over g is shared by every r on the same grid.
    """
    if h > r / 4:
        raise DomainError(f"grid too coarse: h={h} exceeds r/4={r / 4}")
    spec = symmetric_box(n, 1.0, h)
    rad = spec.radius()
    c = 1.0 / (n * unit_ball_volume(n))
    g = np.where(rad < 1.0, c * rad ** (-alpha), 0.0)
    inner = np.where(rad <= r, g, 0.0)
    full = riesz_potential(GridFunction(spec, g), alpha, targets, symmetric=True)
    core = riesz_potential(GridFunction(spec, inner), alpha, targets, symmetric=True)
    return (full - core) / math.log(1.0 / r)


# --------------------------------------------------------------- u_epsilon

# a narrow blend keeps the Dirichlet energy outside B_1 small, which shortens the
# pre-asymptotic regime of the sharpness sweeps
BLEND_END = 1.5
_BLEND = BPoly.from_derivatives([1.0, BLEND_END], [[0.0, -1.0, 1.0, -2.0, 6.0], [0.0] * 5])


def log_cap_profile(eps: float):
    """log(1/rho) on [eps, 1], an even quartic cap inside, a C^4 blend to 0 on [1, 3/2]."""
    if not 0 < eps < 0.5:
        raise DomainError("eps must lie in (0, 1/2)")
    L = math.log(1.0 / eps)

    def prof(rho):
        rho = np.asarray(rho, float)
        out = np.zeros_like(rho)
        s = rho / eps
        cap = rho < eps
        out[cap] = L + 0.75 - s[cap] ** 2 + 0.25 * s[cap] ** 4
        mid = (rho >= eps) & (rho <= 1.0)
        out[mid] = -np.log(rho[mid])
        tail = (rho > 1.0) & (rho < BLEND_END)
        out[tail] = _BLEND(rho[tail])
        return out

    return prof


def log_cap_u_eps(eps: float, n: int, h: float) -> GridFunction:
    if eps < 4 * h:
        raise DomainError(f"eps={eps} is below 4h={4 * h}")
    return GridFunction.from_radial(symmetric_box(n, 2.0, h), log_cap_profile(eps))


def u_eps_derivative_norm(eps: float, n: int, k: int, q: float, shells: int = 20000) -> float:
    """Lorentz L^{n/k,q}(B_2) norm of |grad^k u_eps| on radial shells.

    Shells reach far below any grid, so eps may be as small as exp(-150).
    """
    nu = radial_lebesgue(n, BLEND_END, r_min=eps * 1e-3, count=shells)
    prof = log_cap_profile(eps)
    g = grad_k_at(lambda p: prof(np.linalg.norm(p, axis=-1)), nu.points, k, rel=1e-3)
    return norm_of(g, nu, n / k, q)


def u_eps_norm_bound(eps: float, n: int, k: int, q: float, m: float = 4.0, delta: float = 0.1) -> float:
    qp = q / (q - 1)
    lead = n ** (1 / q) * unit_ball_volume(n) ** (k / n) * math.sqrt(float(ell_combinatorial(k, n)))
    return (1 + delta) ** (1 / qp) * lead * math.log(1 / (m * eps)) ** (1 / q)


# ---------------------------------------------------------------- Alberico


def alberico_phi(t):
    """Primitive of the quintic smoothstep: 0 for t <= 0, t - 1/2 for t >= 1."""
    t = np.asarray(t, float)
    mid = t**6 - 3 * t**5 + 2.5 * t**4
    return np.where(t <= 0, 0.0, np.where(t >= 1, t - 0.5, mid))


def alberico_phi_prime(t):
    t = np.asarray(t, float)
    mid = 6 * t**5 - 15 * t**4 + 10 * t**3
    return np.where(t <= 0, 0.0, np.where(t >= 1, 1.0, mid))


def alberico_profile(a: float):
    if not a > math.e:
        raise DomainError("a must exceed e")
    la = math.log(a)

    def prof(rho):
        rho = np.asarray(rho, float)
        with np.errstate(divide="ignore"):
            return alberico_phi(np.log(1.0 / rho) / la)

    return prof


def alberico_ua(a: float, n: int, h: float) -> GridFunction:
    return GridFunction.from_radial(symmetric_box(n, 1.0, h), alberico_profile(a))


# ------------------------------------------------------ weak-endpoint data


def weak_endpoint_profile(alpha: float, n: int):
    c = 1.0 / (n * unit_ball_volume(n))

    def prof(rho):
        rho = np.asarray(rho, float)
        return np.where(rho < 1.0, c * rho ** (-alpha), 0.0)

    return prof


def weak_endpoint_f(alpha: float, n: int, h: float) -> GridFunction:
    return GridFunction.from_radial(symmetric_box(n, 1.0, h), weak_endpoint_profile(alpha, n))


def weak_endpoint_norm_bound(alpha: float, n: int) -> float:
    return unit_ball_volume(n) ** (alpha / n - 1) / n


def log_corrected_profile(alpha: float, n: int):
    """|x|^-alpha / (1 + n log(1/|x|)): rearrangement (s/omega)^(-alpha/n) / (1 + log(omega/s))."""

    def prof(rho):
        rho = np.asarray(rho, float)
        out = np.zeros_like(rho)
        m = rho < 1.0
        out[m] = rho[m] ** (-alpha) / (1.0 + n * np.log(1.0 / rho[m]))
        return out

    return prof


def log_corrected_f(alpha: float, n: int, h: float) -> GridFunction:
    return GridFunction.from_radial(symmetric_box(n, 1.0, h), log_corrected_profile(alpha, n))


# ----------------------------------------------------------------- specs


@dataclass(frozen=True)
class FamilySpec:
    kind: FamilyKind
    param: float
    params: Params

    def __post_init__(self):
        kind = FamilyKind(self.kind)
        object.__setattr__(self, "kind", kind)
        p = self.param
        if kind is FamilyKind.CAPACITARY_FR and not 0 < p < 1:
            raise DomainError("r must lie in (0, 1)")
        if kind is FamilyKind.LOG_CAP_U_EPS and not 0 < p < 0.5:
            raise DomainError("eps must lie in (0, 1/2)")
        if kind is FamilyKind.ALBERICO_UA and not p > math.e:
            raise DomainError("a must exceed e")
        if kind is FamilyKind.CAPACITARY_FR and self.params.alpha is None:
            raise DomainError("capacitary family needs alpha")

    @property
    def support_radius(self) -> float:
        return 2.0 if self.kind is FamilyKind.LOG_CAP_U_EPS else 1.0

    def profile(self):
        p, n = self.params, self.params.n
        if self.kind is FamilyKind.CAPACITARY_FR:
            return capacitary_profile(self.param, p.alpha, n)
        if self.kind is FamilyKind.LOG_CAP_U_EPS:
            return log_cap_profile(self.param)
        if self.kind is FamilyKind.ALBERICO_UA:
            return alberico_profile(self.param)
        if self.kind is FamilyKind.WEAK_ENDPOINT_F:
            return weak_endpoint_profile(p.alpha, n)
        return log_corrected_profile(p.alpha, n)

    def grid(self, h: float) -> GridSpec:
        return symmetric_box(self.params.n, self.support_radius, h)

    def build(self, h: float) -> GridFunction:
        if self.kind is FamilyKind.CAPACITARY_FR:
            return capacitary_fr(self.param, self.params.alpha, self.params.n, h)
        if self.kind is FamilyKind.LOG_CAP_U_EPS:
            return log_cap_u_eps(self.param, self.params.n, h)
        return GridFunction.from_radial(self.grid(h), self.profile())

    def to_csv(self, h: float, path=None) -> str:
        return self.build(h).to_csv(path, meta=f"kind={self.kind.value},param={self.param:.17g}")

    def support_domain(self) -> Ball:
        return Ball((0.0,) * self.params.n, self.support_radius)
