"""Distribution functions, decreasing rearrangements and Lorentz quasi-norms.

Everything is exact on the discrete representation: a sampled function
together with a weighted point measure is a step function, its rearrangement
is obtained by sorting, and every integral of a power of the profile is
evaluated piece by piece in closed form.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .constants import INF, DomainError, QInf, parse_q
from .measures import RadonMeasure


@dataclass(frozen=True)
class StepProfile:
    """Non-increasing right-continuous step function, value v[i] on [t[i], t[i+1])."""

    t: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, float)
        v = np.asarray(self.v, float)
        if len(t) != len(v) + 1 or t[0] != 0.0:
            raise DomainError("breakpoints must start at 0 and outnumber values by one")
        if np.any(np.diff(t) <= 0):
            raise DomainError("breakpoints must increase strictly")
        if np.any(np.diff(v) > 0) or np.any(v < 0):
            raise DomainError("values must be nonnegative and non-increasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "v", v)

    @property
    def support_end(self) -> float:
        return float(self.t[-1])

    def __call__(self, s) -> np.ndarray:
        s = np.asarray(s, float)
        i = np.searchsorted(self.t, s, side="right") - 1
        out = np.where((i >= 0) & (i < len(self.v)), self.v[np.clip(i, 0, len(self.v) - 1)], 0.0)
        return out if out.ndim else float(out)

    def integral(self, t) -> np.ndarray:
        """Exact value of the integral of the profile over [0, t]."""
        t = np.asarray(t, float)
        cum = np.concatenate([[0.0], np.cumsum(self.v * np.diff(self.t))])
        i = np.clip(np.searchsorted(self.t, t, side="right") - 1, 0, len(self.v))
        vi = np.concatenate([self.v, [0.0]])[i]
        out = cum[i] + vi * (np.minimum(t, self.support_end) - self.t[i]).clip(min=0)
        return out if out.ndim else float(out)

    def level_length(self, lam: float) -> float:
        """Lebesgue length of {s : profile(s) > lam}."""
        k = int(np.count_nonzero(self.v > lam))
        return float(self.t[k])

    def truncated(self, M: float) -> "StepProfile":
        if M >= self.support_end:
            return self
        k = int(np.searchsorted(self.t, M, side="left"))
        return StepProfile(np.concatenate([self.t[:k], [M]]), self.v[:k])

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        buf.write("# t_i,v_i (value on [t_{i-1}, t_i))\n")
        np.savetxt(buf, np.column_stack([self.t[1:], self.v]), delimiter=",", fmt="%.17g")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _abs_values(f, nu: RadonMeasure) -> np.ndarray:
    vals = np.abs(nu.values_of(f))
    if not np.all(np.isfinite(vals)):
        raise DomainError("function must be finite on the support of the measure")
    return vals


def distribution(f, nu: RadonMeasure, s: float) -> float:
    if s < 0:
        raise DomainError("level must be nonnegative")
    vals = _abs_values(f, nu)
    return float(nu.weights[vals > s].sum())


def profile_from_samples(vals: np.ndarray, weights: np.ndarray) -> StepProfile:
    """Sort descending with ties kept in index order, coalesce equal values, drop null cells."""
    keep = weights > 0
    vals, weights = np.abs(vals[keep]), weights[keep]
    if len(vals) == 0:
        return StepProfile(np.array([0.0, 1e-300]), np.array([0.0]))
    order = np.argsort(-vals, kind="stable")
    v, w = vals[order], weights[order]
    new = np.concatenate([[True], v[1:] != v[:-1]])
    starts = np.flatnonzero(new)
    t = np.concatenate([[0.0], np.cumsum(np.add.reduceat(w, starts))])
    # cells lighter than the rounding of the running mass carry no length
    wide = np.diff(t) > 0
    return StepProfile(np.concatenate([[0.0], t[1:][wide]]), v[starts][wide])


def rearrange(f, nu: RadonMeasure) -> StepProfile:
    return profile_from_samples(_abs_values(f, nu), nu.weights)


def double_star(p: StepProfile, t) -> np.ndarray:
    t = np.asarray(t, float)
    if np.any(t <= 0):
        raise DomainError("double star needs t > 0")
    return p.integral(t) / t


def lorentz_norm(p: StepProfile, p_exp: float, q_exp, M: float | None = None,
                 s_min: float = 0.0) -> float:
    """Lorentz quasi-norm of a profile on [s_min, M].

    ``s_min`` discards the initial stretch of the profile; grid samples of a
    singular function overcount the smallest level sets, and continuum
    comparisons pass the mass of a few cells here.
    """
    if not 1 <= p_exp < math.inf:
        raise DomainError("p must lie in [1, inf)")
    q = parse_q(q_exp)
    if not (q is INF or q >= 1):
        raise DomainError("q must be >= 1 or inf")
    prof = p if M is None else p.truncated(M)
    if np.any(np.isinf(prof.v)):
        return math.inf
    a = np.maximum(prof.t[:-1], s_min)
    b = prof.t[1:]
    live = b > a
    a, b, v = a[live], b[live], prof.v[live]
    if len(v) == 0:
        return 0.0
    if q is INF:
        return float(np.max(b ** (1.0 / p_exp) * v))
    e = q / p_exp
    total = np.sum(v**q * (b**e - a**e)) / e
    return float(total ** (1.0 / q))


def lorentz_norm_by_distribution(f, nu: RadonMeasure, p_exp: float, q_exp) -> float:
    """The same quasi-norm written through the distribution function."""
    if not 1 <= p_exp < math.inf:
        raise DomainError("p must lie in [1, inf)")
    q = parse_q(q_exp)
    vals = _abs_values(f, nu)
    keep = (nu.weights > 0) & (vals > 0)
    vals, w = vals[keep], nu.weights[keep]
    if len(vals) == 0:
        return 0.0
    lev, inv = np.unique(vals, return_inverse=True)
    mass = np.bincount(inv, weights=w, minlength=len(lev))
    # D[i] = mass of {|f| >= lev[i]} = distribution on [lev[i-1], lev[i])
    D = np.cumsum(mass[::-1])[::-1]
    if q is INF:
        return float(np.max(lev * D ** (1.0 / p_exp)))
    lo = np.concatenate([[0.0], lev[:-1]])
    total = np.sum(D ** (q / p_exp) * (lev**q - lo**q)) / q
    return float((p_exp * total) ** (1.0 / q))


def norm_of(f, nu: RadonMeasure, p_exp: float, q_exp, s_min: float = 0.0) -> float:
    """Lorentz quasi-norm of f with respect to nu on the whole support."""
    return lorentz_norm(rearrange(f, nu), p_exp, q_exp, nu.total_mass, s_min)


@dataclass(frozen=True)
class TriangleReport:
    passed: bool
    norm_union: float
    norm_a: float
    norm_b: float


def triangle_disjoint_check(f, nu: RadonMeasure, A: np.ndarray, B: np.ndarray, p_exp: float, q_exp,
                            tol: float = 1e-12) -> TriangleReport:
    A, B = np.asarray(A, bool), np.asarray(B, bool)
    if np.any(A & B):
        raise DomainError("A and B must be disjoint")
    nu_ab, nu_a, nu_b = nu.restrict(A | B), nu.restrict(A), nu.restrict(B)
    vals = nu.values_of(f)
    u = norm_of(vals[A | B], nu_ab, p_exp, q_exp)
    a = norm_of(vals[A], nu_a, p_exp, q_exp)
    b = norm_of(vals[B], nu_b, p_exp, q_exp)
    return TriangleReport(u <= (a + b) * (1 + tol) + tol, u, a, b)


def q_is_inf(q) -> bool:
    return isinstance(parse_q(q), QInf)
