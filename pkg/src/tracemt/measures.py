"""Finite positive measures on bounded domains and empirical growth certificates.

A measure is stored as a cloud of weighted points.  Grid measures remember the
grid cell behind every point so that grid functions can be read off without
interpolation; hyperplane and user supplied measures are plain atoms.

Certificates compare ball masses with a power of the radius.  Grid based
measures cannot resolve balls smaller than a cell, so the growth certificate
divides by ``(r + delta)**d`` where ``delta`` is the resolution blur of the
measure (half a cell diagonal for grid measures, zero for user atoms).  Every
cell centre within ``r`` of ``x`` lies in a ball of radius ``r + delta``
around ``x``, which keeps the certificate honest at all radii.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import qmc

from .constants import DomainError, unit_ball_volume
from .grid import GridFunction, GridSpec, grid_for

HALTON_SEED = 20240611
CERT_TOL = 0.05


@dataclass(frozen=True)
class RadonMeasure:
    points: np.ndarray
    weights: np.ndarray
    kind: str = "atoms"
    resolution: float = 0.0
    h: float | None = None
    grid: GridSpec | None = None
    grid_index: np.ndarray | None = None
    domain: object | None = None
    dimension: float | None = None
    growth_constant: float | None = None
    label: str = "atoms"

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, float))
        w = np.asarray(self.weights, float).ravel()
        if len(pts) != len(w):
            raise DomainError("points and weights differ in length")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise DomainError("weights must be finite and nonnegative")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.points.shape[1]

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def values_of(self, u) -> np.ndarray:
        """Values of a grid function (or an aligned array) on the support points."""
        if isinstance(u, GridFunction):
            if self.grid is not None and u.spec == self.grid:
                return u.values.ravel()[self.grid_index]
            return u.sample(self.points)
        u = np.asarray(u, float).ravel()
        if len(u) != len(self.weights):
            raise DomainError("value array is not aligned with the measure")
        return u

    def restrict(self, mask: np.ndarray) -> "RadonMeasure":
        mask = np.asarray(mask, bool)
        gi = None if self.grid_index is None else self.grid_index[mask]
        return replace(self, points=self.points[mask], weights=self.weights[mask], grid_index=gi)

    def scaled(self, lam: float) -> "RadonMeasure":
        if lam < 0:
            raise DomainError("scale factor must be nonnegative")
        gc = None if self.growth_constant is None else lam * self.growth_constant
        return replace(self, weights=lam * self.weights, growth_constant=gc)

    def diameter(self) -> float:
        if self.domain is not None:
            return float(self.domain.diameter)
        span = self.points.max(axis=0) - self.points.min(axis=0)
        return float(max(np.linalg.norm(span), self.resolution, 1e-12))

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        cols = ",".join(f"x{i + 1}" for i in range(self.n))
        buf.write(f"# {cols},weight\n")
        np.savetxt(buf, np.column_stack([self.points, self.weights]), delimiter=",", fmt="%.17g")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def load_atoms(path, dimension: float | None = None, growth_constant: float | None = None) -> RadonMeasure:
    data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    return RadonMeasure(data[:, :-1], data[:, -1], dimension=dimension, growth_constant=growth_constant)


def _grid_support(domain, h: float):
    spec = grid_for(domain, h)
    pts = spec.centers()
    keep = np.flatnonzero(domain.contains(pts))
    if len(keep) == 0:
        raise DomainError("domain contains no cell centres at this resolution")
    return spec, pts[keep], keep


def make_lebesgue(domain, h: float) -> RadonMeasure:
    spec, pts, idx = _grid_support(domain, h)
    n = spec.n
    return RadonMeasure(
        pts, np.full(len(pts), h**n), kind="grid", resolution=h * np.sqrt(n) / 2, h=h,
        grid=spec, grid_index=idx, domain=domain, dimension=float(n),
        growth_constant=unit_ball_volume(n), label="lebesgue",
    )


def make_hyperplane(domain, h: float, plane=(None, 0.0)) -> RadonMeasure:
    """Surface measure on {x[axis] = offset} inside the domain, one atom per (n-1)-cell."""
    axis, offset = plane
    spec = grid_for(domain, h)
    n = spec.n
    axis = n - 1 if axis is None else int(axis)
    if not 0 <= axis < n:
        raise DomainError(f"plane axis {axis} out of range")
    axes = spec.axes()
    axes[axis] = np.array([float(offset)])
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    pts = pts[domain.contains(pts)]
    if len(pts) == 0:
        raise DomainError("hyperplane does not meet the domain")
    return RadonMeasure(
        pts, np.full(len(pts), h ** (n - 1)), kind="atoms", resolution=h * np.sqrt(n - 1) / 2, h=h,
        domain=domain, dimension=float(n - 1), growth_constant=unit_ball_volume(n - 1),
        label=f"hyperplane(axis={axis},offset={float(offset):.6g})",
    )


def _cell_means(fn, centers: np.ndarray, h: float, sub: int) -> np.ndarray:
    n = centers.shape[1]
    off1 = ((np.arange(sub) + 0.5) / sub - 0.5) * h
    offs = np.stack([m.ravel() for m in np.meshgrid(*([off1] * n), indexing="ij")], axis=-1)
    out = np.empty(len(centers))
    step = max(1, 2_000_000 // len(offs))
    for a in range(0, len(centers), step):
        c = centers[a:a + step]
        out[a:a + step] = fn(c[:, None, :] + offs[None, :, :]).mean(axis=1)
    return out


def make_radial_power(domain, h: float, d: float, center=None) -> RadonMeasure:
    """Density (d / (n omega_n)) |x - c|^(d-n), so that nu(B(c, r)) = r^d in the continuum."""
    spec, pts, idx = _grid_support(domain, h)
    n = spec.n
    if not 0 < d <= n:
        raise DomainError(f"d must lie in (0, {n}], got {d}")
    c = np.zeros(n) if center is None else np.asarray(center, float)
    coef = d / (n * unit_ball_volume(n))

    def dens(y):
        return coef * np.linalg.norm(y - c, axis=-1) ** (d - n)

    sub, sub_near = (8, 64) if n == 2 else (4, 24)
    w = _cell_means(dens, pts, h, sub)
    near = np.max(np.abs(pts - c), axis=1) < 2 * h
    if np.any(near):
        w[near] = _cell_means(dens, pts[near], h, sub_near)
    return RadonMeasure(
        pts, w * h**n, kind="grid", resolution=h * np.sqrt(n) / 2, h=h, grid=spec, grid_index=idx,
        domain=domain, dimension=float(d), growth_constant=1.0, label=f"radial_power(d={d:g})",
    )


def radial_lebesgue(n: int, r_max: float, r_min: float = 1e-12, count: int = 4000) -> RadonMeasure:
    """Lebesgue measure of B(0, r_max) lumped into thin shells, for radial functions.

    Atoms sit on the first axis at the geometric midpoint of each shell; the
    innermost ball B(0, r_min) is one atom at r_min / 2.
    """
    edges = np.concatenate([[0.0], np.geomspace(r_min, r_max, count + 1)])
    mids = np.concatenate([[r_min / 2], np.sqrt(edges[1:-1] * edges[2:])])
    w = unit_ball_volume(n) * np.diff(edges**n)
    pts = np.zeros((len(mids), n))
    pts[:, 0] = mids
    return RadonMeasure(pts, w, kind="atoms", label="radial_shells")


def ball_mass(nu: RadonMeasure, x, r: float) -> float:
    if r < 0:
        raise DomainError("radius must be nonnegative")
    d = np.linalg.norm(nu.points - np.asarray(x, float), axis=1)
    return float(nu.weights[d <= r].sum())


def ball_masses(nu: RadonMeasure, centers: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """nu(B(c, r)) for every centre (rows) and radius (columns)."""
    centers = np.atleast_2d(np.asarray(centers, float))
    radii = np.asarray(radii, float)
    out = np.empty((len(centers), len(radii)))
    for i, c in enumerate(centers):
        d = np.linalg.norm(nu.points - c, axis=1)
        order = np.argsort(d, kind="stable")
        cum = np.concatenate([[0.0], np.cumsum(nu.weights[order])])
        out[i] = cum[np.searchsorted(d[order], radii, side="right")]
    return out


@dataclass(frozen=True)
class GrowthCertificate:
    d: float
    C_d_prime: float
    worst_ratio: float
    sample_count: int
    passed: bool
    worst_center: tuple = field(default=())
    worst_radius: float = 0.0


@dataclass(frozen=True)
class NonDegeneracyCertificate:
    x0: tuple
    rho0: float
    C0: float
    worst_ratio: float
    passed: bool


def certificate_centers(nu: RadonMeasure, samples: int) -> np.ndarray:
    lo, hi = nu.points.min(axis=0), nu.points.max(axis=0)
    lo, hi = lo - nu.resolution, hi + nu.resolution
    halton = qmc.Halton(d=nu.n, scramble=True, seed=HALTON_SEED).random(samples)
    boxed = lo + halton * (hi - lo)
    on_support = nu.points[np.linspace(0, len(nu.points) - 1, min(samples, len(nu.points))).astype(int)]
    heavy = nu.points[[int(np.argmax(nu.weights))]]
    return np.vstack([boxed, on_support, heavy])


def certify_growth(nu: RadonMeasure, d: float, C_d_prime: float, samples: int = 64,
                   n_radii: int = 24, tol: float = CERT_TOL) -> GrowthCertificate:
    if samples < 1:
        raise DomainError("need at least one sample")
    centers = certificate_centers(nu, samples)
    r_lo = nu.h if nu.h else max(nu.diameter() * 1e-3, 1e-12)
    radii = np.geomspace(r_lo, nu.diameter(), n_radii)
    ratio = ball_masses(nu, centers, radii) / (radii + nu.resolution) ** d
    i, j = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
    worst = float(ratio[i, j])
    return GrowthCertificate(float(d), float(C_d_prime), worst, int(ratio.size),
                             worst <= C_d_prime * (1 + tol), tuple(centers[i]), float(radii[j]))


def certify_nondegeneracy(nu: RadonMeasure, x0, rho0: float, d: float, n_radii: int = 16,
                          tol: float = CERT_TOL) -> NonDegeneracyCertificate:
    h = nu.h or 0.0
    if not rho0 > h:
        raise DomainError("rho0 must exceed the grid spacing")
    # lattice counting noise at 2h is about 20%; from 8h it stays under 5%
    r_lo = (8 * h if rho0 > 8 * h else 2 * h) if h else rho0 * 1e-2
    radii = np.geomspace(min(r_lo, rho0), rho0, n_radii)
    inside = nu if nu.domain is None else nu.restrict(nu.domain.contains(nu.points))
    ratio = ball_masses(inside, [x0], radii)[0] / radii**d
    c0 = float(ratio.min())
    return NonDegeneracyCertificate(tuple(np.asarray(x0, float)), float(rho0), c0, c0,
                                    c0 > 0 and c0 >= c0 * (1 - tol))
