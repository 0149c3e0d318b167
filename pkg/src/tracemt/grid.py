"""Uniform Cartesian grids, sampled functions and simple domains."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .constants import DomainError


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float

    @property
    def n(self) -> int:
        return len(self.center)

    def bbox(self):
        c = np.asarray(self.center, float)
        return c - self.radius, c + self.radius

    def contains(self, pts: np.ndarray) -> np.ndarray:
        d = np.linalg.norm(np.asarray(pts, float) - np.asarray(self.center, float), axis=-1)
        return d <= self.radius

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius


@dataclass(frozen=True)
class Annulus:
    center: tuple
    r_in: float
    r_out: float

    @property
    def n(self) -> int:
        return len(self.center)

    def bbox(self):
        c = np.asarray(self.center, float)
        return c - self.r_out, c + self.r_out

    def contains(self, pts: np.ndarray) -> np.ndarray:
        d = np.linalg.norm(np.asarray(pts, float) - np.asarray(self.center, float), axis=-1)
        return (d > self.r_in) & (d <= self.r_out)

    @property
    def diameter(self) -> float:
        return 2.0 * self.r_out


@dataclass(frozen=True)
class BoxDomain:
    lo: tuple
    hi: tuple

    @property
    def n(self) -> int:
        return len(self.lo)

    def bbox(self):
        return np.asarray(self.lo, float), np.asarray(self.hi, float)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        p = np.asarray(pts, float)
        return np.all((p >= np.asarray(self.lo)) & (p <= np.asarray(self.hi)), axis=-1)

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(np.asarray(self.hi, float) - np.asarray(self.lo, float)))


def unit_ball(n: int, radius: float = 1.0) -> Ball:
    return Ball((0.0,) * n, radius)


@dataclass(frozen=True)
class GridSpec:
    """Cells [lo + i h, lo + (i+1) h) per axis; values live at cell centres."""

    lo: tuple
    h: float
    shape: tuple

    @property
    def n(self) -> int:
        return len(self.shape)

    @property
    def hi(self) -> tuple:
        return tuple(l + s * self.h for l, s in zip(self.lo, self.shape))

    @property
    def cell_volume(self) -> float:
        return self.h**self.n

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def axes(self) -> list[np.ndarray]:
        return [l + (np.arange(s) + 0.5) * self.h for l, s in zip(self.lo, self.shape)]

    def centers(self) -> np.ndarray:
        """All cell centres, shape (size, n), C order."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def radius(self, center=None) -> np.ndarray:
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        c = np.zeros(self.n) if center is None else np.asarray(center, float)
        return np.sqrt(sum((m - ci) ** 2 for m, ci in zip(mesh, c)))

    def index_of(self, pts: np.ndarray) -> np.ndarray:
        """Integer index of the cell containing each point (may lie outside the grid)."""
        return np.floor((np.asarray(pts, float) - np.asarray(self.lo)) / self.h).astype(np.int64)

    def center_index(self, pts: np.ndarray, atol: float = 1e-9):
        """Indices when every point is a cell centre inside the grid, else None."""
        rel = (np.asarray(pts, float) - np.asarray(self.lo)) / self.h - 0.5
        idx = np.rint(rel)
        if not np.all(np.abs(rel - idx) <= atol):
            return None
        idx = idx.astype(np.int64)
        if np.any(idx < 0) or np.any(idx >= np.asarray(self.shape)):
            return None
        return idx

    def header(self) -> str:
        box = ";".join(f"{l:.17g}:{u:.17g}" for l, u in zip(self.lo, self.hi))
        return f"n={self.n},h={self.h:.17g},box={box}"


def grid_for(domain, h: float) -> GridSpec:
    """Smallest grid with spacing h whose vertices include multiples of h covering the domain."""
    if not h > 0:
        raise DomainError(f"h must be positive, got {h}")
    lo, hi = domain.bbox()
    ilo = np.floor(lo / h + 1e-9)
    ihi = np.ceil(hi / h - 1e-9)
    shape = tuple(int(v) for v in ihi - ilo)
    if min(shape) < 1:
        raise DomainError("domain has empty interior at this resolution")
    return GridSpec(tuple(float(v) for v in ilo * h), float(h), shape)


@dataclass
class GridFunction:
    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(self.spec.shape)
        if not np.all(np.isfinite(self.values)):
            raise DomainError("grid function values must be finite")

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def h(self) -> float:
        return self.spec.h

    @classmethod
    def zeros(cls, spec: GridSpec) -> "GridFunction":
        return cls(spec, np.zeros(spec.shape))

    @classmethod
    def from_function(cls, spec: GridSpec, fn, domain=None) -> "GridFunction":
        """Sample ``fn(points)`` at cell centres; cells outside ``domain`` get 0."""
        pts = spec.centers()
        vals = np.zeros(len(pts))
        keep = np.ones(len(pts), bool) if domain is None else domain.contains(pts)
        vals[keep] = fn(pts[keep])
        return cls(spec, vals)

    @classmethod
    def from_radial(cls, spec: GridSpec, profile, domain=None) -> "GridFunction":
        return cls.from_function(spec, lambda p: profile(np.linalg.norm(p, axis=-1)), domain)

    def abs(self) -> "GridFunction":
        return GridFunction(self.spec, np.abs(self.values))

    def scaled(self, c: float) -> "GridFunction":
        return GridFunction(self.spec, c * self.values)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.spec, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.spec, self.values - other.values)

    def integral(self) -> float:
        return float(self.values.sum() * self.spec.cell_volume)

    def sample(self, pts: np.ndarray) -> np.ndarray:
        """Values at arbitrary points: exact at cell centres, multilinear elsewhere, 0 outside."""
        from scipy.interpolate import RegularGridInterpolator

        pts = np.atleast_2d(np.asarray(pts, float))
        idx = self.spec.center_index(pts)
        if idx is not None:
            return self.values[tuple(idx.T)]
        interp = RegularGridInterpolator(self.spec.axes(), self.values, bounds_error=False, fill_value=0.0)
        return interp(pts)

    def to_csv(self, path_or_buf=None, meta: str | None = None) -> str:
        buf = io.StringIO()
        buf.write(f"# {self.spec.header()}\n")
        if meta:
            buf.write(f"# {meta}\n")
        data = np.column_stack([self.spec.centers(), self.values.ravel()])
        np.savetxt(buf, data, delimiter=",", fmt="%.17g")
        text = buf.getvalue()
        if path_or_buf is not None:
            with open(path_or_buf, "w") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, path) -> "GridFunction":
        with open(path) as fh:
            first = fh.readline()
        head = dict(kv.split("=", 1) for kv in first.lstrip("# ").strip().split(","))
        n, h = int(head["n"]), float(head["h"])
        lo = []
        shape = []
        for part in head["box"].split(";"):
            a, b = (float(v) for v in part.split(":"))
            lo.append(a)
            shape.append(int(round((b - a) / h)))
        spec = GridSpec(tuple(lo), h, tuple(shape))
        data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
        if data.shape[1] != n + 1:
            raise DomainError("column count does not match header dimension")
        return cls(spec, data[:, -1])


def symmetric_box(n: int, half_width: float, h: float) -> GridSpec:
    """Box [-R, R]^n with R a multiple of h, so the origin is a cell vertex."""
    m = int(math.ceil(half_width / h - 1e-9))
    return GridSpec((-m * h,) * n, float(h), (2 * m,) * n)
