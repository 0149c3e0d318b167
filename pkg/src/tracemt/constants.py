"""Closed-form constants and sharp thresholds.

Everything here is a pure function of the dimension data.  The combinatorial
constant ``ell_k_n`` is evaluated in exact rational arithmetic because the
alternating double sum loses all significant digits in floating point once
``k`` reaches 4 or so.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


class QInf(enum.Enum):
    """Marker for the secondary Lorentz exponent q = infinity."""

    INF = "inf"

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"


INF = QInf.INF

THEOREM_IDS = ("T1_0", "T1", "T1_1", "Tinf", "Tinf1", "Tinf2")
FINITE_Q_THEOREMS = ("T1_0", "T1", "T1_1")


def parse_q(value) -> float | QInf:
    """Accept 2, 2.5, "3", "inf", INF, math.inf."""
    if isinstance(value, QInf):
        return value
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        value = float(value)
    if math.isinf(value):
        return INF
    return float(value)


@dataclass(frozen=True)
class Params:
    """Dimension data for one inequality.

    ``k`` is only needed by the differential theorems and ``alpha`` only by
    the potential ones; either may be left as ``None``.  ``d`` defaults to ``n``.
    """

    n: int
    k: int | None = None
    alpha: float | None = None
    q: float | QInf = 2.0
    d: float | None = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n!r}")
        if self.k is not None and not (isinstance(self.k, int) and 1 <= self.k < self.n):
            raise DomainError(f"k must be an integer with 1 <= k < n, got {self.k!r}")
        if self.alpha is not None and not (0 < self.alpha < self.n):
            raise DomainError(f"alpha must lie in (0, n), got {self.alpha!r}")
        q = parse_q(self.q)
        if q is not INF and not q > 1:
            raise DomainError(f"q must lie in (1, inf], got {self.q!r}")
        object.__setattr__(self, "q", q)
        d = float(self.n) if self.d is None else float(self.d)
        if not 0 < d <= self.n:
            raise DomainError(f"d must lie in (0, n], got {self.d!r}")
        object.__setattr__(self, "d", d)

    @property
    def qprime(self) -> float:
        if self.q is INF:
            return 1.0
        return self.q / (self.q - 1.0)

    @property
    def inv_q(self) -> float:
        """1/q, exactly 0 for q = infinity."""
        return 0.0 if self.q is INF else 1.0 / self.q

    def with_(self, **kw) -> "Params":
        cur = dict(n=self.n, k=self.k, alpha=self.alpha, q=self.q, d=self.d)
        cur.update(kw)
        return Params(**cur)


def unit_ball_volume(n: int) -> float:
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n, i.e. n * omega_n."""
    return n * unit_ball_volume(n)


def riesz_gamma(alpha: float, n: int) -> float:
    """Normalising constant of the Riesz kernel |x|^(alpha-n)."""
    if not 0 < alpha < n:
        raise DomainError(f"alpha must lie in (0, {n}), got {alpha}")
    return math.pi ** (n / 2) * 2.0**alpha * math.gamma(alpha / 2) / math.gamma((n - alpha) / 2)


def riesz_gamma_tilde(alpha: float, n: int) -> float:
    """alpha * gamma(alpha), continuously extended by n * omega_n at alpha = 0."""
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0:
        return n * unit_ball_volume(n)
    return alpha * riesz_gamma(alpha, n)


def pochhammer(mu, i: int):
    """Falling factorial mu (mu-1) ... (mu-i+1); exact when mu is a Fraction."""
    if i < 0:
        raise DomainError(f"pochhammer index must be >= 0, got {i}")
    out = Fraction(1) if isinstance(mu, (Fraction, int)) else 1.0
    for j in range(i):
        out *= mu - j
    return out


def ell_combinatorial(k: int, n: int, theorem_range: bool = True) -> Fraction:
    """The constant with |grad^k log|x|| = sqrt(ell) / |x|^k, as an exact rational.

    The identity holds for every k >= 1; the inequalities only use k < n, which
    is enforced unless ``theorem_range`` is False.
    """
    if k < 1 or (theorem_range and k >= n):
        raise DomainError(f"need 1 <= k < n, got k={k}, n={n}")
    total = Fraction(0)
    for l in range(k // 2 + 1):
        inner = Fraction(0)
        for t in range((k + 1) // 2, k - l + 1):
            inner += (
                Fraction(2) ** (2 * t - k + l)
                * Fraction((-1) ** t, 2 * t)
                * comb(t, k - t)
                * comb(k - t, l)
            )
        total += factorial(k - 2 * l) * factorial(l) * pochhammer(Fraction(n - 3, 2) + l, l) * inner**2
    return factorial(k) * total


class Parity(enum.Enum):
    EVEN = "even_Dk"
    ODD = "odd_Dk"

    @classmethod
    def of(cls, k: int) -> "Parity":
        return cls.EVEN if k % 2 == 0 else cls.ODD


def beta_sharp(p: Params, parity: Parity | None = None) -> float:
    """Linear-level sharp coefficient for the Adams derivative D^k."""
    if p.k is None:
        raise DomainError("beta_sharp needs k")
    parity = Parity.of(p.k) if parity is None else Parity(parity)
    n, k = p.n, p.k
    lead = (p.d / n) ** (1.0 / p.qprime) * unit_ball_volume(n) ** (-(n - k) / n)
    if parity is Parity.EVEN:
        return lead * riesz_gamma(k, n)
    return lead * riesz_gamma_tilde(k - 1, n)


@dataclass(frozen=True)
class Threshold:
    """A sharp threshold in linear form and in exponent form (linear ** q')."""

    linear: float
    exponent: float


def theorem_threshold(theorem_id: str, p: Params) -> Threshold:
    if theorem_id not in THEOREM_IDS:
        raise DomainError(f"unknown theorem id {theorem_id!r}; expected one of {THEOREM_IDS}")
    finite = theorem_id in FINITE_Q_THEOREMS
    if finite and p.q is INF:
        raise DomainError(f"{theorem_id} needs finite q")
    if not finite and p.q is not INF:
        raise DomainError(f"{theorem_id} needs q = inf")
    n, d = p.n, p.d
    wn = unit_ball_volume(n)
    if theorem_id in ("T1", "Tinf"):
        if p.alpha is None:
            raise DomainError(f"{theorem_id} needs alpha")
        a = p.alpha
        kappa = (d / n) ** (1.0 / p.qprime) * riesz_gamma(a, n) * wn ** (-(n - a) / n)
    elif theorem_id in ("T1_0", "Tinf1"):
        if p.k is None:
            raise DomainError(f"{theorem_id} needs k")
        k = p.k
        ell = float(ell_combinatorial(k, n))
        kappa = d ** (1.0 / p.qprime) * n**p.inv_q * wn ** (k / n) * math.sqrt(ell)
    else:
        kappa = beta_sharp(p)
    return Threshold(linear=kappa, exponent=kappa**p.qprime)


@dataclass(frozen=True)
class SharpConstants:
    params: Params
    omega_n: float
    gamma_alpha: float | None
    gamma_tilde: float | None
    ell_k_n: Fraction | None
    beta_nkq: float | None
    thresholds: dict = field(default_factory=dict)


def sharp_constants(p: Params) -> SharpConstants:
    """Every constant that makes sense for the given parameters."""
    ga = gt = None
    if p.alpha is not None:
        ga = riesz_gamma(p.alpha, p.n)
        gt = riesz_gamma_tilde(p.alpha, p.n)
    ell = beta = None
    if p.k is not None:
        ell = ell_combinatorial(p.k, p.n)
        beta = beta_sharp(p)
    # the weak-endpoint thresholds do not depend on q, so they are always listed
    thresholds = {}
    for tid in THEOREM_IDS:
        pp = p if tid in FINITE_Q_THEOREMS else p.with_(q=INF)
        if pp.q is INF and tid in FINITE_Q_THEOREMS:
            continue
        try:
            thresholds[tid] = theorem_threshold(tid, pp)
        except DomainError:
            continue
    return SharpConstants(p, unit_ball_volume(p.n), ga, gt, ell, beta, thresholds)
