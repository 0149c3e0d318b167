"""Named invariant suites behind ``tracemt verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import Tolerances
from .constants import INF, unit_ball_volume, riesz_gamma_tilde
from .grid import Ball, GridFunction, symmetric_box
from .measures import RadonMeasure, make_hyperplane, make_lebesgue
from .potentials import (
    fuglede_check,
    kernel_rearrangements,
    lebesgue_profile,
    oneil_check,
    oneil_theta,
    representation_check,
    riesz_potential,
    sphere_potential,
)
from .rearrangement import (
    distribution,
    lorentz_norm,
    lorentz_norm_by_distribution,
    norm_of,
    rearrange,
    triangle_disjoint_check,
)
from .testfun import capacitary_fr, capacitary_fr_star, log_corrected_f
from .verify import (
    Piecewise,
    hardy_classical_check,
    hardy_log_check,
    hbw_sobolev_check,
    hbw_trace_check,
    random_piecewise,
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} {self.detail}"


def _g(x) -> str:
    return f"{x:.6g}"


# ------------------------------------------------------------------ hardy


def hardy_suite(tol: Tolerances, seed: int) -> list[Check]:
    out = []
    chi = Piecewise([0.0, 1.0], [1.0])
    r = hardy_classical_check(chi, 2.0, 2.0, tol.hardy_tol)
    out.append(Check("hardy.classical.chi", r.passed and abs(r.lhs - 2.0) < 1e-9,
                     f"lhs={_g(r.lhs)} bound={_g(r.constant * r.rhs)}"))
    r = hardy_log_check(chi, 2.0, 1.0, tol.hardy_tol)
    out.append(Check("hardy.log.chi", r.passed, f"lhs={_g(r.lhs)} bound={_g(r.constant * r.rhs)}"))
    zero = Piecewise([0.0, 1.0], [0.0])
    r1, r2 = hardy_classical_check(zero, 2.0, 2.0), hardy_log_check(zero, 2.0, 1.0)
    out.append(Check("hardy.zero", r1.lhs == 0 and r2.lhs == 0, "lhs=0"))

    rng = np.random.default_rng(seed)
    bad_c = bad_l = skipped = 0
    worst_c = worst_l = 0.0
    for _ in range(100):
        psi = random_piecewise(rng)
        p, w = rng.uniform(1.1, 4.0), rng.uniform(1.05, 4.0)
        rc = hardy_classical_check(psi, p, w, tol.hardy_tol)
        skipped += rc.skipped
        if not rc.skipped:
            bad_c += not rc.passed
            worst_c = max(worst_c, rc.lhs / (rc.constant * rc.rhs)) if rc.rhs > 0 else worst_c
        rl = hardy_log_check(psi, rng.uniform(1.1, 4.0), float(rng.choice([0.5, 1.0, 2.0])), tol.hardy_tol)
        bad_l += not rl.passed
        worst_l = max(worst_l, rl.lhs / (rl.constant * rl.rhs)) if rl.rhs > 0 else worst_l
    out.append(Check("hardy.classical.random", bad_c == 0,
                     f"violations={bad_c} skipped={skipped} worst_ratio={_g(worst_c)}"))
    out.append(Check("hardy.log.random", bad_l == 0, f"violations={bad_l} worst_ratio={_g(worst_l)}"))
    return out


# -------------------------------------------------------------- rearrange


def rearrange_suite(tol: Tolerances, seed: int) -> list[Check]:
    out = []
    n, alpha, r, h = 2, 1.0, 0.05, 1 / 256
    f = capacitary_fr(r, alpha, n, h)
    prof = lebesgue_profile(f)
    w = unit_ball_volume(n)
    s = np.linspace(0.5, 15.5, 16) / 16 * w * (1 - r**n)
    err = float(np.max(np.abs(prof(s) / capacitary_fr_star(s, r, alpha, n) - 1)))
    out.append(Check("rearrange.capacitary_closed_form", err <= tol.rearrange_tol, f"max_rel_err={_g(err)}"))

    x0 = np.array([0.1, -0.2])
    c = 0.7
    hh = 1 / 128
    spec = symmetric_box(n, 1.5, hh)
    dom = Ball(tuple(x0), 1.0)
    g = GridFunction.from_function(spec, lambda p: c * np.linalg.norm(p - x0, axis=-1) ** (-alpha), domain=dom)
    # lattice-point counting error in small level sets; floor at the ball of radius 16h
    weak = lorentz_norm(lebesgue_profile(g), n / alpha, INF, s_min=w * (16 * hh) ** n)
    target = c * w ** (alpha / n)
    rel = abs(weak / target - 1)
    out.append(Check("rearrange.weak_norm_power", rel <= 0.01, f"rel_err={_g(rel)}"))

    rng = np.random.default_rng(seed)
    nu = make_lebesgue(Ball((0.0, 0.0), 1.0), 1 / 32)
    vals = rng.standard_normal(len(nu.points))
    lp = float(np.sum(np.abs(vals) ** 3 * nu.weights) ** (1 / 3))
    lpp = norm_of(vals, nu, 3.0, 3.0)
    out.append(Check("rearrange.lpp_equals_lp", abs(lpp / lp - 1) <= 0.01, f"rel_err={_g(abs(lpp / lp - 1))}"))

    p = rearrange(vals, nu)
    levels = np.quantile(np.abs(vals), [0.1, 0.5, 0.9])
    eq = max(abs(p.level_length(lam) - distribution(vals, nu, lam)) for lam in levels)
    out.append(Check("rearrange.equimeasurable", eq <= 1e-12 * nu.total_mass, f"max_abs_err={_g(eq)}"))

    a, b = norm_of(vals, nu, 2.0, 3.0), lorentz_norm_by_distribution(vals, nu, 2.0, 3.0)
    out.append(Check("rearrange.distribution_formula", abs(a / b - 1) <= 1e-10, f"rel_err={_g(abs(a / b - 1))}"))

    A = nu.points[:, 0] < 0
    tri = triangle_disjoint_check(vals, nu, A, ~A, 2.0, 2.0)
    out.append(Check("rearrange.triangle_disjoint", tri.passed,
                     f"union={_g(tri.norm_union)} sum={_g(tri.norm_a + tri.norm_b)}"))
    return out


# ------------------------------------------------------------- potentials


def potentials_suite(tol: Tolerances, seed: int) -> list[Check]:
    out = []
    for n, alpha in ((2, 1.0), (2, 1.5), (3, 2.0)):
        R = 1.0
        h = R / 64 if n == 2 else R / 16
        spec = symmetric_box(n, R, h)
        chi = GridFunction.from_radial(spec, lambda rho: (rho < R).astype(float))
        val = float(riesz_potential(chi, alpha, np.zeros((1, n)))[0])
        exact = n * unit_ball_volume(n) * R**alpha / riesz_gamma_tilde(alpha, n)
        rel = abs(val / exact - 1)
        ok = rel <= tol.riesz_tol if n == 2 else rel <= 5 * tol.riesz_tol
        out.append(Check(f"potentials.riesz_ball.n{n}.a{alpha:g}", ok, f"rel_err={_g(rel)} h={_g(h)}"))

    rng = np.random.default_rng(seed)
    spec = symmetric_box(2, 0.5, 1 / 16)
    f1 = GridFunction(spec, rng.random(spec.shape))
    f2 = GridFunction(spec, rng.random(spec.shape))
    lhs = riesz_potential(f1.scaled(2.0) + f2.scaled(-3.0), 1.0).values
    rhs = 2 * riesz_potential(f1, 1.0).values - 3 * riesz_potential(f2, 1.0).values
    lin = float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))
    out.append(Check("potentials.linearity", lin <= 1e-12, f"rel_err={_g(lin)}"))
    pos = float(riesz_potential(f1, 1.0).values.min())
    out.append(Check("potentials.positivity", pos >= 0, f"min={_g(pos)}"))

    for n, alpha in ((2, 1.0), (3, 2.0), (3, 1.5)):
        for t in (0.1, 0.3, 0.5):
            x = np.zeros(n)
            x[0] = t
            rep = fuglede_check(alpha, n, x, 1.0, tol.fuglede_tol)
            out.append(Check(f"potentials.fuglede.n{n}.a{alpha:g}.t{t:g}", rep.passed, f"abs_err={_g(rep.abs_err)}"))

    ts = np.array([0.25, 0.5, 0.9, 1.1, 2.0, 4.0])
    shell = float(np.max(np.abs(sphere_potential(2.0, 3, ts) - np.minimum(1.0, 1.0 / ts))))
    out.append(Check("potentials.shell_theorem", shell <= 1e-6, f"max_abs_err={_g(shell)}"))

    kr = kernel_rearrangements(1.0, 2, tol=tol.kernel_tol)
    out.append(Check("potentials.kernel_rearrangement", kr.passed, f"max_rel_err={_g(kr.empirical_max_rel_err)}"))

    spec = symmetric_box(2, 1.0, 1 / 32)
    bump = GridFunction.from_radial(
        spec, lambda r: np.exp(-1.0 / np.maximum(1 - (r / 0.8) ** 2, 1e-300)) * (r < 0.8))
    rep = representation_check(bump, 1, count=16, seed=seed, tol=tol.representation_tol)
    out.append(Check("potentials.representation.bump", rep.passed,
                     f"worst_adams={_g(rep.worst_ratio_adams)} worst_natural={_g(rep.worst_ratio_natural)}"))
    return out


# ----------------------------------------------------------------- oneil


def oneil_suite(tol: Tolerances, seed: int) -> list[Check]:
    out = []
    theta = oneil_theta(1.5, 1.0, 2, 2.0)
    out.append(Check("oneil.theta", theta == 6.0, f"theta={_g(theta)}"))
    dom = Ball((0.0, 0.0), 1.0)
    for label, d in (("lebesgue", 2.0), ("hyperplane", 1.0)):
        h = 1 / 64
        nu = make_lebesgue(dom, h) if label == "lebesgue" else make_hyperplane(dom, h, plane=(None, h / 2))
        f = GridFunction.from_radial(symmetric_box(2, 1.0, h), lambda r: (r < 0.5).astype(float))
        rep = oneil_check(f, 1.0, 2, d, nu, 1.5, 0.1, 0.1, tol=tol.oneil_tol)
        out.append(Check(f"oneil.ball.{label}", rep.passed, f"lhs={_g(rep.lhs)} rhs={_g(rep.rhs)}"))
        zero = oneil_check(GridFunction.zeros(f.spec), 1.0, 2, d, nu, 1.5, 0.1, 0.1)
        out.append(Check(f"oneil.zero.{label}", zero.passed and zero.lhs == 0, "lhs=0"))
    return out


# ------------------------------------------------------------------- hbw


HBW_HS = (1 / 32, 1 / 64, 1 / 128)


def hbw_measure(label: str, h: float) -> RadonMeasure:
    dom = Ball((0.0, 0.0), 1.0)
    return make_lebesgue(dom, h) if label == "lebesgue" else make_hyperplane(dom, h, plane=(None, h / 2))


def hbw_ratios(label: str, tol: Tolerances, hs=HBW_HS):
    """Ratios for the ball indicator and the log-corrected family, with the pointwise outcome."""
    rows = []
    for h in hs:
        nu = hbw_measure(label, h)
        chi = GridFunction.from_radial(symmetric_box(2, 1.0, h), lambda r: (r < 0.5).astype(float))
        rc = hbw_trace_check(chi, nu, 1.0, 2.0, tol=tol.hbw_tol, symmetric=True)
        rl = hbw_trace_check(log_corrected_f(1.0, 2, h), nu, 1.0, 2.0, tol=tol.hbw_tol, symmetric=True)
        rows.append((h, rc, rl))
    return rows


def hbw_suite(tol: Tolerances, seed: int) -> list[Check]:
    out = []
    for label in ("lebesgue", "hyperplane"):
        rows = hbw_ratios(label, tol)
        chi = [r[1].ratio for r in rows]
        logc = [r[2].ratio for r in rows]
        var = max(max(chi) / min(chi), max(logc) / min(logc))
        rel = max(l / c for l, c in zip(logc, chi))
        ok = var < tol.hbw_variation and rel < tol.hbw_variation
        out.append(Check(f"hbw.ratio_variation.{label}", ok,
                         "chi=" + ";".join(_g(x) for x in chi) + " logc=" + ";".join(_g(x) for x in logc)))
        dom = all(r[1].passed and r[2].passed for r in rows)
        worst = max(max(r[1].pointwise_worst, r[2].pointwise_worst) for r in rows)
        out.append(Check(f"hbw.domination.{label}", dom, f"pointwise_worst={_g(worst)}"))
    nu = hbw_measure("lebesgue", 1 / 32)
    zero = hbw_trace_check(GridFunction.zeros(symmetric_box(2, 1.0, 1 / 32)), nu, 1.0, 2.0)
    out.append(Check("hbw.zero", zero.lhs == 0, "lhs=0"))
    spec = symmetric_box(2, 1.0, 1 / 32)
    bump = GridFunction.from_radial(
        spec, lambda r: np.exp(-1.0 / np.maximum(1 - (r / 0.8) ** 2, 1e-300)) * (r < 0.8))
    for op in ("grad", "adams"):
        rep = hbw_sobolev_check(bump, nu, 1, 2.0, op, tol=tol.representation_tol)
        ok = rep.passed and math.isfinite(rep.ratio)
        out.append(Check(f"hbw.sobolev.{op}", ok, f"ratio={_g(rep.ratio)}"))
    return out


SUITES = {
    "hardy": hardy_suite,
    "rearrange": rearrange_suite,
    "potentials": potentials_suite,
    "oneil": oneil_suite,
    "hbw": hbw_suite,
}


def run_suite(name: str, tol: Tolerances, seed: int) -> list[Check]:
    names = list(SUITES) if name == "all" else [name]
    checks = []
    for nm in names:
        checks.extend(SUITES[nm](tol, seed))
    return checks
