import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tracemt.config import Tolerances
from tracemt.constants import INF, DomainError, Params
from tracemt.grid import Ball, GridFunction, symmetric_box
from tracemt.measures import RadonMeasure, make_lebesgue, radial_lebesgue
from tracemt.verify import (
    BlowupFit,
    Piecewise,
    adams_moser_check,
    classify,
    exp_integral,
    fit_blowup,
    hardy_classical_check,
    hardy_log_check,
    hbw_functional,
    hbw_sobolev_check,
    hbw_trace_check,
    log_exp_integral,
    moser_b,
    moser_b_display,
    oneil_moser_kernel,
    predicted_slope,
    random_piecewise,
    sharpness_sweep,
    sweep_csv,
    sweep_summary,
    weak_endpoint_divergence,
    window_ratio,
)
from tracemt.rearrangement import StepProfile

P2 = Params(n=2, k=1, alpha=1.0, q=2.0, d=2.0)


def atoms(count=12, seed=0):
    rng = np.random.default_rng(seed)
    return RadonMeasure(rng.normal(size=(count, 2)), rng.uniform(0.1, 1.0, count))


def test_exp_integral_closed_forms():
    nu = atoms()
    assert exp_integral(np.zeros(12), nu, 3.0, 2.0) == pytest.approx(nu.total_mass)
    assert exp_integral(np.full(12, 0.5), nu, 2.0, 2.0) == pytest.approx(nu.total_mass * math.e)
    assert exp_integral(np.full(12, 100.0), nu, 1.0, 2.0) == math.inf
    assert log_exp_integral(np.full(12, 100.0), nu, 1.0, 2.0) == pytest.approx(1e4 + math.log(nu.total_mass))
    with pytest.raises(DomainError):
        exp_integral(np.zeros(12), nu, -1.0, 2.0)


@given(st.integers(0, 10**6), st.floats(0, 3), st.floats(0, 3), st.floats(1, 3))
def test_exp_integral_monotone(seed, k1, k2, qp):
    nu = atoms(seed=seed)
    rng = np.random.default_rng(seed)
    u = rng.normal(size=12)
    v = u * rng.uniform(1, 2, 12)
    lo, hi = sorted((k1, k2))
    assert log_exp_integral(u, nu, lo, qp) <= log_exp_integral(u, nu, hi, qp) + 1e-12
    assert log_exp_integral(u, nu, lo, qp) <= log_exp_integral(v, nu, lo, qp) + 1e-12
    assert exp_integral(u, nu, lo, qp) >= nu.total_mass * (1 - 1e-12)


def test_fit_blowup_recovers_power_law():
    params = [1 / 8, 1 / 16, 1 / 32, 1 / 64]
    logs = [0.7 * math.log(1 / p) + 2.0 for p in params]
    fit = fit_blowup(params, logs, 0.7)
    assert fit.slope == pytest.approx(0.7) and fit.r2 == pytest.approx(1.0) and fit.valid
    assert fit.rel_err < 1e-9
    with pytest.raises(DomainError):
        fit_blowup(params[:3], logs[:3], 0.7)
    flat = fit_blowup(params, [1.0] * 4, 0.0)
    assert flat.slope == 0.0 and flat.valid


def test_predicted_slope_zero_at_threshold():
    assert predicted_slope(1.0, P2) == 0.0
    assert predicted_slope(1.2, P2) == pytest.approx(2 * (1.44 - 1))


def test_classify_rules():
    tol = Tolerances()
    up = BlowupFit(0.9, 0, 0.99, 0.88, 0.02, True)
    flat = BlowupFit(0.01, 0, 0.2, 0.0, 0.01, False)
    assert classify(up, 10.0, True, tol).startswith("BLOWUP")
    assert classify(flat, 1.2, True, tol) == "BOUNDED"
    assert classify(flat, 5.0, True, tol) == "INCONCLUSIVE"
    assert classify(up, 10.0, False, tol) == "INCONCLUSIVE"
    assert window_ratio([0.0, 1.0, 2.0, 3.0, math.log(2.0)]) == pytest.approx(math.exp(3.0) / 2)


def test_sweep_on_uncertified_atoms_claims_nothing():
    h = 1 / 64
    nu = make_lebesgue(Ball((0.0, 0.0), 1.0), h)
    plain = RadonMeasure(nu.points, nu.weights)
    res = sharpness_sweep("T1", [1 / 4, 1 / 6, 1 / 8, 1 / 12], plain, 1.0, P2, h=h)
    assert res.verdict == "INCONCLUSIVE" and res.notes
    text = sweep_csv(res)
    assert text.splitlines()[0] == "param,norm,expint,log_expint,beta_multiple,kappa"
    assert len(text.splitlines()) == 5
    assert any(line.startswith("verdict=") for line in sweep_summary(res))
    assert all(r.expint >= nu.total_mass for r in res.records)


def test_sweep_rejects_bad_input():
    nu = make_lebesgue(Ball((0.0, 0.0), 1.0), 1 / 32)
    with pytest.raises(DomainError):
        sharpness_sweep("T1", [1 / 4] * 4, nu, 0.0, P2)
    with pytest.raises(DomainError):
        sharpness_sweep("Tinf", [1 / 4] * 4, nu, 1.0, P2)


# ------------------------------------------------------------------ Hardy


def test_hardy_closed_forms():
    chi = Piecewise([0.0, 1.0], [1.0])
    r = hardy_classical_check(chi, 2.0, 2.0)
    assert r.passed and r.lhs == pytest.approx(2.0) and r.constant * r.rhs == pytest.approx(4.0)
    r = hardy_log_check(chi, 2.0, 1.0)
    assert r.passed and r.constant * r.rhs == pytest.approx(2.0) and r.lhs <= 2.0
    zero = Piecewise([0.0, 1.0], [0.0])
    assert hardy_classical_check(zero, 2.0, 2.0).lhs == 0.0
    assert hardy_log_check(zero, 2.0, 1.0).lhs == 0.0


def test_hardy_divergent_rhs_is_skipped():
    r = hardy_classical_check(Piecewise([0.0, 1.0], [1.0]), 1.5, 3.0)
    assert r.skipped


def test_hardy_preconditions():
    chi = Piecewise([0.0, 1.0], [1.0])
    with pytest.raises(DomainError):
        hardy_classical_check(chi, 1.0, 2.0)
    with pytest.raises(DomainError):
        hardy_log_check(chi, 2.0, 0.0)
    with pytest.raises(DomainError):
        Piecewise([0.0, 1.0], [-1.0])


@given(st.integers(0, 10**6), st.floats(1.1, 4.0), st.floats(1.05, 4.0), st.sampled_from([0.5, 1.0, 2.0]))
def test_hardy_random(seed, p, w, R):
    psi = random_piecewise(np.random.default_rng(seed))
    rc = hardy_classical_check(psi, p, w)
    assert rc.skipped or rc.passed
    assert hardy_log_check(psi, p, R).passed


# ------------------------------------------------------------------ Moser


def test_moser_diagonal_kernel():
    ker = oneil_moser_kernel(0.0, 1.0)
    rep = adams_moser_check(lambda s, t: 1.0 if s < t else 0.0, lambda s: 1.0 if s < 1 else 0.0, 2.0,
                            phi_support=1.0)
    assert rep.b == 0.0 and rep.passed and math.isfinite(rep.value)
    zero = adams_moser_check(ker, lambda s: 0.0, 2.0, phi_support=1.0, cap=math.inf)
    assert zero.value == pytest.approx(1.0, rel=1e-6)


def test_moser_b_for_oneil_kernel():
    # b^q' = theta / q' * H^q'
    b = moser_b(oneil_moser_kernel(1.0, 6.0), 2.0)
    assert b**2 == pytest.approx(moser_b_display(6.0, 2.0, 1.0), rel=1e-6)
    rep = adams_moser_check(oneil_moser_kernel(1.0, 6.0), lambda s: math.exp(-s / 2), 2.0)
    assert rep.passed and rep.calibrated


def test_moser_rejects_large_phi():
    with pytest.raises(DomainError):
        adams_moser_check(oneil_moser_kernel(1.0, 6.0), lambda s: 2.0 if s < 1 else 0.0, 2.0, phi_support=1.0)


# -------------------------------------------------------------------- HBW


def test_hbw_functional_exact():
    # p = 1 on [0, M): integral of (1 + log(M/t))^-2 dt/t = 1
    prof = StepProfile(np.array([0.0, 2.0]), np.array([1.0]))
    assert hbw_functional(prof, 2.0, 2.0) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        hbw_functional(prof, 0.0, 2.0)


def test_hbw_trace_zero_and_ball():
    h = 1 / 32
    nu = make_lebesgue(Ball((0.0, 0.0), 1.0), h)
    spec = symmetric_box(2, 1.0, h)
    assert hbw_trace_check(GridFunction.zeros(spec), nu, 1.0, 2.0).lhs == 0.0
    chi = GridFunction.from_radial(spec, lambda r: (r < 0.5).astype(float))
    rep = hbw_trace_check(chi, nu, 1.0, 2.0, symmetric=True)
    assert rep.passed and rep.lhs <= rep.I1 + rep.I2 and 0 < rep.ratio < math.inf


def test_hbw_sobolev():
    h = 1 / 32
    nu = make_lebesgue(Ball((0.0, 0.0), 1.0), h)
    spec = symmetric_box(2, 1.0, h)
    bump = GridFunction.from_radial(
        spec, lambda r: np.exp(-1.0 / np.maximum(1 - (r / 0.8) ** 2, 1e-300)) * (r < 0.8))
    for op in ("grad", "adams"):
        rep = hbw_sobolev_check(bump, nu, 1, 2.0, operator=op)
        assert rep.passed and 0 < rep.ratio < math.inf
    assert hbw_sobolev_check(GridFunction.zeros(spec), nu, 1, 2.0).lhs == 0.0
    with pytest.raises(DomainError):
        hbw_sobolev_check(bump, nu, 1, 2.0, operator="laplace")


# --------------------------------------------------------- weak endpoints


def _shells(h):
    return radial_lebesgue(2, 1.0, r_min=h**6)


def test_tinf1_diverges_above_endpoint():
    p = Params(n=2, k=1, q=INF, d=2.0)
    rep = weak_endpoint_divergence("Tinf1", _shells, p, multiple=1.2)
    assert rep.verdict == "DIVERGENT" and rep.growth >= 10


def test_tinf1_endpoint_is_only_reported():
    p = Params(n=2, k=1, q=INF, d=2.0)
    rep = weak_endpoint_divergence("Tinf1", _shells, p, multiple=1.0)
    assert rep.verdict == "REPORTED" and len(rep.log_expints) == 3


def test_weak_endpoint_rejects_other_theorems():
    with pytest.raises(DomainError):
        weak_endpoint_divergence("T1", _shells, P2)
