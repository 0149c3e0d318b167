import math
from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tracemt.constants import (
    INF,
    THEOREM_IDS,
    DomainError,
    Params,
    Parity,
    beta_sharp,
    ell_combinatorial,
    parse_q,
    pochhammer,
    riesz_gamma,
    riesz_gamma_tilde,
    sharp_constants,
    theorem_threshold,
    unit_ball_volume,
)
from tracemt.potentials import grad_k_at, log_abs


def test_unit_ball_volume_values():
    assert unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-15)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3, rel=1e-15)
    assert unit_ball_volume(4) == pytest.approx(math.pi**2 / 2, rel=1e-14)
    with pytest.raises(DomainError):
        unit_ball_volume(0)


def test_riesz_gamma_values():
    assert riesz_gamma(2, 4) == pytest.approx(4 * math.pi**2, rel=1e-14)
    assert riesz_gamma(1, 2) == pytest.approx(2 * math.pi, rel=1e-14)
    for n in range(2, 9):
        assert 0 < riesz_gamma(n / 2, n) < math.inf
    for bad in (0.0, 2.0, -1.0):
        with pytest.raises(DomainError):
            riesz_gamma(bad, 2)


def test_riesz_gamma_tilde_branches():
    assert riesz_gamma_tilde(0, 3) == pytest.approx(4 * math.pi, rel=1e-15)
    assert riesz_gamma_tilde(1, 2) == pytest.approx(2 * math.pi, rel=1e-14)
    for n in range(2, 7):
        assert riesz_gamma_tilde(1e-9, n) == pytest.approx(n * unit_ball_volume(n), rel=1e-6)
    with pytest.raises(DomainError):
        riesz_gamma_tilde(-0.1, 3)


def test_pochhammer():
    assert pochhammer(5, 0) == 1
    assert pochhammer(3, 2) == 6
    assert pochhammer(0.5, 2) == pytest.approx(-0.25)
    assert pochhammer(Fraction(1, 2), 2) == Fraction(-1, 4)
    with pytest.raises(DomainError):
        pochhammer(1, -1)


def _ell_reversed(k, n):
    """Same double sum, summed in the opposite order on both indices."""
    total = Fraction(0)
    for l in reversed(range(k // 2 + 1)):
        inner = Fraction(0)
        for t in reversed(range((k + 1) // 2, k - l + 1)):
            inner += Fraction(2) ** (2 * t - k + l) * Fraction((-1) ** t, 2 * t) * comb(t, k - t) * comb(k - t, l)
        total += factorial(k - 2 * l) * factorial(l) * pochhammer(Fraction(n - 3, 2) + l, l) * inner**2
    return factorial(k) * total


@pytest.mark.parametrize("n", range(2, 9))
def test_ell_small_orders_exact(n):
    assert ell_combinatorial(1, n) == 1
    if n > 2:
        assert ell_combinatorial(2, n) == n
    assert isinstance(ell_combinatorial(1, n), Fraction)


def test_ell_order_invariance_and_errors():
    for n in range(2, 9):
        for k in range(1, n):
            assert ell_combinatorial(k, n) == _ell_reversed(k, n)
            assert ell_combinatorial(k, n) > 0
    for k, n in ((0, 3), (3, 3), (4, 2)):
        with pytest.raises(DomainError):
            ell_combinatorial(k, n)


@pytest.mark.parametrize("n,k", [(3, 2), (5, 2), (4, 3), (5, 4)])
def test_ell_matches_fd_oracle(n, k):
    rng = np.random.default_rng(n * 10 + k)
    x = rng.standard_normal((6, n))
    x *= (rng.uniform(0.5, 2.0, 6) / np.linalg.norm(x, axis=1))[:, None]
    vals = grad_k_at(log_abs, x, k) * np.linalg.norm(x, axis=1) ** k
    assert np.allclose(vals, math.sqrt(ell_combinatorial(k, n)), rtol=1e-4)


def test_params_validation():
    with pytest.raises(DomainError):
        Params(n=1)
    with pytest.raises(DomainError):
        Params(n=3, k=3)
    with pytest.raises(DomainError):
        Params(n=2, alpha=2.0)
    with pytest.raises(DomainError):
        Params(n=2, q=1.0)
    with pytest.raises(DomainError):
        Params(n=2, d=2.5)
    p = Params(n=2, q="inf")
    assert p.q is INF and p.qprime == 1.0 and p.d == 2.0
    assert Params(n=2, q=3).qprime == pytest.approx(1.5)
    assert parse_q(math.inf) is INF


def test_beta_sharp_parity():
    p = Params(n=2, k=1, q=2, d=2)
    assert beta_sharp(p, Parity.ODD) == pytest.approx(2 * math.pi / math.sqrt(math.pi), rel=1e-14)
    p4 = Params(n=5, k=2, q=3, d=4)
    ratio = beta_sharp(p4, Parity.EVEN) / beta_sharp(p4, Parity.ODD)
    assert ratio == pytest.approx(riesz_gamma(2, 5) / riesz_gamma_tilde(1, 5), rel=1e-14)
    pinf = Params(n=4, k=2, q=INF, d=3)
    expect = 3 / 4 * riesz_gamma(2, 4) * unit_ball_volume(4) ** (-2 / 4)
    assert beta_sharp(pinf) == pytest.approx(expect, rel=1e-14)


def test_threshold_examples():
    t = theorem_threshold("T1_0", Params(n=2, k=1, q=2, d=2))
    assert t.linear == pytest.approx(2 * math.sqrt(math.pi), rel=1e-14)
    assert t.exponent == pytest.approx(4 * math.pi, rel=1e-14)
    t = theorem_threshold("Tinf1", Params(n=2, k=1, q=INF, d=1))
    assert t.linear == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert t.exponent == t.linear
    t1 = theorem_threshold("T1", Params(n=2, alpha=1.0, q=2, d=2))
    assert t1.exponent == pytest.approx(2 / 2 * riesz_gamma(1, 2) ** 2 / math.pi, rel=1e-14)


def test_threshold_mismatch_errors():
    with pytest.raises(DomainError):
        theorem_threshold("T1", Params(n=2, alpha=1.0, q=INF))
    with pytest.raises(DomainError):
        theorem_threshold("Tinf", Params(n=2, alpha=1.0, q=2))
    with pytest.raises(DomainError):
        theorem_threshold("T1_0", Params(n=2, q=2))
    with pytest.raises(DomainError):
        theorem_threshold("T9", Params(n=2))


def test_sharp_constants_table():
    sc = sharp_constants(Params(n=3, k=2, alpha=1.5, q=2, d=3))
    assert set(sc.thresholds) == set(THEOREM_IDS)
    assert sc.ell_k_n == 3
    assert all(v.linear > 0 and v.exponent > 0 for v in sc.thresholds.values())
    # k = 1, n = 2: the odd Adams operator is the gradient
    sc2 = sharp_constants(Params(n=2, k=1, q=2, d=2))
    assert sc2.thresholds["T1_0"].linear == pytest.approx(sc2.thresholds["T1_1"].linear, rel=1e-14)


params_st = st.builds(
    lambda n, kf, q, df: (n, max(1, min(n - 1, int(kf * (n - 1)) + 1)), q, df * n),
    st.integers(2, 6), st.floats(0, 0.999), st.floats(1.05, 20), st.floats(0.05, 1.0),
)


@given(params_st)
def test_threshold_bridge_identity(args):
    n, k, q, d = args
    p = Params(n=n, k=k, alpha=float(k), q=q, d=d)
    ell = float(ell_combinatorial(k, n))
    lhs = theorem_threshold("T1_0", p).linear * riesz_gamma(k, n) / (n * unit_ball_volume(n) * math.sqrt(ell))
    rhs = (d / n) ** (1 / p.qprime) * riesz_gamma(k, n) * unit_ball_volume(n) ** (k / n - 1)
    assert lhs == pytest.approx(rhs, rel=1e-12)
    assert lhs == pytest.approx(theorem_threshold("T1", p).linear, rel=1e-12)


@given(params_st, st.sampled_from(THEOREM_IDS))
def test_thresholds_increase_in_d(args, tid):
    n, k, q, d = args
    qq = INF if tid.startswith("Tinf") else q
    lo = Params(n=n, k=k, alpha=n / 2, q=qq, d=d * 0.9)
    hi = lo.with_(d=d)
    assert theorem_threshold(tid, hi).linear > theorem_threshold(tid, lo).linear
