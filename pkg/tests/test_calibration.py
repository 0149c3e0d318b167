import json
import math

import numpy as np
import pytest

from tracemt import calibration
from tracemt.constants import DomainError
from tracemt.grid import Ball, GridFunction, symmetric_box
from tracemt.measures import make_lebesgue


def test_frozen_file_is_complete():
    data = json.loads(calibration.CALIBRATION_FILE.read_text())
    assert data["margin"] == calibration.MARGIN
    assert set(data) == {"margin", "oneil", "alberico", "weak_endpoint", "u_eps", "moser"}
    assert calibration.oneil_constant(2, 1.0, 2.0, 1.5) > 0
    assert calibration.oneil_constant(2, 1.0, 1.0, 1.5) > 0
    assert calibration.alberico_constant(3, 2) > 0


def test_missing_entries_raise():
    with pytest.raises(DomainError):
        calibration.oneil_constant(5, 1.0, 5.0, 1.5)
    with pytest.raises(DomainError):
        calibration.u_eps_constant("derivative_sup", 7, 1)


def test_moser_cap_lookup():
    cap, ok = calibration.moser_cap(2.0, 0.0)
    assert ok and cap > 1
    cap_b, ok_b = calibration.moser_cap(2.0, 1.0)
    assert ok_b and cap_b > cap
    assert calibration.moser_cap(2.0, 100.0) == (math.inf, False)
    assert calibration.moser_cap(3.0, 0.0) == (math.inf, False)


def test_oneil_constant_covers_heldout_at_coarse_grid():
    n, alpha, h = 2, 1.0, 1 / 32
    dom = Ball((0.0, 0.0), 1.0)
    nu = make_lebesgue(dom, h)
    C = calibration.oneil_constant(n, alpha, 2.0, 1.5)
    for _, fn in calibration.oneil_heldout(n, alpha)[:2]:
        f = GridFunction.from_function(symmetric_box(n, 1.0, h), fn, domain=dom)
        assert calibration.oneil_ratio(f, alpha, nu, 2.0, 1.5) <= C


def test_weak_endpoint_gap_is_reproducible():
    gap = calibration.weak_endpoint_gap(1.0, 2, 1 / 64)
    assert gap <= calibration.weak_endpoint_constant(2, 1.0)
    assert np.isfinite(gap)


def test_u_eps_sup_scale_invariant():
    vals = [calibration.u_eps_derivative_sup(e, 2, 1) for e in (0.1, 0.02)]
    assert vals[0] == pytest.approx(vals[1], rel=1e-6)
