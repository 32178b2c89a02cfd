import math

import numpy as np
import pytest

import plasmonqd as pq


def test_lossless_flux():
    s = pq.solve_two_dot(kd=math.pi / 4, delta=-0.3)
    assert abs(s.T + s.R - 1) < 1e-12
    assert s.Loss == pytest.approx(0, abs=1e-12)


def test_reflection_zero_at_pi_over_4():
    s = pq.solve_two_dot(kd=math.pi / 4, delta=-0.5)
    assert s.R < 1e-20


def test_single_dot_peak():
    s = pq.solve_single_dot(gamma_prime=0.05, delta=0.0)
    assert s.R == pytest.approx(1 / 1.05**2, rel=1e-12)


def test_sweep_matches_pointwise():
    sp = pq.sweep_detuning(kd=1.0, gamma0=0.025, gamma_nr=0.025, points=61)
    assert sp["delta"].shape == (61,)
    i = 17
    s = pq.solve_two_dot(kd=1.0, delta=sp["delta"][i], gamma0=0.025, gamma_nr=0.025)
    assert sp["R"][i] == s.R
    assert np.all(np.abs(sp["T"] + sp["R"] + sp["Loss"] - 1) < 1e-12)


def test_dark_point_raises():
    with pytest.raises(pq.SingularSystem):
        pq.solve_two_dot(kd=2 * math.pi, delta=0.0)
    assert issubclass(pq.SingularSystem, pq.NumericalError)
    assert issubclass(pq.InvalidParams, pq.ConfigError)
    with pytest.raises(pq.InvalidParams):
        pq.solve_two_dot(kd=1.0, delta=0.0, gamma0=-1.0)


def test_minimum_and_peak():
    m = pq.reflection_minimum(kd=math.pi / 4)
    assert m.R_min < 1e-12
    assert m.tan2_residual < 1e-6
    p = pq.reflection_peak(kd=math.pi, gamma0=0.025, gamma_nr=0.025)
    assert abs(p.delta_peak) < 1e-6


def test_concurrence_map_verticals():
    ds = np.linspace(-3, 3, 25)
    C, warnings = pq.concurrence_map([math.pi, 0.5], ds)
    assert np.all(np.abs(C[0] - 1) < 1e-10)
    assert np.all((C[1] >= 0) & (C[1] <= 1))


def test_phase_at_zero_detuning():
    ph = pq.phase_scan([0.0], [0.0, 0.05])
    assert ph["theta"][0] == pytest.approx(math.pi)
    assert abs(ph["theta"][1]) < 1e-9


def test_collective_rates():
    r = pq.gamma_pm(1.3, 0.025)
    assert r.plus + r.minus == pytest.approx(0.05, rel=1e-14)


def test_lossless_storage():
    out = pq.run_matched_storage(P=math.inf)
    assert out["efficiency"] >= 0.999
    assert out["identity_residual"] < 1e-4
