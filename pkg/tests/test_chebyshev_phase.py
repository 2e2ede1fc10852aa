import math

import numpy as np
import pytest

from uhlmann_spin.chebyshev_phase import (
    DEGENERATE_Z_EPS,
    DegenerateEigenvalueError,
    chebyshev_u,
    trace_via_lambda,
    uhlmann_phase_closed,
    z_variable,
)
from uhlmann_spin.spin_algebra import SpinNumber
from uhlmann_spin.thermal_state import LoopConfig


def test_z_at_poles_is_minus_cosh():
    for bb in (0.5, 3.0, 12.0):
        for theta in (0.0, math.pi):
            zp = z_variable(LoopConfig(beta_b=bb, theta=theta))
            assert zp.value.real == -math.cosh(bb / 2)
            assert zp.value.imag == 0.0
            assert zp.c_factor == 1.0


def test_z_closure_is_exact():
    for bb in (0.7, 5.0, 20.0):
        a = z_variable(LoopConfig(beta_b=bb, theta=0.0)).value
        b = z_variable(LoopConfig(beta_b=bb, theta=math.pi)).value
        assert a == b


def test_z_real_on_equator():
    for bb in (0.1, 2.0, 8.0, 30.0):
        zp = z_variable(LoopConfig(beta_b=bb, theta=math.pi / 2))
        assert zp.value.imag == 0.0
        assert 0.0 < zp.c_factor <= 1.0


def test_c_factor_in_range_generically():
    rng = np.random.default_rng(11)
    for _ in range(50):
        cfg = LoopConfig(
            beta_b=float(rng.uniform(0.05, 25.0)), theta=float(rng.uniform(0.0, math.pi))
        )
        zp = z_variable(cfg)
        assert 0.0 < zp.c_factor <= 1.0
        assert math.isfinite(zp.value.real) and math.isfinite(zp.value.imag)


def test_chebyshev_recurrence_seeds_and_known_values():
    assert chebyshev_u(0, 0.3 + 0.1j) == 1.0 + 0.0j
    z = 0.37 - 0.21j
    assert chebyshev_u(1, z) == 2 * z
    for n in (1, 2, 3, 7):
        assert abs(chebyshev_u(n, 1.0) - (n + 1)) < 1e-12
    for k in (1, 2, 3):
        assert abs(chebyshev_u(3, math.cos(k * math.pi / 4))) < 1e-14
    with pytest.raises(ValueError):
        chebyshev_u(-1, 0.0)


def test_lambda_route_known_values():
    assert abs(trace_via_lambda(SpinNumber(1), 0.0).value) < 1e-15
    assert abs(trace_via_lambda(SpinNumber(2), 2.0).value - 15.0) < 1e-12


def test_lambda_route_matches_recurrence_at_random_points():
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 100:
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if abs(z) > 3.0:
            continue
        if abs(z - 1.0) <= 10 * DEGENERATE_Z_EPS or abs(z + 1.0) <= 10 * DEGENERATE_Z_EPS:
            continue
        two_j = int(rng.integers(1, 7))
        ladder = trace_via_lambda(SpinNumber(two_j), z).value
        direct = chebyshev_u(two_j, z)
        assert abs(ladder - direct) <= 1e-10 * max(1.0, abs(direct))
        checked += 1


def test_degenerate_z_raises():
    for z in (1.0, -1.0, 1.0 + 0.5 * DEGENERATE_Z_EPS, complex(-1.0, 0.5 * DEGENERATE_Z_EPS)):
        with pytest.raises(DegenerateEigenvalueError):
            trace_via_lambda(SpinNumber(2), z)


def test_half_spin_equator_phase_saturates_to_pi():
    r = uhlmann_phase_closed(SpinNumber(1), LoopConfig(beta_b=10.0, theta=math.pi / 2))
    assert r.phase == math.pi
    assert not r.singular


def test_equator_trace_is_exactly_real():
    for two_j in range(1, 7):
        for bb in (0.5, 2.0, 8.0):
            zp = z_variable(LoopConfig(beta_b=bb, theta=math.pi / 2))
            trace = chebyshev_u(two_j, zp.value)
            assert abs(trace.imag) < 1e-12


def test_high_temperature_phase_vanishes():
    for two_j in range(1, 7):
        for theta in np.linspace(0.0, math.pi, 19):
            r = uhlmann_phase_closed(SpinNumber(two_j), LoopConfig(beta_b=0.01, theta=float(theta)))
            assert abs(r.phase) < 1e-3


def test_low_temperature_phase_approaches_solid_angle_value():
    for two_j in range(1, 7):
        for theta in np.linspace(0.0, math.pi, 19):
            r = uhlmann_phase_closed(SpinNumber(two_j), LoopConfig(beta_b=30.0, theta=float(theta)))
            target = two_j * math.pi * (1.0 - math.cos(float(theta)))
            assert abs(math.remainder(r.phase - target, 2 * math.pi)) < 2e-3


def test_equator_phase_alternates_between_spins():
    # at beta_b = 2.3 the half-spin trace is still positive while j = 3/2
    # has already crossed its first root
    half = uhlmann_phase_closed(SpinNumber(1), LoopConfig(beta_b=2.3, theta=math.pi / 2))
    three_half = uhlmann_phase_closed(SpinNumber(3), LoopConfig(beta_b=2.3, theta=math.pi / 2))
    assert half.phase == 0.0 and not half.singular
    assert three_half.phase == math.pi and not three_half.singular
