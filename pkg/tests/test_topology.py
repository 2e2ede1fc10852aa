import math

import numpy as np
import pytest

from uhlmann_spin.chebyshev_phase import uhlmann_phase_closed
from uhlmann_spin.spin_algebra import SpinNumber
from uhlmann_spin.thermal_state import LoopConfig
from uhlmann_spin.topology import (
    CRITICAL_EXCLUSION,
    MissingRootError,
    SingularInputError,
    UnresolvedWindingError,
    chebyshev_roots,
    critical_temperatures,
    equator_crossing,
    roots_enclosed,
    staircase,
    winding_number,
)


def test_chebyshev_roots_match_cos_grid():
    roots = chebyshev_roots(SpinNumber(3))
    expected = [math.cos(k * math.pi / 4) for k in (1, 2, 3)]
    assert np.allclose(roots, expected, rtol=0.0, atol=1e-15)


def test_half_spin_critical_temperature_closed_form():
    table = critical_temperatures(SpinNumber(1))
    assert len(table.points) == 1
    exact = 2.0 * math.log(2.0 + math.sqrt(3.0))
    assert abs(table.points[0].beta_b - exact) < 1e-9
    assert table.points[0].residual < 1e-10
    assert table.warnings == ()


def test_critical_tables_are_complete_and_consistent():
    for two_j in range(1, 7):
        spin = SpinNumber(two_j)
        table = critical_temperatures(spin)
        betas = table.beta_values
        assert len(betas) == two_j
        assert all(b0 < b1 for b0, b1 in zip(betas, betas[1:]))
        roots = set()
        for point in table.points:
            # the equator trace must cross its target root at the reported
            # coupling
            assert abs(equator_crossing(point.beta_b) - point.target) <= 1e-10
            roots.add(point.k)
        assert roots == set(range(1, two_j + 1))


def test_phase_flips_across_each_critical():
    for two_j in (1, 3, 6):
        spin = SpinNumber(two_j)
        for b in critical_temperatures(spin).beta_values:
            lo = uhlmann_phase_closed(spin, LoopConfig(beta_b=b - 1e-3, theta=math.pi / 2))
            hi = uhlmann_phase_closed(spin, LoopConfig(beta_b=b + 1e-3, theta=math.pi / 2))
            assert not lo.singular and not hi.singular
            assert {abs(lo.phase), abs(hi.phase)} == {0.0, math.pi}


def test_missing_root_reports_the_target():
    with pytest.raises(MissingRootError, match="k = 1"):
        critical_temperatures(SpinNumber(2), scan_range=(0.01, 2.0))


def test_winding_examples():
    assert winding_number(SpinNumber(1), 1.0).n_u == 0
    assert winding_number(SpinNumber(1), 5.0).n_u == 1


def test_winding_is_constant_between_criticals():
    for two_j in (2, 5, 6):
        spin = SpinNumber(two_j)
        betas = critical_temperatures(spin).beta_values
        edges = (0.05,) + betas + (betas[-1] + 1.0,)
        for level, (lo, hi) in enumerate(zip(edges, edges[1:])):
            for frac in (0.25, 0.5, 0.75):
                b = lo + frac * (hi - lo)
                result = winding_number(spin, b)
                assert result.n_u == level
                assert abs(result.raw_integral - level) < 0.01


def test_winding_equals_enclosed_root_count():
    cases = [(1, 1.0), (1, 5.0), (2, 2.2), (4, 3.2), (6, 2.9), (6, 12.0)]
    for two_j, b in cases:
        spin = SpinNumber(two_j)
        assert winding_number(spin, b).n_u == roots_enclosed(spin, b)


def test_staircase_hits_every_level():
    spin = SpinNumber(4)
    betas = critical_temperatures(spin).beta_values
    edges = (0.3,) + betas + (betas[-1] + 1.0,)
    probes = [0.5 * (lo + hi) for lo, hi in zip(edges, edges[1:])]
    assert tuple(w.n_u for w in staircase(spin, probes)) == tuple(range(5))


def test_winding_steps_by_one_at_each_critical():
    spin = SpinNumber(5)
    for b in critical_temperatures(spin).beta_values:
        below = winding_number(spin, b - 0.01).n_u
        above = winding_number(spin, b + 0.01).n_u
        assert above - below == 1


def test_singular_input_is_rejected():
    spin = SpinNumber(2)
    crit = critical_temperatures(spin).beta_values[0]
    with pytest.raises(SingularInputError):
        winding_number(spin, crit)
    with pytest.raises(SingularInputError):
        winding_number(spin, crit + 0.5 * CRITICAL_EXCLUSION)
    with pytest.raises(SingularInputError):
        roots_enclosed(spin, crit)


def test_unresolved_winding_raises_instead_of_guessing():
    # two samples over the half loop land antipodally, so the turn cannot be
    # resolved without refinement
    with pytest.raises(UnresolvedWindingError):
        winding_number(SpinNumber(1), 5.0, initial_grid=2, max_refine=0)
    result = winding_number(SpinNumber(1), 5.0, initial_grid=2)
    assert result.n_u == 1
    assert result.max_step_jump < math.pi / 2


def test_input_validation():
    with pytest.raises(ValueError):
        winding_number(SpinNumber(1), -1.0)
    with pytest.raises(ValueError):
        winding_number(SpinNumber(1), 1.0, initial_grid=1)
    with pytest.raises(ValueError):
        winding_number(SpinNumber(1), 1.0, max_refine=-1)


def test_equator_phase_parity_follows_winding():
    spin = SpinNumber(5)
    betas = critical_temperatures(spin).beta_values
    edges = (0.3,) + betas + (betas[-1] + 1.0,)
    for lo, hi in zip(edges, edges[1:]):
        b = 0.5 * (lo + hi)
        n_u = winding_number(spin, b).n_u
        r = uhlmann_phase_closed(spin, LoopConfig(beta_b=b, theta=math.pi / 2))
        assert r.phase == (math.pi if n_u % 2 else 0.0)
