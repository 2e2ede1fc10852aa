"""Critical temperatures and the winding number of the trace curve.

As beta_b grows at fixed spin, the closed curve traced by the complex trace
over theta in [0, pi] sweeps across the roots of U_{2j} one by one; each
crossing is a critical temperature, and the integer winding of the curve
around the origin counts the roots already enclosed.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import numpy as np

from .chebyshev_phase import chebyshev_u, z_variable
from .spin_algebra import SpinNumber, pauli_sign
from .thermal_state import LoopConfig
from .uhlmann_core import SINGULAR_TRACE_EPS

# windings are undefined this close to a critical beta_b
CRITICAL_EXCLUSION = 1e-6


class MissingRootError(RuntimeError):
    """A critical temperature expected inside the scan range was not found."""


class UnresolvedWindingError(RuntimeError):
    """The winding accumulation could not be resolved to an integer."""


class SingularInputError(ValueError):
    """The requested point sits on (or too near) a phase singularity."""


@dataclass(frozen=True)
class CriticalPoint:
    """One critical temperature: equator_crossing(beta_b) = target for index k."""

    k: int
    beta_b: float
    target: float
    residual: float


@dataclass(frozen=True)
class CriticalTable:
    """All critical points of one spin, sorted by ascending beta_b."""

    spin: SpinNumber
    points: tuple
    warnings: tuple

    @property
    def beta_values(self) -> tuple:
        return tuple(p.beta_b for p in self.points)


@dataclass(frozen=True)
class WindingResult:
    """Integer winding plus the raw accumulated turn count it was rounded from."""

    n_u: int
    raw_integral: float
    max_step_jump: float


def chebyshev_roots(j: SpinNumber) -> np.ndarray:
    """Roots of U_{2j}: cos(k pi / (2j + 1)) for k = 1 ... 2j (descending)."""
    k = np.arange(1, j.two_j + 1)
    r = np.cos(k * math.pi / (j.two_j + 1))
    r.flags.writeable = False
    return r


def equator_crossing(beta_b: float) -> float:
    """The (purely real) value of z at theta = pi/2:
    cosh(beta_b/2) cos(pi sech(beta_b/2)).

    Critical temperatures solve equator_crossing(beta_b) = root, one equation
    per root of U_{2j}.
    """
    return z_variable(LoopConfig(beta_b=beta_b, theta=math.pi / 2)).value.real


def critical_temperatures(
    j: SpinNumber,
    scan_range: tuple = (0.01, 20.0),
    scan_steps: int = 4000,
    tol: float = 1e-12,
) -> CriticalTable:
    """Locate every critical beta_b in scan_range by bracketing plus bisection.

    One equation per k = 1 ... 2j; a k whose equation has no sign change in
    the scanned range raises MissingRootError naming that k.  If a k yields
    more than one root, all of them are kept and a warning is recorded.
    Points come back sorted by ascending beta_b.
    """
    lo, hi = scan_range
    if not (math.isfinite(lo) and math.isfinite(hi) and 0 < lo < hi):
        raise ValueError("scan_range must satisfy 0 < lo < hi")
    if scan_steps < 2:
        raise ValueError("scan_steps must be ≥ 2")
    if not tol > 0:
        raise ValueError("tol must be > 0")
    grid = np.linspace(lo, hi, scan_steps)
    values = np.array([equator_crossing(b) for b in grid])
    points = []
    warnings = []
    for k in range(1, j.two_j + 1):
        target = math.cos(k * math.pi / (j.two_j + 1))
        f = values - target
        roots = []
        for i in range(len(grid) - 1):
            if f[i] == 0.0:
                roots.append(grid[i])
            elif (f[i] < 0.0) != (f[i + 1] < 0.0):
                roots.append(_bisect(target, grid[i], grid[i + 1], f[i], tol))
        if f[-1] == 0.0:
            roots.append(grid[-1])
        if not roots:
            raise MissingRootError(
                f"no critical temperature for k = {k} inside scan range "
                f"({lo}, {hi}]; widen the range"
            )
        if len(roots) > 1:
            warnings.append(f"k = {k}: {len(roots)} roots found; keeping all")
        for r in roots:
            r = float(r)
            residual = abs(equator_crossing(r) - target)
            if residual > 1e-10:
                warnings.append(f"k = {k}: residual {residual:.3e} above 1e-10")
            points.append(CriticalPoint(k=k, beta_b=r, target=target, residual=residual))
    points.sort(key=lambda p: p.beta_b)
    return CriticalTable(spin=j, points=tuple(points), warnings=tuple(warnings))


def _bisect(target: float, a: float, b: float, fa: float, tol: float) -> float:
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = equator_crossing(mid) - target
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (fa < 0.0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


@functools.lru_cache(maxsize=None)
def _critical_betas(j: SpinNumber) -> tuple:
    return critical_temperatures(j).beta_values


def _require_noncritical(j: SpinNumber, beta_b: float) -> None:
    if not (math.isfinite(beta_b) and beta_b > 0):
        raise ValueError("beta_b must be finite and > 0")
    for b in _critical_betas(j):
        if abs(beta_b - b) < CRITICAL_EXCLUSION:
            raise SingularInputError(
                f"beta_b = {beta_b} lies within {CRITICAL_EXCLUSION} of the "
                f"critical value {b}; the winding is undefined there"
            )


def _arc(curve, t0: float, t1: float, w0: complex, w1: complex, depth: int):
    # accumulated argument over [t0, t1], refining until each step is < pi/2
    if abs(w0) < SINGULAR_TRACE_EPS or abs(w1) < SINGULAR_TRACE_EPS:
        raise SingularInputError(
            "curve magnitude fell below the singular threshold during the sweep"
        )
    step = cmath.phase(w1 / w0)
    if abs(step) < math.pi / 2:
        return step, abs(step)
    if depth <= 0:
        raise UnresolvedWindingError(
            f"phase step {step:.3f} rad stayed ≥ pi/2 after exhausting refinement"
        )
    tm = 0.5 * (t0 + t1)
    wm = curve(tm)
    d_left, m_left = _arc(curve, t0, tm, w0, wm, depth - 1)
    d_right, m_right = _arc(curve, tm, t1, wm, w1, depth - 1)
    return d_left + d_right, max(m_left, m_right)


def _accumulate_turns(curve, grid_points: int, max_refine: int):
    # total argument change of curve(theta) over one closed theta sweep
    thetas = np.linspace(0.0, math.pi, grid_points + 1)
    values = [curve(t) for t in thetas]
    total = 0.0
    max_step = 0.0
    for i in range(grid_points):
        d, m = _arc(curve, thetas[i], thetas[i + 1], values[i], values[i + 1], max_refine)
        total += d
        max_step = max(max_step, m)
    return total, max_step


def winding_number(
    j: SpinNumber, beta_b: float, initial_grid: int = 256, max_refine: int = 30
) -> WindingResult:
    """Winding of the complex trace around the origin over theta in [0, pi].

    The curve closes on itself (both endpoints give the same real value), so
    the accumulated argument is an integer number of turns.  Steps ≥ pi/2 on
    the initial grid are bisected recursively up to max_refine levels; a
    residue above 0.01 turns raises UnresolvedWindingError, and inputs within
    CRITICAL_EXCLUSION of a critical beta_b raise SingularInputError.
    """
    if initial_grid < 2:
        raise ValueError("initial_grid must be ≥ 2")
    if max_refine < 0:
        raise ValueError("max_refine must be ≥ 0")
    _require_noncritical(j, beta_b)
    sign = pauli_sign(j)

    def curve(theta: float) -> complex:
        zp = z_variable(LoopConfig(beta_b=beta_b, theta=theta))
        return sign * chebyshev_u(j.two_j, zp.value)

    total, max_step = _accumulate_turns(curve, initial_grid, max_refine)
    raw = total / (2 * math.pi)
    n = round(raw)
    if abs(raw - n) > 0.01:
        raise UnresolvedWindingError(
            f"accumulated winding {raw} is not within 0.01 of an integer"
        )
    if n < 0:
        raise AssertionError(
            f"winding came out negative ({n}); the theta sweep orientation is fixed"
        )
    return WindingResult(n_u=n, raw_integral=raw, max_step_jump=max_step)


def roots_enclosed(
    j: SpinNumber, beta_b: float, grid: int = 256, max_refine: int = 30
) -> int:
    """How many roots of U_{2j} the z-curve encloses, counted root by root.

    Independent cross-check on `winding_number`: the winding of the trace
    around the origin must equal the sum over roots of the z-curve's winding
    around each root.
    """
    _require_noncritical(j, beta_b)
    enclosed = 0
    for r in chebyshev_roots(j):

        def curve(theta: float, _r=float(r)) -> complex:
            return z_variable(LoopConfig(beta_b=beta_b, theta=theta)).value - _r

        total, _ = _accumulate_turns(curve, grid, max_refine)
        turns = total / (2 * math.pi)
        n = round(turns)
        if abs(turns - n) > 0.01:
            raise UnresolvedWindingError(
                f"winding around root {r} came out {turns}, not near an integer"
            )
        enclosed += n
    return enclosed


def staircase(j: SpinNumber, beta_b_values) -> tuple:
    """winding_number mapped over a sequence of beta_b values."""
    return tuple(winding_number(j, float(b)) for b in beta_b_values)
