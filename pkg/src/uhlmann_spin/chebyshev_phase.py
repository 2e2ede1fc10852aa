"""Closed-form phase engine: the complex variable z, Chebyshev U_n, and the
eigenvalue-ladder trace.

The whole loop collapses to one complex number z(theta, beta_b); the trace
behind the phase is (-1)^(2j) U_{2j}(z) with U_n the second-kind Chebyshev
polynomial evaluated at complex argument.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .spin_algebra import SpinNumber, pauli_sign
from .thermal_state import LoopConfig
from .uhlmann_core import PhaseResult, phase_result

# within this distance of z = +-1 the two ladder eigenvalues coincide
DEGENERATE_Z_EPS = 1e-8


class DegenerateEigenvalueError(ValueError):
    """z sits within DEGENERATE_Z_EPS of +-1, where the eigenvalue ladder
    degenerates (lambda = 1/lambda) and the ratio form is 0/0.

    The limit values are U_n(+1) = n + 1 and U_n(-1) = (-1)^n (n + 1); use the
    recurrence (`chebyshev_u`), which is regular there, when they are needed.
    """


@dataclass(frozen=True)
class ZPoint:
    """The loop's complex variable and the auxiliary factor C it came with.

    c_factor lies in (0, 1], reaching 1 exactly when sin(theta) = 0.
    """

    value: complex
    c_factor: float


@dataclass(frozen=True)
class TraceValue:
    value: complex


def _sin_pi(c: float) -> float:
    # sin(pi c) with reflection so c near 1 keeps full relative precision
    if c > 0.5:
        return math.sin(math.pi * (1.0 - c))
    return math.sin(math.pi * c)


def _cos_pi(c: float) -> float:
    if c > 0.5:
        return -math.cos(math.pi * (1.0 - c))
    return math.cos(math.pi * c)


def z_variable(cfg: LoopConfig) -> ZPoint:
    """z = cosh(x) cos(pi C) - i sinh(x) sin(pi C) cos(theta) / C, x = beta_b/2,
    with C(theta) = sqrt(1 - sin^2(theta) tanh^2(x)).

    Two guards keep the geometry exact where tests pin it down: cos(theta) is
    evaluated as sin(pi/2 - theta), which lands the equator theta = pi/2
    exactly on the real axis; and C switches to the equivalent form
    hypot(sech(x), tanh(x) cos(theta)) when the textbook subtraction would
    cancel (it keeps C > 0 exactly even at the equator for large beta_b).
    """
    x = cfg.beta_b / 2
    sin_t = math.sin(cfg.theta)
    cos_t = math.sin(math.pi / 2 - cfg.theta)
    tanh_x = math.tanh(x)
    w = (sin_t * tanh_x) ** 2
    if w <= 0.5:
        c = math.sqrt(1.0 - w)
    else:
        c = math.hypot(1.0 / math.cosh(x), tanh_x * cos_t)
    re = math.cosh(x) * _cos_pi(c)
    im = -math.sinh(x) * _sin_pi(c) * cos_t / c
    return ZPoint(value=complex(re, im), c_factor=c)


def chebyshev_u(n: int, z: complex) -> complex:
    """Second-kind Chebyshev polynomial U_n at complex argument, by the
    forward recurrence U_{k+1} = 2 z U_k - U_{k-1}."""
    if n < 0:
        raise ValueError("n must be ≥ 0")
    z = complex(z)
    u_prev = 1.0 + 0.0j
    if n == 0:
        return u_prev
    u = 2 * z
    for _ in range(n - 1):
        u_prev, u = u, 2 * z * u - u_prev
    return u


def trace_via_lambda(j: SpinNumber, z: complex) -> TraceValue:
    """U_{2j}(z) evaluated through the eigenvalue ladder,
    (lambda^(2j+1) - lambda^-(2j+1)) / (lambda - 1/lambda) with
    lambda = z + sqrt(z^2 - 1).

    Serves as the independent check on `chebyshev_u`.  Both square-root
    branches are evaluated and must agree to 1e-10 relative; near z = +-1 the
    ratio is 0/0 and a DegenerateEigenvalueError is raised instead.
    """
    z = complex(z)
    if abs(z - 1.0) <= DEGENERATE_Z_EPS or abs(z + 1.0) <= DEGENERATE_Z_EPS:
        raise DegenerateEigenvalueError(
            f"z = {z} is within {DEGENERATE_Z_EPS} of ±1; the eigenvalue ladder is degenerate"
        )
    root = cmath.sqrt(z * z - 1.0)
    n = j.two_j + 1
    branches = []
    for lam in (z + root, z - root):
        branches.append((lam**n - lam**-n) / (lam - 1.0 / lam))
    scale = max(1.0, abs(branches[0]))
    if abs(branches[0] - branches[1]) > 1e-10 * scale:
        raise AssertionError(
            f"square-root branches disagree at z = {z}: {branches[0]} vs {branches[1]}"
        )
    return TraceValue(value=branches[0])


def uhlmann_phase_closed(j: SpinNumber, cfg: LoopConfig) -> PhaseResult:
    """Phase of (-1)^(2j) U_{2j}(z(theta, beta_b)).

    The trace magnitude reported here is |U_{2j}(z)|, i.e. the trace up to the
    positive normalization absorbed by the probabilities; the phase and the
    singular flag are what downstream consumers read.
    """
    zp = z_variable(cfg)
    trace = pauli_sign(j) * chebyshev_u(j.two_j, zp.value)
    return phase_result(trace)
