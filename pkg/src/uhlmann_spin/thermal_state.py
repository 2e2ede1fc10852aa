"""Gibbs state and occupation probabilities for a spin in a field along n-hat."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spin_algebra import SpinNumber, rotated_eigenbasis


@dataclass(frozen=True)
class LoopConfig:
    """Parameters of one thermal loop: the product beta*B and the cone angle theta.

    Only the dimensionless product beta_b enters any observable, so beta and B
    are never stored separately.
    """

    beta_b: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.beta_b) and self.beta_b > 0):
            raise ValueError("beta_b must be finite and > 0")
        if not (math.isfinite(self.theta) and 0.0 <= self.theta <= math.pi):
            raise ValueError("theta must lie in [0, pi]")


@dataclass(frozen=True, eq=False)
class ThermalSpectrum:
    """Occupation probabilities p_m, indexed by descending m = j ... -j."""

    probabilities: np.ndarray


def occupation_probabilities(j: SpinNumber, beta_b: float) -> ThermalSpectrum:
    """Boltzmann weights p_m = e^(-beta_b * m) / Z, ordered by descending m.

    The exponents are max-shifted before exponentiation so beta_b * j far past
    the overflow threshold still normalizes exactly.
    """
    if not (math.isfinite(beta_b) and beta_b > 0):
        raise ValueError("beta_b must be finite and > 0")
    exponents = -beta_b * j.m_values
    weights = np.exp(exponents - exponents.max())
    p = weights / weights.sum()
    p.flags.writeable = False
    return ThermalSpectrum(probabilities=p)


def gibbs_state(j: SpinNumber, cfg: LoopConfig, phi: float) -> np.ndarray:
    """Density matrix rho = U diag(p_m) U^dagger for the field direction (theta, phi)."""
    p = occupation_probabilities(j, cfg.beta_b).probabilities
    u = rotated_eigenbasis(j, cfg.theta, phi)
    return (u * p[None, :]) @ u.conj().T
