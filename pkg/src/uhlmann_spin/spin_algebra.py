"""Spin-j operator algebra: angular momentum matrices, rotations, exponentials.

The |j, m> basis is ordered by descending m = j, j-1, ..., -j everywhere in
this package, and hbar = 1 throughout.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

MAX_TWO_J = 31


@dataclass(frozen=True)
class SpinNumber:
    """Total spin j, stored exactly as the integer 2j.

    Storing 2j sidesteps floating-point half-integers and makes the parity
    branch (integer vs half-integer spin) exact.
    """

    two_j: int

    def __post_init__(self):
        if isinstance(self.two_j, bool) or not isinstance(self.two_j, int):
            raise TypeError("two_j must be an integer")
        if self.two_j < 1:
            raise ValueError("two_j must be ≥ 1")
        if self.two_j > MAX_TWO_J:
            raise ValueError(f"two_j must be ≤ {MAX_TWO_J}")

    @classmethod
    def from_string(cls, text: str) -> "SpinNumber":
        """Parse a spin given as a rational or decimal string: '1/2', '3', '1.5'."""
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse spin {text!r}") from exc
        two_j = 2 * value
        if two_j.denominator != 1:
            raise ValueError(f"j must be an integer or half-integer, got {text!r}")
        return cls(int(two_j))

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def is_half_integer(self) -> bool:
        return self.two_j % 2 == 1

    @property
    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers, descending from j to -j."""
        m = self.j - np.arange(self.dim)
        m.flags.writeable = False
        return m

    def __str__(self) -> str:
        if self.two_j % 2 == 0:
            return str(self.two_j // 2)
        return f"{self.two_j}/2"


def pauli_sign(j: SpinNumber) -> float:
    """The scalar (-1)^(2j): -1 for half-integer spin, +1 for integer spin."""
    return -1.0 if j.is_half_integer else 1.0


@dataclass(frozen=True, eq=False)
class AngularMomentum:
    """The triple (Jx, Jy, Jz) for one spin, as read-only complex matrices."""

    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray


@functools.lru_cache(maxsize=None)
def angular_momentum_matrices(j: SpinNumber) -> AngularMomentum:
    """Spin matrices in the descending-m basis.

    Jz = diag(m); Jx, Jy are assembled from the ladder operator with
    <m+1|J+|m> = sqrt(j(j+1) - m(m+1)).  Results are cached and read-only.
    """
    m = j.m_values
    jz = np.diag(m.astype(complex))
    # row of m+1 sits one above the row of m, so J+ is the first superdiagonal
    ladder = np.sqrt(j.j * (j.j + 1) - m[1:] * (m[1:] + 1))
    jplus = np.zeros((j.dim, j.dim), dtype=complex)
    jplus[np.arange(j.dim - 1), np.arange(1, j.dim)] = ladder
    jminus = jplus.conj().T
    jx = (jplus + jminus) / 2
    jy = (jplus - jminus) / 2j
    for a in (jx, jy, jz):
        a.flags.writeable = False
    return AngularMomentum(jx=jx, jy=jy, jz=jz)


def matrix_exponential(m: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """exp(M) for a square complex matrix.

    Uses scaling-and-squaring with a Pade approximant, whose backward error
    sits near machine precision for the operator norms used here — well below
    any admissible `tol`.

    Parameters
    ----------
    m : array_like
        Square matrix with finite entries.
    tol : float
        Requested backward-error bound; must be positive.
    """
    if not tol > 0:
        raise ValueError("tol must be > 0")
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix_exponential needs a square matrix")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix_exponential needs finite entries")
    return expm(m)


def rotation_about_z(j: SpinNumber, phi: float) -> np.ndarray:
    """e^(-i phi Jz) as an exact diagonal matrix diag(e^(-i phi m))."""
    return np.diag(np.exp(-1j * phi * j.m_values))


def rotated_eigenbasis(j: SpinNumber, theta: float, phi: float) -> np.ndarray:
    """Unitary whose columns are the n-hat eigenvectors, descending eigenvalue m.

    U = e^(-i phi Jz) e^(-i theta Jy) e^(+i phi Jz); column k is the
    eigenvector of n-hat . J with eigenvalue m_k for the field direction
    n-hat = (sin theta cos phi, sin theta sin phi, cos theta).
    """
    ops = angular_momentum_matrices(j)
    dz = np.exp(-1j * phi * j.m_values)
    ry = matrix_exponential(-1j * theta * ops.jy)
    # diagonal sandwich applied as row/column scalings
    return dz[:, None] * ry * dz.conj()[None, :]
