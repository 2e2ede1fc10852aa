"""Uhlmann geometric phase of a thermal spin-j particle in a slowly rotating
magnetic field: closed-form engines, brute-force oracles, critical
temperatures, and winding numbers."""

from .spin_algebra import (
    MAX_TWO_J,
    AngularMomentum,
    SpinNumber,
    angular_momentum_matrices,
    matrix_exponential,
    pauli_sign,
    rotated_eigenbasis,
    rotation_about_z,
)
from .thermal_state import (
    LoopConfig,
    ThermalSpectrum,
    gibbs_state,
    occupation_probabilities,
)
from .uhlmann_core import (
    SINGULAR_TRACE_EPS,
    ConnectionOneForm,
    HolonomyMatrix,
    PhaseResult,
    connection_closed_form,
    connection_spectral,
    holonomy_closed_form,
    holonomy_path_ordered,
    principal_phase,
    uhlmann_phase_trace,
)
from .chebyshev_phase import (
    DEGENERATE_Z_EPS,
    DegenerateEigenvalueError,
    TraceValue,
    ZPoint,
    chebyshev_u,
    trace_via_lambda,
    uhlmann_phase_closed,
    z_variable,
)
from .topology import (
    CRITICAL_EXCLUSION,
    CriticalPoint,
    CriticalTable,
    MissingRootError,
    SingularInputError,
    UnresolvedWindingError,
    WindingResult,
    chebyshev_roots,
    critical_temperatures,
    equator_crossing,
    roots_enclosed,
    staircase,
    winding_number,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_TWO_J",
    "AngularMomentum",
    "SpinNumber",
    "angular_momentum_matrices",
    "matrix_exponential",
    "pauli_sign",
    "rotated_eigenbasis",
    "rotation_about_z",
    "LoopConfig",
    "ThermalSpectrum",
    "gibbs_state",
    "occupation_probabilities",
    "SINGULAR_TRACE_EPS",
    "ConnectionOneForm",
    "HolonomyMatrix",
    "PhaseResult",
    "connection_closed_form",
    "connection_spectral",
    "holonomy_closed_form",
    "holonomy_path_ordered",
    "principal_phase",
    "uhlmann_phase_trace",
    "DEGENERATE_Z_EPS",
    "DegenerateEigenvalueError",
    "TraceValue",
    "ZPoint",
    "chebyshev_u",
    "trace_via_lambda",
    "uhlmann_phase_closed",
    "z_variable",
    "CRITICAL_EXCLUSION",
    "CriticalPoint",
    "CriticalTable",
    "MissingRootError",
    "SingularInputError",
    "UnresolvedWindingError",
    "WindingResult",
    "chebyshev_roots",
    "critical_temperatures",
    "equator_crossing",
    "roots_enclosed",
    "staircase",
    "winding_number",
    "__version__",
]
