"""Driven ladder emitter in a cavity beyond the rotating-wave approximation.

Steady states, emission spectra and drive absorption of a three-level ladder
emitter whose upper transition is coupled to a single cavity mode including
the counter-rotating terms, with zero-temperature frequency-dependent baths.
"""

__version__ = "0.1.0"

from .baths import BathSet, BathSpec, bath_density, build_dissipators, build_U
from .hilbert import HilbertSpace, annihilation, build_space, emitter_transfer
from .liouvillian import assemble, propagate, steady_state
from .model import ModelParams, dressed_levels, hamiltonian_lab, hamiltonian_rotating
from .observables import (
    SpectrumResult,
    absorption_rate,
    emission_spectrum,
    find_peaks,
    photon_distribution,
    total_intensity,
    two_time_correlation,
)
from .system import OpenSystem, build_system

__all__ = [
    "BathSet", "BathSpec", "HilbertSpace", "ModelParams", "OpenSystem", "SpectrumResult",
    "absorption_rate", "annihilation", "assemble", "bath_density", "build_U",
    "build_dissipators", "build_space", "build_system", "dressed_levels", "emission_spectrum",
    "find_peaks",
    "emitter_transfer", "hamiltonian_lab", "hamiltonian_rotating", "photon_distribution",
    "propagate", "steady_state", "total_intensity", "two_time_correlation",
]
