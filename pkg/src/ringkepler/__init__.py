"""Bound states of a Coulomb problem with a monopole and two ring potentials.

Closed-form spectrum and eigenfunctions in spherical and parabolic
coordinates, with finite-difference and quadrature oracles that check them.
Half-integer quantum numbers are passed around as doubled integers
(``s2 = 2 s``, ``n2 = 2 n``, ``j2 = 2 j``, ``m2q = 2 m``).
"""

from .errors import DomainError, GridError, ParityError, PoleError, RangeError, RingKeplerError
from .model import (
    Energy,
    Exponents,
    ModelParams,
    ParabolicState,
    SphericalState,
    derived_exponents,
    energy,
    enumerate_parabolic,
    enumerate_spherical,
)
from .parabolic import ParabolicPoint, beta_eigenvalue, parabolic_state_eval
from .spherical import SphericalPoint, ring_harmonic, separation_constant, spherical_state_eval
from .verify import Tolerances, VerificationReport, interbasis_matrix, run_verification

__version__ = "0.1.0"

__all__ = [
    "DomainError", "GridError", "ParityError", "PoleError", "RangeError", "RingKeplerError",
    "Energy", "Exponents", "ModelParams", "ParabolicState", "SphericalState",
    "derived_exponents", "energy", "enumerate_parabolic", "enumerate_spherical",
    "ParabolicPoint", "beta_eigenvalue", "parabolic_state_eval",
    "SphericalPoint", "ring_harmonic", "separation_constant", "spherical_state_eval",
    "Tolerances", "VerificationReport", "interbasis_matrix", "run_verification",
]
