"""Exception types raised by the library."""


class RingKeplerError(ValueError):
    """Base class for invalid inputs to ringkepler routines."""


class DomainError(RingKeplerError):
    """An argument lies outside the domain of a function."""


class PoleError(DomainError):
    """Evaluation requested exactly on a coordinate singularity (axis or pole)."""


class ParityError(RingKeplerError):
    """Doubled quantum numbers of incompatible parity (integer vs half-odd-integer)."""


class RangeError(RingKeplerError):
    """Quantum numbers outside the allowed range."""


class GridError(RingKeplerError):
    """A discretization grid is unusable for the requested operation."""
