"""Parameters, quantum-number bookkeeping and the closed-form spectrum.

Half-integer quantities (monopole charge s, and the quantum numbers n, j, m)
are stored doubled, as plain integers: ``s2 = 2 s``, ``n2 = 2 n`` and so on.
All validity checks are then exact integer arithmetic.

Energies depend on the azimuthal number m through the ring-shape exponents,
so a level is always labeled by the pair (n, m).

Allowed principal numbers are n = m_plus + 1, m_plus + 2, ... for each m.
This is stricter than n >= |s| + 1 whenever |m| > |s|, and is the joint
condition imposed by the radial and parabolic quantization.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ParityError, RangeError

#: Upper bound on the effective principal number n + (delta1 + delta2)/2.
DEFAULT_MAX_EFFECTIVE_N = 120.0


def _int(value, name):
    try:
        return operator.index(value)
    except TypeError:
        raise DomainError(f"{name} must be an integer (doubled quantum number), got {value!r}") from None


@dataclass(frozen=True)
class ModelParams:
    """Monopole charge ``s = s2/2`` and ring-shape strengths ``c1, c2 >= 0``."""

    s2: int
    c1: float = 0.0
    c2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "s2", _int(self.s2, "s2"))
        for name in ("c1", "c2"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be a finite nonnegative number, got {value}")
            object.__setattr__(self, name, value)

    @property
    def s(self) -> float:
        return self.s2 / 2

    def label(self) -> str:
        return f"s={Fraction(self.s2, 2)}, c1={self.c1!r}, c2={self.c2!r}"


def validate_params(s2, c1=0.0, c2=0.0) -> ModelParams:
    """Build a :class:`ModelParams`, rejecting negative ring strengths."""
    return ModelParams(s2, c1, c2)


@dataclass(frozen=True)
class Exponents:
    m1: float
    m2: float
    delta1: float
    delta2: float
    m_plus: float
    m_minus: float

    @property
    def delta_mean(self) -> float:
        """(delta1 + delta2) / 2, the shift of every effective quantum number."""
        return (self.delta1 + self.delta2) / 2


def _exponent(k, c):
    # sqrt(k^2 + 4c) and its excess over |k|, free of cancellation.
    if c == 0:
        return float(abs(k)), 0.0
    root = math.sqrt(k * k + 4 * c)
    return root, 4 * c / (root + abs(k))


def check_m(params: ModelParams, m2q) -> int:
    m2q = _int(m2q, "m2q")
    if (m2q - params.s2) % 2:
        raise ParityError(
            f"m = {Fraction(m2q, 2)} and s = {Fraction(params.s2, 2)} must both be integers "
            "or both half-odd-integers"
        )
    return m2q


def m_plus2(params: ModelParams, m2q: int) -> int:
    """Twice m_plus = (|m+s| + |m-s|)/2, i.e. max(|m|, |s|) doubled."""
    return (abs(m2q + params.s2) + abs(m2q - params.s2)) // 2


def derived_exponents(params: ModelParams, m2q) -> Exponents:
    m2q = check_m(params, m2q)
    k_minus = (m2q - params.s2) // 2  # m - s
    k_plus = (m2q + params.s2) // 2  # m + s
    m1, d1 = _exponent(k_minus, params.c1)
    m2, d2 = _exponent(k_plus, params.c2)
    return Exponents(
        m1=m1,
        m2=m2,
        delta1=d1,
        delta2=d2,
        m_plus=(abs(k_plus) + abs(k_minus)) / 2,
        m_minus=(abs(k_plus) - abs(k_minus)) / 2,
    )


@dataclass(frozen=True)
class Energy:
    value: float
    epsilon: float


@dataclass(frozen=True, order=True)
class SphericalState:
    """Labels (n, j, m) stored doubled."""

    n2: int
    j2: int
    m2q: int

    @property
    def n(self) -> float:
        return self.n2 / 2

    @property
    def j(self) -> float:
        return self.j2 / 2

    @property
    def m(self) -> float:
        return self.m2q / 2


@dataclass(frozen=True, order=True)
class ParabolicState:
    """Parabolic labels (n1, n2, m); m stored doubled."""

    n1: int
    n2p: int
    m2q: int

    @property
    def m(self) -> float:
        return self.m2q / 2

    def principal_n2(self, params: ModelParams) -> int:
        """Doubled principal number n = n1 + n2 + m_plus + 1."""
        return 2 * (self.n1 + self.n2p + 1) + m_plus2(params, self.m2q)


def check_n(params: ModelParams, m2q, n2, max_effective_n=DEFAULT_MAX_EFFECTIVE_N) -> int:
    """Validate principal number n at fixed m; returns ``n2``."""
    m2q = check_m(params, m2q)
    n2 = _int(n2, "n2")
    if (n2 - params.s2) % 2:
        raise ParityError(f"n = {Fraction(n2, 2)} has the wrong parity for s = {Fraction(params.s2, 2)}")
    mp2 = m_plus2(params, m2q)
    if n2 < mp2 + 2:
        raise RangeError(
            f"n = {Fraction(n2, 2)} is below m_plus + 1 = {Fraction(mp2 + 2, 2)} for m = {Fraction(m2q, 2)}"
        )
    n_eff = n2 / 2 + derived_exponents(params, m2q).delta_mean
    if n_eff > max_effective_n:
        raise RangeError(f"effective principal number {n_eff:.6g} exceeds the cap {max_effective_n}")
    return n2


def check_j(params: ModelParams, m2q, j2) -> int:
    """Validate j at fixed m: j - m_plus a nonnegative integer (which implies |m| <= j)."""
    m2q = check_m(params, m2q)
    j2 = _int(j2, "j2")
    mp2 = m_plus2(params, m2q)
    if (j2 - mp2) % 2:
        raise ParityError(f"j = {Fraction(j2, 2)} and m_plus = {Fraction(mp2, 2)} differ by a non-integer")
    if j2 < mp2:
        raise RangeError(f"j = {Fraction(j2, 2)} is below m_plus = {Fraction(mp2, 2)}")
    return j2


def check_spherical(params: ModelParams, state: SphericalState) -> SphericalState:
    check_j(params, state.m2q, state.j2)
    n2 = check_n(params, state.m2q, state.n2)
    if n2 < state.j2 + 2:
        raise RangeError(f"n = {Fraction(n2, 2)} must exceed j = {Fraction(state.j2, 2)}")
    return state


def check_parabolic(params: ModelParams, state: ParabolicState) -> ParabolicState:
    for name in ("n1", "n2p"):
        value = _int(getattr(state, name), name)
        if value < 0:
            raise RangeError(f"{name} must be nonnegative, got {value}")
    check_n(params, state.m2q, state.principal_n2(params))
    return state


def energy(params: ModelParams, m2q, n2) -> Energy:
    """Bound-state energy E = -1 / (2 (n + (delta1+delta2)/2)^2)."""
    n2 = check_n(params, m2q, n2)
    eps = 1.0 / (n2 / 2 + derived_exponents(params, m2q).delta_mean)
    return Energy(value=-eps * eps / 2, epsilon=eps)


def _check_principal(params: ModelParams, n2) -> int:
    n2 = _int(n2, "n2")
    if (n2 - params.s2) % 2:
        raise ParityError(f"n = {Fraction(n2, 2)} has the wrong parity for s = {Fraction(params.s2, 2)}")
    if n2 < abs(params.s2) + 2:
        raise RangeError(f"n = {Fraction(n2, 2)} is below |s| + 1 = {Fraction(abs(params.s2) + 2, 2)}")
    return n2


def allowed_m2q(params: ModelParams, n2) -> list[int]:
    """Doubled m values that admit bound states with principal number n."""
    n2 = _check_principal(params, n2)
    return [m2q for m2q in range(-(n2 - 2), n2 - 1, 2) if m_plus2(params, m2q) + 2 <= n2]


def enumerate_spherical(params: ModelParams, n2) -> list[SphericalState]:
    """All (j, m) at principal number n, sorted by (m, j)."""
    n2 = _check_principal(params, n2)
    out = []
    for m2q in allowed_m2q(params, n2):
        check_n(params, m2q, n2)
        for j2 in range(m_plus2(params, m2q), n2 - 1, 2):
            out.append(SphericalState(n2, j2, m2q))
    return out


def enumerate_parabolic(params: ModelParams, n2) -> list[ParabolicState]:
    """All (n1, n2, m) at principal number n, sorted by (m, n1)."""
    n2 = _check_principal(params, n2)
    out = []
    for m2q in allowed_m2q(params, n2):
        check_n(params, m2q, n2)
        total = (n2 - m_plus2(params, m2q) - 2) // 2
        for n1 in range(total + 1):
            out.append(ParabolicState(n1, total - n1, m2q))
    return out


def principal_range(params: ModelParams, n2_max) -> range:
    """Doubled principal numbers |s|+1, |s|+2, ..., n_max."""
    n2_max = _int(n2_max, "n2_max")
    return range(abs(params.s2) + 2, n2_max + 1, 2)
