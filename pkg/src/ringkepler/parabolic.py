"""Parabolic coordinates and the parabolic bound-state basis.

Coordinates: xi = r + z, eta = r - z, phi the azimuth, so that
x = sqrt(xi eta) cos phi, y = sqrt(xi eta) sin phi, z = (xi - eta)/2 and
dV = (xi + eta)/4 dxi deta dphi.

The separated equations carry +beta/2 in the xi equation and -beta/2 in the
eta equation; beta is the eigenvalue of the extra integral of motion X.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import DomainError, PoleError
from .model import ModelParams, ParabolicState
from .specfun import kummer_m_terminating, ln_gamma


@dataclass(frozen=True)
class ParabolicPoint:
    xi: float
    eta: float
    phi: float


def to_parabolic(x, y, z) -> ParabolicPoint:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    rho2 = x * x + y * y
    if np.any(rho2 == 0):
        raise PoleError("points on the z axis have no azimuth")
    r = np.sqrt(rho2 + z * z)
    # r - |z| loses digits near the axis; rho^2 / (r + |z|) does not.
    big = r + np.abs(z)
    small = rho2 / big
    xi = np.where(z >= 0, big, small)
    eta = np.where(z >= 0, small, big)
    phi = np.mod(np.arctan2(y, x), 2 * math.pi)
    phi = np.where(phi >= 2 * math.pi, 0.0, phi)  # mod can round up to 2 pi
    if xi.ndim == 0:
        return ParabolicPoint(float(xi), float(eta), float(phi))
    return ParabolicPoint(xi, eta, phi)


def from_parabolic(p: ParabolicPoint):
    root = np.sqrt(np.asarray(p.xi, dtype=float) * np.asarray(p.eta, dtype=float))
    x = root * np.cos(p.phi)
    y = root * np.sin(p.phi)
    z = (np.asarray(p.xi, dtype=float) - np.asarray(p.eta, dtype=float)) / 2
    if np.ndim(x) == 0:
        return float(x), float(y), float(z)
    return x, y, z


def phi_factor(n_i, m_i, epsilon, x):
    """One-dimensional parabolic factor Phi_{n_i m_i}(x).

    Normalized so that the integral of Phi(t)^2 dt over t = eps x in (0, inf) is 1.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if not m_i >= 0:
        raise DomainError(f"m_i must be nonnegative, got {m_i}")
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise DomainError("phi_factor requires x >= 0")
    log_norm = 0.5 * (ln_gamma(n_i + m_i + 1) - ln_gamma(n_i + 1)) - ln_gamma(m_i + 1)
    t = epsilon * xs
    value = math.exp(log_norm) * np.exp(-t / 2) * t ** (m_i / 2) * kummer_m_terminating(-n_i, m_i + 1, t)
    return float(value) if value.ndim == 0 else value


def parabolic_epsilon(params: ModelParams, state: ParabolicState) -> float:
    """eps = 1 / (n1 + n2 + (m1 + m2)/2 + 1), computed from parabolic labels only."""
    model.check_parabolic(params, state)
    ex = model.derived_exponents(params, state.m2q)
    return 1.0 / (state.n1 + state.n2p + (ex.m1 + ex.m2) / 2 + 1)


def beta_eigenvalue(params: ModelParams, state: ParabolicState) -> float:
    """beta = eps (n1 - n2 + (|m-s| - |m+s| + delta1 - delta2)/2)."""
    model.check_parabolic(params, state)
    ex = model.derived_exponents(params, state.m2q)
    eps = model.energy(params, state.m2q, state.principal_n2(params)).epsilon
    k_minus = abs(state.m2q - params.s2) // 2
    k_plus = abs(state.m2q + params.s2) // 2
    bracket = (state.n1 - state.n2p) + (k_minus - k_plus) / 2 + (ex.delta1 - ex.delta2) / 2
    return eps * bracket


def parabolic_numbers_from_beta(params: ModelParams, m2q, beta, epsilon):
    """Recover (n1, n2) as reals from (beta, eps) through the separated quantization."""
    ex = model.derived_exponents(params, m2q)
    k_minus = abs(m2q - params.s2) // 2
    k_plus = abs(m2q + params.s2) // 2
    n1 = -(k_minus + ex.delta1 + 1) / 2 + (beta + 1) / (2 * epsilon)
    n2 = -(k_plus + ex.delta2 + 1) / 2 - (beta - 1) / (2 * epsilon)
    return n1, n2


def parabolic_state_eval(params: ModelParams, state: ParabolicState, p: ParabolicPoint):
    """psi = sqrt(2) eps^2 Phi_{n1 m1}(xi) Phi_{n2 m2}(eta) e^{i(m-s)phi} / sqrt(2 pi)."""
    model.check_parabolic(params, state)
    ex = model.derived_exponents(params, state.m2q)
    eps = model.energy(params, state.m2q, state.principal_n2(params)).epsilon
    value = (
        math.sqrt(2) * eps * eps
        * phi_factor(state.n1, ex.m1, eps, p.xi)
        * phi_factor(state.n2p, ex.m2, eps, p.eta)
        * np.exp(1j * ((state.m2q - params.s2) // 2) * np.asarray(p.phi, dtype=float))
        / math.sqrt(2 * math.pi)
    )
    return complex(value) if np.ndim(value) == 0 else value
