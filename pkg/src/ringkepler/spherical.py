"""Spherical basis: ring-shaped monopole harmonics and radial functions.

The angular factor is

    Z_jm(theta, phi) = N_jm cos(theta/2)^m1 sin(theta/2)^m2 P_{j-m_plus}^{(m2, m1)}(cos theta) e^{i(m-s) phi}

and the radial factor

    R_nj(r) = C_nj (2 eps r)^L e^{-eps r} 1F1(-(n-j-1); 2L+2; 2 eps r),   L = j + (delta1+delta2)/2.

Both normalization constants are real and positive; the azimuthal phase is
the only complex factor. With the half-angle form above, the unit-norm
angular constant is

    N^2 = (2j+d+1) (j-m_plus)! Gamma(j+m_plus+d+1)
          / (4 pi Gamma(j-m_minus+delta1+1) Gamma(j+m_minus+delta2+1)),   d = delta1 + delta2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import DomainError, PoleError
from .model import ModelParams, SphericalState
from .specfun import assoc_legendre_p, gegenbauer_c, jacobi_p, kummer_m_terminating, ln_gamma


@dataclass(frozen=True)
class SphericalPoint:
    r: float
    theta: float
    phi: float


def _exponents(params, j2, m2q):
    model.check_j(params, m2q, j2)
    return model.derived_exponents(params, m2q)


def effective_l(params: ModelParams, j2, m2q) -> float:
    """L = j + (delta1 + delta2)/2, the orbital number of the radial equation."""
    return j2 / 2 + _exponents(params, j2, m2q).delta_mean


def separation_constant(params: ModelParams, j2, m2q) -> float:
    """Eigenvalue A = L (L + 1) of the angular operator M."""
    ell = effective_l(params, j2, m2q)
    return ell * (ell + 1)


def angular_norm(params: ModelParams, j2, m2q) -> float:
    ex = _exponents(params, j2, m2q)
    j = j2 / 2
    d = ex.delta1 + ex.delta2
    deg = round(j - ex.m_plus)
    log_n2 = (
        math.log(2 * j + d + 1)
        + ln_gamma(deg + 1)
        + ln_gamma(j + ex.m_plus + d + 1)
        - math.log(4 * math.pi)
        - ln_gamma(j - ex.m_minus + ex.delta1 + 1)
        - ln_gamma(j + ex.m_minus + ex.delta2 + 1)
    )
    return math.exp(log_n2 / 2)


def is_pole(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return (theta == 0) | (theta == math.pi)


def ring_harmonic(params: ModelParams, j2, m2q, theta, phi, *, poles="raise"):
    """Ring-shaped monopole harmonic Z_jm^(s)(theta, phi).

    Exactly at theta = 0 or pi the coordinates are singular. With
    ``poles="raise"`` a :class:`PoleError` is raised; with ``poles="limit"``
    the continuous limit is returned there (zero unless the vanishing
    half-angle factor has exponent 0).
    """
    ex = _exponents(params, j2, m2q)
    th = np.asarray(theta, dtype=float)
    ph = np.asarray(phi, dtype=float)
    if np.any((th < 0) | (th > math.pi)):
        raise DomainError("theta must lie in [0, pi]")
    pole = is_pole(th)
    if poles == "raise" and np.any(pole):
        raise PoleError("ring_harmonic evaluated on the polar axis")
    deg = round(j2 / 2 - ex.m_plus)
    x = np.where(th == 0, 1.0, np.where(th == math.pi, -1.0, np.cos(th)))
    # 0.0 ** 0 == 1 gives the pole limit directly.
    half_cos = np.where(th == math.pi, 0.0, np.cos(th / 2))
    half_sin = np.where(th == 0, 0.0, np.sin(th / 2))
    real = (
        angular_norm(params, j2, m2q)
        * half_cos**ex.m1
        * half_sin**ex.m2
        * jacobi_p(deg, ex.m2, ex.m1, x)
    )
    value = real * np.exp(1j * ((m2q - params.s2) // 2) * ph)
    return complex(value) if value.ndim == 0 else value


def gegenbauer_ring_harmonic(j, m, delta, theta, phi):
    """Gegenbauer closed form of Z for s = 0 and c1 = c2 (delta1 = delta2 = delta).

    ``j`` and ``m`` are ordinary integers here.
    """
    am = abs(m)
    lam = am + delta + 0.5
    log_pref = (
        (am + delta) * math.log(2)
        + ln_gamma(lam)
        + 0.5
        * (
            math.log(2 * j + 2 * delta + 1)
            + ln_gamma(j - am + 1)
            - math.log(4 * math.pi**2)
            - ln_gamma(j + am + 2 * delta + 1)
        )
    )
    th = np.asarray(theta, dtype=float)
    value = (
        math.exp(log_pref)
        * np.sin(th) ** (am + delta)
        * gegenbauer_c(j - am, lam, np.cos(th))
        * np.exp(1j * m * np.asarray(phi, dtype=float))
    )
    return complex(value) if np.ndim(value) == 0 else value


def legendre_harmonic(j, m, theta, phi):
    """Surface harmonic sqrt((2j+1)(j-|m|)!/(4 pi (j+|m|)!)) P_j^{|m|}(cos theta) e^{i m phi}."""
    am = abs(m)
    pref = math.exp(0.5 * (math.log(2 * j + 1) + ln_gamma(j - am + 1) - math.log(4 * math.pi) - ln_gamma(j + am + 1)))
    th = np.asarray(theta, dtype=float)
    value = pref * assoc_legendre_p(j, am, np.cos(th)) * np.exp(1j * m * np.asarray(phi, dtype=float))
    return complex(value) if np.ndim(value) == 0 else value


def _radial_setup(params, n2, j2, m2q):
    model.check_spherical(params, SphericalState(n2, j2, m2q))
    ex = model.derived_exponents(params, m2q)
    eps = model.energy(params, m2q, n2).epsilon
    ell = j2 / 2 + ex.delta_mean
    n_r = (n2 - j2 - 2) // 2
    return ex, eps, ell, n_r


def radial_norm(params: ModelParams, n2, j2, m2q) -> float:
    ex, eps, ell, n_r = _radial_setup(params, n2, j2, m2q)
    d = ex.delta1 + ex.delta2
    log_c = (
        math.log(2 * eps * eps)
        - ln_gamma(2 * ell + 2)
        + 0.5 * (ln_gamma(n2 / 2 + j2 / 2 + d + 1) - ln_gamma(n_r + 1))
    )
    return math.exp(log_c)


def radial_wavefunction(params: ModelParams, n2, j2, m2q, r):
    ex, eps, ell, n_r = _radial_setup(params, n2, j2, m2q)
    rs = np.asarray(r, dtype=float)
    if np.any(rs <= 0):
        raise DomainError("radial_wavefunction requires r > 0")
    rho = 2 * eps * rs
    value = (
        radial_norm(params, n2, j2, m2q)
        * rho**ell
        * np.exp(-eps * rs)
        * kummer_m_terminating(-n_r, 2 * ell + 2, rho)
    )
    return float(value) if value.ndim == 0 else value


def spherical_state_eval(params: ModelParams, state: SphericalState, point: SphericalPoint, *, poles="raise"):
    """psi = R_nj(r) Z_jm(theta, phi)."""
    model.check_spherical(params, state)
    radial = radial_wavefunction(params, state.n2, state.j2, state.m2q, point.r)
    angular = ring_harmonic(params, state.j2, state.m2q, point.theta, point.phi, poles=poles)
    return radial * angular
