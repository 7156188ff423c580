"""Gaussian quadrature rules used by the overlap and normalization oracles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights for the integral of w(x) f(x).

    kind ``legendre``: w = 1 on [-1, 1];
    ``laguerre``: w = x^alpha e^{-x} on (0, inf);
    ``jacobi``: w = (1-x)^alpha (1+x)^beta on [-1, 1].
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    alpha: float = 0.0
    beta: float = 0.0

    def weight_function(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "legendre":
            return np.ones_like(x)
        if self.kind == "laguerre":
            return x**self.alpha * np.exp(-x)
        return (1 - x) ** self.alpha * (1 + x) ** self.beta

    def integrate(self, values):
        """Sum of weights times ``values`` sampled at the nodes (leading axis)."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))


def gauss_legendre(n) -> QuadratureRule:
    x, w = np.polynomial.legendre.leggauss(n)
    return QuadratureRule(x, w, "legendre")


def gauss_laguerre(n, alpha=0.0) -> QuadratureRule:
    if not alpha > -1:
        raise DomainError(f"Laguerre exponent must exceed -1, got {alpha}")
    x, w = special.roots_genlaguerre(n, alpha)
    return QuadratureRule(x, w, "laguerre", alpha=float(alpha))


def gauss_jacobi(n, alpha, beta) -> QuadratureRule:
    if not (alpha > -1 and beta > -1):
        raise DomainError(f"Jacobi exponents must exceed -1, got {alpha}, {beta}")
    x, w = special.roots_jacobi(n, alpha, beta)
    return QuadratureRule(x, w, "jacobi", alpha=float(alpha), beta=float(beta))
