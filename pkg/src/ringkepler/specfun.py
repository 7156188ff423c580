"""Classical special functions used by the closed-form bound states.

All polynomial families are evaluated by forward three-term recurrence in the
degree. Arguments ``x`` may be scalars or numpy arrays; the result has the
shape of ``x``.

The associated Legendre function carries the Condon-Shortley sign::

    P_l^m(x) = (-2)^m / sqrt(pi) * Gamma(m + 1/2) * (1 - x^2)^(m/2) * C_{l-m}^{m+1/2}(x)

so that ``assoc_legendre_p(1, 1, 0.0) == -1.0``.
"""

from __future__ import annotations

import math
import operator

import numpy as np

from .errors import DomainError


def _degree(n, name="n"):
    try:
        n = operator.index(n)
    except TypeError:
        raise DomainError(f"{name} must be an integer, got {n!r}") from None
    if n < 0:
        raise DomainError(f"{name} must be nonnegative, got {n}")
    return n


def _unit_interval(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0) or np.any(np.isnan(x)):
        raise DomainError("x must lie in [-1, 1]")
    return x


def _out(value, x):
    return float(value) if np.ndim(x) == 0 else value


def jacobi_p(n, a, b, x):
    """Jacobi polynomial P_n^{(a,b)}(x) for a, b > -1 and |x| <= 1."""
    n = _degree(n)
    if not (a > -1 and b > -1):
        raise DomainError(f"Jacobi parameters must exceed -1, got a={a}, b={b}")
    xs = _unit_interval(x)
    p_prev = np.ones_like(xs)
    if n == 0:
        return _out(p_prev, x)
    p = (a + 1) + (a + b + 2) * (xs - 1) / 2
    ab2 = a * a - b * b
    for k in range(2, n + 1):
        c = 2 * k + a + b
        a_k = 2 * k * (k + a + b) * (c - 2)
        b_k = (c - 1) * (c * (c - 2) * xs + ab2)
        c_k = 2 * (k + a - 1) * (k + b - 1) * c
        p_prev, p = p, (b_k * p - c_k * p_prev) / a_k
    return _out(p, x)


def gegenbauer_c(n, lam, x):
    """Gegenbauer polynomial C_n^lam(x) for lam > -1/2."""
    n = _degree(n)
    if not lam > -0.5:
        raise DomainError(f"Gegenbauer parameter must exceed -1/2, got {lam}")
    xs = _unit_interval(x)
    c_prev = np.ones_like(xs)
    if n == 0:
        return _out(c_prev, x)
    c = 2 * lam * xs
    for k in range(2, n + 1):
        c_prev, c = c, (2 * (k + lam - 1) * xs * c - (k + 2 * lam - 2) * c_prev) / k
    return _out(c, x)


def assoc_legendre_p(l, m_abs, x):
    """Associated Legendre function P_l^m(x), Condon-Shortley sign included."""
    l = _degree(l, "l")
    m = _degree(m_abs, "m_abs")
    if m > l:
        raise DomainError(f"order {m} exceeds degree {l}")
    xs = _unit_interval(x)
    # P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}
    pmm = np.ones_like(xs)
    if m:
        somx2 = np.sqrt((1 - xs) * (1 + xs))
        fact = 1.0
        for _ in range(m):
            pmm = -pmm * fact * somx2
            fact += 2.0
    if l == m:
        return _out(pmm, x)
    p_prev, p = pmm, xs * (2 * m + 1) * pmm
    for ll in range(m + 2, l + 1):
        p_prev, p = p, (xs * (2 * ll - 1) * p - (ll + m - 1) * p_prev) / (ll - m)
    return _out(p, x)


def kummer_m_terminating(neg_n, b, x):
    """Terminating Kummer series 1F1(-n; b; x), exactly n + 1 terms.

    ``neg_n`` is the (nonpositive integer) first argument itself.
    """
    try:
        neg_n = operator.index(neg_n)
    except TypeError:
        raise DomainError(f"first argument must be a nonpositive integer, got {neg_n!r}") from None
    if neg_n > 0:
        raise DomainError(f"first argument must be a nonpositive integer, got {neg_n}")
    if not b > 0:
        raise DomainError(f"second argument must be positive, got {b}")
    xs = np.asarray(x, dtype=float)
    n = -neg_n
    term = np.ones_like(xs)
    total = np.ones_like(xs)
    for k in range(n):
        term = term * ((k - n) / ((b + k) * (k + 1))) * xs
        total = total + term
    return _out(total, x)


def ln_gamma(x):
    """log Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def pochhammer(a, n):
    """Rising factorial (a)_n = a (a+1) ... (a+n-1)."""
    n = _degree(n)
    out = 1.0
    for k in range(n):
        out *= a + k
    return out
