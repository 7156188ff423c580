import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringkepler.errors import DomainError
from ringkepler.specfun import (
    assoc_legendre_p,
    gegenbauer_c,
    jacobi_p,
    kummer_m_terminating,
    ln_gamma,
    pochhammer,
)

mp.mp.dps = 50


# High-precision explicit-sum oracles (mpmath's hypergeometric summation gives up
# on some heavily cancelling parameter sets).
def mp_jacobi(n, a, b, x):
    x = mp.mpf(x)
    return mp.fsum(
        mp.binomial(n + a, n - k) * mp.binomial(n + b, k) * ((x - 1) / 2) ** k * ((x + 1) / 2) ** (n - k)
        for k in range(n + 1)
    )


def mp_gegenbauer(n, lam, x):
    x = mp.mpf(x)
    return mp.fsum(
        (-1) ** k * mp.rf(lam, n - k) / (mp.factorial(k) * mp.factorial(n - 2 * k)) * (2 * x) ** (n - 2 * k)
        for k in range(n // 2 + 1)
    )


def mp_legendre(l, m, x):
    # (-1)^m (1-x^2)^{m/2} d^m/dx^m P_l(x), differentiating the power series termwise
    x = mp.mpf(x)
    total = mp.mpf(0)
    for k in range(l // 2 + 1):
        p = l - 2 * k
        if p < m:
            continue
        coef = (-1) ** k * mp.factorial(2 * l - 2 * k) / (2**l * mp.factorial(k) * mp.factorial(l - k) * mp.factorial(p))
        total += coef * mp.factorial(p) / mp.factorial(p - m) * x ** (p - m)
    return (-1) ** m * (1 - x * x) ** (mp.mpf(m) / 2) * total


def mp_kummer_terms(n, b, x):
    return [mp.rf(-n, k) / (mp.rf(b, k) * mp.factorial(k)) * mp.mpf(x) ** k for k in range(n + 1)]

xs_strategy = st.floats(-1.0, 1.0, allow_nan=False)
param_strategy = st.floats(-0.95, 6.0, allow_nan=False)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


@settings(max_examples=200, deadline=None)
@given(n=st.integers(0, 25), a=param_strategy, b=param_strategy, x=xs_strategy)
def test_jacobi_matches_oracle(n, a, b, x):
    ref = float(mp_jacobi(n, a, b, x))
    scale = float(abs(mp_jacobi(n, a, b, 1)) + abs(mp_jacobi(n, a, b, -1))) + 1
    assert abs(jacobi_p(n, a, b, x) - ref) <= 1e-12 * scale


@settings(max_examples=200, deadline=None)
@given(n=st.integers(0, 25), lam=st.floats(-0.45, 6.0), x=xs_strategy)
def test_gegenbauer_matches_oracle(n, lam, x):
    ref = float(mp_gegenbauer(n, lam, x))
    scale = abs(float(mp_gegenbauer(n, lam, 1))) + 1
    assert abs(gegenbauer_c(n, lam, x) - ref) <= 1e-12 * scale


@pytest.mark.parametrize("l", range(0, 9))
def test_assoc_legendre_matches_oracle(l):
    x = np.linspace(-0.99, 0.99, 23)
    for m in range(l + 1):
        ref = np.array([float(mp_legendre(l, m, float(t))) for t in x])
        scale = np.max(np.abs(ref)) + 1
        assert np.max(np.abs(assoc_legendre_p(l, m, x) - ref)) <= 1e-12 * scale


def test_legendre_oracle_agrees_with_mpmath():
    assert float(mp_legendre(2, 1, 0.5)) == pytest.approx(float(mp.legenp(2, 1, 0.5)), rel=1e-15)


def test_condon_shortley_sign():
    assert assoc_legendre_p(1, 1, 0.0) == -1.0
    assert assoc_legendre_p(2, 2, 0.0) == pytest.approx(3.0)


def test_jacobi_known_values():
    assert jacobi_p(0, 0.3, 0.4, 0.2) == 1.0
    # P_n^{(a,b)}(1) = (a+1)_n / n!
    for n in range(8):
        assert jacobi_p(n, 1.5, 0.25, 1.0) == pytest.approx(pochhammer(2.5, n) / math.factorial(n), rel=1e-13)


def test_jacobi_reduces_to_legendre():
    x = np.linspace(-1, 1, 11)
    for n in range(6):
        ref = np.polynomial.legendre.legval(x, [0] * n + [1])
        np.testing.assert_allclose(jacobi_p(n, 0, 0, x), ref, atol=1e-13)


def test_vector_shapes():
    x = np.linspace(-0.5, 0.5, 6).reshape(2, 3)
    assert jacobi_p(3, 0.1, 0.2, x).shape == (2, 3)
    assert isinstance(jacobi_p(3, 0.1, 0.2, 0.3), float)
    assert isinstance(gegenbauer_c(0, 1.0, 0.3), float)


@settings(max_examples=100, deadline=None)
@given(n=st.integers(0, 30), b=st.floats(0.1, 40.0), x=st.floats(0.0, 60.0))
def test_kummer_matches_oracle(n, b, x):
    terms = mp_kummer_terms(n, b, x)
    ref = float(mp.fsum(terms))
    # alternating sum: compare on the scale of the largest term
    scale = float(max(abs(t) for t in terms))
    assert abs(kummer_m_terminating(-n, b, x) - ref) <= 1e-13 * scale


def test_kummer_laguerre_relation():
    # L_n^a(x) = binom(n+a, n) 1F1(-n; a+1; x)
    x = np.linspace(0, 20, 9)
    for n in range(6):
        for a in (0.0, 0.7, 3.0):
            lag = np.array([float(mp.laguerre(n, a, t)) for t in x])
            binom = math.exp(ln_gamma(n + a + 1) - ln_gamma(n + 1) - ln_gamma(a + 1))
            np.testing.assert_allclose(binom * kummer_m_terminating(-n, a + 1, x), lag, rtol=1e-11, atol=1e-11)


@settings(max_examples=100, deadline=None)
@given(x=st.floats(1e-6, 300.0))
def test_ln_gamma(x):
    assert ln_gamma(x) == pytest.approx(float(mp.loggamma(x)), rel=1e-13, abs=1e-13)


@settings(max_examples=100, deadline=None)
@given(a=st.floats(-5, 5), n=st.integers(0, 12))
def test_pochhammer(a, n):
    assert pochhammer(a, n) == pytest.approx(float(mp.rf(a, n)), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize(
    "call",
    [
        lambda: jacobi_p(2, -1.0, 0.0, 0.1),
        lambda: jacobi_p(2, 0.0, 0.0, 1.5),
        lambda: jacobi_p(-1, 0.0, 0.0, 0.1),
        lambda: jacobi_p(1.5, 0.0, 0.0, 0.1),
        lambda: gegenbauer_c(2, -0.5, 0.1),
        lambda: assoc_legendre_p(1, 2, 0.1),
        lambda: kummer_m_terminating(1, 1.0, 0.1),
        lambda: kummer_m_terminating(-1, 0.0, 0.1),
        lambda: kummer_m_terminating(-1.5, 1.0, 0.1),
        lambda: ln_gamma(0.0),
        lambda: ln_gamma(-1.5),
    ],
)
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()
