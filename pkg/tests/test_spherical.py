import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringkepler import model
from ringkepler import spherical as sph
from ringkepler.errors import DomainError, ParityError, PoleError, RangeError
from ringkepler.model import ModelParams, SphericalState
from ringkepler.quadrature import gauss_jacobi, gauss_laguerre, gauss_legendre

mp.mp.dps = 30
Y00 = 1 / math.sqrt(4 * math.pi)


def test_separation_constant_examples():
    assert sph.separation_constant(ModelParams(0), 2, 0) == 2.0
    assert sph.separation_constant(ModelParams(0, 1.0, 1.0), 0, 0) == pytest.approx(6.0, rel=1e-15)
    assert sph.separation_constant(ModelParams(1), 1, 1) == 0.75


def test_separation_constant_errors():
    with pytest.raises(RangeError):
        sph.separation_constant(ModelParams(2), 0, 0)  # j below m_plus = 1
    with pytest.raises(ParityError):
        sph.separation_constant(ModelParams(0), 1, 0)


def test_angular_norm_examples():
    assert sph.angular_norm(ModelParams(0), 0, 0) == pytest.approx(0.2820947918, abs=1e-10)
    theta = np.linspace(0.1, 3.0, 7)
    np.testing.assert_allclose(
        sph.ring_harmonic(ModelParams(0), 2, 0, theta, 0.0).real, math.sqrt(3 / (4 * math.pi)) * np.cos(theta), atol=1e-14
    )


def test_y00_is_constant():
    th = np.linspace(0.05, 3.1, 9)
    z = sph.ring_harmonic(ModelParams(0), 0, 0, th, 1.3)
    np.testing.assert_allclose(z, Y00, atol=1e-15)


def test_half_integer_hand_value():
    # s = 1/2, j = m = 1/2: m1 = 0, m2 = 1, P_0 = 1, N^2 = 2 * 0! * Gamma(2) / (4 pi Gamma(1) Gamma(2)) = 1/(2 pi)
    n = 1 / math.sqrt(2 * math.pi)
    assert sph.angular_norm(ModelParams(1), 1, 1) == pytest.approx(n, rel=1e-14)
    assert sph.ring_harmonic(ModelParams(1), 1, 1, math.pi / 2, 0.0) == pytest.approx(n * math.sin(math.pi / 4), rel=1e-14)


def _mp_angular_norm_sq(params, j2, m2q):
    # direct high-precision quadrature of cos^{2 m1}(t/2) sin^{2 m2}(t/2) P^2 sin t over (0, pi), times 2 pi
    ex = model.derived_exponents(params, m2q)
    deg = round(j2 / 2 - ex.m_plus)

    def integrand(t):
        x = mp.cos(t)
        p = mp.jacobi(deg, ex.m2, ex.m1, x)
        return mp.cos(t / 2) ** (2 * ex.m1) * mp.sin(t / 2) ** (2 * ex.m2) * p * p * mp.sin(t)

    return 2 * mp.pi * mp.quad(integrand, [0, mp.pi / 2, mp.pi])


@pytest.mark.parametrize(
    "params,j2,m2q",
    [(ModelParams(0, 0.3, 0.7), 4, 2), (ModelParams(1, 2.0, 0.5), 3, -1), (ModelParams(2, 1.0, 1.0), 4, 0)],
)
def test_angular_norm_against_mp_quadrature(params, j2, m2q):
    inv = float(_mp_angular_norm_sq(params, j2, m2q))
    assert sph.angular_norm(params, j2, m2q) == pytest.approx(1 / math.sqrt(inv), rel=1e-12)


def test_angular_orthonormality(params):
    for m2q in model.allowed_m2q(params, abs(params.s2) + 12):
        js = [j2 for j2 in range(model.m_plus2(params, m2q), abs(params.s2) + 11, 2)][:5]
        ex = model.derived_exponents(params, m2q)
        rule = gauss_jacobi(40, ex.m2, ex.m1)
        th = np.arccos(rule.nodes)
        z = np.array([sph.ring_harmonic(params, j2, m2q, th, 0.0).real for j2 in js])
        gram = 2 * math.pi * (z / rule.weight_function(rule.nodes)) @ np.diag(rule.weights) @ z.T
        np.testing.assert_allclose(gram, np.eye(len(js)), atol=1e-10)


def test_angular_orthonormality_legendre_rule():
    # same check with a rule not tailored to the exponents: Gauss-Legendre in x, many nodes
    p = ModelParams(2, 1.0, 3.0)
    rule = gauss_legendre(400)
    th = np.arccos(rule.nodes)
    z = np.array([sph.ring_harmonic(p, j2, 2, th, 0.0).real for j2 in (2, 4, 6)])
    gram = 2 * math.pi * z @ np.diag(rule.weights) @ z.T
    np.testing.assert_allclose(gram, np.eye(3), atol=1e-6)


def test_gegenbauer_form():
    for c in (0.0, 0.4, 1.0, 3.0):
        p = ModelParams(0, c, c)
        th = np.linspace(0.1, math.pi - 0.1, 20)
        for j in range(4):
            for m in range(-j, j + 1):
                delta = model.derived_exponents(p, 2 * m).delta1
                np.testing.assert_allclose(
                    sph.ring_harmonic(p, 2 * j, 2 * m, th, 0.7),
                    sph.gegenbauer_ring_harmonic(j, m, delta, th, 0.7),
                    rtol=1e-12,
                    atol=1e-14,
                )


def test_reduces_to_surface_harmonics():
    th = np.linspace(0.05, math.pi - 0.05, 20)
    for j in range(6):
        for m in range(-j, j + 1):
            z = sph.ring_harmonic(ModelParams(0), 2 * j, 2 * m, th, 1.1)
            y = sph.legendre_harmonic(j, m, th, 1.1)
            # positive-real normalization differs from the Condon-Shortley sign by (-1)^|m|
            np.testing.assert_allclose(z, (-1) ** abs(m) * y, atol=1e-12)
            ref = np.array([complex(mp.spherharm(j, m, t, 1.1)) for t in th])
            if m >= 0:
                np.testing.assert_allclose(y, ref, atol=1e-12)
            np.testing.assert_allclose(abs(z), np.abs(ref), atol=1e-12)


def test_monopole_harmonic_density():
    # s = 1/2, c = 0, j = 1/2: |Z_{1/2, +-1/2}|^2 sum to the uniform 2/(4 pi)
    p = ModelParams(1)
    th = np.linspace(0.1, 3.0, 11)
    total = sum(abs(sph.ring_harmonic(p, 1, m2q, th, 0.2)) ** 2 for m2q in (-1, 1))
    np.testing.assert_allclose(total, 2 / (4 * math.pi), rtol=1e-13)


def test_poles():
    p = ModelParams(1, 0.3, 0.0)
    with pytest.raises(PoleError):
        sph.ring_harmonic(p, 1, 1, 0.0, 0.0)
    with pytest.raises(PoleError):
        sph.ring_harmonic(p, 1, 1, np.array([0.5, math.pi]), 0.0)
    with pytest.raises(DomainError):
        sph.ring_harmonic(p, 1, 1, -0.1, 0.0)
    # m = 1/2, s = 1/2: m1 = sqrt(0.3 * 4) > 0, m2 = 1 > 0 -> zero at both poles
    assert sph.ring_harmonic(p, 1, 1, 0.0, 0.0, poles="limit") == 0
    assert sph.ring_harmonic(p, 1, 1, math.pi, 0.0, poles="limit") == 0
    # m = -1/2 with c1 = 0.3 and c2 = 0: m2 = 0 -> finite nonzero value at theta = 0
    near = sph.ring_harmonic(p, 1, -1, 1e-9, 0.0)
    at = sph.ring_harmonic(p, 1, -1, 0.0, 0.0, poles="limit")
    assert at != 0 and at == pytest.approx(near, rel=1e-8)


@settings(max_examples=60, deadline=None)
@given(theta=st.floats(1e-3, math.pi - 1e-3), c1=st.floats(0, 3), c2=st.floats(0, 3), k=st.integers(0, 3))
def test_half_angle_envelope(theta, c1, c2, k):
    p = ModelParams(1, c1, c2)
    m2q = 1 + 2 * k
    ex = model.derived_exponents(p, m2q)
    j2 = model.m_plus2(p, m2q) + 2
    z = abs(sph.ring_harmonic(p, j2, m2q, theta, 0.0))
    env = math.cos(theta / 2) ** ex.m1 * math.sin(theta / 2) ** ex.m2
    bound = sph.angular_norm(p, j2, m2q) * max(abs(sph.jacobi_p(1, ex.m2, ex.m1, x)) for x in (-1.0, 1.0))
    assert z <= bound * env * (1 + 1e-12)


def test_radial_examples():
    h = ModelParams(0)
    assert sph.radial_norm(h, 2, 0, 0) == pytest.approx(2.0, rel=1e-15)
    assert sph.radial_norm(h, 4, 2, 0) == pytest.approx(1 / (2 * math.sqrt(6)), rel=1e-14)
    assert sph.radial_wavefunction(h, 2, 0, 0, 1.0) == pytest.approx(2 * math.exp(-1), rel=1e-15)
    assert sph.radial_wavefunction(h, 4, 0, 0, 2.0) == pytest.approx(0.0, abs=1e-16)
    r = np.linspace(0.1, 20, 30)
    np.testing.assert_allclose(
        sph.radial_wavefunction(h, 4, 0, 0, r), (1 / math.sqrt(2)) * (1 - r / 2) * np.exp(-r / 2), atol=1e-15
    )
    with pytest.raises(DomainError):
        sph.radial_wavefunction(h, 2, 0, 0, 0.0)
    with pytest.raises(RangeError):
        sph.radial_wavefunction(h, 2, 2, 0, 1.0)


def _mp_radial_norm_sq(params, n2, j2, m2q):
    ex = model.derived_exponents(params, m2q)
    eps = mp.mpf(1) / (mp.mpf(n2) / 2 + (mp.mpf(ex.delta1) + ex.delta2) / 2)
    ell = mp.mpf(j2) / 2 + (mp.mpf(ex.delta1) + ex.delta2) / 2
    nr = (n2 - j2 - 2) // 2

    def f(r):
        rho = 2 * eps * r
        return (rho**ell * mp.exp(-eps * r) * mp.hyp1f1(-nr, 2 * ell + 2, rho)) ** 2 * r * r

    return mp.quad(f, [0, 1, 10, 50, mp.inf])


@pytest.mark.parametrize(
    "params,n2,j2,m2q",
    [(ModelParams(2, 0.3, 0.7), 6, 4, 2), (ModelParams(1, 2.0, 0.5), 7, 1, -1), (ModelParams(0, 1.0, 1.0), 8, 2, 0)],
)
def test_radial_norm_against_mp_quadrature(params, n2, j2, m2q):
    inv = float(_mp_radial_norm_sq(params, n2, j2, m2q))
    assert sph.radial_norm(params, n2, j2, m2q) == pytest.approx(1 / math.sqrt(inv), rel=1e-12)


def test_radial_orthonormality_across_n(params):
    # same (j, m), different n: different eps but the same radial operator, so still orthogonal
    m2q = params.s2
    j2 = model.m_plus2(params, m2q)
    ns = [j2 + 2 + 2 * k for k in range(5)]
    rule = gauss_laguerre(30, 2 * sph.effective_l(params, j2, m2q))
    gram = np.zeros((len(ns), len(ns)))
    for a, na in enumerate(ns):
        for b, nb in enumerate(ns):
            # t = (eps_a + eps_b) r turns the integrand into t^{2L} e^{-t} times a polynomial
            scale = model.energy(params, m2q, na).epsilon + model.energy(params, m2q, nb).epsilon
            r = rule.nodes / scale
            fa = sph.radial_wavefunction(params, na, j2, m2q, r)
            fb = sph.radial_wavefunction(params, nb, j2, m2q, r)
            gram[a, b] = rule.integrate(fa * fb * r * r / rule.weight_function(rule.nodes)) / scale
    np.testing.assert_allclose(gram, np.eye(len(ns)), atol=1e-10)


def test_spherical_state_eval():
    h = ModelParams(0)
    psi = sph.spherical_state_eval(h, SphericalState(2, 0, 0), sph.SphericalPoint(1.0, 0.7, 2.0))
    assert psi == pytest.approx(2 * math.exp(-1) / math.sqrt(4 * math.pi), rel=1e-15)
    assert psi == pytest.approx(0.2075537, abs=1e-7)
    p = ModelParams(1, 0.3, 0.7)
    st_ = SphericalState(5, 3, 1)
    vals = [abs(sph.spherical_state_eval(p, st_, sph.SphericalPoint(2.0, math.pi - d, 0.3))) for d in (1e-1, 1e-2, 1e-3)]
    assert vals[0] > vals[1] > vals[2]
    assert sph.spherical_state_eval(p, st_, sph.SphericalPoint(2.0, math.pi, 0.3), poles="limit") == 0


def test_phase_is_azimuthal_only(params):
    n2 = abs(params.s2) + 6
    for st_ in model.enumerate_spherical(params, n2):
        a = sph.spherical_state_eval(params, st_, sph.SphericalPoint(1.7, 1.1, 0.0))
        b = sph.spherical_state_eval(params, st_, sph.SphericalPoint(1.7, 1.1, 0.9))
        assert a.imag == 0
        assert b == pytest.approx(a * np.exp(1j * ((st_.m2q - params.s2) // 2) * 0.9), rel=1e-13, abs=1e-16)
