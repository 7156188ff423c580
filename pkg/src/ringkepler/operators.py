"""Reduced differential operators applied on sampled functions.

Every operator acts after azimuthal separation: d/dphi is replaced by
i(m - s), so the vector potential and its Dirac string never appear.

Derivatives are second-order central differences in the uniform parameter
u of the grid (x = u, x = e^u, or theta = 2 arctan e^u), converted to the
physical variable by the chain rule. The two end nodes have no central
stencil; operator results carry NaN there and residual norms skip them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import DomainError, GridError
from .model import ModelParams

GRID_KINDS = ("uniform", "log", "tanhalf", "gauss")


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Strictly increasing nodes, uniform in the parameter of ``kind``.

    ``uniform``: uniform in x. ``log``: uniform in ln x. ``tanhalf``: uniform
    in u = ln tan(theta/2), which maps (0, pi) onto the real line.
    ``gauss``: quadrature nodes, no finite-difference structure.
    """

    nodes: np.ndarray
    kind: str = "uniform"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 3:
            raise GridError("a grid needs at least 3 nodes")
        if not np.all(np.diff(nodes) > 0):
            raise GridError("grid nodes must be strictly increasing")
        if self.kind not in GRID_KINDS:
            raise GridError(f"unknown grid kind {self.kind!r}")
        if self.kind == "log" and nodes[0] <= 0:
            raise GridError("log grids need positive nodes")
        if self.kind == "tanhalf" and (nodes[0] <= 0 or nodes[-1] >= math.pi):
            raise GridError("tanhalf grids must lie inside (0, pi)")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def uniform(cls, a, b, n):
        return cls(np.linspace(a, b, n), "uniform")

    @classmethod
    def log_uniform(cls, a, b, n):
        return cls(np.exp(np.linspace(math.log(a), math.log(b), n)), "log")

    @classmethod
    def tanhalf(cls, theta_a, theta_b, n):
        u = np.linspace(math.log(math.tan(theta_a / 2)), math.log(math.tan(theta_b / 2)), n)
        return cls(2 * np.arctan(np.exp(u)), "tanhalf")

    def __len__(self):
        return self.nodes.size

    @property
    def parameter(self) -> np.ndarray:
        """The variable u in which the nodes are equally spaced."""
        if self.kind == "log":
            return np.log(self.nodes)
        if self.kind == "tanhalf":
            return np.log(np.tan(self.nodes / 2))
        return self.nodes

    @property
    def step(self) -> float:
        if self.kind == "gauss":
            raise GridError("Gauss grids have no uniform step")
        u = self.parameter
        return (u[-1] - u[0]) / (u.size - 1)

    def refined(self) -> "Grid1D":
        """Same interval, half the step (2N - 1 nodes)."""
        u = self.parameter
        fine = np.linspace(u[0], u[-1], 2 * u.size - 1)
        return _from_parameter(fine, self.kind)

    def coarsened(self) -> "Grid1D":
        """Same interval, double the step; requires an odd node count."""
        if self.nodes.size % 2 == 0 or self.nodes.size < 5:
            raise GridError("coarsening needs an odd node count of at least 5")
        return Grid1D(self.nodes[::2], self.kind)


def _from_parameter(u, kind):
    if kind == "log":
        return Grid1D(np.exp(u), kind)
    if kind == "tanhalf":
        return Grid1D(2 * np.arctan(np.exp(u)), kind)
    return Grid1D(u, kind)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != (len(self.grid),):
            raise GridError("values must have one entry per grid node")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True, eq=False)
class SampledFunction2D:
    """Values on the product grid ``xi x eta`` (first axis xi)."""

    xi: Grid1D
    eta: Grid1D
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != (len(self.xi), len(self.eta)):
            raise GridError("values must have shape (len(xi), len(eta))")
        object.__setattr__(self, "values", values)


def sample(grid: Grid1D, func) -> SampledFunction:
    return SampledFunction(grid, func(grid.nodes))


def _derivatives(grid: Grid1D, f, axis=0):
    """First and second derivatives in the physical variable, NaN at the ends."""
    if grid.kind == "gauss":
        raise GridError("finite differences need a uniform-parameter grid")
    f = np.moveaxis(np.asarray(f), axis, 0)
    h = grid.step
    d1 = np.full(f.shape, np.nan, dtype=np.result_type(f, float))
    d2 = np.full(f.shape, np.nan, dtype=d1.dtype)
    d1[1:-1] = (f[2:] - f[:-2]) / (2 * h)
    d2[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / (h * h)
    x = grid.nodes
    if grid.kind == "uniform":
        g1, g2 = np.ones_like(x), np.zeros_like(x)
    elif grid.kind == "log":
        g1, g2 = x, x
    else:
        g1, g2 = np.sin(x), np.sin(x) * np.cos(x)
    shape = (-1,) + (1,) * (f.ndim - 1)
    g1 = g1.reshape(shape)
    g2 = g2.reshape(shape)
    fx = d1 / g1
    fxx = (d2 - g2 * fx) / (g1 * g1)
    return np.moveaxis(fx, 0, axis), np.moveaxis(fxx, 0, axis)


def _require_inside(grid, lo, hi, what):
    if grid.nodes[0] <= lo or grid.nodes[-1] >= hi:
        raise DomainError(f"{what} grid must lie strictly inside ({lo}, {hi})")


def apply_angular(params: ModelParams, m2q, f: SampledFunction) -> SampledFunction:
    """-[(1/sin)(sin f')' - (m1^2/(4 cos^2(t/2)) + m2^2/(4 sin^2(t/2))) f]; eigenvalue A."""
    ex = model.derived_exponents(params, m2q)
    th = f.grid.nodes
    _require_inside(f.grid, 0.0, math.pi, "theta")
    fx, fxx = _derivatives(f.grid, f.values)
    lap = fxx + fx * np.cos(th) / np.sin(th)
    pot = ex.m1**2 / (4 * np.cos(th / 2) ** 2) + ex.m2**2 / (4 * np.sin(th / 2) ** 2)
    return SampledFunction(f.grid, -(lap - pot * f.values))


def apply_radial(params: ModelParams, A, f: SampledFunction) -> SampledFunction:
    """(1/r^2)(r^2 f')' - (A/r^2) f + (2/r) f; eigenfunctions give -2E f."""
    r = f.grid.nodes
    _require_inside(f.grid, 0.0, math.inf, "radial")
    fx, fxx = _derivatives(f.grid, f.values)
    return SampledFunction(f.grid, fxx + 2 * fx / r - A * f.values / r**2 + 2 * f.values / r)


def _parabolic_1d(mi, E, f):
    x = f.grid.nodes
    _require_inside(f.grid, 0.0, math.inf, "parabolic")
    fx, fxx = _derivatives(f.grid, f.values)
    inner = x * fxx + fx + (E * x / 2 - mi**2 / (4 * x) + 0.5) * f.values
    return SampledFunction(f.grid, -2 * inner)


def apply_parabolic_xi(params: ModelParams, m2q, E, f: SampledFunction) -> SampledFunction:
    """-2[(xi f')' + (E xi/2 - m1^2/(4 xi) + 1/2) f]; eigenvalue +beta on Phi_{n1 m1}."""
    return _parabolic_1d(model.derived_exponents(params, m2q).m1, E, f)


def apply_parabolic_eta(params: ModelParams, m2q, E, f: SampledFunction) -> SampledFunction:
    """-2[(eta f')' + (E eta/2 - m2^2/(4 eta) + 1/2) f]; eigenvalue -beta on Phi_{n2 m2}."""
    return _parabolic_1d(model.derived_exponents(params, m2q).m2, E, f)


def apply_jz(params: ModelParams, f: SampledFunction) -> SampledFunction:
    """J_z = s - i d/dphi on a periodic uniform phi grid (endpoint excluded)."""
    if f.grid.kind != "uniform":
        raise GridError("J_z needs a uniform phi grid")
    h = f.grid.step
    v = np.asarray(f.values, dtype=complex)
    deriv = (np.roll(v, -1) - np.roll(v, 1)) / (2 * h)
    return SampledFunction(f.grid, params.s * v - 1j * deriv)


def x_potential(params: ModelParams, m2q, xi, eta):
    """Non-derivative part of X after d/dphi -> i(m - s), in parabolic variables.

    The s-dependent pieces are the parabolic transcription of the Cartesian
    operator, 2 i s xi/(eta (xi+eta)) d/dphi - 2 s^2 xi/(eta (xi+eta)), which is
    the form consistent with the azimuthal factor e^{i(m-s) phi}.
    """
    model.check_m(params, m2q)
    k = (m2q - params.s2) // 2
    s = params.s
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    tot = xi + eta
    return (
        -(k * k) * (xi - eta) / (2 * xi * eta)
        - 2 * s * k * xi / (eta * tot)
        - 2 * s * s * xi / (eta * tot)
        + 2 * params.c1 * eta / (xi * tot)
        - 2 * params.c2 * xi / (eta * tot)
        + (xi - eta) / tot
    )


def x_potential_symmetric_gauge(params: ModelParams, q, xi, eta):
    """Non-derivative part of the parabolic-variable X written with
    is (xi^2+eta^2)/(xi eta (xi+eta)) d/dphi - s^2 (xi-eta)/(2 xi eta),
    for an azimuthal factor e^{i q phi}.

    It coincides with :func:`x_potential` when q = m, i.e. for wavefunctions
    carrying e^{i m phi} instead of e^{i(m-s) phi}.
    """
    s = params.s
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    tot = xi + eta
    return (
        -(q * q) * (xi - eta) / (2 * xi * eta)
        - s * q * (xi * xi + eta * eta) / (xi * eta * tot)
        - s * s * (xi - eta) / (2 * xi * eta)
        + 2 * params.c1 * eta / (xi * tot)
        - 2 * params.c2 * xi / (eta * tot)
        + (xi - eta) / tot
    )


def x_potential_cartesian(params: ModelParams, m2q, x, y, z):
    """Non-derivative part of the Cartesian X with x d/dy - y d/dx -> i(m - s).

    The azimuthal piece z/rho^2 d^2/dphi^2 of z (d_x^2 + d_y^2) becomes
    multiplicative after the reduction and is included.
    """
    model.check_m(params, m2q)
    k = (m2q - params.s2) // 2
    s = params.s
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    r = np.sqrt(x * x + y * y + z * z)
    rho2 = x * x + y * y
    plus = (r + z) / (r * (r - z))
    # i s (r+z)/(r(r-z)) * (i k) = -s k (r+z)/(r(r-z))
    return (
        -(k * k) * z / rho2
        - s * k * plus
        - s * s * plus
        + params.c1 * (r - z) / (r * (r + z))
        - params.c2 * plus
        + z / r
    )


def apply_x_reduced(params: ModelParams, m2q, f2d: SampledFunction2D) -> np.ndarray:
    """Apply X to psi = f(xi, eta) e^{i(m-s) phi}; returns values on the product grid.

    Eigenfunctions satisfy X psi = beta psi. Edge rows and columns are NaN.
    """
    for g in (f2d.xi, f2d.eta):
        _require_inside(g, 0.0, math.inf, "parabolic")
    xi = f2d.xi.nodes[:, None]
    eta = f2d.eta.nodes[None, :]
    f = f2d.values
    fx, fxx = _derivatives(f2d.xi, f, axis=0)
    fy, fyy = _derivatives(f2d.eta, f, axis=1)
    d_xi = xi * fxx + fx
    d_eta = eta * fyy + fy
    kinetic = 2 / (xi + eta) * (xi * d_eta - eta * d_xi)
    return kinetic + x_potential(params, m2q, xi, eta) * f


def x_cartesian_consistency(params: ModelParams, m2q, points) -> float:
    """Max disagreement of the Cartesian and parabolic multiplicative parts of X.

    ``points`` is an (N, 3) array of off-axis Cartesian points. Each
    difference is divided by max(1, |value|) since the terms blow up near
    the axis.
    """
    from .parabolic import to_parabolic

    pts = np.atleast_2d(np.asarray(points, dtype=float))
    p = to_parabolic(pts[:, 0], pts[:, 1], pts[:, 2])
    cart = x_potential_cartesian(params, m2q, pts[:, 0], pts[:, 1], pts[:, 2])
    para = x_potential(params, m2q, p.xi, p.eta)
    return float(np.max(np.abs(cart - para) / np.maximum(1.0, np.abs(cart))))


def residual_norm(applied, f, eigenvalue) -> float:
    """max |L f - lambda f| over interior nodes, relative to max |f|."""
    lf = applied.values if hasattr(applied, "values") else np.asarray(applied)
    fv = f.values if hasattr(f, "values") else np.asarray(f)
    res = lf - eigenvalue * fv
    if res.ndim == 1:
        res = res[1:-1]
    else:
        res = res[1:-1, 1:-1]
    return float(np.max(np.abs(res)) / np.max(np.abs(fv)))


def rayleigh_quotient(xi: Grid1D, eta: Grid1D, f, applied) -> float:
    """<f, X f> / <f, f> over interior nodes with the parabolic volume element.

    Sums use the trapezoid-like weight (xi+eta) xi eta du dv of the
    uniform-parameter grids.
    """
    x = xi.nodes[1:-1, None]
    y = eta.nodes[None, 1:-1]
    jac_x = x if xi.kind == "log" else np.ones_like(x)
    jac_y = y if eta.kind == "log" else np.ones_like(y)
    w = (x + y) * jac_x * jac_y
    fv = np.asarray(f)[1:-1, 1:-1]
    av = np.asarray(applied)[1:-1, 1:-1]
    num = np.sum(w * np.conj(fv) * av)
    den = np.sum(w * np.abs(fv) ** 2)
    return float(np.real(num / den))


def richardson_residual(apply, grid: Grid1D, func, eigenvalue) -> float:
    """Residual of ``apply`` with one Richardson step removing the h^2 term.

    ``apply`` maps a SampledFunction to the operator image. The operator is
    applied on ``grid`` and on its 2h coarsening; on the shared nodes
    (4 L_h f - L_2h f)/3 is compared with eigenvalue * f.
    """
    coarse = grid.coarsened()
    fine_f = sample(grid, func)
    coarse_f = sample(coarse, func)
    extrapolated = (4 * apply(fine_f).values[::2] - apply(coarse_f).values) / 3
    return residual_norm(extrapolated, coarse_f, eigenvalue)


def convergence_order(apply, grid: Grid1D, func, eigenvalue) -> float:
    """Observed order p from raw residuals on ``grid`` and its 2h coarsening.

    NaN when the fine-grid residual is at rounding level (the stencil is exact).
    """
    fine = residual_norm(apply(sample(grid, func)), sample(grid, func), eigenvalue)
    coarse_grid = grid.coarsened()
    coarse = residual_norm(apply(sample(coarse_grid, func)), sample(coarse_grid, func), eigenvalue)
    if fine < 1e-12:
        return math.nan
    return math.log2(coarse / fine)
