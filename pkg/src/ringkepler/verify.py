"""Independent numerical oracles for the closed-form solution.

The finite-difference eigensolvers see only the coefficients of the
separated ODEs (m1^2, m2^2 and the separation constant A). They never call
the closed-form eigenfunctions or the energy formula; comparison against
those happens in :func:`run_verification`.
"""

from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import model, operators, quadrature
from . import parabolic as par
from . import spherical as sph
from .errors import GridError, RingKeplerError
from .model import ModelParams, ParabolicState, SphericalState
from .operators import Grid1D
from .specfun import assoc_legendre_p, gegenbauer_c, jacobi_p, pochhammer

RADIAL_NODES = 20001
ANGULAR_CELLS = 20000
RESIDUAL_NODES = 4001
X_NODES = 401
OVERLAP_NODES = 48
TAIL = 40.0  # grid extent in units of the decay length 1/eps


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray
    grid: Grid1D
    method: str


# -- radial oracle -----------------------------------------------------------


def radial_fd_eigenvalues(A, grid: Grid1D, k) -> np.ndarray:
    """Lowest k eigenvalues of -u''/2 + (A/(2r^2) - 1/r) u = E u, Dirichlet ends.

    On a log grid r = e^t the substitution u = sqrt(r) w gives
    -w''/2 + ((A + 1/4)/2 - r) w = E r^2 w, symmetrized by the r weight.
    """
    if grid.kind != "log":
        raise GridError("the radial oracle needs a log-uniform grid")
    r = grid.nodes[1:-1]
    if r.size < k + 2:
        raise GridError(f"{r.size} interior nodes cannot resolve {k} states")
    h = grid.step
    diag = (1 / h**2 + (A + 0.25) / 2 - r) / r**2
    off = (-0.5 / h**2) / (r[:-1] * r[1:])
    # Explicit absolute tolerance: the default scales with the matrix norm,
    # which the 1/r^2 grading makes enormous.
    vals = eigh_tridiagonal(
        diag, off, eigvals_only=True, select="i", select_range=(0, k - 1), lapack_driver="stebz", tol=1e-15
    )
    return np.sort(vals)


def default_radial_grid(A, k, nodes=RADIAL_NODES, tail=TAIL) -> Grid1D:
    """Log grid sized from A alone: inner edge from the r^(L+1) onset, outer from a Coulomb length guess."""
    nu = math.sqrt(A + 0.25)  # w ~ r^nu near the origin
    r_min = min(1e-14 ** (1 / (2 * nu)), 0.1)
    r_max = tail * (nu - 0.5 + k)
    return Grid1D.log_uniform(r_min, r_max, nodes)


def fd_radial_spectrum(params: ModelParams, j2, m2q, grid: Grid1D | None = None, k=1, extrapolate=True) -> EigenResult:
    """Finite-difference energies of the radial equation at fixed (j, m).

    With ``extrapolate`` (default) one Richardson step combines the grid with
    its 2h coarsening. Without an explicit grid the outer edge is enlarged
    until it spans ``TAIL`` decay lengths of the k-th computed state.
    """
    A = sph.separation_constant(params, j2, m2q)
    adaptive = grid is None
    if adaptive:
        grid = default_radial_grid(A, k)
    for _ in range(8):
        fine = radial_fd_eigenvalues(A, grid, k)
        if fine[-1] >= 0:
            if not adaptive:
                raise GridError("grid too small: the requested states are not bound on it")
            grid = Grid1D.log_uniform(grid.nodes[0], 2 * grid.nodes[-1], len(grid))
            continue
        needed = TAIL / math.sqrt(-2 * fine[-1])
        if adaptive and grid.nodes[-1] < needed:
            grid = Grid1D.log_uniform(grid.nodes[0], 1.25 * needed, len(grid))
            continue
        if not adaptive and grid.nodes[-1] * math.sqrt(-2 * fine[-1]) < 20:
            raise GridError("grid does not cover the exponential tail of the requested states")
        break
    method = "fd2-log"
    vals = fine
    if extrapolate:
        coarse = radial_fd_eigenvalues(A, grid.coarsened(), k)
        vals = (4 * fine - coarse) / 3
        method += "+richardson"
    return EigenResult(np.sort(vals), grid, method)


# -- angular oracle ----------------------------------------------------------


def angular_cell_grid(cells=ANGULAR_CELLS) -> Grid1D:
    """Cell centres (i + 1/2) pi / cells; faces sit on the poles."""
    h = math.pi / cells
    return Grid1D.uniform(h / 2, math.pi - h / 2, cells)


def angular_fd_eigenvalues(m1, m2, grid: Grid1D, k) -> np.ndarray:
    """Finite-volume eigenvalues of -(1/sin)(sin f')' + V f = A f on (0, pi).

    V = m1^2/(4 cos^2(t/2)) + m2^2/(4 sin^2(t/2)). Fluxes through the pole
    faces vanish with sin, so no boundary condition is imposed there.
    """
    if grid.kind != "uniform":
        raise GridError("the angular oracle needs a uniform cell-centred theta grid")
    cells = len(grid)
    h = math.pi / cells
    if not (math.isclose(grid.nodes[0], h / 2, rel_tol=1e-9) and math.isclose(grid.step, h, rel_tol=1e-9)):
        raise GridError("theta grid must be cell-centred on [0, pi]")
    if cells < k + 2:
        raise GridError(f"{cells} cells cannot resolve {k} states")
    th = grid.nodes
    faces = np.sin(np.arange(1, cells) * h)
    centre = np.sin(th)
    flux = np.zeros(cells + 1)
    flux[1:-1] = faces
    pot = m1**2 / (4 * np.cos(th / 2) ** 2) + m2**2 / (4 * np.sin(th / 2) ** 2)
    diag = (flux[:-1] + flux[1:]) / (h * h * centre) + pot
    off = -faces / (h * h * np.sqrt(centre[:-1] * centre[1:]))
    vals = eigh_tridiagonal(
        diag, off, eigvals_only=True, select="i", select_range=(0, k - 1), lapack_driver="stebz", tol=1e-13
    )
    return np.sort(vals)


def fd_angular_spectrum(params: ModelParams, m2q, grid: Grid1D | None = None, k=4, extrapolate=True) -> EigenResult:
    """Lowest k separation constants at fixed m from the angular equation alone."""
    ex = model.derived_exponents(params, m2q)
    grid = grid or angular_cell_grid()
    fine = angular_fd_eigenvalues(ex.m1, ex.m2, grid, k)
    if not extrapolate:
        return EigenResult(fine, grid, "fv2-theta")
    if len(grid) % 2:
        raise GridError("Richardson extrapolation needs an even cell count")
    coarse = angular_fd_eigenvalues(ex.m1, ex.m2, angular_cell_grid(len(grid) // 2), k)
    return EigenResult(np.sort((4 * fine - coarse) / 3), grid, "fv2-theta+richardson")


# -- quadrature overlaps -----------------------------------------------------


def _eps(params, state):
    if isinstance(state, SphericalState):
        return model.energy(params, state.m2q, state.n2).epsilon
    return model.energy(params, state.m2q, state.principal_n2(params)).epsilon


def _check_state(params, state):
    if isinstance(state, SphericalState):
        model.check_spherical(params, state)
    elif isinstance(state, ParabolicState):
        model.check_parabolic(params, state)
    else:
        raise RingKeplerError(f"not a bound-state label: {state!r}")


def _angular_overlap(params, a: SphericalState, b: SphericalState, nodes):
    ex = model.derived_exponents(params, a.m2q)
    rule = quadrature.gauss_jacobi(nodes, ex.m2, ex.m1)
    th = np.arccos(rule.nodes)
    za = sph.ring_harmonic(params, a.j2, a.m2q, th, 0.0)
    zb = sph.ring_harmonic(params, b.j2, b.m2q, th, 0.0)
    return 2 * math.pi * rule.integrate(np.conj(za) * zb / rule.weight_function(rule.nodes))


def _radial_overlap(params, a: SphericalState, b: SphericalState, nodes):
    la = sph.effective_l(params, a.j2, a.m2q)
    lb = sph.effective_l(params, b.j2, b.m2q)
    scale = _eps(params, a) + _eps(params, b)
    rule = quadrature.gauss_laguerre(nodes, la + lb)
    r = rule.nodes / scale
    ra = sph.radial_wavefunction(params, a.n2, a.j2, a.m2q, r)
    rb = sph.radial_wavefunction(params, b.n2, b.j2, b.m2q, r)
    return rule.integrate(ra * rb * r * r / rule.weight_function(rule.nodes)) / scale


def _on_parabolic_nodes(params, state, xi, eta):
    if isinstance(state, ParabolicState):
        return par.parabolic_state_eval(params, state, par.ParabolicPoint(xi, eta, 0.0))
    r = (xi + eta) / 2
    theta = 2 * np.arctan2(np.sqrt(eta), np.sqrt(xi))
    return sph.spherical_state_eval(params, state, sph.SphericalPoint(r, theta, 0.0))


def _parabolic_overlap(params, a, b, nodes):
    ex = model.derived_exponents(params, a.m2q)
    scale = (_eps(params, a) + _eps(params, b)) / 2
    rx = quadrature.gauss_laguerre(nodes, ex.m1)
    ry = quadrature.gauss_laguerre(nodes, ex.m2)
    xi = rx.nodes[:, None] / scale
    eta = ry.nodes[None, :] / scale
    integrand = np.conj(_on_parabolic_nodes(params, a, xi, eta)) * _on_parabolic_nodes(params, b, xi, eta)
    integrand = integrand * (xi + eta) / 4
    integrand = integrand / rx.weight_function(rx.nodes)[:, None] / ry.weight_function(ry.nodes)[None, :]
    return 2 * math.pi * rx.weights @ integrand @ ry.weights / scale**2


def quad_overlap(params: ModelParams, states_a, states_b, nodes=OVERLAP_NODES) -> np.ndarray:
    """Overlap matrix <a|b> under the volume element of the coordinate system.

    Pairs with different m vanish by the azimuthal integral. Spherical pairs
    factor into Gauss-Jacobi (angle) and generalized Gauss-Laguerre (radius)
    rules; any pair involving a parabolic state uses a product Laguerre rule
    in (xi, eta) with exponents (m1, m2). All rules are exact for the
    polynomial parts once ``nodes`` exceeds the principal numbers involved.
    """
    for s in (*states_a, *states_b):
        _check_state(params, s)
    out = np.zeros((len(states_a), len(states_b)), dtype=complex)
    for i, a in enumerate(states_a):
        for j, b in enumerate(states_b):
            if a.m2q != b.m2q:
                continue
            if isinstance(a, SphericalState) and isinstance(b, SphericalState):
                out[i, j] = _angular_overlap(params, a, b, nodes) * _radial_overlap(params, a, b, nodes)
            else:
                out[i, j] = _parabolic_overlap(params, a, b, nodes)
    return out


@dataclass(frozen=True)
class InterbasisResult:
    matrix: np.ndarray
    defect: float
    parabolic: list
    spherical: list


def interbasis_matrix(params: ModelParams, n2, m2q, nodes=OVERLAP_NODES) -> InterbasisResult:
    """U[a, b] = <parabolic_a | spherical_b> at fixed (n, m) and its unitarity defect."""
    model.check_n(params, m2q, n2)
    ps = [s for s in model.enumerate_parabolic(params, n2) if s.m2q == m2q]
    ss = [s for s in model.enumerate_spherical(params, n2) if s.m2q == m2q]
    u = quad_overlap(params, ps, ss, nodes)
    if u.shape[0] != u.shape[1]:
        raise RingKeplerError(f"basis sizes differ: {u.shape}")
    defect = float(np.max(np.abs(u @ u.conj().T - np.eye(len(ps)))))
    return InterbasisResult(u, defect, ps, ss)


# -- report ------------------------------------------------------------------


@dataclass(frozen=True)
class Tolerances:
    identity: float = 1e-10
    quadrature: float = 1e-8
    fd: float = 1e-6
    operator: float = 1e-5
    order: float = 0.2

    @classmethod
    def uniform(cls, value):
        return cls(**{f.name: value for f in fields(cls)})

    @classmethod
    def from_env(cls, environ=None):
        """Defaults overridden by RINGKEPLER_TOL_<NAME> variables (e.g. RINGKEPLER_TOL_FD=1e-5)."""
        environ = os.environ if environ is None else environ
        values = {}
        for f in fields(cls):
            raw = environ.get(f"RINGKEPLER_TOL_{f.name.upper()}")
            if raw is None:
                continue
            try:
                value = float(raw)
            except ValueError:
                raise RingKeplerError(f"RINGKEPLER_TOL_{f.name.upper()} is not a number: {raw!r}") from None
            if not value >= 0:
                raise RingKeplerError(f"RINGKEPLER_TOL_{f.name.upper()} must be nonnegative")
            values[f.name] = value
        return cls(**values)

    def updated(self, **overrides):
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


@dataclass(frozen=True)
class CheckRecord:
    name: str
    category: str
    closed_form: float
    oracle: float
    abs_deviation: float
    rel_deviation: float
    measure: str
    tolerance: float
    passed: bool


def _record(name, category, closed, oracle, tolerance, measure="abs"):
    closed = float(closed)
    oracle = float(oracle)
    abs_dev = abs(oracle - closed)
    rel_dev = abs_dev / abs(closed) if closed != 0 else (0.0 if abs_dev == 0 else math.inf)
    dev = rel_dev if measure == "rel" else abs_dev
    ok = bool(dev <= tolerance)  # NaN deviations fail
    return CheckRecord(name, category, closed, oracle, abs_dev, rel_dev, measure, float(tolerance), ok)


@dataclass
class VerificationReport:
    params: ModelParams
    n2_max: int
    tolerances: Tolerances
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def by_category(self, category):
        return [c for c in self.checks if c.category == category]

    def to_dict(self):
        return {
            "schema": "ringkepler.verification/1",
            "params": {"s2": self.params.s2, "s": self.params.s2 / 2, "c1": float(self.params.c1), "c2": float(self.params.c2)},
            "n2_max": self.n2_max,
            "tolerances": asdict(self.tolerances),
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": len(self.failures()),
            "checks": [asdict(c) for c in self.checks],
        }


def _tag(x2):
    return f"{x2 // 2}" if x2 % 2 == 0 else f"{x2}/2"


def _spectrum_checks(params, n2_max, tol):
    out = []
    for m2q in model.allowed_m2q(params, n2_max):
        mp2 = model.m_plus2(params, m2q)
        for j2 in range(mp2, n2_max - 1, 2):
            k = (n2_max - j2) // 2
            fd = fd_radial_spectrum(params, j2, m2q, k=k).eigenvalues
            for i in range(k):
                n2 = j2 + 2 + 2 * i
                e = model.energy(params, m2q, n2).value
                out.append(_record(f"spectrum n={_tag(n2)} j={_tag(j2)} m={_tag(m2q)}", "fd", e, fd[i], tol.fd, "rel"))
    return out


def _angular_checks(params, n2_max, tol, k=4):
    out = []
    for m2q in model.allowed_m2q(params, n2_max):
        mp2 = model.m_plus2(params, m2q)
        fd = fd_angular_spectrum(params, m2q, k=k).eigenvalues
        for i in range(k):
            a = sph.separation_constant(params, mp2 + 2 * i, m2q)
            out.append(_record(f"angular j={_tag(mp2 + 2 * i)} m={_tag(m2q)}", "fd", a, fd[i], tol.fd))
        # multiplicity: FD levels up to A(j = n_max - 1) versus enumerated j values
        n_j = sum(1 for s in model.enumerate_spherical(params, n2_max) if s.m2q == m2q)
        top = sph.separation_constant(params, n2_max - 2, m2q)
        below = int(np.sum(fd_angular_spectrum(params, m2q, k=n_j + 1).eigenvalues <= top + 1e-3))
        out.append(_record(f"angular-count n={_tag(n2_max)} m={_tag(m2q)}", "exact", n_j, below, 0.0))
    return out


def _count_checks(params, n2_max):
    out = []
    for n2 in model.principal_range(params, n2_max):
        sp = model.enumerate_spherical(params, n2)
        pb = model.enumerate_parabolic(params, n2)
        out.append(_record(f"count n={_tag(n2)}", "exact", len(sp), len(pb), 0.0))
        for m2q in model.allowed_m2q(params, n2):
            want = (n2 - model.m_plus2(params, m2q)) // 2
            got_s = sum(1 for s in sp if s.m2q == m2q)
            got_p = sum(1 for s in pb if s.m2q == m2q)
            out.append(_record(f"block n={_tag(n2)} m={_tag(m2q)} spherical", "exact", want, got_s, 0.0))
            out.append(_record(f"block n={_tag(n2)} m={_tag(m2q)} parabolic", "exact", want, got_p, 0.0))
    return out


def _all_states(params, n2_max, enum):
    return [s for n2 in model.principal_range(params, n2_max) for s in enum(params, n2)]


def _gram_defect(params, states):
    gram = np.zeros((len(states), len(states)), dtype=complex)
    ms = sorted({s.m2q for s in states})
    for m2q in ms:
        idx = [i for i, s in enumerate(states) if s.m2q == m2q]
        block = quad_overlap(params, [states[i] for i in idx], [states[i] for i in idx])
        gram[np.ix_(idx, idx)] = block
    return float(np.max(np.abs(gram - np.eye(len(states)))))


def _orthonormality_checks(params, n2_max, tol):
    sp = _all_states(params, n2_max, model.enumerate_spherical)
    pb = _all_states(params, n2_max, model.enumerate_parabolic)
    return [
        _record(f"spherical gram ({len(sp)} states)", "quadrature", 0.0, _gram_defect(params, sp), tol.quadrature),
        _record(f"parabolic gram ({len(pb)} states)", "quadrature", 0.0, _gram_defect(params, pb), tol.quadrature),
    ]


def _interbasis_checks(params, n2_max, tol):
    out = []
    for n2 in model.principal_range(params, n2_max):
        for m2q in model.allowed_m2q(params, n2):
            res = interbasis_matrix(params, n2, m2q)
            out.append(_record(f"interbasis n={_tag(n2)} m={_tag(m2q)}", "quadrature", 0.0, res.defect, tol.quadrature))
    return out


def radial_residual_grid(eps, nodes=RESIDUAL_NODES) -> Grid1D:
    return Grid1D.log_uniform(0.1 / eps, TAIL / eps, nodes)


def angular_residual_grid(nodes=RESIDUAL_NODES) -> Grid1D:
    return Grid1D.uniform(0.05, math.pi - 0.05, nodes)


def parabolic_residual_grid(eps, nodes=RESIDUAL_NODES) -> Grid1D:
    return Grid1D.log_uniform(0.05 / eps, 60 / eps, nodes)


def _residual_pair(name, apply, grid, func, eigenvalue, tol):
    ext = operators.richardson_residual(apply, grid, func, eigenvalue)
    order = operators.convergence_order(apply, grid, func, eigenvalue)
    out = [_record(f"residual {name}", "fd", 0.0, ext, tol.fd)]
    if not math.isnan(order):
        out.append(_record(f"order {name}", "order", 2.0, order, tol.order))
    return out


def _residual_checks(params, n2_max, tol):
    out = []
    seen_angular = set()
    for st in _all_states(params, n2_max, model.enumerate_spherical):
        eps = model.energy(params, st.m2q, st.n2).epsilon
        A = sph.separation_constant(params, st.j2, st.m2q)
        label = f"n={_tag(st.n2)} j={_tag(st.j2)} m={_tag(st.m2q)}"
        out += _residual_pair(
            f"radial {label}",
            lambda f, A=A: operators.apply_radial(params, A, f),
            radial_residual_grid(eps),
            lambda r, st=st: sph.radial_wavefunction(params, st.n2, st.j2, st.m2q, r),
            eps * eps,
            tol,
        )
        if (st.j2, st.m2q) in seen_angular:
            continue
        seen_angular.add((st.j2, st.m2q))
        out += _residual_pair(
            f"angular j={_tag(st.j2)} m={_tag(st.m2q)}",
            lambda f, st=st: operators.apply_angular(params, st.m2q, f),
            angular_residual_grid(),
            lambda t, st=st: sph.ring_harmonic(params, st.j2, st.m2q, t, 0.0).real,
            A,
            tol,
        )
    for st in _all_states(params, n2_max, model.enumerate_parabolic):
        ex = model.derived_exponents(params, st.m2q)
        eps = par.parabolic_epsilon(params, st)
        E = -eps * eps / 2
        beta = par.beta_eigenvalue(params, st)
        grid = parabolic_residual_grid(eps)
        label = f"n1={st.n1} n2={st.n2p} m={_tag(st.m2q)}"
        out += _residual_pair(
            f"xi {label}",
            lambda f, st=st, E=E: operators.apply_parabolic_xi(params, st.m2q, E, f),
            grid,
            lambda x, st=st, ex=ex, eps=eps: par.phi_factor(st.n1, ex.m1, eps, x),
            beta,
            tol,
        )
        out += _residual_pair(
            f"eta {label}",
            lambda f, st=st, E=E: operators.apply_parabolic_eta(params, st.m2q, E, f),
            grid,
            lambda x, st=st, ex=ex, eps=eps: par.phi_factor(st.n2p, ex.m2, eps, x),
            -beta,
            tol,
        )
    return out


def x_operator_grid(eps, nodes=X_NODES) -> Grid1D:
    return Grid1D.log_uniform(1e-3 / eps, 60 / eps, nodes)


def fd_beta(params: ModelParams, state: ParabolicState, grid: Grid1D | None = None, extrapolate=True) -> float:
    """beta from applying X on a product grid to the parabolic state (Rayleigh quotient)."""
    ex = model.derived_exponents(params, state.m2q)
    eps = par.parabolic_epsilon(params, state)
    grid = grid or x_operator_grid(eps)

    def estimate(g):
        xi = g.nodes[:, None]
        eta = g.nodes[None, :]
        f = par.phi_factor(state.n1, ex.m1, eps, xi) * par.phi_factor(state.n2p, ex.m2, eps, eta)
        applied = operators.apply_x_reduced(params, state.m2q, operators.SampledFunction2D(g, g, f))
        return operators.rayleigh_quotient(g, g, f, applied)

    fine = estimate(grid)
    if not extrapolate:
        return fine
    return (4 * fine - estimate(grid.coarsened())) / 3


def _x_checks(params, n2_max, tol):
    out = []
    for st in _all_states(params, n2_max, model.enumerate_parabolic):
        beta = par.beta_eigenvalue(params, st)
        out.append(_record(f"X beta n1={st.n1} n2={st.n2p} m={_tag(st.m2q)}", "operator", beta, fd_beta(params, st), tol.operator))
    rng = np.random.default_rng(12345)
    pts = rng.normal(size=(64, 3))
    dev = max(operators.x_cartesian_consistency(params, m2q, pts) for m2q in model.allowed_m2q(params, n2_max))
    out.append(_record("X cartesian vs parabolic potential", "identity", 0.0, dev, tol.identity))
    return out


def _identity_checks(params, n2_max, tol):
    out = []
    xs = np.linspace(-0.95, 0.95, 9)
    dev = 0.0
    for n in range(0, 9):
        for lam in (0.3, 1.0, 2.5):
            lhs = pochhammer(lam + 0.5, n) * gegenbauer_c(n, lam, xs)
            rhs = pochhammer(2 * lam, n) * jacobi_p(n, lam - 0.5, lam - 0.5, xs)
            dev = max(dev, float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1e-300))))
    out.append(_record("gegenbauer-jacobi connection", "identity", 0.0, dev, tol.identity))
    dev = 0.0
    for l in range(0, 8):
        for m in range(0, l + 1):
            lhs = assoc_legendre_p(l, m, xs)
            rhs = (-2) ** m / math.sqrt(math.pi) * math.gamma(m + 0.5) * (1 - xs * xs) ** (m / 2) * gegenbauer_c(l - m, m + 0.5, xs)
            scale = np.maximum(np.abs(rhs), 1e-12)
            dev = max(dev, float(np.max(np.abs(lhs - rhs) / scale)))
    out.append(_record("legendre-gegenbauer connection", "identity", 0.0, dev, tol.identity))
    theta = np.linspace(0.1, math.pi - 0.1, 20)
    if params.s2 == 0 and params.c1 == params.c2:
        delta = model.derived_exponents(params, 0).delta1
        dev = 0.0
        for j in range((n2_max - 2) // 2 + 1):
            for m in range(-j, j + 1):
                dm = model.derived_exponents(params, 2 * m).delta1
                z = sph.ring_harmonic(params, 2 * j, 2 * m, theta, 0.4)
                h = sph.gegenbauer_ring_harmonic(j, m, dm, theta, 0.4)
                dev = max(dev, float(np.max(np.abs(z - h))))
        out.append(_record(f"gegenbauer form of Z (delta={delta:.6g} at m=0)", "identity", 0.0, dev, tol.identity))
        if params.c1 == 0:
            dev = 0.0
            for j in range((n2_max - 2) // 2 + 1):
                for m in range(-j, j + 1):
                    z = sph.ring_harmonic(params, 2 * j, 2 * m, theta, 0.4)
                    y = (-1) ** abs(m) * sph.legendre_harmonic(j, m, theta, 0.4)
                    dev = max(dev, float(np.max(np.abs(z - y))))
            out.append(_record("Z equals surface harmonic Y_jm", "identity", 0.0, dev, tol.identity))
    roundtrip = 0.0
    econs = 0.0
    for st in _all_states(params, n2_max, model.enumerate_parabolic):
        eps = model.energy(params, st.m2q, st.principal_n2(params)).epsilon
        beta = par.beta_eigenvalue(params, st)
        n1, n2 = par.parabolic_numbers_from_beta(params, st.m2q, beta, eps)
        roundtrip = max(roundtrip, abs(n1 - st.n1), abs(n2 - st.n2p))
        econs = max(econs, abs(par.parabolic_epsilon(params, st) / eps - 1))
    out.append(_record("parabolic numbers from beta and eps", "identity", 0.0, roundtrip, tol.identity))
    out.append(_record("parabolic vs spherical energy", "identity", 0.0, econs, tol.identity))
    return out


def _prefactor_checks(params, n2_max, tol):
    """Norm of each parabolic state with the sqrt(2) eps^2 prefactor as printed."""
    worst = 0.0
    for st in _all_states(params, n2_max, model.enumerate_parabolic):
        norm = quad_overlap(params, [st], [st])[0, 0].real
        worst = max(worst, abs(norm - 1))
    return [_record("parabolic prefactor sqrt(2) eps^2 (norm - 1)", "quadrature", 0.0, worst, tol.quadrature)]


def run_verification(params: ModelParams, n2_max, tolerances: Tolerances | None = None) -> VerificationReport:
    """Run every oracle check for states with principal number up to n_max.

    Failures are recorded in the report, never raised.
    """
    tol = tolerances or Tolerances()
    n2_max = model._check_principal(params, n2_max)
    report = VerificationReport(params, n2_max, tol)
    for step in (
        _count_checks,
        _identity_checks,
        _spectrum_checks,
        _angular_checks,
        _orthonormality_checks,
        _prefactor_checks,
        _interbasis_checks,
        _residual_checks,
        _x_checks,
    ):
        if step is _count_checks:
            report.checks += step(params, n2_max)
        else:
            report.checks += step(params, n2_max, tol)
    return report
