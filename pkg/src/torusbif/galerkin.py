"""Spectral-Galerkin discretization of the variational problem on the unit
2-sphere.

The basis is the real orthonormal spherical harmonics Y_{k,m}, k <= K,
|m| <= k, with -Delta Y_{k,m} = k(k+1) Y_{k,m}.  Quadrature is a tensor rule,
Gauss-Legendre in cos(theta) times a uniform longitude grid, built with enough
nodes to integrate products of four basis functions exactly up to roundoff.

For coefficients c_{i,k,m} of u = (u_1, ..., u_p) the discrete functional is

    Phi(c, lam) = -1/2 sum_i a_i sum_{k,m} k(k+1) c_{i,k,m}^2
                  - lam/2 * sum |c|^2 - integral of h(u, lam),

and the residual returned here is its coefficient gradient

    R_{i,k,m} = -a_i k(k+1) c_{i,k,m} - lam c_{i,k,m} - <d_{u_i} h(u, lam), Y_{k,m}>.

The trivial branch u = 0 solves R = 0 for every lam; its linearization is
diagonal, so eigenvalue crossings are located exactly at lam = -a_i k(k+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.special import lpmv


def degree_eigenvalue(k: int) -> int:
    """Exact Laplace-Beltrami eigenvalue of degree-k harmonics on S^2."""
    return k * (k + 1)


class GalerkinBasis:
    """Real spherical-harmonic basis with product quadrature.

    Parameters
    ----------
    max_degree : int
        Largest harmonic degree K; the basis has (K+1)^2 modes.
    quad_margin : int
        Quadrature is exact for integrands of polynomial degree
        quad_margin * K; the default 4 covers a quartic nonlinearity.
    """

    def __init__(self, max_degree: int, quad_margin: int = 4):
        if max_degree < 0:
            raise ValueError("max_degree must be nonnegative")
        if quad_margin < 2:
            raise ValueError("quad_margin must be at least 2")
        K = int(max_degree)
        self.max_degree = K
        self.quad_degree = quad_margin * K
        n_theta = self.quad_degree // 2 + 1
        n_phi = self.quad_degree + 1

        x, wx = np.polynomial.legendre.leggauss(n_theta)
        phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
        X, PHI = np.meshgrid(x, phi, indexing="ij")
        self.node_x = X.ravel()              # cos(theta) at each node
        self.node_phi = PHI.ravel()
        W = np.repeat(wx, n_phi) * (2.0 * np.pi / n_phi)
        self.weights = W

        self.modes: tuple[tuple[int, int], ...] = tuple(
            (k, m) for k in range(K + 1) for m in range(-k, k + 1)
        )
        self.mode_index = {km: i for i, km in enumerate(self.modes)}
        self.eigenvalues = np.array([degree_eigenvalue(k) for k, _ in self.modes], dtype=float)

        self.values = np.empty((len(self.modes), self.node_x.size))
        for i, (k, m) in enumerate(self.modes):
            self.values[i] = _real_harmonic(k, m, self.node_x, self.node_phi)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def mass_error(self) -> float:
        """Largest deviation of the quadrature Gram matrix from the identity."""
        gram = (self.values * self.weights) @ self.values.T
        return float(np.max(np.abs(gram - np.eye(self.n_modes))))

    def integrate(self, node_values: np.ndarray) -> float:
        return float(np.dot(node_values, self.weights))

    def project(self, node_values: np.ndarray) -> np.ndarray:
        """Coefficients <f, Y_{k,m}> of nodal data, rows broadcast over modes."""
        return node_values @ (self.values * self.weights).T

    def evaluate(self, coeffs_block: np.ndarray) -> np.ndarray:
        """Nodal values of sum c_{k,m} Y_{k,m}; accepts (..., n_modes)."""
        return coeffs_block @ self.values


def _real_harmonic(k: int, m: int, x: np.ndarray, phi: np.ndarray) -> np.ndarray:
    am = abs(m)
    ratio = float(Fraction(math.factorial(k - am), math.factorial(k + am)))
    if m == 0:
        return math.sqrt((2 * k + 1) / (4.0 * math.pi)) * lpmv(0, k, x)
    c = math.sqrt((2 * k + 1) / (2.0 * math.pi) * ratio)
    if m > 0:
        return c * lpmv(am, k, x) * np.cos(am * phi)
    return c * lpmv(am, k, x) * np.sin(am * phi)


# ---------------------------------------------------------------------------
# nonlinearities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NonlinearitySpec:
    """Lower-order term h(u, lam) of the potential, given pointwise.

    ``value`` maps node values u of shape (p, nodes) to h(u) of shape (nodes,);
    ``grad`` returns d_u h of shape (p, nodes); ``hess`` (optional) returns the
    second derivative of shape (p, p, nodes).  ``grad_degree`` is the
    polynomial degree of grad in u when known, used to confirm the quadrature
    resolves the projected residual; ``lam_dependent`` marks an explicit
    parameter dependence of grad.  The gradient must vanish to second order at
    u = 0 so the trivial branch persists, and ``growth_exponent`` q must stay
    subcritical (on a 2-dimensional space any finite q works).
    """

    name: str
    value: Callable[[np.ndarray, float], np.ndarray]
    grad: Callable[[np.ndarray, float], np.ndarray]
    hess: Callable[[np.ndarray, float], np.ndarray] | None = None
    growth_exponent: float = 2.0
    grad_degree: int | None = None
    lam_dependent: bool = True

    def subcritical(self, dim_m: int = 2) -> bool:
        if dim_m <= 2:
            return math.isfinite(self.growth_exponent)
        return self.growth_exponent < 2 * dim_m / (dim_m - 2)

    @classmethod
    def quartic(cls) -> "NonlinearitySpec":
        """Defocusing quartic h(u) = -(|u|^2)^2 / 4 with cubic gradient."""

        def value(u, lam):
            return -0.25 * np.sum(u * u, axis=0) ** 2

        def grad(u, lam):
            return -np.sum(u * u, axis=0) * u

        def hess(u, lam):
            p, n = u.shape
            s = np.sum(u * u, axis=0)
            out = -2.0 * u[:, None, :] * u[None, :, :]
            out[np.arange(p), np.arange(p), :] -= s
            return out

        return cls(
            name="quartic",
            value=value,
            grad=grad,
            hess=hess,
            growth_exponent=4.0,
            grad_degree=3,
            lam_dependent=False,
        )

    @classmethod
    def zero(cls) -> "NonlinearitySpec":
        """h = 0, leaving the purely linear eigenvalue problem."""

        def value(u, lam):
            return np.zeros(u.shape[1])

        def grad(u, lam):
            return np.zeros_like(u)

        def hess(u, lam):
            p, n = u.shape
            return np.zeros((p, p, n))

        return cls(
            name="zero",
            value=value,
            grad=grad,
            hess=hess,
            growth_exponent=2.0,
            grad_degree=0,
            lam_dependent=False,
        )

    @classmethod
    def from_callables(cls, name, value, grad, hess=None, growth_exponent=2.0, grad_degree=None):
        return cls(name, value, grad, hess, growth_exponent, grad_degree)


NONLINEARITIES = {"quartic": NonlinearitySpec.quartic, "zero": NonlinearitySpec.zero}


# ---------------------------------------------------------------------------
# branch states and residual
# ---------------------------------------------------------------------------


@dataclass
class BranchState:
    """Galerkin coordinates of one point on a solution branch."""

    coeffs: np.ndarray
    lam: float
    arclength: float
    h1_norm: float


def h1_norm(basis: GalerkinBasis, coeffs: np.ndarray) -> float:
    """Sobolev norm: squared coefficients weighted by (k(k+1) + 1)."""
    c = np.asarray(coeffs, dtype=float)
    if c.size % basis.n_modes:
        raise ValueError("coefficient vector length must be a multiple of the mode count")
    blocks = c.reshape(-1, basis.n_modes)
    return float(np.sqrt(np.sum((basis.eigenvalues + 1.0) * blocks**2)))


def make_state(basis: GalerkinBasis, coeffs: np.ndarray, lam: float, arclength: float = 0.0) -> BranchState:
    c = np.array(coeffs, dtype=float)
    return BranchState(c, float(lam), float(arclength), h1_norm(basis, c))


def _check_resolution(basis: GalerkinBasis, nl: NonlinearitySpec) -> None:
    if nl.grad_degree is None:
        return
    needed = (nl.grad_degree + 1) * basis.max_degree
    if basis.quad_degree < needed:
        raise ValueError(
            f"quadrature underresolved: exact to degree {basis.quad_degree}, residual needs {needed}"
        )


def residual_coeffs(
    basis: GalerkinBasis,
    nl: NonlinearitySpec,
    sig,
    coeffs: np.ndarray,
    lam: float,
) -> np.ndarray:
    """Coefficient gradient of the discrete functional at (coeffs, lam)."""
    _check_resolution(basis, nl)
    a = np.asarray(sig.a, dtype=float)
    p = a.size
    c = np.asarray(coeffs, dtype=float).reshape(p, basis.n_modes)
    u = basis.evaluate(c)
    proj = basis.project(nl.grad(u, lam))
    R = -(a[:, None] * basis.eigenvalues[None, :] + lam) * c - proj
    return R.ravel()


def residual(basis: GalerkinBasis, nl: NonlinearitySpec, sig, state: BranchState) -> np.ndarray:
    """Residual at a branch state; zero exactly at discrete critical points."""
    expected = len(sig.a) * basis.n_modes
    if np.asarray(state.coeffs).size != expected:
        raise ValueError(f"coefficient vector has wrong length (expected {expected})")
    return residual_coeffs(basis, nl, sig, state.coeffs, state.lam)


def energy(basis: GalerkinBasis, nl: NonlinearitySpec, sig, coeffs: np.ndarray, lam: float) -> float:
    """Discrete functional whose coefficient gradient is the residual."""
    a = np.asarray(sig.a, dtype=float)
    c = np.asarray(coeffs, dtype=float).reshape(a.size, basis.n_modes)
    quad = -0.5 * np.sum(a[:, None] * basis.eigenvalues[None, :] * c**2)
    quad -= 0.5 * lam * np.sum(c**2)
    u = basis.evaluate(c)
    return float(quad - basis.integrate(nl.value(u, lam)))


def residual_jacobian(
    basis: GalerkinBasis,
    nl: NonlinearitySpec,
    sig,
    coeffs: np.ndarray,
    lam: float,
    active: np.ndarray,
) -> np.ndarray:
    """Jacobian of the residual restricted to the active coordinate set."""
    a = np.asarray(sig.a, dtype=float)
    p = a.size
    c = np.asarray(coeffs, dtype=float).reshape(p, basis.n_modes)
    diag_full = (-(a[:, None] * basis.eigenvalues[None, :] + lam)).ravel()
    n_act = active.size
    J = np.zeros((n_act, n_act))
    J[np.arange(n_act), np.arange(n_act)] = diag_full[active]
    if nl.hess is not None:
        u = basis.evaluate(c)
        H = nl.hess(u, lam)  # (p, p, nodes)
        Yw = basis.values * basis.weights
        comp = active // basis.n_modes
        mode = active % basis.n_modes
        for i in range(p):
            rows = np.nonzero(comp == i)[0]
            if rows.size == 0:
                continue
            for j in range(p):
                cols = np.nonzero(comp == j)[0]
                if cols.size == 0:
                    continue
                block = (Yw[mode[rows]] * H[i, j]) @ basis.values[mode[cols]].T
                J[np.ix_(rows, cols)] -= block
        return J
    # no analytic second derivative: difference the residual columnwise
    base = np.asarray(coeffs, dtype=float).copy()
    for col, idx in enumerate(active):
        h = 1e-6 * max(1.0, abs(base[idx]))
        cp = base.copy()
        cp[idx] += h
        cm = base.copy()
        cm[idx] -= h
        deriv = (residual_coeffs(basis, nl, sig, cp, lam) - residual_coeffs(basis, nl, sig, cm, lam)) / (2 * h)
        J[:, col] = deriv[active]
    return J


def residual_lambda_derivative(
    basis: GalerkinBasis,
    nl: NonlinearitySpec,
    sig,
    coeffs: np.ndarray,
    lam: float,
    active: np.ndarray,
) -> np.ndarray:
    if not nl.lam_dependent:
        return -np.asarray(coeffs, dtype=float)[active]
    h = 1e-6 * max(1.0, abs(lam))
    rp = residual_coeffs(basis, nl, sig, coeffs, lam + h)
    rm = residual_coeffs(basis, nl, sig, coeffs, lam - h)
    return ((rp - rm) / (2 * h))[active]


def gradient_check(
    basis: GalerkinBasis,
    nl: NonlinearitySpec,
    sig,
    state: BranchState,
    epsilon: float,
    n_samples: int = 50,
    seed: int = 0,
) -> float:
    """Largest relative mismatch between central finite differences of the
    discrete functional and the residual, over a random coordinate sample.

    Parameters
    ----------
    epsilon : float
        Central difference step, required in [1e-8, 1e-3].
    n_samples : int
        Number of sampled coordinates (at least 50 by default; capped at the
        total coordinate count).
    """
    if not (1e-8 <= epsilon <= 1e-3):
        raise ValueError("epsilon must lie in [1e-8, 1e-3]")
    r = residual(basis, nl, sig, state)
    total = r.size
    rng = np.random.default_rng(seed)
    count = min(n_samples, total)
    sample = rng.choice(total, size=count, replace=False)
    worst = 0.0
    base = np.asarray(state.coeffs, dtype=float)
    for idx in sample:
        cp = base.copy()
        cp[idx] += epsilon
        cm = base.copy()
        cm[idx] -= epsilon
        fd = (energy(basis, nl, sig, cp, state.lam) - energy(basis, nl, sig, cm, state.lam)) / (2 * epsilon)
        err = abs(fd - r[idx]) / max(1.0, abs(r[idx]))
        worst = max(worst, err)
    return worst


# ---------------------------------------------------------------------------
# trivial-branch crossings and torus action
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    """Parameter value where the trivial-branch linearization is singular."""

    lam: Fraction
    modes: tuple[tuple[int, int, int], ...]  # (component, degree, order)


def trivial_branch_crossings(basis: GalerkinBasis, sig, window) -> tuple[Crossing, ...]:
    """Exact crossing values lam = -a_i k(k+1) inside the closed window, with
    the kernel modes at each; no tolerance enters since the linearization is
    diagonal in this basis."""
    lo, hi = (Fraction(window[0]), Fraction(window[1]))
    if lo > hi:
        raise ValueError("window must be ordered")
    found: dict[Fraction, list[tuple[int, int, int]]] = {}
    for i, ai in enumerate(sig.a):
        for k in range(basis.max_degree + 1):
            lam = Fraction(-ai * degree_eigenvalue(k))
            if lo <= lam <= hi:
                found.setdefault(lam, []).extend((i, k, m) for m in range(-k, k + 1))
    return tuple(Crossing(lam, tuple(sorted(found[lam]))) for lam in sorted(found))


def rotate_coeffs(basis: GalerkinBasis, coeffs: np.ndarray, angle: float) -> np.ndarray:
    """Coefficient action of the rotation u(theta, phi) -> u(theta, phi - angle):
    each ((k,m),(k,-m)) pair turns by m * angle."""
    c = np.asarray(coeffs, dtype=float).reshape(-1, basis.n_modes).copy()
    for (k, m), idx in basis.mode_index.items():
        if m <= 0:
            continue
        jdx = basis.mode_index[(k, -m)]
        cosw, sinw = math.cos(m * angle), math.sin(m * angle)
        cm, cneg = c[:, idx].copy(), c[:, jdx].copy()
        c[:, idx] = cosw * cm + sinw * cneg
        c[:, jdx] = -sinw * cm + cosw * cneg
    return c.reshape(np.asarray(coeffs).shape)


def node_variance(basis: GalerkinBasis, coeffs: np.ndarray) -> float:
    """Largest quadrature variance of a solution component; zero exactly for
    constants, used as the nonconstancy witness."""
    c = np.asarray(coeffs, dtype=float).reshape(-1, basis.n_modes)
    u = basis.evaluate(c)
    area = float(np.sum(basis.weights))
    mean = (u @ basis.weights) / area
    var = ((u - mean[:, None]) ** 2) @ basis.weights / area
    return float(np.max(var))
