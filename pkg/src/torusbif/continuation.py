"""Pseudo-arclength continuation of branches bifurcating from the trivial one.

Branch switching pins the kernel coordinate at a small onset amplitude and
solves for the remaining coordinates and the parameter; afterwards the branch
is traced with a tangent predictor and a Newton corrector on the residual
extended by the arclength constraint.  Kernels with symmetry-induced
multiplicity are cut down by restricting to an isotropy subspace
(``axisymmetric`` keeps the m = 0 modes), which must leave a one-dimensional
kernel at the chosen crossing.

The trace stops when the Sobolev norm reaches the target (the norm-growth
witness), when the step budget runs out, or when the branch re-enters a small
neighbourhood of the trivial solution, which is flagged rather than treated as
success.  Reaching a norm target is a finite proxy only; unboundedness itself
is not a finitely checkable property.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .galerkin import (
    BranchState,
    GalerkinBasis,
    NonlinearitySpec,
    h1_norm,
    make_state,
    residual_coeffs,
    residual_jacobian,
    residual_lambda_derivative,
    trivial_branch_crossings,
)

ISOTROPY_RESTRICTIONS = ("axisymmetric",)


@dataclass
class ContinuationOptions:
    step: float = 0.05
    max_steps: int = 500
    target_norm: float = 1.0
    isotropy_restriction: str | None = None
    onset_amplitude: float = 1e-3
    newton_tol: float = 1e-10
    max_newton_iter: int = 25
    min_step: float = 1e-6
    max_step: float = 0.2


@dataclass
class BranchResult:
    states: list[BranchState]
    outcome: str  # reached_target | returned_to_trivial | incomplete


class ContinuationError(RuntimeError):
    """Newton failure at the minimum step; carries the partial branch."""

    def __init__(self, message: str, states: list[BranchState]):
        super().__init__(message)
        self.states = states


def _active_indices(basis: GalerkinBasis, p: int, restriction: str | None) -> np.ndarray:
    if restriction is None:
        return np.arange(p * basis.n_modes)
    if restriction not in ISOTROPY_RESTRICTIONS:
        raise ValueError(f"unknown isotropy restriction {restriction!r}")
    keep = [i for i, (k, m) in enumerate(basis.modes) if m == 0]
    return np.concatenate([np.asarray(keep) + comp * basis.n_modes for comp in range(p)])


def continue_branch(
    basis: GalerkinBasis,
    nl: NonlinearitySpec,
    sig,
    crossing,
    opts: ContinuationOptions | None = None,
) -> BranchResult:
    """Trace the branch bifurcating at a trivial-branch crossing.

    Raises ``ValueError`` when the crossing is not a singular value of the
    trivial-branch linearization or when the restricted kernel is not
    one-dimensional, and ``ContinuationError`` when the corrector cannot
    converge even at the minimum step.
    """
    opts = opts or ContinuationOptions()
    lam0 = Fraction(crossing)
    p = len(sig.a)
    crossings = {c.lam: c for c in trivial_branch_crossings(basis, sig, (lam0, lam0))}
    if lam0 not in crossings:
        raise ValueError(f"{crossing} is not a crossing of the trivial branch")

    active = _active_indices(basis, p, opts.isotropy_restriction)
    active_set = set(int(i) for i in active)
    kernel_flat = [
        comp * basis.n_modes + basis.mode_index[(k, m)]
        for comp, k, m in crossings[lam0].modes
    ]
    kernel_active = [i for i in kernel_flat if i in active_set]
    if len(kernel_active) != 1:
        raise ValueError(
            f"restricted kernel is {len(kernel_active)}-dimensional; apply isotropy restriction"
        )
    pos_of = {int(idx): pos for pos, idx in enumerate(active)}
    k_pos = pos_of[kernel_active[0]]
    n_act = active.size
    lam0f = float(lam0)
    delta = opts.onset_amplitude

    def embed(x: np.ndarray) -> np.ndarray:
        full = np.zeros(p * basis.n_modes)
        full[active] = x
        return full

    def F_and_J(x, lam, constraint_row, constraint_val):
        full = embed(x)
        R = residual_coeffs(basis, nl, sig, full, lam)[active]
        J = residual_jacobian(basis, nl, sig, full, lam, active)
        dlam = residual_lambda_derivative(basis, nl, sig, full, lam, active)
        F = np.concatenate([R, [constraint_val(x, lam)]])
        M = np.zeros((n_act + 1, n_act + 1))
        M[:n_act, :n_act] = J
        M[:n_act, n_act] = dlam
        M[n_act, :] = constraint_row(x, lam)
        return F, M

    def newton(x, lam, constraint_row, constraint_val):
        for _ in range(opts.max_newton_iter):
            F, M = F_and_J(x, lam, constraint_row, constraint_val)
            nrm = float(np.max(np.abs(F)))
            if np.isfinite(nrm) and nrm < opts.newton_tol:
                return x, lam, True
            try:
                dz = np.linalg.solve(M, -F)
            except np.linalg.LinAlgError:
                return x, lam, False
            if not np.all(np.isfinite(dz)):
                return x, lam, False
            x = x + dz[:n_act]
            lam = lam + dz[n_act]
        F, _ = F_and_J(x, lam, constraint_row, constraint_val)
        nrm = float(np.max(np.abs(F)))
        return x, lam, bool(np.isfinite(nrm) and nrm < opts.newton_tol)

    # branch switching: pin the kernel amplitude at delta
    pin_row = lambda x, lam: np.concatenate([np.eye(n_act)[k_pos], [0.0]])
    pin_val = lambda x, lam: x[k_pos] - delta
    x0 = np.zeros(n_act)
    x0[k_pos] = delta
    x1, lam1, ok = newton(x0, lam0f, pin_row, pin_val)
    if not ok:
        raise ContinuationError("failed to leave the trivial branch at the crossing", [])

    states: list[BranchState] = []
    s_total = float(np.sqrt(np.dot(x1, x1) + (lam1 - lam0f) ** 2))
    states.append(make_state(basis, embed(x1), lam1, s_total))

    def stop_outcome() -> str | None:
        st = states[-1]
        if st.h1_norm >= opts.target_norm:
            return "reached_target"
        if st.h1_norm < delta / 10.0:
            return "returned_to_trivial"
        return None

    outcome = stop_outcome()
    if outcome is None and len(states) >= opts.max_steps:
        outcome = "incomplete"
    if outcome is not None:
        return BranchResult(states, outcome)

    def tangent_at(x, lam, prev_t):
        full = embed(x)
        J = residual_jacobian(basis, nl, sig, full, lam, active)
        dlam = residual_lambda_derivative(basis, nl, sig, full, lam, active)
        M = np.zeros((n_act + 1, n_act + 1))
        M[:n_act, :n_act] = J
        M[:n_act, n_act] = dlam
        M[n_act, :] = prev_t
        rhs = np.zeros(n_act + 1)
        rhs[n_act] = 1.0
        try:
            t = np.linalg.solve(M, rhs)
        except np.linalg.LinAlgError:
            t = prev_t.copy()
        nrm = float(np.linalg.norm(t))
        if not np.isfinite(nrm) or nrm == 0.0:
            t = prev_t.copy()
            nrm = float(np.linalg.norm(t))
        return t / nrm

    prev = np.concatenate([x1, [lam1]])
    first_dir = np.concatenate([x1, [lam1 - lam0f]])
    first_dir /= np.linalg.norm(first_dir)
    tangent = tangent_at(x1, lam1, first_dir)

    h = min(max(opts.step, opts.min_step), opts.max_step)
    while True:
        z_pred = prev + h * tangent
        t_fixed = tangent.copy()
        z_base = prev.copy()
        h_now = h
        arc_row = lambda x, lam: t_fixed
        arc_val = lambda x, lam: float(
            np.dot(t_fixed[:n_act], x - z_base[:n_act]) + t_fixed[n_act] * (lam - z_base[n_act]) - h_now
        )
        x_new, lam_new, ok = newton(z_pred[:n_act].copy(), float(z_pred[n_act]), arc_row, arc_val)
        if not ok:
            if h <= opts.min_step:
                raise ContinuationError(
                    f"Newton corrector failed at minimum step {opts.min_step}", states
                )
            h = max(h / 2.0, opts.min_step)
            continue
        z_new = np.concatenate([x_new, [lam_new]])
        s_total += float(np.linalg.norm(z_new - prev))
        states.append(make_state(basis, embed(x_new), lam_new, s_total))
        tangent = tangent_at(x_new, lam_new, tangent)
        prev = z_new
        h = min(h * 1.4, opts.max_step)

        outcome = stop_outcome()
        if outcome is not None:
            return BranchResult(states, outcome)
        if len(states) >= opts.max_steps:
            return BranchResult(states, "incomplete")
