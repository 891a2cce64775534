"""Acceptance sweeps: one callable per criterion, each returning a result with
its pass flag, timing, and a one-line summary.  The CLI ``selftest`` command
and the acceptance test module both run these."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import spaces
from .bifurcation import (
    SystemSignature,
    bifurcation_index,
    bifurcation_levels,
    cancellation_impossible,
    coeff_formula_check,
)
from .continuation import ContinuationOptions, continue_branch
from .euler_ring import UNIT, ZERO, EulerRingElement
from .galerkin import (
    GalerkinBasis,
    NonlinearitySpec,
    gradient_check,
    make_state,
    node_variance,
    trivial_branch_crossings,
)
from .spaces import SymmetricSpaceData, spectrum_up_to
from .weights import RestrictedWeight, canonicalize


@dataclass
class CriterionResult:
    number: int
    slug: str
    passed: bool
    detail: str
    elapsed: float


def format_result(r: CriterionResult) -> str:
    status = "PASS" if r.passed else "FAIL"
    return f"[{status}] criterion {r.number:02d} {r.slug}: {r.detail} ({r.elapsed:.2f}s)\n"


def _result(number, slug, started, ok, detail, limit=None) -> CriterionResult:
    elapsed = time.perf_counter() - started
    if limit is not None and elapsed >= limit:
        ok = False
        detail += f"; runtime {elapsed:.2f}s exceeded {limit}s"
    return CriterionResult(number, slug, ok, detail, elapsed)


def _sweep_spaces():
    return (
        SymmetricSpaceData.sphere(2),
        SymmetricSpaceData.sphere(3),
        SymmetricSpaceData.product_of_spheres([2, 2]),
        SymmetricSpaceData.product_of_spheres([2, 3]),
    )


def _signatures(max_p: int):
    return [
        SystemSignature.from_counts(np_, nm)
        for p in range(1, max_p + 1)
        for np_ in range(p + 1)
        for nm in (p - np_,)
    ]


# ---------------------------------------------------------------------------


def criterion_01_spectrum_exactness(seed=0) -> CriterionResult:
    """Sphere spectra through the spectrum command match k(k+n-1) exactly."""
    from .cli import cmd_spectrum

    spaces.clear_caches()
    t0 = time.perf_counter()
    ok = True
    checked = 0
    for n in (2, 3, 4):
        raw = {"space": {"kind": "sphere", "n": n}, "cutoff": 200}
        csv = cmd_spectrum(raw, None, "csv")
        rows = csv.strip().splitlines()[1:]
        got = [(int(r.split(",")[0]), int(r.split(",")[1]), r.split(",")[2]) for r in rows]
        expected = []
        k = 0
        while k * (k + n - 1) <= 200:
            expected.append((k * (k + n - 1), 1, f"({k})"))
            k += 1
        ok = ok and got == expected
        checked += len(expected)
    return _result(1, "spectrum-exactness", t0, ok, f"{checked} eigenvalues over S^2,S^3,S^4", limit=1.0)


def criterion_02_product_degeneracy(seed=0) -> CriterionResult:
    """S^2 x S^2 groups degenerate weights correctly at levels 2 and 12."""
    t0 = time.perf_counter()
    space = SymmetricSpaceData.product_of_spheres([2, 2])
    levels = {lv.eigenvalue: lv for lv in spectrum_up_to(space, 12)}
    lv2 = levels.get(Fraction(2))
    lv12 = levels.get(Fraction(12))
    ok = lv2 is not None and {a.coords for a in lv2.alphas} == {(1, 0), (0, 1)}
    ok = ok and lv12 is not None and {a.coords for a in lv12.alphas} == {(3, 0), (0, 3), (2, 2)}
    ok = ok and lv12.real_dim == 39
    return _result(2, "product-degeneracy", t0, ok, "levels 2 and 12 on S^2 x S^2")


def criterion_03_first_appearance(seed=0) -> CriterionResult:
    """Each plane R[1,alpha] enters at its own level with multiplicity one."""
    t0 = time.perf_counter()
    ok = True
    checked = 0
    for space in _sweep_spaces():
        levels = spectrum_up_to(space, 30)
        for i, lv in enumerate(levels):
            for alpha in lv.alphas:
                if alpha.is_zero():
                    continue
                h = canonicalize(alpha)
                checked += 1
                if lv.torus_decomp.multiplicity(h) != 1:
                    ok = False
                if any(levels[j].torus_decomp.multiplicity(h) != 0 for j in range(i)):
                    ok = False
    return _result(3, "first-appearance", t0, ok, f"{checked} weights over 4 spaces, cutoff 30", limit=10.0)


def criterion_04_coefficient_formula(seed=0) -> CriterionResult:
    """Witness coefficients match the closed form; lower levels vanish."""
    t0 = time.perf_counter()
    ok = True
    formula_checks = 0
    vanish_checks = 0
    for space in _sweep_spaces():
        levels = spectrum_up_to(space, 30)
        dims = [lv.real_dim for lv in levels]
        higher_ids = [
            [(canonicalize(a)) for j in range(i + 1, len(levels)) for a in levels[j].alphas]
            for i in range(len(levels))
        ]
        for sig in _signatures(5):
            for sign, n in ((1, sig.n_minus), (-1, sig.n_plus)):
                if n == 0:
                    continue
                for i, lv in enumerate(levels):
                    if lv.eigenvalue == 0:
                        continue
                    index = bifurcation_index(space, sig, sign * lv.eigenvalue)
                    d_w = sum(dims[:i])
                    closed = (-1) ** ((d_w + lv.real_dim) * n + 1) * n
                    for alpha in lv.alphas:
                        formula_checks += 1
                        if index.coeff_at(canonicalize(alpha)) != closed:
                            ok = False
                        got = coeff_formula_check(space, sig, alpha, sign)
                        if got != (closed, closed):
                            ok = False
                    for h in higher_ids[i]:
                        vanish_checks += 1
                        if index.coeff_at(h) != 0:
                            ok = False
    detail = f"{formula_checks} coefficient identities, {vanish_checks} vanishing checks"
    return _result(4, "coefficient-formula", t0, ok, detail, limit=30.0)


def criterion_05_impossibility(seed=0) -> CriterionResult:
    """(-1)^{parity (n- - n+)} n- is never -n+ for positive counts."""
    t0 = time.perf_counter()
    ok = all(
        cancellation_impossible(nm, np_, parity)
        for nm in range(1, 7)
        for np_ in range(1, 7)
        for parity in (0, 1)
    )
    return _result(5, "impossibility-identity", t0, ok, "n-, n+ in 1..6, both parities")


def criterion_06_zero_level(seed=0) -> CriterionResult:
    """index(0) is +-2I for odd p and vanishes for even p."""
    t0 = time.perf_counter()
    space = SymmetricSpaceData.sphere(2)
    ok = True
    for sig in _signatures(7):
        index = bifurcation_index(space, sig, 0)
        expected = (-1) ** sig.n_minus - (-1) ** sig.n_plus
        if index != UNIT.scaled(expected):
            ok = False
        if sig.p % 2 == 1 and (index.is_zero() or abs(index.unit) != 2):
            ok = False
        if sig.p % 2 == 0 and not index.is_zero():
            ok = False
    return _result(6, "zero-level-index", t0, ok, "all signatures with p <= 7")


def _random_element(rng: random.Random, pool, truncated=False) -> EulerRingElement:
    support = rng.sample(pool, rng.randint(0, min(8, len(pool))))
    codim1 = tuple((h, rng.randint(-9, 9)) for h in support)
    return EulerRingElement(rng.randint(-9, 9), codim1, truncated)


def criterion_07_euler_axioms(seed=0) -> CriterionResult:
    """Randomized ring laws on truncated elements, 10^4 cases per law."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    pool = []
    seen = set()
    while len(pool) < 12:
        coords = (rng.randint(-4, 4), rng.randint(-4, 4))
        if coords == (0, 0):
            continue
        h = canonicalize(RestrictedWeight(coords))
        if h not in seen:
            seen.add(h)
            pool.append(h)
    cases = 10_000
    ok = True
    for _ in range(cases):
        x = _random_element(rng, pool)
        y = _random_element(rng, pool)
        z = _random_element(rng, pool)
        if x * y != y * x:
            ok = False
        if (x * y) * z != x * (y * z):
            ok = False
        if x * (y + z) != x * y + x * z:
            ok = False
        if UNIT * x != x or x * UNIT != x:
            ok = False
        if x + (-x) != ZERO or x + ZERO != x:
            ok = False
        u = EulerRingElement(rng.choice((1, -1)), x.codim1)
        if u * u.inverse() != UNIT:
            ok = False
        if not ok:
            break
    return _result(7, "euler-ring-axioms", t0, ok, f"{cases} randomized cases per law")


def criterion_08_gradient_check(seed=0) -> CriterionResult:
    """Residual matches central differences of the discrete functional."""
    t0 = time.perf_counter()
    basis = GalerkinBasis(8)
    nl = NonlinearitySpec.quartic()
    sig = SystemSignature((1, -1))
    rng = np.random.default_rng(seed)
    state = make_state(basis, 0.5 * rng.standard_normal(2 * basis.n_modes), 1.3)
    err = gradient_check(basis, nl, sig, state, epsilon=1e-5, n_samples=50, seed=seed)
    ok = err <= 1e-6
    return _result(8, "galerkin-gradient", t0, ok, f"max relative FD error {err:.2e}", limit=10.0)


def criterion_09_crossing_agreement(seed=0) -> CriterionResult:
    """Galerkin crossings equal the candidate bifurcation levels exactly."""
    t0 = time.perf_counter()
    basis = GalerkinBasis(8)
    space = SymmetricSpaceData.sphere(2)
    cutoff = Fraction(30)
    ok = True
    for sig in _signatures(3):
        crossings = [c.lam for c in trivial_branch_crossings(basis, sig, (-cutoff, cutoff))]
        levels = [bl.level for bl in bifurcation_levels(space, sig, cutoff)]
        if crossings != levels:
            ok = False
    return _result(9, "crossing-agreement", t0, ok, "all signatures with p <= 3, window [-30, 30]")


def criterion_10_branch_witness(seed=0) -> CriterionResult:
    """Axisymmetric branch from lambda = 2 grows to norm 1 and breaks symmetry."""
    t0 = time.perf_counter()
    basis = GalerkinBasis(8)
    nl = NonlinearitySpec.quartic()
    sig = SystemSignature((-1,))
    opts = ContinuationOptions(isotropy_restriction="axisymmetric", target_norm=1.0, max_steps=500)
    result = continue_branch(basis, nl, sig, 2, opts)
    ok = result.outcome == "reached_target" and len(result.states) <= 500
    ok = ok and all(st.h1_norm >= opts.onset_amplitude / 10.0 for st in result.states)
    ok = ok and all(
        node_variance(basis, st.coeffs) > 1e-8 * st.h1_norm**2 for st in result.states
    )
    detail = f"{result.outcome} in {len(result.states)} steps, final norm {result.states[-1].h1_norm:.3f}"
    return _result(10, "branch-witness", t0, ok, detail, limit=60.0)


CRITERIA = (
    criterion_01_spectrum_exactness,
    criterion_02_product_degeneracy,
    criterion_03_first_appearance,
    criterion_04_coefficient_formula,
    criterion_05_impossibility,
    criterion_06_zero_level,
    criterion_07_euler_axioms,
    criterion_08_gradient_check,
    criterion_09_crossing_agreement,
    criterion_10_branch_witness,
)


def run_all(seed: int = 0) -> list[CriterionResult]:
    return [fn(seed=seed) for fn in CRITERIA]
