"""Equivariant bifurcation indices in the truncated Euler ring, and
unboundedness certificates for the bifurcating continua.

For a system of p equations with Laplacian signs a_i in {-1, +1} (n_+ of them
positive, n_- negative), the trivial branch loses invertibility exactly on

    Lambda = sigma        if n_- > 0 and n_+ = 0,
             -sigma       if n_+ > 0 and n_- = 0,
             sigma U -sigma otherwise,

where sigma is the spectrum of -Delta.  At a nonzero candidate level the index
is a product of degrees of -Id on the unit balls of the eigenspace V at that
level and the span W of all lower eigenspaces:

    index(+lam) = deg(W)^{n_-} * (deg(V)^{n_-} - I),
    index(-lam) = deg(W + V)^{-n_+} * (deg(V)^{n_+} - I),
    index(0)    = ((-1)^{n_-} - (-1)^{n_+}) I,

with deg the sign (-1)^{k0} times (I - sum of plane multiplicities).  The
coefficient of the subgroup id of alpha in index(+-lambda_alpha) has the closed
form (-1)^{(dim W + dim V) n + 1} * n with n the relevant count n_-/n_+, and it
vanishes at every strictly lower level; a certificate records these
coefficients and the integer identity that rules out cancellation, which is
what forces any bounded return to the trivial branch into a contradiction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .euler_ring import UNIT, EulerRingElement
from .jsonio import frac_from_json, frac_to_json
from .spaces import SymmetricSpaceData, TorusRepDecomposition, eigenvalue_of, spectrum_up_to
from .weights import RestrictedWeight, SubgroupId, canonicalize


@dataclass(frozen=True)
class SystemSignature:
    """Ordered Laplacian signs (a_1, ..., a_p) of the system."""

    a: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        if not a:
            raise ValueError("signature must be nonempty")
        if any(x not in (-1, 1) for x in a):
            raise ValueError("signature entries must be +1 or -1")
        object.__setattr__(self, "a", a)

    @classmethod
    def from_counts(cls, n_plus: int, n_minus: int) -> "SystemSignature":
        return cls((1,) * n_plus + (-1,) * n_minus)

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def n_plus(self) -> int:
        return sum(1 for x in self.a if x == 1)

    @property
    def n_minus(self) -> int:
        return sum(1 for x in self.a if x == -1)


@dataclass(frozen=True)
class BifurcationLevel:
    """Candidate level with its kernel dimension and index."""

    level: Fraction
    kernel_dim: int
    index: EulerRingElement

    def to_json(self) -> dict:
        return {
            "level": frac_to_json(self.level),
            "kernel_dim": self.kernel_dim,
            "index": self.index.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "BifurcationLevel":
        return cls(
            frac_from_json(data["level"]),
            int(data["kernel_dim"]),
            EulerRingElement.from_json(data["index"]),
        )


@dataclass(frozen=True)
class UnboundednessCertificate:
    """Coefficient ledger showing that the continuum from a level cannot close
    up on the trivial branch, hence is unbounded.

    For a nonzero level the witness is the subgroup id of a highest weight
    realizing |level|; ``ledger`` lists the witness coefficient of the index at
    every candidate level of maximal absolute value, and their sum is nonzero.
    For level zero the witness is absent and the ledger holds the unit
    coefficient of index(0).
    """

    level: Fraction
    witness: SubgroupId | None
    ledger: tuple[tuple[Fraction, int], ...]
    conclusion: str
    symmetry_breaking: bool
    unbounded: bool = True

    def coefficient_sum(self) -> int:
        return sum(c for _, c in self.ledger)

    def to_json(self) -> dict:
        return {
            "level": frac_to_json(self.level),
            "witness": None if self.witness is None else self.witness.canonical.to_json(),
            "ledger": [{"level": frac_to_json(lv), "coeff": c} for lv, c in self.ledger],
            "conclusion": self.conclusion,
            "unbounded": self.unbounded,
            "symmetry_breaking": self.symmetry_breaking,
        }

    @classmethod
    def from_json(cls, data) -> "UnboundednessCertificate":
        witness = data.get("witness")
        return cls(
            frac_from_json(data["level"]),
            None if witness is None else SubgroupId.from_json(witness),
            tuple((frac_from_json(e["level"]), int(e["coeff"])) for e in data["ledger"]),
            data["conclusion"],
            bool(data["symmetry_breaking"]),
            bool(data["unbounded"]),
        )


# ---------------------------------------------------------------------------
# index computation
# ---------------------------------------------------------------------------


def neg_identity_degree(decomp: TorusRepDecomposition) -> EulerRingElement:
    """Degree of -Id on the unit ball of the representation with the given
    block multiplicities: (-1)^{k0} (I - sum_mu k_mu [T/H_mu]), truncated."""
    sign = -1 if decomp.k0 % 2 else 1
    codim1 = tuple((h, -sign * m) for h, m in decomp.mults)
    return EulerRingElement(sign, codim1, truncated=True)


def _split_levels(space: SymmetricSpaceData, level: Fraction) -> tuple[TorusRepDecomposition, TorusRepDecomposition, int, int]:
    """Eigenspace data at |level|: decompositions and real dimensions of the
    lower-span W and the level eigenspace V."""
    lam = abs(level)
    levels = spectrum_up_to(space, lam)
    if not levels or levels[-1].eigenvalue != lam:
        raise ValueError(f"{level} is not (plus or minus) an eigenvalue of this space")
    target = levels[-1]
    lower = levels[:-1]
    w_dec = TorusRepDecomposition(0, ())
    for lv in lower:
        w_dec = w_dec + lv.torus_decomp
    d_w = sum(lv.real_dim for lv in lower)
    return w_dec, target.torus_decomp, d_w, target.real_dim


def _check_level_admissible(sig: SystemSignature, level: Fraction) -> None:
    if level > 0 and sig.n_minus == 0:
        raise ValueError(f"level {level} is not a candidate level when no equation has a_i = -1")
    if level < 0 and sig.n_plus == 0:
        raise ValueError(f"level {level} is not a candidate level when no equation has a_i = +1")


def bifurcation_index(space: SymmetricSpaceData, sig: SystemSignature, level) -> EulerRingElement:
    """Index of the trivial branch across a candidate level, evaluated in the
    truncated Euler ring."""
    lam = Fraction(level)
    if lam == 0:
        c = (-1) ** sig.n_minus - (-1) ** sig.n_plus
        return UNIT.scaled(c)
    _check_level_admissible(sig, lam)
    w_dec, v_dec, _, _ = _split_levels(space, lam)
    deg_v = neg_identity_degree(v_dec)
    if lam > 0:
        deg_w = neg_identity_degree(w_dec)
        return (deg_w ** sig.n_minus) * (deg_v ** sig.n_minus - UNIT)
    deg_wv = neg_identity_degree(w_dec + v_dec)
    return (deg_wv ** (-sig.n_plus)) * (deg_v ** sig.n_plus - UNIT)


def bifurcation_levels(space: SymmetricSpaceData, sig: SystemSignature, cutoff) -> tuple[BifurcationLevel, ...]:
    """All candidate levels in [-cutoff, cutoff] with kernel dimensions and
    indices, sorted ascending."""
    cutoff = Fraction(cutoff)
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    spectrum = spectrum_up_to(space, cutoff)
    values: set[Fraction] = set()
    dims: dict[Fraction, int] = {}
    for lv in spectrum:
        dims[lv.eigenvalue] = lv.real_dim
        if lv.eigenvalue == 0:
            values.add(Fraction(0))
            continue
        if sig.n_minus > 0:
            values.add(lv.eigenvalue)
        if sig.n_plus > 0:
            values.add(-lv.eigenvalue)
    out = []
    for lam in sorted(values):
        if lam == 0:
            kernel = sig.p * dims[Fraction(0)]
        elif lam > 0:
            kernel = sig.n_minus * dims[lam]
        else:
            kernel = sig.n_plus * dims[-lam]
        out.append(BifurcationLevel(lam, kernel, bifurcation_index(space, sig, lam)))
    return tuple(out)


def coeff_formula_check(
    space: SymmetricSpaceData,
    sig: SystemSignature,
    alpha: RestrictedWeight,
    sign: int = 1,
) -> tuple[int, int]:
    """Witness coefficient of the index at sign * lambda_alpha, paired with its
    closed form (-1)^{(d_W + d_V) n + 1} * n, where n counts the equations of
    the matching Laplacian sign.  Both integers are returned for comparison."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    lam = eigenvalue_of(space, alpha)
    if lam == 0:
        raise ValueError("the zero level has no witness coefficient")
    level = sign * lam
    _check_level_admissible(sig, level)
    _, _, d_w, d_v = _split_levels(space, level)
    n = sig.n_minus if sign > 0 else sig.n_plus
    computed = bifurcation_index(space, sig, level).coeff_at(canonicalize(alpha))
    closed = (-1) ** ((d_w + d_v) * n + 1) * n
    return computed, closed


def symmetry_breaking_flag(space: SymmetricSpaceData, level) -> bool:
    """True when bifurcating solutions at the level must break the full
    symmetry: the kernel carries no nonzero invariant functions exactly when
    the level is nonzero (invariant eigenfunctions are constant and belong to
    eigenvalue zero only)."""
    lam = Fraction(level)
    spectrum = spectrum_up_to(space, abs(lam))
    if not spectrum or spectrum[-1].eigenvalue != abs(lam):
        raise ValueError(f"{level} is not (plus or minus) an eigenvalue of this space")
    return lam != 0


def cancellation_impossible(n_minus: int, n_plus: int, dim_parity: int) -> bool:
    """Integer identity behind the certificates: with n_minus > 0 or n_plus > 0
    and e = dim_parity * (n_minus - n_plus),

        (-1)^e * n_minus != -n_plus,

    since equality would force either n_minus = -n_plus <= 0 or, with e odd,
    n_minus = n_plus and hence e = 0."""
    e = dim_parity * (n_minus - n_plus)
    return (-1) ** e * n_minus != -n_plus


def certify_unbounded(space: SymmetricSpaceData, sig: SystemSignature, level) -> UnboundednessCertificate:
    """Certificate that the continuum bifurcating at the level is unbounded.

    Nonzero level: among candidate levels of any bounded return set, only the
    two of maximal absolute value can contribute to the witness coefficient,
    and their contributions cannot sum to zero, so the indices cannot cancel.
    Zero level (p odd): index(0) = +-2I is already nonzero, and a bounded
    continuum through zero would pass through some nonzero level whose own
    certificate applies.
    """
    lam = Fraction(level)
    if lam == 0:
        if sig.p % 2 == 0:
            raise ValueError("no bifurcation guaranteed at this level: p is even")
        index0 = bifurcation_index(space, sig, 0)
        coeff = index0.unit
        conclusion = (
            f"index(0) = {coeff}*I != 0, so 0 is a bifurcation level; any bounded "
            "continuum through 0 would meet a nonzero candidate level, whose "
            "certificate rules out a bounded return"
        )
        return UnboundednessCertificate(
            level=Fraction(0),
            witness=None,
            ledger=((Fraction(0), coeff),),
            conclusion=conclusion,
            symmetry_breaking=False,
        )

    if lam > 0 and sig.n_minus == 0:
        raise ValueError("no bifurcation guaranteed at this level: no equation has a_i = -1")
    if lam < 0 and sig.n_plus == 0:
        raise ValueError("no bifurcation guaranteed at this level: no equation has a_i = +1")

    lam_abs = abs(lam)
    levels = spectrum_up_to(space, lam_abs)
    if not levels or levels[-1].eigenvalue != lam_abs:
        raise ValueError(f"{level} is not (plus or minus) an eigenvalue of this space")
    alpha = levels[-1].alphas[0]
    witness = canonicalize(alpha)
    _, _, d_w, d_v = _split_levels(space, lam_abs)

    ledger = []
    for s, n in ((1, sig.n_minus), (-1, sig.n_plus)):
        if n == 0:
            continue
        coeff = bifurcation_index(space, sig, s * lam_abs).coeff_at(witness)
        expected = (-1) ** ((d_w + d_v) * n + 1) * n
        if coeff != expected:
            raise ValueError(
                f"index coefficient {coeff} at {witness} disagrees with closed form {expected}"
            )
        ledger.append((s * lam_abs, coeff))
    ledger.sort(key=lambda lc: lc[0])

    if not cancellation_impossible(sig.n_minus, sig.n_plus, (d_w + d_v) % 2):
        raise ValueError("cancellation identity failed; certificate cannot be issued")
    total = sum(c for _, c in ledger)
    if total == 0:
        raise ValueError("witness coefficients cancel; certificate cannot be issued")
    conclusion = (
        f"sum {total} != 0 at witness {witness}: lower levels contribute 0 there, so no "
        f"finite candidate set with max |level| = {lam_abs} lets the indices cancel"
    )
    return UnboundednessCertificate(
        level=lam,
        witness=witness,
        ledger=tuple(ledger),
        conclusion=conclusion,
        symmetry_breaking=True,
    )
