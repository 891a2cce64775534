"""Compact symmetric space descriptors and exact Laplace-Beltrami spectra.

A space of rank r is described by the Gram matrix of its simple restricted
roots (exact rationals, positive definite) and the vector rho, the half-sum of
positive restricted roots with multiplicities, in simple-root coordinates.
The eigenvalue attached to a dominant weight alpha is

    lambda_alpha = (alpha + rho, alpha + rho) - (rho, rho)
                 = (alpha, alpha) + 2 (alpha, rho),

computed exactly in the Gram form.  Distinct dominant weights may share an
eigenvalue; a spectral level collects all of them together with the real
eigenspace dimension and its decomposition into irreducible torus blocks.

Sphere and product-of-spheres presets normalize each factor so that the
sphere spectrum is k(k + n - 1) on the nose: Gram = identity, rho_i = (n_i-1)/2.
Their eigenspace decompositions come from a monomial-counting oracle for
spherical harmonics; generic spaces read user-supplied weight tables instead.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from .jsonio import frac_from_json, frac_to_json
from .weights import RestrictedWeight, SubgroupId, canonicalize

SPHERE = "sphere"
PRODUCT = "product"
GENERIC = "generic"


# ---------------------------------------------------------------------------
# torus representation data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusRepDecomposition:
    """Multiplicities of a real torus representation: k0 trivial lines plus
    k_mu rotation planes for each canonical weight mu."""

    k0: int
    mults: tuple[tuple[SubgroupId, int], ...]

    def __post_init__(self):
        if self.k0 < 0:
            raise ValueError("k0 must be nonnegative")
        items = tuple(sorted(self.mults, key=lambda hm: hm[0].sort_key()))
        if any(m <= 0 for _, m in items):
            raise ValueError("plane multiplicities must be positive")
        if len({h for h, _ in items}) != len(items):
            raise ValueError("duplicate weight id in decomposition")
        object.__setattr__(self, "mults", items)

    @classmethod
    def from_dict(cls, k0: int, mults: dict[SubgroupId, int]) -> "TorusRepDecomposition":
        return cls(k0, tuple((h, m) for h, m in mults.items() if m != 0))

    @cached_property
    def mults_map(self) -> dict[SubgroupId, int]:
        return dict(self.mults)

    def multiplicity(self, h: SubgroupId) -> int:
        return self.mults_map.get(h, 0)

    @property
    def total_dim(self) -> int:
        return self.k0 + 2 * sum(m for _, m in self.mults)

    def __add__(self, other: "TorusRepDecomposition") -> "TorusRepDecomposition":
        acc = dict(self.mults)
        for h, m in other.mults:
            acc[h] = acc.get(h, 0) + m
        return TorusRepDecomposition.from_dict(self.k0 + other.k0, acc)

    def to_json(self) -> dict:
        return {
            "k0": self.k0,
            "mults": [{"H": h.canonical.to_json(), "mult": m} for h, m in self.mults],
        }

    @classmethod
    def from_json(cls, data) -> "TorusRepDecomposition":
        mults = tuple((SubgroupId.from_json(e), int(e["mult"])) for e in data.get("mults", ()))
        return cls(int(data["k0"]), mults)


@dataclass(frozen=True)
class SpectralLevel:
    """One eigenvalue of -Delta with every dominant weight realizing it."""

    eigenvalue: Fraction
    alphas: tuple[RestrictedWeight, ...]
    real_dim: int
    torus_decomp: TorusRepDecomposition

    def to_json(self) -> dict:
        return {
            "eigenvalue": frac_to_json(self.eigenvalue),
            "alphas": [a.to_json() for a in self.alphas],
            "real_dim": self.real_dim,
            "decomposition": self.torus_decomp.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "SpectralLevel":
        return cls(
            frac_from_json(data["eigenvalue"]),
            tuple(RestrictedWeight.from_json(a) for a in data["alphas"]),
            int(data["real_dim"]),
            TorusRepDecomposition.from_json(data["decomposition"]),
        )


# ---------------------------------------------------------------------------
# generic-space weight tables
# ---------------------------------------------------------------------------

TableRow = tuple[RestrictedWeight, tuple[tuple[RestrictedWeight, int], ...]]


@dataclass(frozen=True)
class GenericTables:
    """Complex restricted-weight multiplicities per irreducible summand,
    supplied by the user for spaces without a built-in oracle.  Each row lists
    every weight of the summand with highest weight alpha, negatives included;
    the complex dimension is the multiplicity total."""

    rows: tuple[TableRow, ...]

    @cached_property
    def by_alpha(self) -> dict[RestrictedWeight, dict[RestrictedWeight, int]]:
        return {alpha: dict(ws) for alpha, ws in self.rows}

    @classmethod
    def from_json(cls, data) -> "GenericTables":
        rows = []
        for entry in data["entries"]:
            alpha = RestrictedWeight.from_json(entry["alpha"])
            weights = tuple(
                sorted(
                    ((RestrictedWeight.from_json(w["mu"]), int(w["mult"])) for w in entry["weights"]),
                    key=lambda wm: wm[0].coords,
                )
            )
            rows.append((alpha, weights))
        return cls(tuple(sorted(rows, key=lambda r: r[0].coords)))

    @classmethod
    def load(cls, path) -> "GenericTables":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        return {
            "entries": [
                {
                    "alpha": alpha.to_json(),
                    "weights": [{"mu": mu.to_json(), "mult": m} for mu, m in ws],
                }
                for alpha, ws in self.rows
            ]
        }


# ---------------------------------------------------------------------------
# space descriptor
# ---------------------------------------------------------------------------


def _minor_det(gram: Sequence[Sequence[Fraction]], size: int) -> Fraction:
    # exact Gaussian elimination on the leading principal minor
    a = [[Fraction(gram[i][j]) for j in range(size)] for i in range(size)]
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, size):
            factor = a[r][col] / a[col][col]
            for c in range(col, size):
                a[r][c] -= factor * a[col][c]
    return det


@dataclass(frozen=True)
class SymmetricSpaceData:
    """Exact descriptor: rank, Gram matrix of simple restricted roots, rho in
    simple-root coordinates, and the oracle kind."""

    rank: int
    gram: tuple[tuple[Fraction, ...], ...]
    rho: tuple[Fraction, ...]
    kind: str
    factors: tuple[int, ...] | None = None
    tables: GenericTables | None = None

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        gram = tuple(tuple(Fraction(x) for x in row) for row in self.gram)
        rho = tuple(Fraction(x) for x in self.rho)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "rho", rho)
        if len(gram) != self.rank or any(len(row) != self.rank for row in gram):
            raise ValueError("gram must be a rank x rank matrix")
        if len(rho) != self.rank:
            raise ValueError("rho must have length rank")
        for i in range(self.rank):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise ValueError("gram must be symmetric")
        for size in range(1, self.rank + 1):
            if _minor_det(gram, size) <= 0:
                raise ValueError("gram must be positive definite")
        # (alpha_i, rho) >= 0 keeps the spectrum enumeration bound valid
        for i in range(self.rank):
            if sum(gram[i][j] * rho[j] for j in range(self.rank)) < 0:
                raise ValueError("rho must pair nonnegatively with every simple root")
        if self.kind == GENERIC and self.tables is None:
            raise ValueError("weight tables required for a generic space")

    # -- presets --------------------------------------------------------------

    @classmethod
    def sphere(cls, n: int) -> "SymmetricSpaceData":
        """Round n-sphere, n >= 2, normalized so lambda_k = k(k + n - 1)."""
        if n < 2:
            raise ValueError("sphere preset needs n >= 2")
        return cls(
            rank=1,
            gram=((Fraction(1),),),
            rho=(Fraction(n - 1, 2),),
            kind=SPHERE,
            factors=(n,),
        )

    @classmethod
    def product_of_spheres(cls, factors: Iterable[int]) -> "SymmetricSpaceData":
        """Product S^{n_1} x ... x S^{n_s}; Gram block diagonal, rho concatenated."""
        ns = tuple(int(n) for n in factors)
        if not ns:
            raise ValueError("product preset needs at least one factor")
        if any(n < 2 for n in ns):
            raise ValueError("each sphere factor needs n >= 2")
        r = len(ns)
        gram = tuple(
            tuple(Fraction(1) if i == j else Fraction(0) for j in range(r)) for i in range(r)
        )
        rho = tuple(Fraction(n - 1, 2) for n in ns)
        return cls(rank=r, gram=gram, rho=rho, kind=PRODUCT, factors=ns)

    @classmethod
    def generic(cls, gram, rho, tables: GenericTables) -> "SymmetricSpaceData":
        gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
        return cls(rank=len(gram), gram=gram, rho=tuple(Fraction(x) for x in rho), kind=GENERIC, tables=tables)

    # -- exact inner product ---------------------------------------------------

    def inner(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        return sum(
            Fraction(x[i]) * self.gram[i][j] * Fraction(y[j])
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def __str__(self) -> str:
        if self.kind == SPHERE:
            return f"S^{self.factors[0]}"
        if self.kind == PRODUCT:
            return " x ".join(f"S^{n}" for n in self.factors)
        return f"generic rank-{self.rank} space"


def load_space(descriptor: dict, base_dir=None) -> SymmetricSpaceData:
    """Build a space from its config form: {"kind":"sphere","n":2},
    {"kind":"product","factors":[2,3]}, or
    {"kind":"generic","gram":[[..]],"rho":[..],"tables":"path"}."""
    kind = descriptor.get("kind")
    if kind == SPHERE:
        return SymmetricSpaceData.sphere(int(descriptor["n"]))
    if kind == PRODUCT:
        return SymmetricSpaceData.product_of_spheres(descriptor["factors"])
    if kind == GENERIC:
        gram = [[frac_from_json(x) for x in row] for row in descriptor["gram"]]
        rho = [frac_from_json(x) for x in descriptor["rho"]]
        tables = descriptor["tables"]
        if isinstance(tables, str):
            path = Path(tables)
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            tables = GenericTables.load(path)
        else:
            tables = GenericTables.from_json(tables)
        return SymmetricSpaceData.generic(gram, rho, tables)
    raise ValueError(f"unknown space kind {kind!r}")


# ---------------------------------------------------------------------------
# eigenvalues and enumeration
# ---------------------------------------------------------------------------


def eigenvalue_of(space: SymmetricSpaceData, alpha: RestrictedWeight) -> Fraction:
    """Exact eigenvalue (alpha, alpha) + 2 (alpha, rho) of a dominant weight."""
    if alpha.rank != space.rank:
        raise ValueError(f"rank mismatch: weight has rank {alpha.rank}, space {space.rank}")
    if not alpha.is_dominant():
        raise ValueError("alpha not dominant")
    coords = [Fraction(c) for c in alpha.coords]
    return space.inner(coords, coords) + 2 * space.inner(coords, space.rho)


def _coordinate_bound(space: SymmetricSpaceData, cutoff: Fraction) -> int:
    """Box bound on dominant coordinates with (alpha, alpha) <= cutoff, via a
    float lower estimate of the smallest Gram eigenvalue.  Candidates are
    filtered exactly afterwards, so the estimate only needs to be safe."""
    import numpy as np

    g = np.array([[float(x) for x in row] for row in space.gram], dtype=float)
    lam_min = float(np.linalg.eigvalsh(g)[0]) * 0.999
    if lam_min <= 0:
        raise ValueError("gram smallest eigenvalue estimate is not positive")
    return int(math.floor(math.sqrt(float(cutoff) / lam_min))) + 1


@lru_cache(maxsize=None)
def _spectrum_cached(space: SymmetricSpaceData, cutoff: Fraction) -> tuple[SpectralLevel, ...]:
    import itertools

    bound = _coordinate_bound(space, cutoff) if cutoff > 0 else 0
    by_eig: dict[Fraction, list[RestrictedWeight]] = {}
    for coords in itertools.product(range(bound + 1), repeat=space.rank):
        alpha = RestrictedWeight(coords)
        lam = eigenvalue_of(space, alpha)
        if lam <= cutoff:
            by_eig.setdefault(lam, []).append(alpha)
    levels = []
    for lam in sorted(by_eig):
        alphas = tuple(sorted(by_eig[lam], key=lambda a: a.coords))
        decomp = _decompose_alphas(space, alphas)
        real_dim = sum(_alpha_complex_dim(space, a) for a in alphas)
        if decomp.total_dim != real_dim:
            raise ValueError(
                f"decomposition dimension {decomp.total_dim} != eigenspace dimension {real_dim} at lambda={lam}"
            )
        levels.append(SpectralLevel(lam, alphas, real_dim, decomp))
    return tuple(levels)


def spectrum_up_to(space: SymmetricSpaceData, cutoff) -> tuple[SpectralLevel, ...]:
    """All spectral levels with eigenvalue <= cutoff, sorted ascending.

    Enumeration terminates because the Gram form is positive definite and rho
    pairs nonnegatively with dominant weights, so (alpha, alpha) <= cutoff
    bounds every coordinate.  Grouping is by exact rational equality.
    """
    cutoff = Fraction(cutoff)
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    return _spectrum_cached(space, cutoff)


# ---------------------------------------------------------------------------
# spherical-harmonic counting oracle
# ---------------------------------------------------------------------------


def _monomial_count(degree: int, nvars: int) -> int:
    if degree < 0:
        return 0
    return math.comb(degree + nvars - 1, nvars - 1)


def harmonic_dim(n: int, k: int) -> int:
    """Dimension of the degree-k spherical harmonics on S^n.

    Counted as homogeneous degree-k monomials in n+1 variables minus those of
    degree k-2 (the image of multiplication by the squared radius), so the
    value is derived from counting rather than from a quoted dimension formula.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if k < 0:
        raise ValueError("need k >= 0")
    return _monomial_count(k, n + 1) - _monomial_count(k - 2, n + 1)


@lru_cache(maxsize=None)
def sphere_weight_multiplicity(n: int, k: int, m: int) -> int:
    """Multiplicity of the rotation weight m in the complexified degree-k
    harmonics on S^n.

    Counting oracle: in coordinates z = x_0 + i x_1 (weight +1), conj(z)
    (weight -1) and the n-1 rotation-fixed variables (weight 0), the weight-m
    multiplicity among degree-d monomials is

        N(d, m) = sum_c #{monomials of degree c in n-1 variables}
                  over c with d - c >= |m| and d - c = m (mod 2),

    and the harmonic multiplicity is N(k, m) - N(k-2, m).
    """
    if n < 2 or k < 0:
        raise ValueError("need n >= 2 and k >= 0")

    def count(d: int) -> int:
        if d < 0:
            return 0
        total = 0
        for c in range(d + 1):
            rest = d - c
            if rest >= abs(m) and (rest - m) % 2 == 0:
                total += _monomial_count(c, n - 1)
        return total

    return count(k) - count(k - 2)


@lru_cache(maxsize=None)
def _factor_weights(n: int, k: int) -> tuple[tuple[int, int], ...]:
    out = []
    for m in range(-k, k + 1):
        mult = sphere_weight_multiplicity(n, k, m)
        if mult:
            out.append((m, mult))
    return tuple(out)


@lru_cache(maxsize=None)
def _alpha_weight_map(space: SymmetricSpaceData, alpha: RestrictedWeight) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Complex restricted-weight multiplicities of the irreducible summand with
    highest weight alpha, as ((coords, mult), ...)."""
    if space.kind in (SPHERE, PRODUCT):
        acc: dict[tuple[int, ...], int] = {(): 1}
        for n, k in zip(space.factors, alpha.coords):
            nxt: dict[tuple[int, ...], int] = {}
            for prefix, mult in acc.items():
                for m, fm in _factor_weights(n, k):
                    key = prefix + (m,)
                    nxt[key] = nxt.get(key, 0) + mult * fm
            acc = nxt
        return tuple(sorted(acc.items()))
    if space.tables is None:
        raise ValueError("weight tables required")
    entry = space.tables.by_alpha.get(alpha)
    if entry is None:
        raise ValueError(f"weight tables required: no entry for alpha {alpha}")
    return tuple(sorted((mu.coords, m) for mu, m in entry.items()))


def _alpha_complex_dim(space: SymmetricSpaceData, alpha: RestrictedWeight) -> int:
    if space.kind in (SPHERE, PRODUCT):
        return math.prod(harmonic_dim(n, k) for n, k in zip(space.factors, alpha.coords))
    return sum(m for _, m in _alpha_weight_map(space, alpha))


def _decompose_alphas(space: SymmetricSpaceData, alphas: Iterable[RestrictedWeight]) -> TorusRepDecomposition:
    weights: dict[tuple[int, ...], int] = {}
    for alpha in alphas:
        for coords, mult in _alpha_weight_map(space, alpha):
            weights[coords] = weights.get(coords, 0) + mult
    zero = tuple([0] * space.rank)
    k0 = weights.get(zero, 0)
    mults: dict[SubgroupId, int] = {}
    for coords, mult in weights.items():
        if coords == zero:
            continue
        neg = tuple(-c for c in coords)
        if weights.get(neg, 0) != mult:
            raise ValueError(
                f"weight multiplicities are not conjugation-symmetric at {coords}: "
                "not the complexification of a real representation"
            )
        h = canonicalize(RestrictedWeight(coords))
        if h.canonical.coords == coords:
            mults[h] = mults.get(h, 0) + mult
    return TorusRepDecomposition.from_dict(k0, mults)


def torus_decomposition(space: SymmetricSpaceData, level: SpectralLevel) -> TorusRepDecomposition:
    """Decomposition of the real eigenspace at a level into torus blocks:
    plane multiplicities are the complex weight multiplicities of the canonical
    weights, and k0 is the multiplicity of the zero weight."""
    return _decompose_alphas(space, level.alphas)


def alpha_decomposition(space: SymmetricSpaceData, alpha: RestrictedWeight) -> TorusRepDecomposition:
    """Torus decomposition of the single irreducible summand with highest
    weight alpha (one piece of a possibly degenerate level)."""
    return _decompose_alphas(space, (alpha,))


def clear_caches() -> None:
    """Reset the enumeration and counting caches (used for timing runs)."""
    _spectrum_cached.cache_clear()
    _alpha_weight_map.cache_clear()
    _factor_weights.cache_clear()
    sphere_weight_multiplicity.cache_clear()


# ---------------------------------------------------------------------------
# tabular export
# ---------------------------------------------------------------------------


def spectrum_to_csv(levels: Sequence[SpectralLevel]) -> str:
    """Delimited spectrum table: exact eigenvalue, weights, dimension, k0, and
    one multiplicity column per weight id appearing anywhere in the range."""
    ids: list[SubgroupId] = sorted(
        {h for lv in levels for h, _ in lv.torus_decomp.mults}, key=lambda h: h.sort_key()
    )
    header = ["eigenvalue_num", "eigenvalue_den", "alphas", "real_dim", "k0"]
    header += [f"k{h.canonical}" for h in ids]
    lines = [",".join(header)]
    for lv in levels:
        row = [
            str(lv.eigenvalue.numerator),
            str(lv.eigenvalue.denominator),
            ";".join(str(a) for a in lv.alphas),
            str(lv.real_dim),
            str(lv.torus_decomp.k0),
        ]
        row += [str(lv.torus_decomp.multiplicity(h)) for h in ids]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
