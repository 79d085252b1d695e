"""Multiprojective spaces, points, Segre vectors and cohomology counts.

A point of ``P^{n_1} x ... x P^{n_k}`` is one integer coordinate vector per
factor.  Its Segre vector is the Kronecker product of those vectors; the rows
of a conditions matrix span the evaluation-and-derivative constraints a scheme
of simple and double points imposes on multilinear forms of a given 0/1
multidegree.  All counts (sections, rank, h0, h1, defect) are derived from
exact ranks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import TYPE_CHECKING, Sequence

from .errors import BadPermutation, ShapeMismatch, SingularMap
from .exactla import IntMatrix, clear_denominators, kron, rank_checked, rank_fraction_free

if TYPE_CHECKING:  # pragma: no cover
    from .schemes import ZeroDimScheme

__all__ = [
    "MultiprojectiveSpace",
    "MppPoint",
    "PointConfiguration",
    "Multidegree",
    "CohomologyReport",
    "segre_vector",
    "tangent_rows",
    "conditions_matrix",
    "section_count",
    "cohomology",
    "delta",
    "minimal_space",
    "is_minimal",
    "apply_transform",
    "permute_factors",
    "DEFAULT_PRIMES",
]

# default cross-check primes for certified ranks
DEFAULT_PRIMES: tuple[int, ...] = (65521, 1048573)


@dataclass(frozen=True)
class MultiprojectiveSpace:
    """Product of projective spaces, recorded by the factor dimensions."""

    factor_dims: tuple[int, ...]

    def __post_init__(self):
        if len(self.factor_dims) < 1:
            raise ValueError("need at least one factor")
        if any(n < 1 for n in self.factor_dims):
            raise ValueError("factors must be positive-dimensional")
        object.__setattr__(self, "factor_dims", tuple(int(n) for n in self.factor_dims))

    @property
    def num_factors(self) -> int:
        return len(self.factor_dims)

    @property
    def dim(self) -> int:
        return sum(self.factor_dims)

    @property
    def ambient_sections(self) -> int:
        """h0 of the full multilinear bundle, prod(n_i + 1)."""
        return prod(n + 1 for n in self.factor_dims)

    def __str__(self) -> str:
        return " x ".join(f"P{n}" for n in self.factor_dims)


def _normalize_vector(v: Sequence[int]) -> tuple[int, ...]:
    w = [int(x) for x in v]
    if all(x == 0 for x in w):
        raise ValueError("zero coordinate vector")
    g = 0
    for x in w:
        g = gcd(g, x)
    if g > 1:
        w = [x // g for x in w]
    for x in w:
        if x:
            if x < 0:
                w = [-y for y in w]
            break
    return tuple(w)


@dataclass(frozen=True)
class MppPoint:
    """Point of a multiprojective space; one primitive integer vector per factor.

    Coordinates are stored content-free with the leading nonzero entry
    positive, so projective equality is plain tuple equality.
    """

    coords: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "coords", tuple(_normalize_vector(v) for v in self.coords)
        )

    def in_space(self, space: MultiprojectiveSpace) -> bool:
        return len(self.coords) == space.num_factors and all(
            len(v) == n + 1 for v, n in zip(self.coords, space.factor_dims)
        )


def _check_point(space: MultiprojectiveSpace, p: MppPoint) -> None:
    if not p.in_space(space):
        raise ShapeMismatch(f"point does not live in {space}")


@dataclass(frozen=True)
class PointConfiguration:
    """A finite set of pairwise-distinct points of a common space."""

    space: MultiprojectiveSpace
    points: tuple[MppPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        for p in self.points:
            _check_point(self.space, p)
        seen = set()
        for p in self.points:
            if p.coords in seen:
                raise ValueError("repeated point in configuration")
            seen.add(p.coords)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class Multidegree:
    """0/1 flag per factor selecting which factors the line bundle sees."""

    flags: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "flags", tuple(int(f) for f in self.flags))
        if any(f not in (0, 1) for f in self.flags):
            raise ValueError("flags must be 0 or 1")
        if not any(self.flags):
            raise ValueError("multidegree must have at least one active factor")

    @classmethod
    def all_ones(cls, space: MultiprojectiveSpace) -> "Multidegree":
        return cls((1,) * space.num_factors)

    def is_all_ones(self) -> bool:
        return all(self.flags)


@dataclass(frozen=True)
class CohomologyReport:
    """Section, rank and cohomology counts for a scheme and multidegree.

    ``h1_ambient`` charges each double point its ambient degree dim Y + 1;
    ``h1_projected`` charges only the degree of its projection to the active
    factors.  The defect is defined (and the two h1's agree with it) only for
    the all-ones multidegree.
    """

    sections: int
    rank: int
    h0: int
    delta: int | None
    h1_ambient: int
    h1_projected: int
    scheme_degree_ambient: int
    scheme_degree_projected: int


def segre_vector(space: MultiprojectiveSpace, p: MppPoint) -> list[int]:
    """Kronecker product of the factor coordinates; length prod(n_i + 1)."""
    _check_point(space, p)
    return kron(p.coords)


def tangent_rows(space: MultiprojectiveSpace, p: MppPoint) -> IntMatrix:
    """Rows spanning the affine cone over the tangent space of the Segre variety at p.

    For each factor i and basis direction e_j the row is
    v_1 (x) ... (x) e_j (x) ... (x) v_k.  There are sum(n_i + 1) rows; their
    rank is always dim Y + 1.
    """
    _check_point(space, p)
    rows = []
    for i, n in enumerate(space.factor_dims):
        for j in range(n + 1):
            e = [0] * (n + 1)
            e[j] = 1
            vecs = list(p.coords)
            vecs[i] = tuple(e)
            rows.append(kron(vecs))
    return IntMatrix.from_rows(rows)


def _conditions_rows(
    space: MultiprojectiveSpace,
    terms: Sequence[tuple[MppPoint, int]],
    flags: Sequence[int],
) -> list[list[int]]:
    """Stacked condition rows for the flag-projected scheme.

    Factors with flag 0 are dropped: a double point imposes on sections of the
    restricted bundle exactly the conditions of its projected double point,
    since derivatives along dropped factors annihilate such sections.  With no
    active factor every term imposes the single condition "the constant
    vanishes".
    """
    active = [i for i, f in enumerate(flags) if f]
    rows: list[list[int]] = []
    for point, mult in terms:
        _check_point(space, point)
        vecs = [point.coords[i] for i in active]
        if not active:
            rows.append([1])
            continue
        if mult == 1:
            rows.append(kron(vecs))
        else:
            for pos, i in enumerate(active):
                n = space.factor_dims[i]
                for j in range(n + 1):
                    e = [0] * (n + 1)
                    e[j] = 1
                    sub = list(vecs)
                    sub[pos] = tuple(e)
                    rows.append(kron(sub))
    return rows


def conditions_matrix(
    space: MultiprojectiveSpace, scheme: "ZeroDimScheme", degree: Multidegree
) -> IntMatrix:
    """Conditions matrix of a zero-dimensional scheme at a 0/1 multidegree."""
    if len(degree.flags) != space.num_factors:
        raise ShapeMismatch("multidegree length does not match the space")
    rows = _conditions_rows(space, scheme.terms, degree.flags)
    width = section_count(space, degree)
    if not rows:
        return IntMatrix(0, width, ())
    return IntMatrix.from_rows(rows)


def section_count(space: MultiprojectiveSpace, degree: Multidegree) -> int:
    """h0 of the bundle: product of n_i + 1 over active factors."""
    if len(degree.flags) != space.num_factors:
        raise ShapeMismatch("multidegree length does not match the space")
    return prod(
        n + 1 for n, f in zip(space.factor_dims, degree.flags) if f
    )


def _h0_of_terms(
    space: MultiprojectiveSpace,
    terms: Sequence[tuple[MppPoint, int]],
    flags: Sequence[int],
    primes: Sequence[int] = DEFAULT_PRIMES,
) -> int:
    """h0 of the ideal twist, allowing the all-zero degree and the empty scheme."""
    sections = prod(n + 1 for n, f in zip(space.factor_dims, flags) if f)
    if not terms:
        return sections
    rows = _conditions_rows(space, terms, flags)
    rank = rank_checked(IntMatrix.from_rows(rows), primes)
    return sections - rank


def cohomology(
    space: MultiprojectiveSpace,
    scheme: "ZeroDimScheme",
    degree: Multidegree,
    primes: Sequence[int] = DEFAULT_PRIMES,
) -> CohomologyReport:
    """Full section/rank/h1 report of a nonempty scheme at a 0/1 multidegree."""
    if not scheme.terms:
        raise ValueError("scheme must be nonempty")
    m = conditions_matrix(space, scheme, degree)
    rank = rank_checked(m, primes)
    sections = section_count(space, degree)
    active = [i for i, f in enumerate(degree.flags) if f]
    proj_dim = sum(space.factor_dims[i] for i in active)
    deg_amb = sum(1 if m_ == 1 else space.dim + 1 for _, m_ in scheme.terms)
    deg_proj = sum(1 if m_ == 1 else proj_dim + 1 for _, m_ in scheme.terms)
    h0 = sections - rank
    return CohomologyReport(
        sections=sections,
        rank=rank,
        h0=h0,
        delta=deg_amb - rank if degree.is_all_ones() else None,
        h1_ambient=deg_amb - rank,
        h1_projected=deg_proj - rank,
        scheme_degree_ambient=deg_amb,
        scheme_degree_projected=deg_proj,
    )


def delta(
    space: MultiprojectiveSpace,
    config: PointConfiguration,
    primes: Sequence[int] = DEFAULT_PRIMES,
) -> int:
    """Terracini defect of the all-double scheme on a point set.

    Equals r(n+1) minus the rank of the all-ones conditions matrix.
    """
    if config.space != space:
        raise ShapeMismatch("configuration lives in a different space")
    if not config.points:
        raise ValueError("empty configuration")
    terms = [(p, 2) for p in config.points]
    rows = _conditions_rows(space, terms, (1,) * space.num_factors)
    rank = rank_checked(IntMatrix.from_rows(rows), primes)
    return len(config) * (space.dim + 1) - rank


def _independent_subset(vectors: Sequence[Sequence[int]]) -> list[int]:
    """Indices of a greedy maximal linearly independent subset."""
    chosen: list[int] = []
    basis_rows: list[list[int]] = []
    for i, v in enumerate(vectors):
        trial = basis_rows + [list(v)]
        if rank_fraction_free(IntMatrix.from_rows(trial)) == len(trial):
            chosen.append(i)
            basis_rows = trial
    return chosen


def _coords_in_basis(
    basis: Sequence[Sequence[int]], v: Sequence[int]
) -> list[Fraction]:
    """Solve sum(x_j * basis_j) = v exactly; basis independent, v in its span."""
    ncols = len(v)
    nb = len(basis)
    # augmented system over Fractions, unknowns are the x_j
    a = [[Fraction(basis[j][c]) for j in range(nb)] + [Fraction(v[c])] for c in range(ncols)]
    row = 0
    piv_of: list[int] = []
    for col in range(nb):
        piv = None
        for i in range(row, ncols):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            raise ValueError("basis not independent")
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        for i in range(ncols):
            if i != row and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        piv_of.append(row)
        row += 1
    for i in range(row, ncols):
        if a[i][nb]:
            raise ValueError("vector not in the span of the basis")
    return [a[r][nb] for r in piv_of]


def minimal_space(
    space: MultiprojectiveSpace, config: PointConfiguration
) -> tuple[MultiprojectiveSpace, PointConfiguration, tuple[tuple[tuple[int, ...], ...], ...]]:
    """Smallest coordinate sub-product containing the configuration.

    Per factor, coordinates are rewritten in a basis of the span of the
    projected points; factors whose projection is a single point are dropped.
    Returns the reduced space, the rewritten configuration and the per-factor
    basis witnesses (one tuple of vectors per original factor).
    """
    if config.space != space:
        raise ShapeMismatch("configuration lives in a different space")
    if not config.points:
        raise ValueError("empty configuration")
    witnesses: list[tuple[tuple[int, ...], ...]] = []
    new_dims: list[int] = []
    kept: list[tuple[int, list[list[int]]]] = []  # (factor index, basis)
    for i in range(space.num_factors):
        vecs = [p.coords[i] for p in config.points]
        idxs = _independent_subset(vecs)
        basis = [list(vecs[j]) for j in idxs]
        witnesses.append(tuple(tuple(b) for b in basis))
        if len(basis) >= 2:
            new_dims.append(len(basis) - 1)
            kept.append((i, basis))
    if not new_dims:
        # all factors collapse to a point; keep a single P^0-free stand-in is
        # impossible, so report the first factor's line through the point
        raise ValueError("configuration is a single point in every factor")
    new_space = MultiprojectiveSpace(tuple(new_dims))
    new_points = []
    for p in config.points:
        coords = []
        for i, basis in kept:
            x = _coords_in_basis(basis, p.coords[i])
            coords.append(tuple(clear_denominators(x, primitive=True)))
        new_points.append(MppPoint(tuple(coords)))
    return new_space, PointConfiguration(new_space, tuple(new_points)), tuple(witnesses)


def is_minimal(space: MultiprojectiveSpace, config: PointConfiguration) -> bool:
    """True iff each factor's projected points span the whole factor."""
    if config.space != space:
        raise ShapeMismatch("configuration lives in a different space")
    for i, n in enumerate(space.factor_dims):
        vecs = [list(p.coords[i]) for p in config.points]
        if rank_fraction_free(IntMatrix.from_rows(vecs)) != n + 1:
            return False
    return True


def apply_transform(
    space: MultiprojectiveSpace,
    config: PointConfiguration,
    maps: Sequence[Sequence[Sequence[Fraction | int]]],
) -> PointConfiguration:
    """Apply one invertible rational matrix per factor to all coordinates."""
    if config.space != space:
        raise ShapeMismatch("configuration lives in a different space")
    if len(maps) != space.num_factors:
        raise ShapeMismatch("need one map per factor")
    mats: list[list[list[Fraction]]] = []
    for i, n in enumerate(space.factor_dims):
        m = [[Fraction(x) for x in row] for row in maps[i]]
        if len(m) != n + 1 or any(len(r) != n + 1 for r in m):
            raise ShapeMismatch(f"map {i} has wrong shape")
        int_rows = [clear_denominators(r) for r in m]
        if rank_fraction_free(IntMatrix.from_rows(int_rows)) != n + 1:
            raise SingularMap(f"map {i} is singular")
        mats.append(m)
    new_points = []
    for p in config.points:
        coords = []
        for i, m in enumerate(mats):
            v = p.coords[i]
            w = [sum(m[r][c] * v[c] for c in range(len(v))) for r in range(len(v))]
            coords.append(tuple(clear_denominators(w, primitive=True)))
        new_points.append(MppPoint(tuple(coords)))
    return PointConfiguration(space, tuple(new_points))


def permute_factors(
    space: MultiprojectiveSpace, config: PointConfiguration, perm: Sequence[int]
) -> tuple[MultiprojectiveSpace, PointConfiguration]:
    """Reorder the factors: new factor j is old factor perm[j] (0-based)."""
    k = space.num_factors
    if sorted(perm) != list(range(k)):
        raise BadPermutation(f"{perm} is not a permutation of 0..{k - 1}")
    new_space = MultiprojectiveSpace(tuple(space.factor_dims[perm[j]] for j in range(k)))
    new_points = tuple(
        MppPoint(tuple(p.coords[perm[j]] for j in range(k))) for p in config.points
    )
    return new_space, PointConfiguration(new_space, new_points)
