"""Zero-dimensional schemes and the residual calculus against coordinate divisors.

A scheme is a union of simple and double points.  Cutting with a divisor
pulled back from one factor splits it into a residue (double points on the
divisor lose one order) and a trace (the part living on the divisor, which is
again a multiprojective space of one dimension less in that factor).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ShapeMismatch
from .exactla import clear_denominators
from .segre import (
    DEFAULT_PRIMES,
    MppPoint,
    Multidegree,
    MultiprojectiveSpace,
    PointConfiguration,
    _check_point,
    _coords_in_basis,
    _h0_of_terms,
)

__all__ = [
    "ZeroDimScheme",
    "CoordinateDivisor",
    "residue",
    "trace",
    "check_residual_inequalities",
    "ResidualReport",
    "double_scheme",
]


@dataclass(frozen=True)
class ZeroDimScheme:
    """Union of simple (multiplicity 1) and double (multiplicity 2) points."""

    space: MultiprojectiveSpace
    terms: tuple[tuple[MppPoint, int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "terms", tuple((p, int(m)) for p, m in self.terms)
        )
        seen = set()
        for p, m in self.terms:
            _check_point(self.space, p)
            if m not in (1, 2):
                raise ValueError("multiplicity must be 1 or 2")
            if p.coords in seen:
                raise ValueError("repeated support point")
            seen.add(p.coords)

    @property
    def degree(self) -> int:
        """Degree with ambient all-ones semantics: 1 per simple, dim Y + 1 per double."""
        return sum(1 if m == 1 else self.space.dim + 1 for _, m in self.terms)

    def is_empty(self) -> bool:
        return not self.terms


def double_scheme(config: PointConfiguration) -> ZeroDimScheme:
    """The union of first infinitesimal neighborhoods of all points of a configuration."""
    return ZeroDimScheme(config.space, tuple((p, 2) for p in config.points))


@dataclass(frozen=True)
class CoordinateDivisor:
    """Divisor pulled back from a single factor: a nonzero linear form there."""

    factor_index: int
    form: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "form", tuple(int(x) for x in self.form))
        if all(x == 0 for x in self.form):
            raise ValueError("divisor form must be nonzero")

    def contains(self, p: MppPoint) -> bool:
        v = p.coords[self.factor_index]
        if len(v) != len(self.form):
            raise ShapeMismatch("form length does not match the factor")
        return sum(a * b for a, b in zip(self.form, v)) == 0


def _check_divisor(space: MultiprojectiveSpace, h: CoordinateDivisor) -> None:
    if not 0 <= h.factor_index < space.num_factors:
        raise ShapeMismatch("divisor factor index out of range")
    if len(h.form) != space.factor_dims[h.factor_index] + 1:
        raise ShapeMismatch("divisor form length does not match the factor")


def residue(scheme: ZeroDimScheme, h: CoordinateDivisor) -> ZeroDimScheme:
    """Residue of the scheme with respect to the divisor.

    Terms on the divisor lose one order: doubles become simple, simples drop.
    """
    _check_divisor(scheme.space, h)
    new_terms = []
    for p, m in scheme.terms:
        if h.contains(p):
            if m == 2:
                new_terms.append((p, 1))
        else:
            new_terms.append((p, m))
    return ZeroDimScheme(scheme.space, tuple(new_terms))


def _kernel_basis(form: Sequence[int]) -> list[list[int]]:
    """Integer basis of the hyperplane cut out by a nonzero linear form."""
    piv = next(i for i, x in enumerate(form) if x)
    basis = []
    for j in range(len(form)):
        if j == piv:
            continue
        v = [0] * len(form)
        v[j] = form[piv]
        v[piv] = -form[j]
        basis.append(v)
    return basis


def trace(
    scheme: ZeroDimScheme, h: CoordinateDivisor
) -> tuple[MultiprojectiveSpace, ZeroDimScheme]:
    """Scheme-theoretic intersection with the divisor, in the divisor's own space.

    The cut factor drops one dimension (and disappears entirely when it was a
    P^1); multiplicities survive because the divisor is smooth.
    """
    _check_divisor(scheme.space, h)
    i = h.factor_index
    dims = scheme.space.factor_dims
    drop = dims[i] == 1
    if drop and scheme.space.num_factors == 1:
        raise ValueError("trace space would be empty (single P^1 factor)")
    if drop:
        new_dims = dims[:i] + dims[i + 1 :]
    else:
        new_dims = dims[:i] + (dims[i] - 1,) + dims[i + 1 :]
    new_space = MultiprojectiveSpace(new_dims)
    basis = _kernel_basis(h.form)
    new_terms = []
    for p, m in scheme.terms:
        if not h.contains(p):
            continue
        if drop:
            coords = p.coords[:i] + p.coords[i + 1 :]
        else:
            x = _coords_in_basis(basis, p.coords[i])
            w = tuple(clear_denominators(x, primitive=True))
            coords = p.coords[:i] + (w,) + p.coords[i + 1 :]
        new_terms.append((MppPoint(coords), m))
    return new_space, ZeroDimScheme(new_space, tuple(new_terms))


@dataclass(frozen=True)
class ResidualReport:
    """h0 triple of the residual exact sequence and the inequality verdict."""

    h0_scheme: int
    h0_residue: int
    h0_trace: int
    ok: bool


def check_residual_inequalities(
    scheme: ZeroDimScheme,
    h: CoordinateDivisor,
    degree: Multidegree,
    primes: Sequence[int] = DEFAULT_PRIMES,
) -> ResidualReport:
    """Check h0(residue) <= h0(scheme) <= h0(residue) + h0(trace).

    The middle term is taken at the given degree, the residue at the degree
    with the divisor's factor switched off (possibly the trivial bundle), and
    the trace at the degree restricted to the divisor's space.
    """
    _check_divisor(scheme.space, h)
    i = h.factor_index
    if not degree.flags[i]:
        raise ValueError("multidegree must be active at the divisor's factor")
    a = _h0_of_terms(scheme.space, scheme.terms, degree.flags, primes)
    res = residue(scheme, h)
    res_flags = degree.flags[:i] + (0,) + degree.flags[i + 1 :]
    b = _h0_of_terms(scheme.space, res.terms, res_flags, primes)
    tr_space, tr_scheme = trace(scheme, h)
    if scheme.space.factor_dims[i] == 1:
        tr_flags = degree.flags[:i] + degree.flags[i + 1 :]
    else:
        tr_flags = degree.flags
    c = _h0_of_terms(tr_space, tr_scheme.terms, tr_flags, primes)
    return ResidualReport(a, b, c, ok=b <= a <= b + c)
