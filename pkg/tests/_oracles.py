"""Independent reference implementations used to cross-check the library.

These deliberately avoid the library's Kronecker row builder and Bareiss
elimination: condition rows are assembled monomial by monomial from explicit
partial derivatives, and ranks are computed by plain Gaussian elimination over
Fraction.  Agreement between the two routes is asserted by the oracle tests.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from terracini import MppPoint, MultiprojectiveSpace, PointConfiguration


def fraction_gauss_rank(rows: list[list[int]]) -> int:
    """Textbook row reduction over Fraction."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    row = 0
    for col in range(ncols):
        piv = None
        for i in range(row, nrows):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        for i in range(nrows):
            if i != row and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


def jet_rows(
    space: MultiprojectiveSpace,
    terms: list[tuple[MppPoint, int]],
    flags: tuple[int, ...],
) -> list[list[int]]:
    """Condition rows built from monomial evaluations and first derivatives.

    A multilinear form of the restricted degree is a sum over monomial
    multi-indices J (one coordinate index per active factor) of c_J times the
    product of the selected coordinates.  A simple point contributes the
    evaluation row; a double point additionally contributes one derivative row
    per active factor direction.
    """
    active = [i for i, f in enumerate(flags) if f]
    monomials = list(
        itertools.product(*[range(space.factor_dims[i] + 1) for i in active])
    )
    rows: list[list[int]] = []
    for p, mult in terms:
        if not active:
            rows.append([1])
            continue
        ev = []
        for J in monomials:
            val = 1
            for pos, i in enumerate(active):
                val *= p.coords[i][J[pos]]
            ev.append(val)
        rows.append(ev)
        if mult == 2:
            for pos, i in enumerate(active):
                for direction in range(space.factor_dims[i] + 1):
                    row = []
                    for J in monomials:
                        if J[pos] != direction:
                            row.append(0)
                            continue
                        val = 1
                        for q, iq in enumerate(active):
                            if q != pos:
                                val *= p.coords[iq][J[q]]
                        row.append(val)
                    rows.append(row)
    return rows


def random_point(space: MultiprojectiveSpace, rng: random.Random, box: int = 3) -> MppPoint:
    coords = []
    for d in space.factor_dims:
        while True:
            v = tuple(rng.randint(-box, box) for _ in range(d + 1))
            if any(v):
                coords.append(v)
                break
    return MppPoint(tuple(coords))


def random_config(
    space: MultiprojectiveSpace, r: int, rng: random.Random, box: int = 3
) -> PointConfiguration:
    pts, seen = [], set()
    while len(pts) < r:
        p = random_point(space, rng, box)
        if p.coords not in seen:
            seen.add(p.coords)
            pts.append(p)
    return PointConfiguration(space, tuple(pts))
