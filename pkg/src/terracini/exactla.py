"""Arbitrary-precision integer linear algebra.

Everything downstream reduces to exact ranks of integer matrices: the rank of a
conditions matrix is the number of independent constraints a zero-dimensional
scheme imposes on multilinear forms.  Ranks are certified by fraction-free
(Bareiss) elimination over the integers; modular ranks are used only as
cross-checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Iterable, Sequence

from .errors import InconsistentRank, NotPrime

__all__ = [
    "IntMatrix",
    "rank_fraction_free",
    "rank_modular",
    "rank_checked",
    "kron",
    "clear_denominators",
    "is_prime",
]


@dataclass(frozen=True)
class IntMatrix:
    """Dense row-major integer matrix; entries are plain Python ints."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        flat: list[int] = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            flat.extend(int(x) for x in r)
        return cls(nrows, ncols, tuple(flat))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]


def rank_fraction_free(m: IntMatrix) -> int:
    """Rank over the rationals via Bareiss elimination with exact integer pivots.

    Intermediate entries are minors of the input and therefore exact integers;
    the divisibility of each two-by-two condensation step is asserted.
    """
    a = m.to_rows()
    nrows, ncols = m.rows, m.cols
    rank = 0
    prev = 1
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        # partial pivoting on magnitude
        piv = row
        for i in range(row, nrows):
            if abs(a[i][col]) > abs(a[piv][col]):
                piv = i
        if a[piv][col] == 0:
            continue
        if piv != row:
            a[row], a[piv] = a[piv], a[row]
        p = a[row][col]
        ar = a[row]
        for i in range(row + 1, nrows):
            ai = a[i]
            f = ai[col]
            for j in range(col + 1, ncols):
                q, rem = divmod(p * ai[j] - f * ar[j], prev)
                assert rem == 0, "Bareiss divisibility broken"
                ai[j] = q
            ai[col] = 0
        prev = p
        row += 1
        rank += 1
    return rank


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24, extra random rounds above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases: Iterable[int] = _MR_BASES
    if n >= 3317044064679887385961981:
        rng = random.Random(0xC0FFEE ^ n)
        bases = list(_MR_BASES) + [rng.randrange(2, n - 1) for _ in range(24)]
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def rank_modular(m: IntMatrix, p: int) -> int:
    """Rank of the reduction of ``m`` mod a prime ``p``; never exceeds the rational rank."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    a = [[x % p for x in m.row(i)] for i in range(m.rows)]
    nrows, ncols = m.rows, m.cols
    rank = 0
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        piv = None
        for i in range(row, nrows):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        if piv != row:
            a[row], a[piv] = a[piv], a[row]
        inv = pow(a[row][col], -1, p)
        ar = a[row]
        for i in range(row + 1, nrows):
            f = a[i][col]
            if f:
                fi = f * inv % p
                ai = a[i]
                for j in range(col, ncols):
                    ai[j] = (ai[j] - fi * ar[j]) % p
        row += 1
        rank += 1
    return rank


def _hadamard_bound(m: IntMatrix) -> int:
    """Integer upper bound on the magnitude of any minor of ``m``."""
    bound = 1
    for i in range(m.rows):
        sq = sum(x * x for x in m.row(i))
        if sq:
            bound *= isqrt(sq) + 1
    return bound


def _next_prime(n: int) -> int:
    c = n + 1
    if c % 2 == 0:
        c += 1
    while not is_prime(c):
        c += 2
    return c


def rank_checked(m: IntMatrix, primes: Sequence[int]) -> int:
    """Bareiss rank cross-checked against modular ranks.

    Every modular rank must be at most the rational rank, and at least one
    prime must attain it; if none of the supplied primes does, a fresh prime
    above the Hadamard bound of the matrix (which cannot divide any nonzero
    minor) settles the question.  Disagreement means a bug, not bad data.
    """
    if not primes:
        raise ValueError("need at least one prime")
    exact = rank_fraction_free(m)
    best = 0
    for p in primes:
        rp = rank_modular(m, p)
        if rp > exact:
            raise InconsistentRank(
                f"rank mod {p} is {rp}, exceeds rational rank {exact}"
            )
        best = max(best, rp)
    if best < exact:
        p = _next_prime(_hadamard_bound(m))
        rp = rank_modular(m, p)
        if rp != exact:
            raise InconsistentRank(
                f"rank mod {p} (above the Hadamard bound) is {rp}, expected {exact}"
            )
    return exact


def kron(vs: Sequence[Sequence[int]]) -> list[int]:
    """Kronecker product of vectors, last index varying fastest."""
    if not vs:
        return [1]
    for v in vs:
        if len(v) == 0:
            raise ValueError("empty factor vector")
    out = [1]
    for v in vs:
        out = [a * int(b) for a in out for b in v]
    return out


def clear_denominators(
    row: Sequence[Fraction | int], primitive: bool = False
) -> list[int]:
    """Scale a rational row by the lcm of its denominators.

    With ``primitive=True`` the result is additionally divided by its content
    and sign-normalized so that the first nonzero entry is positive.
    """
    fracs = [Fraction(x) for x in row]
    denom_lcm = lcm(*(f.denominator for f in fracs)) if fracs else 1
    out = [int(f * denom_lcm) for f in fracs]
    if primitive:
        g = 0
        for x in out:
            g = gcd(g, x)
        if g > 1:
            out = [x // g for x in out]
        for x in out:
            if x:
                if x < 0:
                    out = [-y for y in out]
                break
    return out
