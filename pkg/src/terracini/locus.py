"""Terracini-locus membership, three-point classification and extremal searches.

A set of r points lies in the first Terracini locus when the double scheme on
it has both h0 > 0 and positive defect; the full locus additionally asks the
ambient space to be minimal for the set.  For three points the membership
question has a complete structural answer, implemented here as a decision
procedure and checked against exact computation by a randomized sweep.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BadParams, WrongCardinality
from .exactla import IntMatrix, rank_checked, rank_fraction_free
from .segre import (
    DEFAULT_PRIMES,
    MppPoint,
    MultiprojectiveSpace,
    PointConfiguration,
    _conditions_rows,
    is_minimal,
)

__all__ = [
    "MembershipReport",
    "PatternTag",
    "SecantEstimate",
    "membership",
    "classify3",
    "predicted_in_T3",
    "verify_classification",
    "ClassificationSweep",
    "build_ex1",
    "build_a40",
    "build_g0",
    "build_kk1",
    "secant_dim_estimate",
    "max_defect_search",
    "MaxDefectReport",
    "enumerate_spaces",
]


@dataclass(frozen=True)
class MembershipReport:
    h0: int
    delta: int
    minimal: bool
    in_T1: bool
    in_T: bool


@dataclass(frozen=True)
class PatternTag:
    """Structural class of a minimal three-point configuration.

    ``EX1``: two points agree everywhere except on one designated factor of
    dimension ``m`` and the third avoids the shared values.  ``EX40``: two
    points differ on exactly two designated factors; ``subcase`` records the
    shape-dependent branch and the flags record projective coincidences of the
    third point with the pair on dimension-one designated factors.
    """

    kind: str  # EX1 | EX40 | P14_MINIMAL | GENERIC_ORBIT | OTHER
    m: int | None = None
    k: int | None = None
    subcase: str | None = None  # EX40: ii | iii | iv | v
    o_matches_u: bool | None = None
    o_matches_v: bool | None = None


@dataclass(frozen=True)
class SecantEstimate:
    expected_dim: int
    estimated_dim: int
    defect: int
    trials: int
    seed: int


def _h0_delta(
    space: MultiprojectiveSpace,
    config: PointConfiguration,
    primes: Sequence[int] = DEFAULT_PRIMES,
) -> tuple[int, int]:
    """(h0, defect) of the all-double scheme from a single certified rank."""
    terms = [(p, 2) for p in config.points]
    rows = _conditions_rows(space, terms, (1,) * space.num_factors)
    rank = rank_checked(IntMatrix.from_rows(rows), primes)
    h0 = space.ambient_sections - rank
    d = len(config) * (space.dim + 1) - rank
    return h0, d


def membership(
    space: MultiprojectiveSpace,
    config: PointConfiguration,
    primes: Sequence[int] = DEFAULT_PRIMES,
) -> MembershipReport:
    """Terracini-locus membership of a point set via exact computation."""
    h0, d = _h0_delta(space, config, primes)
    minimal = is_minimal(space, config)
    in_t1 = h0 > 0 and d > 0
    return MembershipReport(h0=h0, delta=d, minimal=minimal, in_T1=in_t1, in_T=in_t1 and minimal)


def _span_rank(vectors: Sequence[Sequence[int]]) -> int:
    return rank_fraction_free(IntMatrix.from_rows([list(v) for v in vectors]))


def classify3(space: MultiprojectiveSpace, config: PointConfiguration) -> PatternTag:
    """Structural pattern of a three-point set, up to factor permutation and relabeling.

    Tested in order EX1, EX40, P14_MINIMAL, GENERIC_ORBIT; non-minimal sets
    are OTHER outright.  Matching uses exact projective equality.
    """
    if len(config) != 3:
        raise WrongCardinality(f"classify3 needs 3 points, got {len(config)}")
    if not is_minimal(space, config):
        return PatternTag("OTHER")
    pts = config.points
    k = space.num_factors
    dims = space.factor_dims
    diffs = {
        (x, y): [f for f in range(k) if pts[x].coords[f] != pts[y].coords[f]]
        for x, y in itertools.combinations(range(3), 2)
    }

    if k >= 3:
        for (x, y), d in diffs.items():
            if len(d) == 1:
                # the shared-value condition on the third point and the dimension
                # of the non-designated factors follow from minimality
                return PatternTag("EX1", m=dims[d[0]], k=k)

        candidates: list[PatternTag] = []
        for (x, y), d in diffs.items():
            if len(d) != 2:
                continue
            j1, j2 = d
            o_idx = ({0, 1, 2} - {x, y}).pop()
            o = pts[o_idx]
            if k >= 4:
                subcase = "ii"
            else:
                pairdims = (dims[j1], dims[j2])
                subcase = {(1, 1): "iv", (2, 2): "iii"}.get(tuple(sorted(pairdims)), "v")
            one_dim = [j for j in (j1, j2) if dims[j] == 1]
            for u_idx, v_idx in ((x, y), (y, x)):
                u, v = pts[u_idx], pts[v_idx]
                mu = any(o.coords[j] == u.coords[j] for j in one_dim)
                mv = any(o.coords[j] == v.coords[j] for j in one_dim)
                candidates.append(
                    PatternTag("EX40", k=k, subcase=subcase, o_matches_u=mu, o_matches_v=mv)
                )
        if candidates:
            return max(
                candidates,
                key=lambda t: (t.o_matches_u and t.o_matches_v, t.o_matches_u or t.o_matches_v),
            )

    if dims == (1, 1, 1, 1):
        return PatternTag("P14_MINIMAL", k=4)

    generic = all(
        len({p.coords[i] for p in pts}) == 3
        and _span_rank([p.coords[i] for p in pts]) == min(3, n + 1)
        for i, n in enumerate(dims)
    )
    if generic:
        return PatternTag("GENERIC_ORBIT", k=k)
    return PatternTag("OTHER")


def predicted_in_T3(space: MultiprojectiveSpace, config: PointConfiguration) -> bool:
    """Decision procedure for three-point Terracini membership, no rank computed.

    The locus is empty on single- and two-factor spaces and on products of up
    to three planes; otherwise membership is read off the structural tag.
    """
    if len(config) != 3:
        raise WrongCardinality(f"predicted_in_T3 needs 3 points, got {len(config)}")
    dims_sorted = tuple(sorted(space.factor_dims, reverse=True))
    if space.num_factors <= 2 or dims_sorted == (2, 2, 2):
        return False
    tag = classify3(space, config)
    if tag.kind == "EX1":
        return tag.k >= 4
    if tag.kind == "EX40":
        if tag.subcase in ("ii", "iii"):
            return True
        if tag.subcase == "iv":
            return bool(tag.o_matches_u and tag.o_matches_v)
        if tag.subcase == "v":
            return bool(tag.o_matches_u or tag.o_matches_v)
    if tag.kind == "P14_MINIMAL":
        return True
    return False


# ---------------------------------------------------------------------------
# named family constructors


def _p1_value(t: int) -> tuple[int, int]:
    """Enumerate distinct points of P^1: [0,1] then [1,t-1]."""
    return (0, 1) if t == 0 else (1, t - 1)


def _rng_p1(rng: random.Random, avoid: set[tuple[int, int]]) -> tuple[int, int]:
    while True:
        v = _p1_value(rng.randrange(0, 8))
        if v not in avoid:
            return v


def build_ex1(
    m: int, k: int, seed: int | None = None
) -> tuple[MultiprojectiveSpace, PointConfiguration]:
    """Three points on P^m x (P^1)^(k-1): two agree outside the first factor,
    the third avoids the shared values everywhere past it."""
    if m not in (1, 2) or k < 3:
        raise BadParams(f"need m in {{1,2}} and k >= 3, got m={m}, k={k}")
    rng = random.Random(f"ex1:{seed}") if seed is not None else None
    if m == 1:
        if rng is None:
            a1, b1, c1 = (1, 0), (0, 1), (1, 1)
        else:
            a1 = _rng_p1(rng, set())
            b1 = _rng_p1(rng, {a1})
            c1 = _rng_p1(rng, set())
    else:
        if rng is None:
            a1, b1, c1 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
        else:
            while True:
                trio = [tuple(rng.randrange(-5, 6) for _ in range(3)) for _ in range(3)]
                if all(any(x for x in v) for v in trio) and _span_rank(trio) == 3:
                    a1, b1, c1 = trio
                    break
    shared = []
    avoided = []
    for _ in range(k - 1):
        u = _rng_p1(rng, set()) if rng else (1, 0)
        c = _rng_p1(rng, {u}) if rng else (0, 1)
        shared.append(u)
        avoided.append(c)
    space = MultiprojectiveSpace((m,) + (1,) * (k - 1))
    a = MppPoint((a1, *shared))
    b = MppPoint((b1, *shared))
    c = MppPoint((c1, *avoided))
    return space, PointConfiguration(space, (a, b, c))


def build_a40(
    n1: int,
    n2: int,
    k: int,
    coincidences: tuple[bool, bool] = (False, False),
    seed: int | None = None,
) -> tuple[MultiprojectiveSpace, PointConfiguration]:
    """Three points on P^n1 x P^n2 x (P^1)^(k-2): a pair differing exactly on
    the first two factors, plus a third point off all shared values.

    ``coincidences = (with_u, with_v)`` pins the third point to the pair on
    dimension-one designated factors: on P^1 x P^1 the flags act on factors 1
    and 2 respectively; with one plane factor both act on the line factor and
    cannot hold simultaneously; with two plane factors they must be False.
    """
    if n1 not in (1, 2) or n2 not in (1, 2) or k < 3:
        raise BadParams(f"need n1,n2 in {{1,2}} and k >= 3, got {(n1, n2, k)}")
    cu, cv = coincidences
    one_dim = [j for j in (0, 1) if (n1, n2)[j] == 1]
    if not one_dim and (cu or cv):
        raise BadParams("coincidences require a dimension-one designated factor")
    if len(one_dim) == 1 and cu and cv:
        raise BadParams("third point cannot match both pair points on one factor")
    rng = random.Random(f"a40:{seed}") if seed is not None else None

    def line_coords(match_u: bool, match_v: bool):
        if rng is None:
            u, v = (1, 0), (0, 1)
            o = u if match_u else v if match_v else (1, 1)
        else:
            u = _rng_p1(rng, set())
            v = _rng_p1(rng, {u})
            o = u if match_u else v if match_v else _rng_p1(rng, {u, v})
        return u, v, o

    def plane_coords():
        if rng is None:
            return (1, 0, 0), (0, 1, 0), (0, 0, 1)
        while True:
            trio = [tuple(rng.randrange(-5, 6) for _ in range(3)) for _ in range(3)]
            if all(any(x for x in v) for v in trio) and _span_rank(trio) == 3:
                return tuple(trio)

    per_factor = []
    for j, nj in enumerate((n1, n2)):
        if nj == 2:
            per_factor.append(plane_coords())
        elif len(one_dim) == 2:
            per_factor.append(line_coords(cu if j == 0 else False, cv if j == 1 else False))
        else:
            per_factor.append(line_coords(cu, cv))
    for _ in range(k - 2):
        if rng is None:
            s, t = (1, 0), (0, 1)
        else:
            s = _rng_p1(rng, set())
            t = _rng_p1(rng, {s})
        per_factor.append((s, s, t))
    space = MultiprojectiveSpace((n1, n2) + (1,) * (k - 2))
    u = MppPoint(tuple(f[0] for f in per_factor))
    v = MppPoint(tuple(f[1] for f in per_factor))
    o = MppPoint(tuple(f[2] for f in per_factor))
    return space, PointConfiguration(space, (u, v, o))


def build_g0(
    n: int, mu: int, r: int, seed: int | None = None
) -> tuple[MultiprojectiveSpace, PointConfiguration]:
    """r points of P^(n-1) x P^1 spanning exactly a mu-dimensional subspace of
    the first factor and sharing the second coordinate."""
    if n < 3 or not 1 <= mu <= n - 1 or r < mu + 1:
        raise BadParams(f"need n >= 3, 1 <= mu <= n-1, r >= mu+1, got {(n, mu, r)}")
    rng = random.Random(f"g0:{seed}") if seed is not None else None
    second = _rng_p1(rng, set()) if rng else (1, 0)
    firsts: list[tuple[int, ...]] = []
    for i in range(mu + 1):
        e = [0] * n
        e[i] = 1
        firsts.append(tuple(e))
    t = 1
    while len(firsts) < r:
        v = tuple(t**j for j in range(mu + 1)) + (0,) * (n - mu - 1)
        if v not in firsts:
            firsts.append(v)
        t += 1
    space = MultiprojectiveSpace((n - 1, 1))
    pts = tuple(MppPoint((f, second)) for f in firsts)
    return space, PointConfiguration(space, pts)


def build_kk1(
    n: int, r: int, seed: int | None = None
) -> tuple[MultiprojectiveSpace, PointConfiguration]:
    """r points of (P^1)^n: r-1 on a coordinate line sharing all later
    coordinates, one last point differing everywhere."""
    if n < 3 or r < 3:
        raise BadParams(f"need n >= 3 and r >= 3, got {(n, r)}")
    space = MultiprojectiveSpace((1,) * n)
    shared = (1, 0)
    pts = [
        MppPoint(((1, i),) + (shared,) * (n - 1)) for i in range(r - 1)
    ]
    last = MppPoint(((1, r - 1),) + ((0, 1),) * (n - 1))
    pts.append(last)
    return space, PointConfiguration(space, tuple(pts))


# ---------------------------------------------------------------------------
# randomized estimation and sweeps


def _trial_rng(label: str, seed: int, trial: int) -> random.Random:
    """Independent per-trial stream; string seeding hashes deterministically."""
    return random.Random(f"{label}:{seed}:{trial}")


def _random_point(space: MultiprojectiveSpace, rng: random.Random, box: int) -> MppPoint:
    coords = []
    for n in space.factor_dims:
        while True:
            v = tuple(rng.randint(-box, box) for _ in range(n + 1))
            if any(v):
                coords.append(v)
                break
    return MppPoint(tuple(coords))


def _random_config(
    space: MultiprojectiveSpace, r: int, rng: random.Random, box: int
) -> PointConfiguration:
    pts: list[MppPoint] = []
    seen: set = set()
    while len(pts) < r:
        p = _random_point(space, rng, box)
        if p.coords not in seen:
            seen.add(p.coords)
            pts.append(p)
    return PointConfiguration(space, tuple(pts))


def secant_dim_estimate(
    space: MultiprojectiveSpace,
    r: int,
    trials: int = 8,
    seed: int = 0,
    box: int = 100,
) -> SecantEstimate:
    """Randomized lower bound on the dimension of the r-th secant variety.

    Each trial draws r random integer points and ranks the all-ones double
    conditions matrix; the max rank minus one is a certified lower bound on
    the secant dimension, equal to it with overwhelming probability.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    n = space.dim
    expected = min(r * (n + 1), space.ambient_sections) - 1
    best = 0
    for t in range(trials):
        rng = _trial_rng("secant", seed, t)
        config = _random_config(space, r, rng, box)
        rows = _conditions_rows(
            space, [(p, 2) for p in config.points], (1,) * space.num_factors
        )
        best = max(best, rank_fraction_free(IntMatrix.from_rows(rows)))
    est = best - 1
    return SecantEstimate(
        expected_dim=expected,
        estimated_dim=est,
        defect=expected - est,
        trials=trials,
        seed=seed,
    )


def _sample_generic3(space: MultiprojectiveSpace, rng: random.Random) -> PointConfiguration:
    """Three points with injective, maximally spanning projections everywhere."""
    while True:
        config = _random_config(space, 3, rng, 6)
        ok = all(
            len({p.coords[i] for p in config.points}) == 3
            and _span_rank([p.coords[i] for p in config.points]) == min(3, n + 1)
            for i, n in enumerate(space.factor_dims)
        )
        if ok:
            return config


def _sample_degenerate3(space: MultiprojectiveSpace, rng: random.Random) -> PointConfiguration:
    """Three random points with random projective coincidences imposed."""
    while True:
        pts = [list(_random_point(space, rng, 6).coords) for _ in range(3)]
        for i in range(space.num_factors):
            if rng.random() < 0.5:
                src, dst = rng.sample(range(3), 2)
                pts[dst][i] = pts[src][i]
        coords = [tuple(p) for p in pts]
        if len({c for c in coords}) == 3:
            return PointConfiguration(space, tuple(MppPoint(c) for c in coords))


def _ex40_flag_combos(n1: int, n2: int, k: int) -> list[tuple[bool, bool]]:
    if k >= 4 or (n1, n2) == (2, 2):
        combos = [(False, False)]
    elif 2 in (n1, n2):
        combos = [(False, False), (True, False), (False, True)]
    else:
        combos = [(False, False), (True, False), (False, True), (True, True)]
    return combos


@dataclass
class ClassificationSweep:
    trials: int
    seed: int
    samples: int = 0
    per_class: dict = field(default_factory=dict)
    disagreements: list = field(default_factory=list)


def verify_classification(
    shapes: Iterable[MultiprojectiveSpace | Sequence[int]],
    trials: int = 25,
    seed: int = 0,
) -> ClassificationSweep:
    """Compare exact three-point membership with the structural prediction.

    For every shape with all factors of dimension one or two, samples each
    reachable pattern class and records any disagreement (expected none).
    """
    report = ClassificationSweep(trials=trials, seed=seed)
    for raw in shapes:
        space = raw if isinstance(raw, MultiprojectiveSpace) else MultiprojectiveSpace(tuple(raw))
        if any(n not in (1, 2) for n in space.factor_dims):
            raise ValueError(f"sweep requires factors of dimension 1 or 2: {space}")
        dims = space.factor_dims
        k = space.num_factors
        twos = sorted(dims, reverse=True)
        jobs: list[tuple[str, object]] = [("generic", None), ("degenerate", None)]
        if k >= 3 and twos.count(2) <= 1:
            jobs.append(("ex1", 2 if 2 in dims else 1))
        if k >= 3 and twos.count(2) <= 2:
            n1 = 2 if twos.count(2) >= 1 else 1
            n2 = 2 if twos.count(2) >= 2 else 1
            for combo in _ex40_flag_combos(n1, n2, k):
                jobs.append(("ex40", (n1, n2, combo)))
        for cls, param in jobs:
            key = (tuple(dims), cls if param is None else f"{cls}{param}")
            count = 0
            for t in range(trials):
                rng = _trial_rng(f"sweep:{dims}:{key[1]}", seed, t)
                if cls == "generic":
                    config = _sample_generic3(space, rng)
                elif cls == "degenerate":
                    config = _sample_degenerate3(space, rng)
                elif cls == "ex1":
                    _, config = build_ex1(param, k, seed=rng.randrange(2**32))
                    config = _permute_to_shape(config, dims, rng)
                else:
                    n1, n2, combo = param
                    _, config = build_a40(n1, n2, k, combo, seed=rng.randrange(2**32))
                    config = _permute_to_shape(config, dims, rng)
                if config is None:
                    continue
                space_c = config.space
                got = membership(space_c, config).in_T
                pred = predicted_in_T3(space_c, config)
                count += 1
                report.samples += 1
                if got != pred:
                    report.disagreements.append(
                        {
                            "shape": tuple(space_c.factor_dims),
                            "class": key[1],
                            "points": [p.coords for p in config.points],
                            "computed_in_T": got,
                            "predicted_in_T": pred,
                        }
                    )
            report.per_class[key] = count
    return report


def _permute_to_shape(
    config: PointConfiguration, dims: tuple[int, ...], rng: random.Random
) -> PointConfiguration | None:
    """Randomly permute factors so the configuration lands on the given shape."""
    from .segre import permute_factors

    src = config.space.factor_dims
    if sorted(src) != sorted(dims):
        return None
    while True:
        perm = list(range(len(dims)))
        rng.shuffle(perm)
        if tuple(src[j] for j in perm) == tuple(dims):
            _, out = permute_factors(config.space, config, perm)
            return out


def enumerate_spaces(n: int) -> list[MultiprojectiveSpace]:
    """All isomorphism classes of multiprojective spaces of total dimension n,
    as descending factor tuples in reverse-lexicographic order."""
    if n < 1:
        raise ValueError("dimension must be positive")

    def parts(total: int, cap: int) -> Iterable[tuple[int, ...]]:
        if total == 0:
            yield ()
            return
        for first in range(min(total, cap), 0, -1):
            for rest in parts(total - first, first):
                yield (first,) + rest

    return [MultiprojectiveSpace(p) for p in parts(n, n)]


@dataclass
class MaxDefectReport:
    n: int
    r: int
    theoretical: int  # (r-1)(n+1) - 1, the max with h0 > 0
    bound: int  # (r-1)(n+1), the unconditional bound
    best_delta: int
    best_shape: tuple[int, ...] | None
    best_kind: str | None
    unrestricted_delta: int
    unrestricted_shape: tuple[int, ...] | None
    samples: int


def max_defect_search(
    n: int, r: int, trials: int = 8, seed: int = 0
) -> MaxDefectReport:
    """Search all shapes of total dimension n for the largest defect of r doubles.

    Structured families (points on a line in one factor, coordinate-line
    stacks, simplex points on a single projective space) are always included
    alongside random and randomly degenerate samples; the maxima are reported
    both restricted to h0 > 0 and unrestricted.
    """
    if n < 1 or r < 2:
        raise BadParams(f"need n >= 1 and r >= 2, got {(n, r)}")
    report = MaxDefectReport(
        n=n,
        r=r,
        theoretical=(r - 1) * (n + 1) - 1,
        bound=(r - 1) * (n + 1),
        best_delta=-1,
        best_shape=None,
        best_kind=None,
        unrestricted_delta=-1,
        unrestricted_shape=None,
        samples=0,
    )
    for space in enumerate_spaces(n):
        dims = space.factor_dims
        candidates: list[tuple[str, PointConfiguration]] = []
        if space.num_factors == 1:
            # r distinct points of P^n
            pts = []
            t = 0
            while len(pts) < r:
                v = tuple(t**j for j in range(n + 1))
                pts.append(MppPoint((v,)))
                t += 1
            candidates.append(("simplex", PointConfiguration(space, tuple(pts))))
        if dims == (n - 1, 1) and n >= 3:
            for mu in range(1, min(n - 1, r - 1) + 1):
                _, cfg = build_g0(n, mu, r)
                candidates.append((f"line_stack_mu{mu}", cfg))
        if dims == (1,) * n and n >= 3 and r >= 3:
            _, cfg = build_kk1(n, r)
            candidates.append(("coordinate_line", cfg))
        for t in range(trials):
            rng = _trial_rng(f"maxdefect:{dims}", seed, t)
            candidates.append(("random", _random_config(space, r, rng, 5)))
            candidates.append(("degenerate", _degenerate_config(space, r, rng)))
        for kind, cfg in candidates:
            h0, d = _h0_delta(space, cfg, primes=(65521,))
            report.samples += 1
            if d > report.unrestricted_delta:
                report.unrestricted_delta = d
                report.unrestricted_shape = dims
            if h0 > 0 and d > report.best_delta:
                report.best_delta = d
                report.best_shape = dims
                report.best_kind = kind
    return report


def _degenerate_config(
    space: MultiprojectiveSpace, r: int, rng: random.Random
) -> PointConfiguration:
    """Random configuration with heavy coordinate sharing between points."""
    while True:
        pts = [list(_random_point(space, rng, 4).coords) for _ in range(r)]
        for i in range(space.num_factors):
            if rng.random() < 0.6:
                src = rng.randrange(r)
                for dst in range(r):
                    if dst != src and rng.random() < 0.7:
                        pts[dst][i] = pts[src][i]
        coords = [tuple(p) for p in pts]
        if len(set(coords)) == r:
            return PointConfiguration(space, tuple(MppPoint(c) for c in coords))
