"""Command-line interface: JSON job ingestion, reports and the named check suite.

One job per invocation.  Subcommands: ``defect`` (cohomology plus membership of
a scheme), ``classify`` (three-point pattern and prediction), ``secant``
(randomized secant-dimension estimate), ``search`` (extremal-defect or
classification sweep) and ``verify`` aliased as ``verify-paper`` (fixed list of
named checks against known values).  Exit codes: 0 success or all checks pass,
1 a check failed or a counterexample was found, 2 malformed input.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from .errors import InvariantViolation, ParseError
from .exactla import clear_denominators, is_prime
from .locus import (
    build_a40,
    build_ex1,
    build_g0,
    build_kk1,
    classify3,
    enumerate_spaces,
    max_defect_search,
    membership,
    predicted_in_T3,
    secant_dim_estimate,
    verify_classification,
)
from .segre import (
    DEFAULT_PRIMES,
    MppPoint,
    Multidegree,
    MultiprojectiveSpace,
    PointConfiguration,
    cohomology,
    minimal_space,
)
from .schemes import ZeroDimScheme

__all__ = ["main", "parse_config", "run_checks"]

_BIG = 2**53


def _json_safe(x: Any) -> Any:
    """Deterministic JSON shape; integers beyond 2^53 become decimal strings."""
    if isinstance(x, bool) or x is None or isinstance(x, (float, str)):
        return x
    if isinstance(x, int):
        return str(x) if abs(x) >= _BIG else x
    if isinstance(x, Fraction):
        return str(x)
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {k: _json_safe(v) for k, v in dataclasses.asdict(x).items()}
    if isinstance(x, dict):
        return {str(k): _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    raise TypeError(f"cannot serialize {type(x)!r}")


def _emit(obj: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(_json_safe(obj), sort_keys=True))
        return
    for line in _table_lines(_json_safe(obj)):
        print(line)


def _table_lines(obj: Any, prefix: str = "") -> list[str]:
    out: list[str] = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            key = f"{prefix}.{k}" if prefix else str(k)
            v = obj[k]
            if isinstance(v, (dict, list)):
                out.extend(_table_lines(v, key))
            else:
                out.append(f"{key:<40} {v}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            key = f"{prefix}[{i}]"
            if isinstance(v, (dict, list)):
                out.extend(_table_lines(v, key))
            else:
                out.append(f"{key:<40} {v}")
    else:
        out.append(f"{prefix:<40} {obj}")
    return out


# ---------------------------------------------------------------------------
# input parsing


def _require_keys(obj: dict, allowed: set[str], required: set[str], path: str) -> None:
    for k in obj:
        if k not in allowed:
            raise ParseError(f"{path}.{k}", "unknown field")
    for k in required:
        if k not in obj:
            raise ParseError(f"{path}.{k}", "missing field")


def _parse_posint(v: Any, path: str, minimum: int = 1) -> int:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ParseError(path, "expected an integer")
    try:
        n = int(v)
    except ValueError:
        raise ParseError(path, f"not an integer: {v!r}") from None
    if n < minimum:
        raise ParseError(path, f"must be at least {minimum}")
    return n


def _parse_vector(v: Any, length: int, path: str) -> tuple[int, ...]:
    if not isinstance(v, list) or len(v) != length:
        raise ParseError(path, f"expected a list of {length} coordinates")
    entries: list[Fraction] = []
    for j, x in enumerate(v):
        if isinstance(x, bool) or not isinstance(x, (int, str)):
            raise ParseError(f"{path}[{j}]", "expected an integer or rational string")
        try:
            entries.append(Fraction(x))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{path}[{j}]", f"bad number: {x!r}") from None
    w = clear_denominators(entries, primitive=True)
    if all(x == 0 for x in w):
        raise InvariantViolation(f"{path}: zero coordinate vector")
    return tuple(w)


def parse_config(
    data: bytes | str,
) -> tuple[MultiprojectiveSpace, ZeroDimScheme | None, Multidegree | None, int | None]:
    """Parse a JSON job payload; strict about field names.

    Returns the space, the scheme (None when no points were given), the
    multidegree restriction (None means all-ones) and the optional r.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise ParseError("$", f"invalid JSON: {e}") from None
    if not isinstance(obj, dict):
        raise ParseError("$", "top level must be an object")
    _require_keys(obj, {"factors", "points", "multidegree", "r"}, {"factors"}, "$")
    factors = obj["factors"]
    if not isinstance(factors, list) or not factors:
        raise ParseError("$.factors", "expected a nonempty list")
    dims = tuple(_parse_posint(x, f"$.factors[{i}]") for i, x in enumerate(factors))
    space = MultiprojectiveSpace(dims)
    scheme = None
    if "points" in obj:
        pts = obj["points"]
        if not isinstance(pts, list) or not pts:
            raise ParseError("$.points", "expected a nonempty list")
        terms = []
        seen = set()
        for i, entry in enumerate(pts):
            path = f"$.points[{i}]"
            if not isinstance(entry, dict):
                raise ParseError(path, "expected an object")
            _require_keys(entry, {"coords", "multiplicity"}, {"coords", "multiplicity"}, path)
            mult = _parse_posint(entry["multiplicity"], f"{path}.multiplicity")
            if mult not in (1, 2):
                raise ParseError(f"{path}.multiplicity", "must be 1 or 2")
            coords = entry["coords"]
            if not isinstance(coords, list) or len(coords) != len(dims):
                raise ParseError(f"{path}.coords", f"expected {len(dims)} vectors")
            vecs = tuple(
                _parse_vector(coords[j], dims[j] + 1, f"{path}.coords[{j}]")
                for j in range(len(dims))
            )
            p = MppPoint(vecs)
            if p.coords in seen:
                raise InvariantViolation(f"{path}: duplicate point")
            seen.add(p.coords)
            terms.append((p, mult))
        scheme = ZeroDimScheme(space, tuple(terms))
    degree = None
    if "multidegree" in obj:
        md = obj["multidegree"]
        if not isinstance(md, list) or len(md) != len(dims):
            raise ParseError("$.multidegree", f"expected {len(dims)} flags")
        for i, f in enumerate(md):
            if isinstance(f, bool) or f not in (0, 1):
                raise ParseError(f"$.multidegree[{i}]", "flags must be 0 or 1")
        if not any(md):
            raise InvariantViolation("$.multidegree: needs an active factor")
        degree = Multidegree(tuple(md))
    r = _parse_posint(obj["r"], "$.r") if "r" in obj else None
    return space, scheme, degree, r


def _parse_search_config(data: bytes | str) -> dict:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise ParseError("$", f"invalid JSON: {e}") from None
    if not isinstance(obj, dict):
        raise ParseError("$", "top level must be an object")
    _require_keys(obj, {"n", "r", "mode"}, {"n"}, "$")
    out = {"n": _parse_posint(obj["n"], "$.n"), "mode": obj.get("mode", "defect")}
    if out["mode"] not in ("defect", "classify"):
        raise ParseError("$.mode", "must be 'defect' or 'classify'")
    if "r" in obj:
        out["r"] = _parse_posint(obj["r"], "$.r", minimum=2)
    elif out["mode"] == "defect":
        raise ParseError("$.r", "missing field")
    return out


def _config_from_scheme(scheme: ZeroDimScheme) -> PointConfiguration | None:
    if any(m != 2 for _, m in scheme.terms):
        return None
    return PointConfiguration(scheme.space, tuple(p for p, _ in scheme.terms))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_defect(args, primes) -> int:
    space, scheme, degree, _ = parse_config(_read_input(args))
    if scheme is None:
        raise ParseError("$.points", "missing field")
    if degree is None:
        degree = Multidegree.all_ones(space)
    report: dict[str, Any] = {
        "command": "defect",
        "space": list(space.factor_dims),
        "degree": list(degree.flags),
        "cohomology": cohomology(space, scheme, degree, primes),
        "membership": None,
        "minimal_shape": None,
        "pattern": None,
    }
    config = _config_from_scheme(scheme)
    if config is not None and degree.is_all_ones():
        report["membership"] = membership(space, config, primes)
        try:
            reduced, _, _ = minimal_space(space, config)
            report["minimal_shape"] = list(reduced.factor_dims)
        except ValueError:
            pass
        if len(config) == 3:
            report["pattern"] = classify3(space, config)
    _emit(report, args.format)
    return 0


def _cmd_classify(args, primes) -> int:
    space, scheme, _, _ = parse_config(_read_input(args))
    if scheme is None:
        raise ParseError("$.points", "missing field")
    config = _config_from_scheme(scheme)
    if config is None:
        raise ParseError("$.points", "classification needs multiplicity-2 points")
    if len(config) != 3:
        raise ParseError("$.points", f"classification needs 3 points, got {len(config)}")
    mem = membership(space, config, primes)
    report = {
        "command": "classify",
        "space": list(space.factor_dims),
        "pattern": classify3(space, config),
        "predicted_in_T": predicted_in_T3(space, config),
        "membership": mem,
        "agreement": predicted_in_T3(space, config) == mem.in_T,
    }
    _emit(report, args.format)
    return 0


def _cmd_secant(args, primes) -> int:
    space, _, _, r = parse_config(_read_input(args))
    if r is None:
        raise ParseError("$.r", "missing field")
    est = secant_dim_estimate(space, r, trials=args.trials, seed=args.seed)
    report = {
        "command": "secant",
        "space": list(space.factor_dims),
        "r": r,
        "estimate": est,
    }
    _emit(report, args.format)
    return 0


def _cmd_search(args, primes) -> int:
    cfg = _parse_search_config(_read_input(args))
    if cfg["mode"] == "defect":
        rep = max_defect_search(cfg["n"], cfg["r"], trials=args.trials, seed=args.seed)
        counterexample = rep.unrestricted_delta > rep.bound or rep.best_delta > rep.theoretical
        report = {
            "command": "search",
            "mode": "defect",
            "report": rep,
            "counterexample_found": counterexample,
        }
        _emit(report, args.format)
        return 1 if counterexample else 0
    shapes = [
        s
        for n in range(1, cfg["n"] + 1)
        for s in enumerate_spaces(n)
        if all(d in (1, 2) for d in s.factor_dims)
    ]
    sweep = verify_classification(shapes, trials=args.trials, seed=args.seed)
    report = {
        "command": "search",
        "mode": "classify",
        "samples": sweep.samples,
        "disagreements": sweep.disagreements,
    }
    _emit(report, args.format)
    return 1 if sweep.disagreements else 0


# ---------------------------------------------------------------------------
# named check suite


def _check(checks, cid, expected, computed, provenance, note=None):
    entry = {
        "id": cid,
        "expected": expected,
        "computed": computed,
        "pass": expected == computed,
        "provenance": provenance,
    }
    if note:
        entry["note"] = note
    checks.append(entry)


def run_checks(seed: int = 0, trials: int = 8, primes: Sequence[int] = DEFAULT_PRIMES) -> list[dict]:
    """The fixed list of named checks against known exact values."""
    checks: list[dict] = []
    a, b = (1, 0), (0, 1)

    def pt(*vals):
        return MppPoint(tuple(vals))

    def stack(pattern):
        # pattern rows of 'a'/'b' letters over (P^1)^k
        space = MultiprojectiveSpace((1,) * len(pattern[0]))
        pts = tuple(
            pt(*[a if ch == "a" else b for ch in row]) for row in pattern
        )
        return space, PointConfiguration(space, pts)

    sp14 = MultiprojectiveSpace((1, 1, 1, 1))
    generic = PointConfiguration(
        sp14,
        (
            pt((1, 0), (1, 0), (1, 0), (1, 0)),
            pt((0, 1), (0, 1), (0, 1), (0, 1)),
            pt((1, 1), (1, 2), (1, 3), (1, 4)),
        ),
    )
    m = membership(sp14, generic, primes)
    _check(
        checks,
        "four-line-generic-triple",
        {"h0": 2, "delta": 1, "in_T": True},
        {"h0": m.h0, "delta": m.delta, "in_T": m.in_T},
        "generic three points on a product of four lines",
    )

    sp, cfg = build_a40(1, 1, 3, (True, True))
    m = membership(sp, cfg, primes)
    _check(
        checks,
        "three-line-double-coincidence",
        {"h0": 1, "delta": 5},
        {"h0": m.h0, "delta": m.delta},
        "pair differing on two of three line factors, third point matching both",
    )

    sp, cfg = stack(["aaaaa", "aabbb", "bbaab"])
    m = membership(sp, cfg, primes)
    _check(
        checks,
        "five-line-two-shared",
        {"h0": 14, "delta": 0},
        {"h0": m.h0, "delta": m.delta},
        "unique five-factor pattern with every projection of size two",
    )

    for cid, rows in (
        ("six-line-three-shared-a", ["aaaaaa", "aaabbb", "bbbbaa"]),
        ("six-line-three-shared-b", ["aaaaaa", "aaabbb", "bbbaaa"]),
        ("six-line-two-shared", ["aaaaaa", "aabbbb", "bbbbaa"]),
    ):
        sp, cfg = stack(rows)
        m = membership(sp, cfg, primes)
        _check(
            checks,
            cid,
            {"delta": 0},
            {"delta": m.delta},
            "six-factor pattern with every projection of size two",
            note=f"h0 = {m.h0} by exact kernel",
        )

    e0, e1, e2 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    g = (1, 1)
    sp_lu = MultiprojectiveSpace((2, 1, 1, 1))
    for cid, bc, cc in (
        ("plane-three-lines-shared-pair", b, b),
        ("plane-three-lines-spread", b, g),
    ):
        cfg = PointConfiguration(
            sp_lu,
            (pt(e0, a, a, a), pt(e1, bc, b, a), pt(e2, cc, a, b)),
        )
        m = membership(sp_lu, cfg, primes)
        _check(
            checks,
            cid,
            {"delta": 0},
            {"delta": m.delta},
            "plane times three lines with doubly non-injective projections",
            note=f"h0 = {m.h0} by exact kernel",
        )

    secant_cases = [
        ("secant-p1p1p1-r3", (1, 1, 1), 3, 7),
        ("secant-p1x4-r3", (1, 1, 1, 1), 3, 13),
        ("secant-p1x5-r3", (1, 1, 1, 1, 1), 3, 17),
        ("secant-p1x6-r3", (1, 1, 1, 1, 1, 1), 3, 20),
        ("secant-p2p2p2-r3", (2, 2, 2), 3, 20),
        ("secant-p2p2p1-r3", (2, 2, 1), 3, 17),
        ("secant-p2p1p1-r3", (2, 1, 1), 3, 11),
        ("secant-p2-p1x3-r3", (2, 1, 1, 1), 3, 17),
        ("secant-p1x3-r2", (1, 1, 1), 2, 7),
        ("secant-p1x4-r2", (1, 1, 1, 1), 2, 9),
        ("secant-p1x5-r2", (1, 1, 1, 1, 1), 2, 11),
    ]
    for cid, dims, r, want in secant_cases:
        est = secant_dim_estimate(MultiprojectiveSpace(dims), r, trials=trials, seed=seed)
        _check(
            checks,
            cid,
            {"dim": want},
            {"dim": est.estimated_dim},
            f"dimension of the order-{r} secant variety of the Segre of {dims}",
        )

    for cid, (n, mu, r) in (
        ("line-span-defect-n3", (3, 1, 2)),
        ("line-span-defect-n4", (4, 2, 3)),
    ):
        sp, cfg = build_g0(n, mu, r)
        m = membership(sp, cfg, primes)
        _check(
            checks,
            cid,
            {"delta": (r - 1) * (n + 1) - mu},
            {"delta": m.delta},
            "points on a linear subspace of one factor sharing the other coordinate",
        )

    for cid, (n, r), want, note in (
        (
            "coordinate-line-n3",
            (3, 3),
            False,
            "with three factors the pair shares two coordinates, so h0 = 0; "
            "membership in dimension 3 is witnessed by three-line-double-coincidence",
        ),
        ("coordinate-line-n4", (4, 3), True, None),
        ("coordinate-line-n5", (5, 4), True, None),
    ):
        sp, cfg = build_kk1(n, r)
        m = membership(sp, cfg, primes)
        _check(
            checks,
            cid,
            {"in_T": want},
            {"in_T": m.in_T},
            "near-collinear configuration with large defect and surviving sections",
            note=note,
        )

    for cid, (mk, want) in (
        ("one-shared-factor-k3", ((1, 3), False)),
        ("one-shared-factor-k4", ((1, 4), True)),
        ("one-shared-factor-m2-k5", ((2, 5), True)),
    ):
        sp, cfg = build_ex1(*mk)
        m = membership(sp, cfg, primes)
        _check(
            checks,
            cid,
            {"in_T": want},
            {"in_T": m.in_T},
            "pair agreeing outside a single designated factor",
        )

    sp, cfg = build_a40(2, 2, 3)
    m = membership(sp, cfg, primes)
    _check(
        checks,
        "two-plane-pair-k3",
        {"h0": 2, "delta": 2, "in_T": True},
        {"h0": m.h0, "delta": m.delta, "in_T": m.in_T},
        "pair differing on two plane factors of a three-factor space",
    )
    for cid, (n1, n2, k) in (
        ("two-factor-pair-k4-11", (1, 1, 4)),
        ("two-factor-pair-k4-21", (2, 1, 4)),
    ):
        sp, cfg = build_a40(n1, n2, k)
        m = membership(sp, cfg, primes)
        _check(
            checks,
            cid,
            {"delta": 2, "in_T": True},
            {"delta": m.delta, "in_T": m.in_T},
            "pair differing on two designated factors, four factors total",
        )

    import random as _random

    empty_ok = True
    for t in range(10):
        rng = _random.Random(f"pairs:{seed}:{t}")
        sp = MultiprojectiveSpace((1, 1, 1) if t % 2 else (2, 1))
        pts = []
        seen = set()
        while len(pts) < 2:
            coords = tuple(
                tuple(rng.randint(-3, 3) for _ in range(d + 1)) for d in sp.factor_dims
            )
            try:
                p = MppPoint(coords)
            except ValueError:
                continue
            if p.coords not in seen:
                seen.add(p.coords)
                pts.append(p)
        cfg = PointConfiguration(sp, tuple(pts))
        red_sp, red_cfg, _ = minimal_space(sp, cfg)
        if membership(red_sp, red_cfg, primes).in_T:
            empty_ok = False
    _check(
        checks,
        "two-point-sets-never-members",
        {"all_outside": True},
        {"all_outside": empty_ok},
        "no two-point set lies in the full locus, any shape",
    )
    return checks


def _cmd_verify(args, primes) -> int:
    checks = run_checks(seed=args.seed, trials=args.trials, primes=primes)
    ok = all(c["pass"] for c in checks)
    if args.format == "json":
        print(json.dumps(_json_safe({"command": "verify", "pass": ok, "checks": checks}), sort_keys=True))
    else:
        for c in checks:
            status = "PASS" if c["pass"] else "FAIL"
            print(
                f"{status}  {c['id']:<34} expected={json.dumps(_json_safe(c['expected']), sort_keys=True)} "
                f"computed={json.dumps(_json_safe(c['computed']), sort_keys=True)}  [{c['provenance']}]"
            )
        print(f"{'PASS' if ok else 'FAIL'}  total={len(checks)}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# entry point


def _read_input(args) -> bytes:
    if args.input is None:
        raise ParseError("--input", "missing input file")
    if args.input == "-":
        return sys.stdin.buffer.read()
    try:
        with open(args.input, "rb") as f:
            return f.read()
    except OSError as e:
        raise ParseError("--input", f"cannot read {args.input}: {e}") from None


def _parse_primes(text: str) -> tuple[int, ...]:
    try:
        primes = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ParseError("--primes", f"bad prime list: {text!r}") from None
    if not primes:
        raise ParseError("--primes", "need at least one prime")
    for p in primes:
        if p <= 2**15:
            raise ParseError("--primes", f"{p} is not above 2^15")
        if not is_prime(p):
            raise ParseError("--primes", f"{p} is not prime")
    return primes


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="terracini",
        description="Exact Terracini defects and locus membership on Segre embeddings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("defect", "classify", "secant", "search", "verify-paper"):
        p = sub.add_parser(name)
        p.add_argument("--input", default=None, help="JSON job file, or - for stdin")
        p.add_argument("--seed", type=int, default=0, help="root 64-bit seed")
        p.add_argument("--trials", type=int, default=8, help="random trials per estimate")
        p.add_argument("--primes", default=None, help="comma-separated cross-check primes")
        p.add_argument("--format", choices=("json", "table"), default="json")
    args = parser.parse_args(argv)
    try:
        if not 0 <= args.seed < 2**64:
            raise ParseError("--seed", "must fit in 64 bits")
        if args.trials < 1:
            raise ParseError("--trials", "must be at least 1")
        primes = _parse_primes(args.primes) if args.primes else DEFAULT_PRIMES
        handler = {
            "defect": _cmd_defect,
            "classify": _cmd_classify,
            "secant": _cmd_secant,
            "search": _cmd_search,
            "verify-paper": _cmd_verify,
        }[args.command]
        return handler(args, primes)
    except (ParseError, InvariantViolation, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
