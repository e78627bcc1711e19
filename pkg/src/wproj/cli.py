"""Command-line front end.

Exit codes: 0 success, 1 domain error (mathematically invalid input),
2 usage error (unknown flags, malformed points/polynomials/numbers).
Exact symbolic values are always printed before any decimal rendering.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .exactnum import DomainError, FormalLog, factor
from .wspace import WeightVector, classify, is_singular, reduce_weights
from .wpoint import (
    WPoint,
    canonicalize,
    equals,
    normalize,
    parse_point,
    wgcd,
)
from .wheight import hgcd, hwgcd_mult, lwh, split_height_S, wh_m_power
from .wpoly import (
    PolyParseError,
    SubschemeSpec,
    global_height_Y,
    parse_wpoly_file,
)
from . import vojtalab
from .search import SearchConfig
from .search import search as run_search


class UsageError(Exception):
    """Malformed command-line input; maps to exit code 2."""


# ---------------------------------------------------------------------------
# input parsing helpers (syntax errors here are usage errors)
# ---------------------------------------------------------------------------


def _weights(text: str) -> WeightVector:
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed weight list {text!r}")
    return classify(parts)


def _rationals(text: str) -> list[Fraction]:
    try:
        return [Fraction(part) for part in text.split(":")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed point/tuple {text!r}")


def _point(text: str, w: WeightVector) -> WPoint:
    coords = _rationals(text)
    if len(coords) != len(w.q):
        raise UsageError(
            f"point has {len(coords)} coordinates but weights have {len(w.q)}"
        )
    from .wpoint import integralize

    return integralize(coords, w)


def _int_tuple(text: str, w: WeightVector) -> tuple[int, ...]:
    coords = _rationals(text)
    out = []
    for c in coords:
        if c.denominator != 1:
            raise UsageError(f"expected integer coordinates, got {c}")
        out.append(c.numerator)
    if len(out) != len(w.q):
        raise UsageError(
            f"tuple has {len(out)} coordinates but weights have {len(w.q)}"
        )
    return tuple(out)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed rational {text!r}")


def _fraction_list(text: str) -> tuple[Fraction, ...]:
    return tuple(_fraction(part) for part in text.split(","))


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"malformed integer list {text!r}")


def _load_wpoly(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    try:
        return parse_wpoly_file(text)
    except PolyParseError as exc:
        raise UsageError(f"malformed polynomial file {path}: {exc}")


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _flog_fields(v: FormalLog) -> dict:
    return {"exact": v.symbolic(), "decimal": v.decimal(15)}


def _emit(result: dict, plain_lines: list[str], args) -> None:
    fmt = getattr(args, "format", "plain")
    if fmt == "plain":
        text = "\n".join(plain_lines) + "\n"
    elif fmt == "json":
        text = json.dumps(result, sort_keys=True, indent=2, default=str) + "\n"
    else:  # csv
        rows = ["key,value"]
        for k, v in result.items():
            if isinstance(v, (list, tuple)):
                v = ";".join(str(x) for x in v)
            rows.append(f"{k},{v}")
        text = "\n".join(rows) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_factor(args) -> None:
    try:
        n = int(args.n)
    except ValueError:
        raise UsageError(f"malformed integer {args.n!r}")
    f = factor(n)
    body = " * ".join(
        (f"{p}^{e}" if e > 1 else str(p)) for p, e in f.factors
    ) or "1"
    if f.unit < 0:
        body = "-" + body
    _emit(
        {"n": n, "unit": f.unit, "factors": [list(t) for t in f.factors]},
        [body],
        args,
    )


def _cmd_wgcd(args) -> None:
    w = _weights(args.weights)
    x = WPoint(w, _int_tuple(args.tuple, w))
    _emit({"weights": str(w), "tuple": str(x), "wgcd": wgcd(x)}, [str(wgcd(x))], args)


def _cmd_normalize(args) -> None:
    w = _weights(args.weights)
    y = normalize(WPoint(w, _int_tuple(args.tuple, w)))
    out = ":".join(str(c) for c in y.coords)
    _emit({"weights": str(w), "normalized": out}, [out], args)


def _cmd_canonical(args) -> None:
    w = _weights(args.weights)
    y = canonicalize(WPoint(w, _int_tuple(args.tuple, w)))
    out = ":".join(str(c) for c in y.coords)
    _emit({"weights": str(w), "canonical": out}, [out], args)


def _cmd_equals(args) -> None:
    w = _weights(args.weights)
    a = WPoint(w, _int_tuple(args.left, w))
    b = WPoint(w, _int_tuple(args.right, w))
    same = equals(a, b)
    _emit({"weights": str(w), "equal": same}, ["true" if same else "false"], args)


def _cmd_height(args) -> None:
    w = _weights(args.weights)
    x = _point(args.point, w)
    h = lwh(x)
    _emit(
        {
            "weights": str(w),
            "representative": str(x),
            "lwh": _flog_fields(h),
            "wh_m_power": wh_m_power(x),
            "m": w.m,
        },
        [h.symbolic(), h.decimal(15)],
        args,
    )


def _cmd_hwgcd(args) -> None:
    w = _weights(args.weights)
    coords = _rationals(args.tuple)
    if len(coords) != len(w.q):
        raise UsageError("tuple/weights length mismatch")
    g = hwgcd_mult(coords, w)
    _emit(
        {
            "weights": str(w),
            "hwgcd": g,
            "archimedean_convention": "finite places only; the logarithmic "
            "form floors ord_oo+ = max(-log|x|, 0), which vanishes on integers",
        },
        [str(g)],
        args,
    )


def _cmd_hgcd(args) -> None:
    v = hgcd(_fraction(args.a), _fraction(args.b))
    _emit(
        {"a": str(args.a), "b": str(args.b), "hgcd": _flog_fields(v)},
        [v.symbolic(), v.decimal(15)],
        args,
    )


def _cmd_split_height(args) -> None:
    w = _weights(args.weights)
    x = _point(args.point, w)
    S = set(_int_list(args.primes)) if args.primes else set()
    divisor = list(_int_list(args.divisor)) if args.divisor else None
    sh = split_height_S(x, S, divisor)
    _emit(
        {
            "weights": str(w),
            "point": str(x),
            "S": sorted(S),
            "in_S": _flog_fields(sh.in_S),
            "out_S": _flog_fields(sh.out_S),
            "total": _flog_fields(sh.total()),
        },
        [
            f"in_S: {sh.in_S.symbolic()} = {sh.in_S.decimal(15)}",
            f"out_S: {sh.out_S.symbolic()} = {sh.out_S.decimal(15)}",
            f"total: {sh.total().symbolic()} = {sh.total().decimal(15)}",
        ],
        args,
    )


def _cmd_poly_check(args) -> None:
    weights, polys = _load_wpoly(args.poly)
    lines = [f"weights: {' '.join(f'{n}={q}' for n, q in weights.items())}"]
    for f in polys:
        lines.append(f"degree {f.degree}: {f}")
    _emit(
        {
            "weights": weights,
            "polynomials": [str(f) for f in polys],
            "degrees": [f.degree for f in polys],
        },
        lines,
        args,
    )


def _cmd_poly_eval(args) -> None:
    weights, polys = _load_wpoly(args.poly)
    w = classify(list(weights.values()))
    x = _point(args.point, w)
    values = [f.eval(x.coords) for f in polys]
    _emit(
        {"point": str(x), "values": values},
        [str(v) for v in values],
        args,
    )


def _cmd_subscheme_height(args) -> None:
    weights, polys = _load_wpoly(args.poly)
    w = classify(list(weights.values()))
    spec = SubschemeSpec(tuple(polys), args.codim)
    x = _point(args.point, w)
    h = global_height_Y(spec, x)
    _emit(
        {
            "point": str(x),
            "asserted_codim": spec.asserted_codim,
            "height": _flog_fields(h),
        },
        [h.symbolic(), h.decimal(15)],
        args,
    )


def _cmd_singular(args) -> None:
    w = _weights(args.weights)
    coords = _int_tuple(args.tuple, w)
    s = is_singular(w, coords)
    _emit({"weights": str(w), "singular": s}, ["true" if s else "false"], args)


def _cmd_reduce_weights(args) -> None:
    w = _weights(args.weights)
    red, d = reduce_weights(w)
    _emit(
        {"weights": str(w), "reduced": str(red), "d": d},
        [str(red), f"d: {d}"],
        args,
    )


def _cmd_search(args) -> None:
    w = _weights(args.weights)
    B = _fraction(args.bound)
    poly = None
    nonvanishing: frozenset[int] = frozenset()
    if args.poly:
        weights, polys = _load_wpoly(args.poly)
        if len(polys) != 1:
            raise UsageError("search expects exactly one polynomial")
        if tuple(weights.values()) != w.q:
            raise UsageError("polynomial weights do not match --weights")
        poly = polys[0]
        if args.require_nonzero:
            names = list(weights)
            idx = set()
            for name in args.require_nonzero.split(","):
                name = name.strip()
                if name in names:
                    idx.add(names.index(name))
                else:
                    try:
                        idx.add(int(name))
                    except ValueError:
                        raise UsageError(f"unknown coordinate {name!r}")
            nonvanishing = frozenset(idx)
    elif args.require_nonzero:
        nonvanishing = frozenset(_int_list(args.require_nonzero))
    config = SearchConfig(
        w=w,
        bound=B,
        hypersurface=poly,
        nonvanishing=nonvanishing,
        jobs=args.jobs,
        phase2=not args.no_phase2,
    )
    report = run_search(config)
    result = {
        "schema_version": vojtalab.SCHEMA_VERSION,
        "weights": str(w),
        "bound": str(B),
        "hypersurface": None if poly is None else str(poly),
        "nonvanishing": sorted(nonvanishing),
        "jobs": args.jobs,
        "phase1_candidates": report.phase1_candidates,
        "phase2_candidates": report.phase2_candidates,
        "wall_time_seconds": round(report.wall_time, 3),
        "points": [
            {
                "coords": list(h.point.coords),
                "wh_m_power": h.wh_m,
                "vanishing": list(h.vanishing),
            }
            for h in report.hits
        ],
    }
    lines = [f"# {len(report.hits)} points, wh^{w.m} <= {str(B**w.m)}"]
    for h in report.hits:
        lines.append(
            ":".join(str(c) for c in h.point.coords) + f"  wh^{w.m}={h.wh_m}"
        )
    _emit(result, lines, args)


def _cmd_vojta_scan(args) -> None:
    w = _weights(args.weights)
    weights, polys = _load_wpoly(args.poly)
    if tuple(weights.values()) != w.q:
        raise UsageError("polynomial weights do not match --weights")
    seed = args.seed
    if seed is None:
        seed = random.SystemRandom().randrange(2**32)
        print(f"# generated seed: {seed}", file=sys.stderr)
    config = vojtalab.ScanConfig(
        spec=SubschemeSpec(tuple(polys), args.codim),
        w=w,
        S=frozenset(_int_list(args.primes)) if args.primes else frozenset(),
        epsilon_grid=_fraction_list(args.eps),
        delta_grid=_fraction_list(args.delta),
        box_radii=_int_list(args.box),
        samples=args.samples,
        seed=seed,
        require_coprime=args.coprime,
        jobs=args.jobs,
    )
    report = vojtalab.scan(config)
    text = report.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(sp, out=True) -> None:
    sp.add_argument("--format", choices=["plain", "json", "csv"], default="plain")
    if out:
        sp.add_argument("--out", default=None, help="write output to a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wproj",
        description="Exact arithmetic for weighted projective spaces over Q",
    )
    parser.add_argument("--version", action="version", version=f"wproj {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("factor", help="factor a nonzero integer")
    sp.add_argument("n")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_factor)

    for name, fn, extra in [
        ("wgcd", _cmd_wgcd, ["tuple"]),
        ("normalize", _cmd_normalize, ["tuple"]),
        ("canonical", _cmd_canonical, ["tuple"]),
        ("singular", _cmd_singular, ["tuple"]),
    ]:
        sp = sub.add_parser(name)
        sp.add_argument("--weights", required=True)
        sp.add_argument("--tuple", required=True)
        _add_common(sp)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("equals", help="same point of P_w(Q)?")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    _add_common(sp)
    sp.set_defaults(fn=_cmd_equals)

    sp = sub.add_parser("height", help="logarithmic weighted height")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--point", required=True)
    _add_common(sp)
    sp.set_defaults(fn=_cmd_height)

    sp = sub.add_parser("hwgcd", help="weighted gcd over finite places")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--tuple", required=True)
    _add_common(sp)
    sp.set_defaults(fn=_cmd_hwgcd)

    sp = sub.add_parser("hgcd", help="generalized logarithmic gcd of two rationals")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    _add_common(sp)
    sp.set_defaults(fn=_cmd_hgcd)

    sp = sub.add_parser("split-height", help="divisor height split at S")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--primes", default="")
    sp.add_argument("--divisor", default="", help="coordinate indices, default all")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_split_height)

    sp = sub.add_parser("poly-check", help="parse and validate a .wpoly file")
    sp.add_argument("--poly", required=True)
    _add_common(sp)
    sp.set_defaults(fn=_cmd_poly_check)

    sp = sub.add_parser("poly-eval", help="evaluate polynomials at a point")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--point", required=True)
    _add_common(sp)
    sp.set_defaults(fn=_cmd_poly_eval)

    sp = sub.add_parser("subscheme-height", help="global height relative to a subscheme")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--codim", type=int, required=True)
    _add_common(sp)
    sp.set_defaults(fn=_cmd_subscheme_height)

    sp = sub.add_parser("reduce-weights", help="divide out the weight gcd")
    sp.add_argument("--weights", required=True)
    _add_common(sp)
    sp.set_defaults(fn=_cmd_reduce_weights)

    import os

    default_jobs = int(os.environ.get("WPROJ_JOBS", "1"))

    sp = sub.add_parser("search", help="bounded-height point search")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--bound", required=True)
    sp.add_argument("--poly", default=None)
    sp.add_argument("--require-nonzero", default=None)
    sp.add_argument("--jobs", type=int, default=default_jobs)
    sp.add_argument("--no-phase2", action="store_true")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_search)

    sp = sub.add_parser("vojta-scan", help="empirical gcd-bound scan")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--poly", required=True)
    sp.add_argument("--codim", type=int, required=True)
    sp.add_argument("--primes", default="")
    sp.add_argument("--eps", required=True)
    sp.add_argument("--delta", required=True)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--box", required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--coprime", action="store_true")
    sp.add_argument("--jobs", type=int, default=default_jobs)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=_cmd_vojta_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    print(
        f"# wproj {__version__} | {args.command} | "
        + " ".join(sys.argv[1:] if argv is None else argv),
        file=sys.stderr,
    )
    try:
        args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except PolyParseError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
