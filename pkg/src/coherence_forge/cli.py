"""Command-line interface.

    coherence-forge bounds    --field R --d 8 --k 4
    coherence-forge construct --field R --d 21 --k 7 --out runs/r21
    coherence-forge verify    --gram runs/r21.gram.txt --field R --d 21 --k 7
    coherence-forge table     --field R --k 2 --d-min 4 --d-max 40 --out k2.csv
    coherence-forge measure   lone --input mu.json --grid 3600

Exit status: 0 on success, 1 when a check fails or an input is invalid,
2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import bounds
from .certify import (
    DEFAULT_TOL,
    atomic_write,
    certify_construction,
    emit_table,
    table_csv,
    verify_gram,
    write_construction,
)
from .errors import CoherenceError
from .linalg import Field, read_matrix
from .measures import (
    FiniteMeasure,
    default_seed,
    first_moment,
    is_isotropic,
    iso_bound_check,
    lone_witness,
    whiten,
)

FEATURES = ("k23",)


def _field(value: str) -> Field:
    try:
        return Field.parse(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return n


def _features(value: str) -> list[str]:
    names = [v for v in value.split(",") if v]
    bad = [v for v in names if v not in FEATURES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown feature(s) {bad}; known: {list(FEATURES)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--features", type=_features, action="extend", default=argparse.SUPPRESS,
                        help="comma-separated optional features (k23)")

    parser = argparse.ArgumentParser(prog="coherence-forge", parents=[common], description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def dims(p, with_d=True):
        p.add_argument("--field", type=_field, required=True)
        if with_d:
            p.add_argument("--d", type=_positive, required=True)
        p.add_argument("--k", type=_positive, required=True)

    p = sub.add_parser("bounds", parents=[common], help="lower bounds and construction values")
    dims(p)

    p = sub.add_parser("construct", parents=[common], help="build and certify the best system")
    dims(p)
    p.add_argument("--out", metavar="PREFIX")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = sub.add_parser("verify", parents=[common], help="certify a Gram matrix file")
    p.add_argument("--gram", required=True, metavar="FILE")
    dims(p)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--strict-rank", action="store_true", help="require rank exactly d")

    p = sub.add_parser("table", parents=[common], help="CSV of bounds and achieved values")
    dims(p, with_d=False)
    p.add_argument("--d-min", type=_positive, required=True)
    p.add_argument("--d-max", type=_positive, required=True)
    p.add_argument("--out", metavar="FILE.csv")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = sub.add_parser("measure", parents=[common], help="first moment or Lambda estimate of a measure")
    p.add_argument("what", choices=("moment", "lone"))
    p.add_argument("--input", required=True, metavar="FILE")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--grid", type=int, default=3600)
    p.add_argument("--seed", type=int, default=None)
    return parser


def _print(obj) -> None:
    print(json.dumps(obj, indent=2))


def _cmd_bounds(args, k23):
    _print(bounds.best_lower(args.field, args.d, args.k, k23=k23).as_dict())
    return 0


def _cmd_construct(args, k23):
    construction, cert = certify_construction(args.field, args.d, args.k, args.tol, k23=k23)
    out = cert.as_dict()
    if args.out:
        out["files"] = write_construction(args.out, construction, cert)
    _print(out)
    return 0 if cert.valid else 1


def _cmd_verify(args, k23):
    _, a = read_matrix(args.gram)
    cert = verify_gram(a, args.field, args.d, args.k, args.tol, strict_rank=args.strict_rank, k23=k23)
    _print(cert.as_dict())
    return 0 if cert.valid else 1


def _cmd_table(args, k23):
    if args.d_min > args.d_max:
        raise CoherenceError("--d-min must not exceed --d-max")
    text = table_csv(emit_table(args.field, args.k, args.d_min, args.d_max, tol=args.tol, k23=k23))
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_measure(args, k23):
    with open(args.input) as fh:
        mu = FiniteMeasure.from_json(fh.read())
    if args.what == "moment":
        out = {"first_moment": first_moment(mu), "isotropic": bool(is_isotropic(mu))}
        _, iso = whiten(mu)
        check = iso_bound_check(iso)
        out.update(
            whitened_first_moment=check.value,
            bound=check.bound,
            ok=check.ok,
            extremal=check.extremal,
        )
        _print(out)
        return 0 if check.ok else 1
    seed = default_seed() if args.seed is None else args.seed
    est = lone_witness(mu, restarts=args.restarts, grid=args.grid, seed=seed)
    _print(
        {
            "lambda_upper_estimate": est.value,
            "kind": "upper estimate",
            "direction": [[float(z.real), float(z.imag)] for z in est.v],
            "support_point": [[float(z.real), float(z.imag)] for z in est.y],
            "candidates": est.candidates,
            "seed": seed,
        }
    )
    return 0


COMMANDS = {
    "bounds": _cmd_bounds,
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "table": _cmd_table,
    "measure": _cmd_measure,
}


def cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    k23 = "k23" in getattr(args, "features", [])
    try:
        return COMMANDS[args.command](args, k23)
    except (CoherenceError, ValueError, OSError) as exc:
        print(f"coherence-forge: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli())


if __name__ == "__main__":
    main()
