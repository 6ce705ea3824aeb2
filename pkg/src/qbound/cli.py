"""Command-line entry point: ``qbound <subcommand> ...``.

Exit status: 0 success, 1 bound violation or solver error, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from qbound.bounds import EIGENVALUE_BOUNDS, SHORT_NAMES, all_bounds, all_scalar_bounds
from qbound.companion import MatrixPolynomial, polynomial_right_spectrum
from qbound.errors import QBoundError
from qbound.harness import (
    dumps_polynomial,
    load_polynomial,
    load_scalar_coeffs,
    load_suite_config,
    random_polynomial,
    run_suite,
    save_polynomial,
    verify_instance,
)

_LONG_NAMES = {v: k for k, v in SHORT_NAMES.items()}
_LONG_NAMES.update({"lemma33": "lemma33", "lemma34": "lemma34"})


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _parse_bound_list(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    unknown = [t for t in names if t not in _LONG_NAMES]
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown bound(s) {', '.join(unknown)}; choose from {', '.join(_LONG_NAMES)}"
        )
    return [_LONG_NAMES[t] for t in names]


def cmd_bound(args) -> int:
    poly = load_polynomial(args.file)
    reports = all_bounds(poly, args.bounds or EIGENVALUE_BOUNDS)
    _emit({"k": poly.k, "n": poly.n, "bounds": [r.to_dict() for r in reports]})
    return 0


def cmd_zeros(args) -> int:
    coeffs = load_scalar_coeffs(args.coeffs)
    reports = all_scalar_bounds(coeffs)
    spectrum = polynomial_right_spectrum(MatrixPolynomial.scalar(coeffs))
    _emit({
        "k": len(coeffs),
        "bounds": [r.to_dict() for r in reports],
        "zeros": [[z.real, z.imag] for z in spectrum.representatives],
        "zero_moduli": spectrum.moduli(),
        "max_modulus": spectrum.radius,
    })
    return 0


def cmd_random(args) -> int:
    poly = random_polynomial(args.k, args.n, args.seed, args.scale)
    if args.out:
        save_polynomial(poly, args.out)
    else:
        sys.stdout.write(dumps_polynomial(poly))
    return 0


def cmd_verify(args) -> int:
    poly = load_polynomial(args.file)
    row = verify_instance(poly, instance_id=args.id or args.file)
    _emit(row.to_dict(timing=args.timing))
    return 0 if row.passed else 1


def cmd_suite(args) -> int:
    config = load_suite_config(args.config)
    if args.jobs is not None:
        config.jobs = args.jobs
    result = run_suite(config, args.out_dir, timing=args.timing)
    s = result.summary
    print(
        f"{s['instances']} instances, {s['violations']} with violations, "
        f"{s['solver_errors']} with solver errors -> {result.csv_path}, {result.summary_path}",
        file=sys.stderr,
    )
    return result.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qbound",
        description="Upper bounds on right eigenvalues of monic quaternion matrix polynomials.",
    )
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="evaluate bounds for a polynomial file")
    b.add_argument("file")
    b.add_argument("--bounds", type=_parse_bound_list, default=None,
                   help="comma list from thm35,thm36,thm37,b1,lemma33,lemma34 (default: the four eigenvalue bounds)")
    b.set_defaults(func=cmd_bound)

    z = sub.add_parser("zeros", help="scalar-polynomial zero bounds")
    z.add_argument("--coeffs", required=True, help="JSON list of [w,x,y,z] coefficients a_0..a_{k-1}")
    z.set_defaults(func=cmd_zeros)

    r = sub.add_parser("random", help="generate a seeded random polynomial")
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--scale", type=float, default=1.0)
    r.add_argument("--out", help="output path (default: stdout)")
    r.set_defaults(func=cmd_random)

    v = sub.add_parser("verify", help="check every bound against the companion spectrum")
    v.add_argument("file")
    v.add_argument("--id", help="instance id to report (default: the file path)")
    v.add_argument("--timing", action="store_true", help="report elapsed_ms")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("suite", help="verify a batch of instances and write CSV + JSON reports")
    s.add_argument("--config", required=True)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--jobs", type=int, default=None, help="worker processes (overrides config)")
    s.add_argument("--timing", action="store_true",
                   help="fill elapsed_ms (outputs are then no longer byte-reproducible)")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except QBoundError as exc:
        print(f"qbound: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
