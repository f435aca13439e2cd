"""Command line: ``gencirc {spectrum,verify,bench,example}``.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
import time
from contextlib import contextmanager
from math import gcd

import numpy as np

from . import circulant, instance, oracle, spectral
from .instance import InstanceDocument, ParseError
from .shift import DomainError

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2

BENCH_CASES = ("s1", "coprime", "divisor", "general")

EXAMPLES = {
    "golden-3x3": InstanceDocument(
        3, 1, np.array([-2, -3, 1], dtype=complex), np.array([1j, -1, 3, -1j / 6, 0.5, -0.5])
    ),
    # symbolic weights in the reference instances; 1..m stands in
    "coprime-5x5-s2": InstanceDocument(5, 2, np.arange(1, 6, dtype=complex), np.array([0, 1], dtype=complex)),
    "divisor-9x9-s3": InstanceDocument(9, 3, np.arange(1, 10, dtype=complex), np.array([0, 1], dtype=complex)),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, tol=True):
    p.add_argument("--input", default="-", help="instance file (default: stdin)")
    p.add_argument("--output", default="-", help="output file (default: stdout)")
    if tol:
        p.add_argument("--tol", type=float, default=1e-9, help="relative residual tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gencirc", description=__doc__.splitlines()[0])
    parser.add_argument("--log", default="WARNING", help="logging level")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="closed-form eigenpairs of an instance")
    _common(p)
    p.add_argument("--policy", choices=spectral.POLICIES, default="auto")

    p = sub.add_parser("verify", help="decompose and certify against dense oracles")
    _common(p)
    p.add_argument("--spectrum", help="check this spectrum document instead of recomputing")

    p = sub.add_parser("bench", help="time closed form against a dense eigensolver (CSV)")
    p.add_argument("--output", default="-")
    p.add_argument("--m-list", default="16,64,256", help="comma separated sizes")
    p.add_argument("--case", default="coprime", help=f"one of {', '.join(BENCH_CASES)}")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degree", type=int, default=3, help="coefficient degree k")
    p.add_argument("--oracle-cap", type=int, default=512, help="largest m timed with the dense solver")
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("example", help="emit a built-in instance")
    p.add_argument("name", help=f"one of {', '.join(EXAMPLES)}")
    p.add_argument("--output", default="-")
    return parser


@contextmanager
def _open_out(path):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _read(path) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(str(exc)) from None


def cmd_spectrum(args) -> int:
    doc = instance.loads(_read(args.input))
    dec = spectral.decompose(doc.to_spec(), policy=args.policy)
    with _open_out(args.output) as fh:
        fh.write(instance.dumps(instance.spectrum_dict(dec)))
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = instance.loads(_read(args.input))
    spec = doc.to_spec()
    if args.spectrum:
        import json

        try:
            dec = instance.decomposition_from_dict(json.loads(_read(args.spectrum)))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        if dec.m != spec.m:
            raise ParseError(f"spectrum is for m={dec.m}, instance has m={spec.m}")
    else:
        dec = spectral.decompose(spec)
    report = oracle.verify(spec, dec, oracle.Tolerances(residual=args.tol))
    out = report.to_dict()
    if dec.case is spectral.CaseTag.DEGENERATE_ZERO_WEIGHT:
        basis = [int(np.flatnonzero(dec.vector(i))[0]) for i in range(len(dec)) if dec.phase_index[i] < 0]
        out["degenerate"] = {
            "eigenvalue": instance.encode_vector([spec.coeffs[0]])[0],
            "algebraic_multiplicity": int(np.sum(dec.spectrum == spec.coeffs[0])),
            "basis_indices": basis,
            "basis_labels": [f"e{i + 1}" for i in basis],
        }
    with _open_out(args.output) as fh:
        fh.write(instance.dumps(out))
    return EXIT_OK if report.passed else EXIT_FAILED


def bench_instance(m: int, case: str, rng: np.random.Generator, degree: int = 3) -> InstanceDocument:
    if case == "s1":
        s = 1 % m
    elif case == "coprime":
        choices = [s for s in range(2, m) if gcd(s, m) == 1]
        s = int(rng.choice(choices)) if choices else 1 % m
    elif case == "divisor":
        choices = [s for s in range(2, m) if m % s == 0]
        s = int(rng.choice(choices)) if choices else 1 % m
    elif case == "general":
        choices = [s for s in range(2, m) if gcd(s, m) > 1 and m % s]
        if not choices:
            raise UsageError(f"no shift for m={m} has gcd > 1 without dividing m")
        s = int(rng.choice(choices))
    else:
        raise UsageError(f"unknown case {case!r}; choose from {', '.join(BENCH_CASES)}")
    u = rng.uniform(0.5, 2.0, m) * np.exp(2j * np.pi * rng.random(m))
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return InstanceDocument(m, s, u, c)


def cmd_bench(args) -> int:
    if args.case not in BENCH_CASES:
        raise UsageError(f"unknown case {args.case!r}; choose from {', '.join(BENCH_CASES)}")
    try:
        sizes = [int(x) for x in args.m_list.replace(" ", ",").split(",") if x]
    except ValueError:
        raise UsageError(f"bad --m-list {args.m_list!r}") from None
    if not sizes or min(sizes) < 2:
        raise UsageError("--m-list values must be >= 2")
    rng = np.random.default_rng(args.seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["m", "case", "closed_form_micros", "dense_oracle_micros", "max_residual"])
    for m in sizes:
        for _ in range(args.trials):
            doc = bench_instance(m, args.case, rng, args.degree)
            spec = doc.to_spec()
            t0 = time.perf_counter()
            dec = spectral.decompose(spec)
            closed = (time.perf_counter() - t0) * 1e6
            dense_us = ""
            if m <= args.oracle_cap:
                C = circulant.to_dense(spec)
                t0 = time.perf_counter()
                np.linalg.eig(C)
                dense_us = f"{(time.perf_counter() - t0) * 1e6:.1f}"
                res, _ = oracle.residual_check(C, dec)
            else:
                pick = rng.choice(m, size=min(32, m), replace=False)
                res, _ = oracle.residual_check(circulant.to_sparse(spec), dec, indices=np.sort(pick))
            writer.writerow([m, args.case, f"{closed:.1f}", dense_us, f"{res:.3e}"])
    with _open_out(args.output) as fh:
        fh.write(buf.getvalue())
    return EXIT_OK


def cmd_example(args) -> int:
    if args.name not in EXAMPLES:
        raise UsageError(f"unknown example {args.name!r}; choose from {', '.join(EXAMPLES)}")
    with _open_out(args.output) as fh:
        fh.write(instance.dumps(EXAMPLES[args.name].to_dict()))
    return EXIT_OK


COMMANDS = {"spectrum": cmd_spectrum, "verify": cmd_verify, "bench": cmd_bench, "example": cmd_example}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"gencirc {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, DomainError) as exc:
        print(f"gencirc {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
