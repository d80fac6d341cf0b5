"""Command-line front end.

Exit status is 0 on success, 1 when a verification or relation check fails,
and 2 on malformed input.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from functools import reduce
from typing import List, Optional, Sequence

from . import codec
from .affine import join_cone, lub
from .monomials import (
    PRESENTATIONS,
    Monomial,
    mono_mul,
    reduce_add,
    reduce_cl,
    reduce_mult,
)
from .reprs import (
    RELATIONS_FOR,
    build_nxz,
    build_qplus,
    build_regular,
    matrix_to_coo_text,
    monomial_matrix,
    relation_residuals,
)
from .states import (
    KmsParams,
    LEBESGUE,
    DELTA_MINUS1,
    DELTA_PLUS1,
    ToeplitzStateSpec,
    ground_state,
    kms1_limit,
    kms_state,
)
from .verify import sweep

TOL_ENV = "AFFINE_TOEPLITZ_TOL"
CSV_COLUMNS = ["a", "m", "n", "b", "beta", "measure", "value_re", "value_im", "error_bound"]
TABLE_BETAS = (1.5, 1.25, 1.125, 1.0625)
FINITE_PRIME_BETAS = (2.0, 1.0, 0.5)
TABLE_MONOMIALS = [
    Monomial(1, 0, 0, 1),
    Monomial(1, 1, 0, 1),
    Monomial(1, 2, 0, 1),
    Monomial(2, 0, 0, 2),
    Monomial(2, 1, 0, 2),
    Monomial(2, 3, 1, 2),
    Monomial(3, 5, 1, 3),
    Monomial(3, 0, 3, 3),
    Monomial(2, 1, 0, 3),
]
TABLE_MEASURES = [("lebesgue", LEBESGUE), ("delta1", DELTA_PLUS1), ("delta-1", DELTA_MINUS1)]


class UsageError(Exception):
    """Malformed command-line input; reported with exit status 2."""


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return 1e-10
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a number")


def _bounds(text: str):
    try:
        parts = [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bounds must be integers, got {text!r}")
    if len(parts) != 2 or parts[0] < 1 or parts[1] < 1:
        raise argparse.ArgumentTypeError("bounds are two positive integers 'A,M'")
    return tuple(parts)


def _primes(text: str):
    try:
        return frozenset(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"prime set must be integers, got {text!r}")


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON {text!r}: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affine-toeplitz",
        description="Exact monomial algebra and KMS states for N^x |x N.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--beta", type=float, help="inverse temperature")
    common.add_argument("--tol", type=float, help=f"evaluation tolerance (default ${TOL_ENV} or 1e-10)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--count", type=int, default=1000)
    common.add_argument("--bounds", type=_bounds, help="A,M: bounds for scales and shifts")
    common.add_argument("--measure", default="lebesgue", help="name, JSON, or path to a JSON file")
    common.add_argument("--quotient", choices=sorted(PRESENTATIONS), default="full")
    common.add_argument("--output", choices=("json", "csv"), help="default json; csv for table")
    common.add_argument("--prime-set", type=_primes, help="comma-separated finite prime set")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("join", parents=[common], help="least common upper bound of cone points")
    p.add_argument("points", nargs="+", help='cone points as {"a":A,"m":M}')
    p = sub.add_parser("lub", parents=[common], help="least upper bound of a group element")
    p.add_argument("point", help='{"a":rat,"r":rat}')
    p = sub.add_parser("product", parents=[common], help="product of monomials, left to right")
    p.add_argument("monomials", nargs="+")
    p = sub.add_parser("reduce", parents=[common], help="image of a full monomial in a quotient")
    p.add_argument("monomial")
    p = sub.add_parser("eval-state", parents=[common], help="evaluate a KMS or ground state")
    p.add_argument("monomials", nargs="+")
    p.add_argument("--ground", action="store_true", help="use the ground state of the trace of --measure")
    p = sub.add_parser("verify", parents=[common], help="random sweep of an equilibrium identity")
    p.add_argument("--kind", choices=("char", "kms", "ground"), default="kms")
    p.add_argument("--state", choices=("kms", "ground"), help="oracle to test (default matches --kind)")
    p = sub.add_parser("repr-check", parents=[common], help="relation residuals on a truncated representation")
    p.add_argument("--rep", choices=sorted(RELATIONS_FOR), default="regular")
    p.add_argument("--relation-bound", type=int, default=6, help="largest scale in relation instances")
    p.add_argument("--export", metavar="MONOMIAL", help="print the monomial's matrix as coordinate text")
    sub.add_parser("table", parents=[common], help="CSV table of state values on a beta grid")
    return parser


# --- output ---------------------------------------------------------------


def _emit_rows(rows: List[dict], fmt: str, out, columns: Optional[Sequence[str]] = None) -> None:
    if fmt == "csv":
        columns = list(columns or (rows[0].keys() if rows else []))
        writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row.get(k)) for k in columns})
    else:
        json.dump(rows if len(rows) != 1 else rows[0], out)
        out.write("\n")


def _csv_cell(v):
    return json.dumps(v, separators=(",", ":")) if isinstance(v, (dict, list)) else v


def _state_row(x: Monomial, beta, label: str, value: complex, err: float) -> dict:
    return {
        "a": x.a, "m": x.m, "n": x.n, "b": x.b, "beta": beta, "measure": label,
        "value_re": value.real, "value_im": value.imag, "error_bound": err,
    }


# --- commands -------------------------------------------------------------


def _cmd_join(args, out):
    points = [codec.decode_cone(_json_arg(p)) for p in args.points]
    _emit_rows([codec.encode(reduce(join_cone, points))], args.output, out)
    return 0


def _cmd_lub(args, out):
    _emit_rows([codec.encode(lub(codec.decode_affine(_json_arg(args.point))))], args.output, out)
    return 0


def _cmd_product(args, out):
    monos = [codec.decode_monomial(_json_arg(m), args.quotient) for m in args.monomials]
    _emit_rows([codec.encode(reduce(mono_mul, monos))], args.output, out)
    return 0


_REDUCERS = {"full": lambda x: x, "add": reduce_add, "mult": reduce_mult, "cl": reduce_cl}


def _cmd_reduce(args, out):
    x = codec.decode_monomial(_json_arg(args.monomial), "full")
    _emit_rows([codec.encode(_REDUCERS[args.quotient](x))], args.output, out)
    return 0


def _params(args) -> KmsParams:
    if args.beta is None:
        raise UsageError("--beta is required")
    try:
        return KmsParams(args.beta, tol=args.tol or _default_tol(), prime_set=args.prime_set)
    except ValueError as exc:
        raise UsageError(str(exc))


def _cmd_eval_state(args, out):
    mu = codec.load_measure(args.measure)
    if args.ground:
        phi = ground_state(ToeplitzStateSpec.from_measure(mu))
    else:
        phi = kms_state(_params(args), mu)
    beta = args.beta
    rows = []
    for text in args.monomials:
        x = codec.decode_monomial(_json_arg(text), "full")
        value, err = phi.evaluate(x)
        rows.append(_state_row(x, beta, mu.label, value, err))
    _emit_rows(rows, args.output, out, CSV_COLUMNS)
    return 0


def _cmd_verify(args, out):
    mu = codec.load_measure(args.measure)
    state = args.state or ("ground" if args.kind == "ground" else "kms")
    if state == "ground":
        phi = ground_state(ToeplitzStateSpec.from_measure(mu))
        beta = args.beta if args.beta is not None else 2.0
    else:
        params = _params(args)
        phi, beta = kms_state(params, mu), params.beta
    bounds = args.bounds or (30, 20)
    report = sweep(args.kind, phi, beta, bounds, args.count, args.seed, args.tol)
    data = report.to_json()
    data["state"] = phi.label
    if args.output == "csv":
        _emit_rows([{k: v for k, v in data.items() if k != "failures"}], "csv", out)
    else:
        json.dump(data, out, indent=2)
        out.write("\n")
    return 0 if report.passed else 1


def _cmd_repr_check(args, out):
    A, M = args.bounds or {"regular": (64, 200), "qplus": (3600, 8), "nxz": (40, 60)}[args.rep]
    rep = {"regular": build_regular, "qplus": build_qplus, "nxz": build_nxz}[args.rep](A, M)
    if args.export:
        x = codec.decode_monomial(_json_arg(args.export), "full")
        out.write(matrix_to_coo_text(monomial_matrix(rep, x).matrix))
        return 0
    results = relation_residuals(rep, args.relation_bound)
    _emit_rows([r.to_json() for r in results], args.output, out,
               ["relation", "instance", "residual", "interior"])
    return 0 if all(r.residual == 0 for r in results) else 1


def table_rows(betas=TABLE_BETAS, tol: float = 1e-10, prime_set=None) -> List[dict]:
    """Rows of the value table for the tabulated measures.

    Without a prime set each measure also gets the closed-form ``beta -> 1``
    limit, reported with ``beta = 1``.
    """
    rows = []
    for label, mu in TABLE_MEASURES:
        for beta in betas:
            phi = kms_state(KmsParams(beta, tol=tol, prime_set=prime_set), mu)
            for x in TABLE_MONOMIALS:
                value, err = phi.evaluate(x)
                rows.append(_state_row(x, beta, label, value, err))
        if prime_set is None:
            for x in TABLE_MONOMIALS:
                rows.append(_state_row(x, 1.0, label, kms1_limit(label, x), 0.0))
    return rows


def _cmd_table(args, out):
    if args.beta is not None:
        betas = (args.beta,)
    else:
        betas = FINITE_PRIME_BETAS if args.prime_set else TABLE_BETAS
    try:
        rows = table_rows(betas, args.tol or _default_tol(), args.prime_set)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.output == "json":
        json.dump(rows, out)
        out.write("\n")
    else:
        _emit_rows(rows, "csv", out, CSV_COLUMNS)
    return 0


_COMMANDS = {
    "join": _cmd_join,
    "lub": _cmd_lub,
    "product": _cmd_product,
    "reduce": _cmd_reduce,
    "eval-state": _cmd_eval_state,
    "verify": _cmd_verify,
    "repr-check": _cmd_repr_check,
    "table": _cmd_table,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    """Parse ``argv`` and dispatch; returns the exit status."""
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.output is None:
        args.output = "csv" if args.command == "table" else "json"
    try:
        return _COMMANDS[args.command](args, out)
    except (UsageError, codec.CodecError, ValueError, TypeError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
