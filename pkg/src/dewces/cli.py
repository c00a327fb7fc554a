"""Command-line front end: ``dewces <subcommand> [input] [flags]``.

Exit codes: 0 success, 1 a verification or reproduction claim failed,
2 bad input, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback

import numpy as np

from . import catalog
from .documents import (
    DocumentError,
    MatrixDocument,
    encode_product_vector,
    encode_rows,
    from_family,
    to_subspace,
    to_witness,
)
from .prodvec_families import enumerate_product_vectors, span_certificate
from .subspaces import DEFAULT_MULTISTARTS, TAU_CES, find_product_vector_in
from .tensor_core import TAU_RANK, assert_hermitian, is_psd, partial_transpose
from .witness import PROBE_TOL, TAU_EPS, TAU_EW, Witness, dew_from_Q, optimality_analysis, verify_ew

EXIT_OK, EXIT_CLAIM, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read_document(path: str | None) -> MatrixDocument:
    try:
        if path is None or path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read input: {exc}") from exc
    try:
        return MatrixDocument.loads(text)
    except DocumentError as exc:
        raise InputError(str(exc)) from exc


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        out = "\n".join(text_lines) + "\n"
    if args.output in (None, "-", "stdout"):
        sys.stdout.write(out)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)


def cmd_check_ces(args) -> int:
    doc = _read_document(args.input)
    try:
        V = to_subspace(doc)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    tol = TAU_CES if args.tol is None else args.tol
    cert = find_product_vector_in(V, multistarts=args.multistarts, seed=args.seed, tol=tol)
    payload = {
        "is_ces": cert.is_ces,
        "max_product_overlap": cert.max_product_overlap,
        "witness_vector": None if cert.witness_vector is None else encode_product_vector(cert.witness_vector),
        "multistarts_used": cert.multistarts_used,
        "seed": cert.seed,
        "tolerance": cert.tolerance,
        "subspace_dim": V.dim,
    }
    lines = [f"subspace dim {V.dim} in {V.dims.m}x{V.dims.n}",
             f"is_ces: {cert.is_ces}",
             f"max product overlap: {cert.max_product_overlap:.15f}"]
    _emit(args, payload, lines)
    return EXIT_OK if cert.is_ces else EXIT_CLAIM


def _witness_from(doc: MatrixDocument) -> Witness:
    try:
        if doc.kind == "matrix":
            return dew_from_Q(doc.data, doc.dims)
        if doc.kind == "witness":
            W = to_witness(doc)
            if W.provenance is None:
                # W = (W^G)^G, so W is of the form Q^G exactly when W^G >= 0.
                Q = partial_transpose(W.matrix, W.dims)
                if is_psd(Q):
                    return dew_from_Q(Q, W.dims)
            return W
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError(f"analyze-witness expects a matrix or witness document, got {doc.kind!r}")


def cmd_analyze_witness(args) -> int:
    doc = _read_document(args.input)
    try:
        assert_hermitian(doc.data) if doc.kind in ("matrix", "witness") else None
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    W = _witness_from(doc)
    verdict = verify_ew(W, multistarts=args.multistarts, seed=args.seed)
    tol = TAU_RANK if args.tol is None else args.tol
    payload = {
        "ew": {
            "is_ew": verdict.is_ew,
            "min_product_value": verdict.min_product_value,
            "min_eigenvalue": verdict.min_eigenvalue,
            "violating_product": None if verdict.violating_product is None
            else encode_product_vector(verdict.violating_product),
        },
        "optimality": None,
        "seed": args.seed,
        "multistarts": args.multistarts,
        "tolerances": {"rank": tol, "ew": TAU_EW, "probe": PROBE_TOL, "epsilon": TAU_EPS},
    }
    lines = [f"is_ew: {verdict.is_ew}",
             f"min product value: {verdict.min_product_value:.3e}",
             f"min eigenvalue: {verdict.min_eigenvalue:.6f}"]
    decomposable = W.provenance is not None and W.provenance.a == 0
    if verdict.is_ew and decomposable:
        rep = optimality_analysis(W, samples=args.samples, seed=args.seed,
                                  multistarts=args.multistarts, tol=tol)
        payload["optimality"] = {
            "status": rep.status,
            "pw_span_dim": rep.pw_span_dim,
            "spanning_certified_optimal": rep.spanning_certified_optimal,
            "zero_set_certified": rep.zero_set_certified,
            "candidates_tried": rep.candidates_tried,
            "epsilon": None if rep.subtractable is None else rep.subtractable["epsilon"],
            "subtracted_P": None if rep.subtractable is None else encode_rows(rep.subtractable["P"]),
        }
        lines += [f"span P_W: {rep.pw_span_dim} of {W.dims.total}", f"status: {rep.status}"]
        if rep.subtractable is not None:
            lines.append(f"subtractable with epsilon {rep.subtractable['epsilon']:.6f}")
    elif verdict.is_ew:
        lines.append("optimality: not analyzed (witness is not of the form Q^G)")
    _emit(args, payload, lines)
    return EXIT_OK if verdict.is_ew else EXIT_CLAIM


def cmd_find_product_vectors(args) -> int:
    doc = _read_document(args.input)
    try:
        V = to_subspace(doc)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    fam = enumerate_product_vectors(V, samples=args.samples, seed=args.seed, multistarts=args.multistarts)
    tol = TAU_RANK if args.tol is None else args.tol
    if len(fam):
        sc = span_certificate(fam, tol)
        spans = {"family_span_dim": sc.family_span_dim, "pc_span_dim": sc.pc_span_dim}
    else:
        spans = {"family_span_dim": 0, "pc_span_dim": 0}
    payload = {
        "family": from_family(fam, {"seed": args.seed}).to_json_obj(),
        "sample_count": len(fam),
        "rank_tolerance": tol,
        **spans,
    }
    lines = [f"product vectors found: {len(fam)}",
             f"family span: {spans['family_span_dim']}",
             f"partially conjugated span: {spans['pc_span_dim']}"]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    ids = catalog.EXAMPLE_IDS if args.example == "all" else (args.example,)
    if args.example != "all" and args.example not in catalog.EXAMPLE_IDS:
        raise InputError(f"unknown example {args.example!r}; choose from all, {', '.join(catalog.EXAMPLE_IDS)}")
    reports = [catalog.reproduce(i, seed=args.seed, trials=args.trials) for i in ids]
    payload = {"seed": args.seed, "trials": args.trials,
               "passed": all(r.passed for r in reports),
               "reports": [r.to_dict(timings=args.timings) for r in reports]}
    lines = []
    for r in reports:
        timing = f" ({r.runtime_ms} ms)" if args.timings else ""
        lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.example_id}{timing}")
        for c in r.claims:
            lines.append(f"    {'ok  ' if c.passed else 'FAIL'} {c.description}: {c.computed}")
    _emit(args, _jsonable(payload), lines)
    return EXIT_OK if payload["passed"] else EXIT_CLAIM


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, default=0)
    common.add_argument("--multistarts", type=int, default=DEFAULT_MULTISTARTS)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--output", default=None, help="file path, or '-' / 'stdout'")
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = _Parser(prog="dewces", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, func, helptext in [
        ("check-ces", cmd_check_ces, "search a subspace document for product vectors"),
        ("analyze-witness", cmd_analyze_witness, "EW test and optimality analysis of Q^G or W"),
        ("find-product-vectors", cmd_find_product_vectors, "enumerate product vectors orthogonal to a subspace"),
    ]:
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("input", nargs="?", default=None, help="JSON document path (default: stdin)")
        p.set_defaults(func=func)
    p = sub.add_parser("reproduce", parents=[common], help="recompute the claims of a catalogued example")
    p.add_argument("example", help=f"one of: all, {', '.join(catalog.EXAMPLE_IDS)}")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--timings", action="store_true", help="include runtimes (breaks byte-identical output)")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except Exception:  # noqa: BLE001
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
