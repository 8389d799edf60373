"""Command-line frontend.

Subcommands: balance, kernel, det, solve, inv, subspaces, smith, saturate.
Matrix input is a file path, '-' for standard input, or a literal string
(';' separates rows).  All numeric output is exact decimal; --json emits the
documented machine-readable form with big integers as strings.

Exit codes: 0 on success (an infeasible reaction is an answer, not a
failure), 1 when inv meets a singular matrix, 2 on parse or usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import chem, condense, quiver, smith
from .matrix import Matrix, NotSquare, ParseError, ShapeMismatch, matrix_to_json, parse_matrix
from .ring import ZZ


def _read_source(src: str) -> str:
    if src == "-":
        return sys.stdin.read()
    if os.path.exists(src):
        with open(src, "r", encoding="utf-8") as fh:
            return fh.read()
    return src.replace(";", "\n")


def _load_matrix(src: str, param: str | None) -> Matrix:
    return parse_matrix(_read_source(src), param=param)


def _vec(values, ring) -> str:
    return "(" + ", ".join(ring.format(v) for v in values) + ")"


def _emit(args, obj: dict, text: str) -> None:
    if args.json:
        print(json.dumps(obj, indent=2))
    else:
        print(text)


def _cmd_balance(args) -> int:
    reaction = chem.parse_reaction(args.reaction, parameter=args.param)
    order = args.atom_order.split(",") if args.atom_order else None
    result = chem.balance(
        reaction,
        use_quiver=args.quiver,
        saturate=not args.no_saturate,
        atom_order=order,
    )
    if args.explain:
        a = chem.adjacency(reaction, order)
        state = quiver.prune_fixpoint(a)
        names = [f.source for f in reaction.compounds]
        atoms = list(chem._atom_rows(reaction, order))
        print(f"pruning depth: {state.depth}", file=sys.stderr)
        zeroed = ", ".join(names[j] for j in sorted(state.zeroed)) or "none"
        print(f"zeroed compounds: {zeroed}", file=sys.stderr)
        for line in state.log:
            print(line, file=sys.stderr)
        for e in state.edges:
            print(
                f"edge {atoms[e.atom]}: {names[e.source]} -> {names[e.target]}",
                file=sys.stderr,
            )
    for note in result.diagnostics:
        print(f"note: {note}", file=sys.stderr)
    _emit(args, chem.balance_report(reaction, result, order), chem.render(result, reaction))
    return 0


def _cmd_kernel(args) -> int:
    a = _load_matrix(args.matrix, args.param)
    basis, trace = condense.kernel(a, checksums=args.checksums)
    if args.trace:
        print(condense.render_trace(trace))
        if args.checksums:
            state = "ok" if trace.checksum_ok else "MISMATCH"
            print(f"checksums: {state}")
    vectors = basis.vectors()
    saturated = basis.saturated
    if not saturated and a.ring == ZZ:
        saturated = smith.is_saturated(basis.generators)
    obj = {
        "kernel": [[a.ring.format(v) for v in vec] for vec in vectors],
        "dim": basis.dim,
        "saturated": saturated,
    }
    if vectors:
        text = "\n".join(_vec(vec, a.ring) for vec in vectors)
    else:
        text = "kernel is trivial"
    _emit(args, obj, text)
    return 0


def _cmd_det(args) -> int:
    a = _load_matrix(args.matrix, args.param)
    if args.trace:
        _, _, trace = condense.det_and_kernel(a)
        print(condense.render_trace(trace))
    value = condense.det(a)
    _emit(args, {"det": a.ring.format(value)}, a.ring.format(value))
    return 0


def _cmd_solve(args) -> int:
    a = _load_matrix(args.matrix, None)
    rhs_text = _read_source(args.rhs)
    w = [a.ring.parse(tok) for tok in rhs_text.split()]
    sol = condense.solve(a, w)
    obj = {
        "feasible": sol.feasible,
        "particular": [str(f) for f in sol.particular],
        "homogeneous": [
            [a.ring.format(v) for v in vec] for vec in sol.homogeneous.vectors()
        ],
    }
    if not sol.feasible:
        _emit(args, obj, "system is infeasible")
        return 0
    lines = ["particular: (" + ", ".join(str(f) for f in sol.particular) + ")"]
    for vec in sol.homogeneous.vectors():
        lines.append("homogeneous: " + _vec(vec, a.ring))
    _emit(args, obj, "\n".join(lines))
    return 0


def _cmd_inv(args) -> int:
    a = _load_matrix(args.matrix, None)
    try:
        inv = condense.inverse(a)
    except condense.Singular:
        print("matrix is singular", file=sys.stderr)
        return 1
    ff = inv.ring
    obj = {"inverse": [[ff.format(v) for v in row] for row in inv.row_list()]}
    text = "\n".join(" ".join(ff.format(v) for v in row) for row in inv.row_list())
    _emit(args, obj, text)
    return 0


def _cmd_subspaces(args) -> int:
    a = _load_matrix(args.matrix, None)
    four = condense.four_subspaces(a)
    obj = {
        "rank": four.rank,
        "kernel": [[a.ring.format(v) for v in vec] for vec in four.ker.vectors()],
        "cokernel": [[a.ring.format(v) for v in vec] for vec in four.coker.vectors()],
        "image_columns": [j + 1 for j in four.im_columns],
        "transpose_image_columns": [j + 1 for j in four.im_transpose_columns],
    }
    lines = [f"rank: {four.rank}"]
    for vec in four.ker.vectors():
        lines.append("kernel: " + _vec(vec, a.ring))
    for vec in four.coker.vectors():
        lines.append("cokernel: " + _vec(vec, a.ring))
    lines.append("image columns: " + ", ".join(str(j + 1) for j in four.im_columns))
    lines.append(
        "transpose image columns: "
        + ", ".join(str(j + 1) for j in four.im_transpose_columns)
    )
    _emit(args, obj, "\n".join(lines))
    return 0


def _cmd_smith(args) -> int:
    a = _load_matrix(args.matrix, None)
    dec = smith.smith_nf(a)
    obj = {
        "d": matrix_to_json(dec.d),
        "u": matrix_to_json(dec.u),
        "v": matrix_to_json(dec.v),
        "invariant_factors": [str(d) for d in dec.invariant_factors],
    }
    text = "\n\n".join(
        [
            "D =\n" + str(dec.d),
            "U =\n" + str(dec.u),
            "V =\n" + str(dec.v),
            "invariant factors: "
            + (", ".join(str(d) for d in dec.invariant_factors) or "none"),
        ]
    )
    _emit(args, obj, text)
    return 0


def _cmd_saturate(args) -> int:
    a = _load_matrix(args.matrix, None)
    sat = smith.saturate(a)
    obj = {"basis": [[str(v) for v in col] for col in sat.columns()]}
    text = "\n".join(_vec(col, ZZ) for col in sat.columns()) or "empty basis"
    _emit(args, obj, text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chembalance",
        description="Exact balancing and exact linear algebra by pivotal condensation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = add("balance", _cmd_balance, "balance a chemical reaction")
    p.add_argument("reaction", help="e.g. 'Fe + O2 -> FeO + Fe2O3'")
    p.add_argument("--param", help="parameter letter for compound families")
    p.add_argument("--quiver", action="store_true", help="prune/substitute first")
    p.add_argument("--no-saturate", action="store_true", help="keep the raw kernel basis")
    p.add_argument("--atom-order", help="comma-separated atom row order")
    p.add_argument("--explain", action="store_true", help="print the pruning log")

    p = add("kernel", _cmd_kernel, "kernel basis of a matrix")
    p.add_argument("matrix", help="file, '-' for stdin, or literal rows (';' separated)")
    p.add_argument("--param", help="parameter name for polynomial entries")
    p.add_argument("--trace", action="store_true", help="print every condensation step")
    p.add_argument("--checksums", action="store_true", help="carry a row-sum check column")

    p = add("det", _cmd_det, "exact determinant")
    p.add_argument("matrix")
    p.add_argument("--param")
    p.add_argument("--trace", action="store_true")

    p = add("solve", _cmd_solve, "solve A v = w exactly")
    p.add_argument("matrix")
    p.add_argument("rhs", help="right-hand side: numbers, a file, or '-'")

    p = add("inv", _cmd_inv, "exact inverse")
    p.add_argument("matrix")

    p = add("subspaces", _cmd_subspaces, "kernel, cokernel and image column bases")
    p.add_argument("matrix")

    p = add("smith", _cmd_smith, "Smith normal form of an integer matrix")
    p.add_argument("matrix")

    p = add("saturate", _cmd_saturate, "saturation of an integer column lattice")
    p.add_argument("matrix")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, chem.ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NotSquare, ShapeMismatch, ValueError, smith.RankDeficient) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
