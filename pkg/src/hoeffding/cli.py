"""Command-line front end.

Exit codes: 0 success, 2 bad input, 3 failed admissibility check,
4 numerical breakdown. Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import lattice
from .bernoulli import BernoulliPair, closed_form_decomposition, closed_form_indices
from .decomposition import (
    build_component_subspaces,
    check_admissibility,
    decompose,
    require_admissible,
    verify_mobius,
)
from .distribution import validate_pmf
from .errors import HoeffdingError, InputError
from .hilbert import DEFAULT_EPS_PD, DEFAULT_TOL, feshchenko_matrix
from .indices import evaluation_explanation, variance_report
from .io import SCHEMA_VERSION, dumps, format_float, load_input

log = logging.getLogger("hoeffding")

INDEX_FAMILIES = ("structural", "correlative", "pure", "dependence")


def _default_tol() -> float:
    raw = os.environ.get("HO_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"HO_TOL is not a number: {raw!r}") from None


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("--tol", type=_positive, default=None,
                        help="rank/orthogonality tolerance (default 1e-10, or $HO_TOL)")
    common.add_argument("--eps-pd", type=_positive, default=DEFAULT_EPS_PD,
                        help="positive-definiteness threshold on the Feshchenko matrix")
    common.add_argument("--exhaustive", action="store_true",
                        help="check every subset pair for assumption 1 even when d > 8")
    common.add_argument("--skip-checks", action="store_true",
                        help="skip admissibility checks; reports are stamped unverified")

    parser = argparse.ArgumentParser(prog="hoeffding", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="admissibility checks")
    p.add_argument("input")
    p.add_argument("--format", choices=("json", "table"), default="json")

    p = sub.add_parser("angles", parents=[common], help="Feshchenko matrix of Friedrichs angles")
    p.add_argument("input")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("decompose", parents=[common], help="orthocanonical decomposition")
    p.add_argument("input")
    p.add_argument("--format", choices=("json",), default="json")

    p = sub.add_parser("indices", parents=[common], help="sensitivity indices")
    p.add_argument("input")
    p.add_argument("--which", default=",".join(INDEX_FAMILIES),
                   help="comma-separated subset of " + ",".join(INDEX_FAMILIES))
    p.add_argument("--format", choices=("json", "table", "csv"), default="json")

    p = sub.add_parser("explain", parents=[common], help="per-subset attribution of one evaluation")
    p.add_argument("input")
    p.add_argument("--cell", required=True, help="0-based level indices, e.g. 0,1,2")
    p.add_argument("--format", choices=("json", "table"), default="json")

    p = sub.add_parser("bernoulli", parents=[common], help="closed-form two-Bernoulli decomposition")
    p.add_argument("--q1", type=float, required=True)
    p.add_argument("--q2", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--g", required=True, help="G00,G01,G10,G11")
    p.add_argument("--format", choices=("json", "table"), default="json")
    return parser


def _header(command: str, **extra) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, **extra}


def _admissibility_doc(report) -> dict:
    a1 = report.assumption1
    nest = report.strict_nesting
    doc = {
        "assumption1": {
            "pass": a1.passed,
            "violations": [[lattice.label(a), lattice.label(b)] for a, b in a1.violations],
            "pairs_checked": a1.pairs_checked,
            "exhaustive": a1.exhaustive,
        },
        "strict_nesting": {
            "pass": nest.passed,
            "failures": [[lattice.label(b), lattice.label(a)] for b, a in nest.failures],
            "trivial_inputs": [i + 1 for i in nest.trivial_inputs],
        },
        "assumption2": None,
    }
    if report.assumption2 is not None:
        doc["assumption2"] = {
            "pass": report.assumption2.passed,
            "min_eigenvalue": report.assumption2.min_eigenvalue,
            "eps": report.assumption2.eps,
        }
    return doc


def _summary_line(report) -> str:
    a1 = "pass" if report.assumption1.passed else "fail"
    if report.assumption2 is None:
        a2, lam = "not evaluated", "n/a"
    else:
        a2 = "pass" if report.assumption2.passed else "fail"
        lam = repr(report.assumption2.min_eigenvalue)
    nest = "pass" if report.strict_nesting.passed else "fail"
    return f"assumption1: {a1}, assumption2: {a2}, minEigenvalue: {lam}, strictNesting: {nest}"


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [[h for h in headers]] + [[format_float(v) if isinstance(v, float) else str(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) if j else c.ljust(w) for j, (c, w) in enumerate(zip(r, widths))).rstrip()
             for r in cells]
    return "\n".join(lines) + "\n"


def _csv(headers: list[str], rows: list[list]) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    for r in rows:
        writer.writerow([format_float(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _prepare(args):
    pmf, model = load_input(args.input)
    support = validate_pmf(pmf)
    return pmf, model, support


def cmd_check(args) -> tuple[str, int]:
    _, _, support = _prepare(args)
    report = check_admissibility(support, exhaustive=args.exhaustive, tol=args.tol, eps_pd=args.eps_pd)
    summary = _summary_line(report)
    print(summary, file=sys.stderr)
    code = 0 if report.passed else 3
    if args.format == "table":
        return summary + "\n", code
    doc = _header("check", n_atoms=support.n, **_admissibility_doc(report), passed=report.passed)
    return dumps(doc), code


def cmd_angles(args) -> tuple[str, int]:
    _, _, support = _prepare(args)
    delta = feshchenko_matrix(support, check=not args.skip_checks, tol=args.tol)
    labels = [lattice.label(m) for m in delta.subsets]
    if args.format == "csv":
        rows = [[labels[i]] + [float(v) for v in delta.entries[i]] for i in range(len(labels))]
        return _csv(["subset"] + labels, rows), 0
    doc = _header("angles", subsets=labels, entries=delta.entries.tolist(),
                  min_eigenvalue=delta.min_eigenvalue, unverified=args.skip_checks)
    return dumps(doc), 0


def _bases(args, support):
    return build_component_subspaces(support, check=not args.skip_checks, tol=args.tol,
                                     eps_pd=args.eps_pd, exhaustive=args.exhaustive)


def cmd_decompose(args) -> tuple[str, int]:
    pmf, model, support = _prepare(args)
    bases = _bases(args, support)
    dec = decompose(bases, support.restrict(model))
    doc = _header(
        "decompose",
        inputs=[s.name for s in pmf.inputs],
        n_atoms=support.n,
        atoms=support.cells.tolist(),
        weights=support.p.tolist(),
        unverified=dec.unverified,
        admissibility=None if bases.admissibility is None else _admissibility_doc(bases.admissibility),
        condition_number=dec.condition_number,
        reconstruction_residual=dec.reconstruction_residual,
        mobius_residual=verify_mobius(dec),
        components=[
            {
                "subset": lattice.label(a),
                "dim": bases[a].dim,
                "values": dec.components[a].tolist(),
                "coefficient_norm": float(np.linalg.norm(dec.coefficients[a])),
            }
            for a in bases.subsets
        ],
    )
    return dumps(doc), 0


def cmd_indices(args) -> tuple[str, int]:
    pmf, model, _ = _prepare(args)
    which = [w.strip() for w in args.which.split(",") if w.strip()]
    unknown = set(which) - set(INDEX_FAMILIES)
    if unknown or not which:
        raise InputError(f"--which accepts {','.join(INDEX_FAMILIES)}; got {args.which!r}")
    rep = variance_report(pmf, model, check=not args.skip_checks, tol=args.tol, eps_pd=args.eps_pd,
                          exhaustive=args.exhaustive)
    columns = {
        "structural": lambda r: {"structural": r.structural},
        "correlative": lambda r: {"correlative": r.correlative},
        "pure": lambda r: {"pure_interaction": r.pure_interaction,
                           "pure_interaction_normalized": r.pure_interaction_normalized},
        "dependence": lambda r: {"dependence_effect": r.dependence_effect},
    }
    table_rows = []
    for r in rep.rows:
        row = {"subset": lattice.label(r.subset), "dim": r.dim}
        for w in INDEX_FAMILIES:
            if w in which:
                row.update(columns[w](r))
        table_rows.append(row)
    if args.format in ("table", "csv"):
        headers = list(table_rows[0])
        body = [list(r.values()) for r in table_rows]
        return (_table if args.format == "table" else _csv)(headers, body), 0
    doc = _header(
        "indices",
        unverified=rep.unverified,
        model_variance=rep.model_variance,
        sum_structural=rep.sum_structural,
        sum_correlative=rep.sum_correlative,
        checks={
            "variance_identity_gap": rep.variance_identity_gap,
            "correlative_oblique_gap": rep.correlative_oblique_gap,
            "structural_oblique_gap": rep.structural_oblique_gap,
            "structural_covariance_gap": rep.structural_covariance_gap,
        },
        indices=table_rows,
    )
    return dumps(doc), 0


def cmd_explain(args) -> tuple[str, int]:
    _, model, support = _prepare(args)
    try:
        cell = [int(c) for c in args.cell.split(",")]
    except ValueError:
        raise InputError(f"--cell must be comma-separated integers, got {args.cell!r}") from None
    if len(cell) != support.d or any(not 0 <= c < m for c, m in zip(cell, support.pmf.shape)):
        raise InputError(f"--cell {args.cell} is not a cell of grid {support.pmf.shape}")
    dec = decompose(_bases(args, support), support.restrict(model))
    attribution = evaluation_explanation(dec, cell)
    value = float(model[tuple(cell)])
    if args.format == "table":
        rows = [[lattice.label(a), v] for a, v in attribution.items()]
        return _table(["subset", "value"], rows + [["total", value]]), 0
    doc = _header(
        "explain",
        unverified=dec.unverified,
        cell=cell,
        model_value=value,
        attribution=[{"subset": lattice.label(a), "value": v} for a, v in attribution.items()],
        attribution_sum=float(sum(attribution.values())),
    )
    return dumps(doc), 0


def cmd_bernoulli(args) -> tuple[str, int]:
    try:
        g = [float(v) for v in args.g.split(",")]
    except ValueError:
        raise InputError(f"--g must be four comma-separated numbers, got {args.g!r}") from None
    if len(g) != 4:
        raise InputError(f"--g needs exactly four values, got {len(g)}")
    pair = BernoulliPair(args.q1, args.q2, args.rho)
    dec = closed_form_decomposition(pair, g)
    idx = closed_form_indices(pair, g)
    names = {0: "empty", 1: "alpha", 2: "beta", 3: "delta"}
    if args.format == "table":
        rows = [[lattice.label(s), dec.coefficients[s], idx["structural"][s], idx["correlative"][s],
                 idx["pure"][s], idx["dependence"][s]] for s in range(4)]
        return _table(["subset", "coefficient", "structural", "correlative", "pure", "dependence"], rows), 0
    doc = _header(
        "bernoulli",
        q1=pair.q1, q2=pair.q2, rho=pair.rho,
        weights=pair.weights.tolist(),
        model=g,
        vectors={lattice.label(s): v.tolist() for s, v in dec.vectors.items()},
        coefficients={"e" if s == 0 else names[s]: dec.coefficients[s] for s in range(4)},
        components={lattice.label(s): c.tolist() for s, c in dec.components.items()},
        indices={fam: {lattice.label(s): v for s, v in vals.items()} for fam, vals in idx.items()},
    )
    return dumps(doc), 0


COMMANDS = {
    "check": cmd_check,
    "angles": cmd_angles,
    "decompose": cmd_decompose,
    "indices": cmd_indices,
    "explain": cmd_explain,
    "bernoulli": cmd_bernoulli,
}


def run(args: argparse.Namespace) -> int:
    try:
        if args.tol is None:
            args.tol = _default_tol()
        text, code = COMMANDS[args.command](args)
    except HoeffdingError as exc:
        print(f"hoeffding {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.output:
        try:
            Path(args.output).write_bytes(text.encode("utf-8"))
        except OSError as exc:
            print(f"hoeffding {args.command}: cannot write {args.output}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return code


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
