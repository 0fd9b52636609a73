"""Command-line entry point: reproducible verification runs and reports.

All numeric flags are exact rationals of the form ``p/q``; no floats are
accepted anywhere.  Reports embed the scalar cutoff and cyclotomic order in
use, and identical invocations produce byte-identical output.

Exit codes: 0 success, 2 usage error, 3 malformed rational, 4 enumeration
budget exceeded, 1 any other failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import acceptance, ainfty, blowup, hochschild, linalg, openclosed, toric, trees
from .novikov import DEFAULT_CUTOFF, format_rational, parse_rational

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_MALFORMED_RATIONAL = 3
EXIT_BUDGET = 4


@dataclass
class RunConfig:
    """Canonical form of one invocation; parse/print round-trips exactly."""

    command: str
    subcommand: str = ""
    n: int | None = None
    eps: str = ""
    cutoff: str = ""
    order: int | None = None
    fmt: str = "json"
    out: str = ""
    extra: dict = field(default_factory=dict)

    def to_args(self) -> list[str]:
        args = [self.command]
        if self.subcommand:
            args.append(self.subcommand)
        if self.n is not None:
            args.extend(["--n", str(self.n)])
        if self.eps:
            args.extend(["--eps", self.eps])
        if self.cutoff:
            args.extend(["--cutoff", self.cutoff])
        if self.order is not None:
            args.extend(["--order", str(self.order)])
        if self.fmt != "json":
            args.extend(["--format", self.fmt])
        if self.out:
            args.extend(["--out", self.out])
        for key, value in sorted(self.extra.items()):
            args.extend([f"--{key}", str(value)])
        return args

    @classmethod
    def from_args(cls, args: list[str]) -> "RunConfig":
        command = args[0]
        rest = args[1:]
        subcommand = ""
        if rest and not rest[0].startswith("--"):
            subcommand = rest[0]
            rest = rest[1:]
        config = cls(command, subcommand)
        i = 0
        while i < len(rest):
            flag = rest[i].lstrip("-")
            value = rest[i + 1]
            if flag == "n":
                config.n = int(value)
            elif flag == "eps":
                config.eps = value
            elif flag == "cutoff":
                config.cutoff = value
            elif flag == "order":
                config.order = int(value)
            elif flag == "format":
                config.fmt = value
            elif flag == "out":
                config.out = value
            else:
                config.extra[flag] = value
            i += 2
        return config


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _error(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message},
                                sort_keys=True) + "\n")
    return code


def _meta(order: int | None = None, cutoff=None) -> dict:
    return {
        "cutoff": format_rational(Fraction(cutoff)) if cutoff is not None
        else format_rational(DEFAULT_CUTOFF),
        "cyclotomic_order": order if order is not None else 1,
    }


def _json_dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_trees_enumerate(args) -> int:
    metric = {
        "zero": (trees.ZERO,),
        "all": (trees.ZERO, trees.POS, trees.INF),
    }[args.metric]
    try:
        types = trees.enumerate_stable_types(
            args.boundary, args.interior,
            max_vertices=args.budget, metric_classes=metric)
    except trees.EnumerationBudgetError as exc:
        return _error(EXIT_BUDGET, "enumeration budget", str(exc))
    census = trees.census_by_dimension(types)
    lines = ["# cutoff=inf cyclotomic_order=1", "dimension,count"]
    lines.extend(f"{dim},{census[dim]}" for dim in sorted(census))
    lines.append(f"total,{len(types)}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_ainfty_verify(args) -> int:
    with open(args.file, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    algebra = ainfty.AInftyAlgebra.from_json_dict(data)
    violations = ainfty.check_ainfty(algebra)
    unit_bad = algebra.unit_violations()
    degree_bad = algebra.degree_violations()
    payload = {
        "meta": _meta(cutoff=algebra.cutoff),
        "rank": algebra.rank,
        "relation_violations": [
            {"arity": v.arity, "inputs": list(v.inputs), "output": v.output,
             "value": repr(v.value)}
            for v in violations
        ],
        "unit_violations": [repr(v) for v in unit_bad],
        "degree_violations": [repr(v) for v in degree_bad],
        "ok": not (violations or unit_bad or degree_bad),
    }
    _emit(_json_dumps(payload), args.out)
    return EXIT_OK if payload["ok"] else EXIT_FAILURE


def cmd_hh_dims(args) -> int:
    with open(args.file, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if "objects" in data:
        algebras = [ainfty.AInftyAlgebra.from_json_dict(obj["algebra"])
                    for obj in data["objects"]]
        names = [obj.get("name", f"obj{i}") for i, obj in enumerate(data["objects"])]
    else:
        algebras = [ainfty.AInftyAlgebra.from_json_dict(data)]
        names = ["obj0"]
    category = hochschild.FlatCategory(tuple(names), tuple(algebras))
    report = hochschild.hochschild_homology_dims(category, args.length)
    orders = 1
    for alg in algebras:
        for entries in alg.tensors.values():
            for vec in entries.values():
                for value in vec.values():
                    orders = max(orders, value.order())
    cutoff = next((format_rational(alg.cutoff) for alg in algebras
                   if alg.cutoff is not None), "inf")
    lines = [f"# cutoff={cutoff} cyclotomic_order={orders}",
             "degree,dimension,stable"]
    for degree in sorted(report.dims):
        lines.append(f"{degree},{report.dims[degree]},{str(report.stable).lower()}")
    lines.append(f"total,{report.total()},{str(report.stable).lower()}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_potential_crit(args) -> int:
    n = args.n
    if args.kind == "pn":
        potential = toric.PotentialFunction.clifford_torus(n)
        order = n + 1
    else:
        eps = parse_rational(args.eps if args.eps else "1/10")
        potential = toric.PotentialFunction.exceptional(n, eps)
        order = max(n - 1, 1)
    points = toric.critical_points(potential)
    entries = []
    for k, y in enumerate(points):
        h = toric.hessian(potential, y)
        q_form = toric.brane_quadratic_form(potential, y)
        algebra = toric.brane_algebra(potential, y)
        entries.append({
            "index": k,
            "point": [repr(c) for c in y],
            "potential_value": repr(potential.evaluate(y)),
            "hessian": [[repr(entry) for entry in row] for row in h],
            "hessian_det": repr(linalg.determinant(h)),
            "clifford_rank": algebra.rank,
            # generator relations: e_a e_b + e_b e_a = 2 Q_ab
            "clifford_form": [[repr(entry) for entry in row] for row in q_form],
        })
    payload = {
        "meta": _meta(order=order),
        "kind": args.kind,
        "n": n,
        "count": len(points),
        "critical_points": entries,
    }
    _emit(_json_dumps(payload), args.out)
    return EXIT_OK


def cmd_oc_matrix(args) -> int:
    kind = openclosed.PROJECTIVE if args.kind == "pn" else openclosed.EXCEPTIONAL
    eps = parse_rational(args.eps) if args.eps else None
    matrix = openclosed.oc_matrix(args.n, kind, eps)
    order = args.n + 1 if kind == openclosed.PROJECTIVE else max(args.n - 1, 1)
    if args.order:
        if args.order % order:
            return _error(EXIT_FAILURE, "order override",
                          f"override {args.order} is not a multiple of {order}")
        order = args.order
    split_at = Fraction(2)
    det = linalg.determinant(matrix.as_lists())
    det_report = {
        "split_at": format_rational(split_at),
        "det": repr(det),
        "det_below": repr(det.below(split_at)),
        "det_at_or_above": repr(det.at_or_above(split_at)),
        "surjectivity": openclosed.surjectivity_test(matrix, split_at,
                                                     normalize_rows=True),
    }
    meta_comment = (f"# cutoff=inf cyclotomic_order={order} "
                    f"det={det_report['det']} split_at=2 "
                    f"surjectivity={det_report['surjectivity']}")
    if args.format == "json":
        payload = {
            "meta": _meta(order=order),
            "kind": args.kind,
            "n": args.n,
            "rows": list(matrix.rows),
            "cols": list(matrix.cols),
            "entries": [[matrix.entry(b, a).to_json_dict(order)
                         for a in range(len(matrix.cols))]
                        for b in range(len(matrix.rows))],
            "determinant": det_report,
        }
        text = _json_dumps(payload)
    elif args.format == "csv":
        lines = [meta_comment, "row," + ",".join(matrix.cols)]
        for b, label in enumerate(matrix.rows):
            lines.append(label + "," +
                         ",".join(repr(matrix.entry(b, a)).replace(",", ";")
                                  for a in range(len(matrix.cols))))
        text = "\n".join(lines) + "\n"
    else:  # markdown
        header = "| | " + " | ".join(matrix.cols) + " |"
        sep = "|" + "---|" * (len(matrix.cols) + 1)
        lines = [header, sep]
        for b, label in enumerate(matrix.rows):
            lines.append("| " + label + " | " +
                         " | ".join(repr(matrix.entry(b, a))
                                    for a in range(len(matrix.cols))) + " |")
        lines.append("")
        lines.append(f"- cutoff: inf; cyclotomic order: {order}")
        lines.append(f"- determinant: {det_report['det']}; split at 2: "
                     f"below = {det_report['det_below']}, "
                     f"surjectivity = {det_report['surjectivity']}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_blowup_split(args) -> int:
    eps = parse_rational(args.eps)
    report = blowup.split_report(args.n, eps)
    payload = {
        "meta": _meta(order=(args.n + 1) * max(args.n - 1, 1)),
        "report": {key: (format_rational(value) if isinstance(value, Fraction)
                         else value)
                   for key, value in sorted(report.items())},
    }
    if args.format == "md":
        lines = [f"# blowup splitting report (n={args.n}, eps={args.eps})", "",
                 f"- **cutoff**: {payload['meta']['cutoff']}",
                 f"- **cyclotomic order**: {payload['meta']['cyclotomic_order']}"]
        for key, value in sorted(payload["report"].items()):
            lines.append(f"- **{key}**: {value}")
        text = "\n".join(lines) + "\n"
    else:
        text = _json_dumps(payload)
    _emit(text, args.out)
    return EXIT_OK if report.get("status") == blowup.GENERATES else EXIT_FAILURE


def cmd_verify_all(args) -> int:
    results = acceptance.run_all()
    text = acceptance.summary_table(results)
    _emit(text, args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhsplit",
        description="exact verification of disk-potential and blowup-splitting identities")
    sub = parser.add_subparsers(dest="command", required=True)

    p_trees = sub.add_parser("trees", help="treed-disk combinatorics")
    trees_sub = p_trees.add_subparsers(dest="subcommand", required=True)
    p_enum = trees_sub.add_parser("enumerate", help="census of stable types")
    p_enum.add_argument("--boundary", type=int, required=True)
    p_enum.add_argument("--interior", type=int, default=0)
    p_enum.add_argument("--budget", type=int, default=None)
    p_enum.add_argument("--metric", choices=["zero", "all"], default="zero")
    p_enum.add_argument("--out", default=None)
    p_enum.set_defaults(func=cmd_trees_enumerate)

    p_ainfty = sub.add_parser("ainfty", help="composition-relation checking")
    ainfty_sub = p_ainfty.add_subparsers(dest="subcommand", required=True)
    p_verify = ainfty_sub.add_parser("verify", help="verify an algebra file")
    p_verify.add_argument("file")
    p_verify.add_argument("--out", default=None)
    p_verify.set_defaults(func=cmd_ainfty_verify)

    p_hh = sub.add_parser("hh", help="Hochschild homology")
    hh_sub = p_hh.add_subparsers(dest="subcommand", required=True)
    p_dims = hh_sub.add_parser("dims", help="homology dimensions of a category file")
    p_dims.add_argument("file")
    p_dims.add_argument("--length", type=int, default=6)
    p_dims.add_argument("--out", default=None)
    p_dims.set_defaults(func=cmd_hh_dims)

    p_pot = sub.add_parser("potential", help="disk potentials")
    pot_sub = p_pot.add_subparsers(dest="subcommand", required=True)
    p_crit = pot_sub.add_parser("crit", help="critical points and Hessians")
    p_crit.add_argument("--kind", choices=["pn", "exceptional"], required=True)
    p_crit.add_argument("--n", type=int, required=True)
    p_crit.add_argument("--eps", default=None)
    p_crit.add_argument("--out", default=None)
    p_crit.set_defaults(func=cmd_potential_crit)

    p_oc = sub.add_parser("oc", help="open-closed matrices")
    oc_sub = p_oc.add_subparsers(dest="subcommand", required=True)
    p_matrix = oc_sub.add_parser("matrix", help="emit the open-closed matrix")
    p_matrix.add_argument("--n", type=int, required=True)
    p_matrix.add_argument("--kind", choices=["pn", "exceptional"], required=True)
    p_matrix.add_argument("--eps", default=None)
    p_matrix.add_argument("--order", type=int, default=None,
                          help="cyclotomic order override for serialization")
    p_matrix.add_argument("--format", choices=["json", "csv", "md"], default="json")
    p_matrix.add_argument("--out", default=None)
    p_matrix.set_defaults(func=cmd_oc_matrix)

    p_blow = sub.add_parser("blowup", help="blowup splitting")
    blow_sub = p_blow.add_subparsers(dest="subcommand", required=True)
    p_split = blow_sub.add_parser("split", help="splitting and generation report")
    p_split.add_argument("--n", type=int, required=True)
    p_split.add_argument("--eps", required=True)
    p_split.add_argument("--format", choices=["json", "md"], default="json")
    p_split.add_argument("--out", default=None)
    p_split.set_defaults(func=cmd_blowup_split)

    p_all = sub.add_parser("verify-all", help="run the full acceptance suite")
    p_all.add_argument("--out", default=None)
    p_all.set_defaults(func=cmd_verify_all, subcommand="")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        if "malformed rational" in str(exc):
            return _error(EXIT_MALFORMED_RATIONAL, "malformed rational", str(exc))
        return _error(EXIT_FAILURE, "value error", str(exc))
    except trees.EnumerationBudgetError as exc:
        return _error(EXIT_BUDGET, "enumeration budget", str(exc))
    except FileNotFoundError as exc:
        return _error(EXIT_FAILURE, "missing file", str(exc))


if __name__ == "__main__":
    sys.exit(main())
