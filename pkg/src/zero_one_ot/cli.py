"""Command-line front end.

Usage::

    zero-one-ot check INSTANCE [--auto-close]
    zero-one-ot solve INSTANCE [--oracle]
    zero-one-ot transform INSTANCE [--direction first|second]
    zero-one-ot layercake INSTANCE
    zero-one-ot counterexample [--resolutions 1,2,4] [--shift K]
    zero-one-ot fsigma [--resolutions 4] [--approximants 1,2,4]

``INSTANCE`` is a path or ``-`` for standard input. Every command accepts
``--format json|csv|table``. Exit status: 0 success, 1 validation or
infeasibility failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
from fractions import Fraction

from . import counterexample as lab
from .errors import ZeroOneOTError
from .instance import format_rational, parse_instance
from .potentials import c_transform, dual_objective, layer_cake_extract, rescale_to_unit
from .relations import is_reflexive, is_transitive, preorder_witness, relation_to_cost, validate_cost
from .transport import certify_duality

__all__ = ["main", "run_command", "build_parser"]

FORMATS = ("json", "csv", "table")


class Report:
    """Ordered scalar fields plus optional tables, rendered three ways."""

    def __init__(self, fields=None):
        self.fields = list(fields or [])
        self.tables = []

    def add_table(self, name, columns, rows):
        self.tables.append((name, tuple(columns), [tuple(r) for r in rows]))
        return self

    def to_json(self):
        doc = {k: _jsonable(v) for k, v in self.fields}
        for name, columns, rows in self.tables:
            doc[name] = [{c: _jsonable(v) for c, v in zip(columns, row)} for row in rows]
        return json.dumps(doc, indent=2) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if self.fields:
            writer.writerow(("field", "value"))
            writer.writerows((k, _text(v)) for k, v in self.fields)
        for name, columns, rows in self.tables:
            if buf.tell():
                buf.write("\n")
            writer.writerow(columns)
            writer.writerows(tuple(_text(v) for v in row) for row in rows)
        return buf.getvalue()

    def to_table(self):
        lines = []
        if self.fields:
            width = max(len(k) for k, _ in self.fields)
            for k, v in self.fields:
                lines.append(f"{k.ljust(width)}  {_text(v)}{_approx(v)}")
        for name, columns, rows in self.tables:
            if lines:
                lines.append("")
            lines.append(f"[{name}]")
            cells = [list(columns)] + [[_text(v) + _approx(v) for v in row] for row in rows]
            widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
            for r in cells:
                lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
        lines.append("(values after ~ are approximate floats for reading only)")
        return "\n".join(lines) + "\n"

    def render(self, fmt):
        return {"json": self.to_json, "csv": self.to_csv, "table": self.to_table}[fmt]()


def _jsonable(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _text(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_text(x) for x in v)
    return str(v)


def _approx(v):
    if isinstance(v, Fraction) and v.denominator != 1:
        return f" (~{float(v):.6g})"
    return ""


def _int_list(text):
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list must be nonempty")
    return values


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table")

    with_input = argparse.ArgumentParser(add_help=False)
    with_input.add_argument("instance", nargs="?", default="-",
                            help="instance file, or - for standard input")
    with_input.add_argument("--auto-close", action="store_true",
                            help="replace the relation by its reflexive transitive closure")

    parser = argparse.ArgumentParser(prog="zero-one-ot",
                                     description="Exact zero-one optimal transport on finite sets.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common, with_input], help="relation and cost diagnostics")
    p = sub.add_parser("solve", parents=[common, with_input], help="primal coupling, dual set, certificate")
    p.add_argument("--oracle", action="store_true", help="force the brute-force cross-check (n <= 20)")
    p = sub.add_parser("transform", parents=[common, with_input], help="c-transform of the potential")
    p.add_argument("--direction", choices=("first", "second"), default="first")
    sub.add_parser("layercake", parents=[common, with_input], help="upper set extracted from the potential")
    p = sub.add_parser("counterexample", parents=[common], help="grid sweep of the threshold order")
    p.add_argument("--resolutions", type=_int_list, default=[1, 2, 4, 8])
    p.add_argument("--shift", type=int, default=None, help="emit the shift coupling for this k")
    p = sub.add_parser("fsigma", parents=[common], help="closed approximants of the grid relation")
    p.add_argument("--resolutions", type=_int_list, default=[4])
    p.add_argument("--approximants", type=_int_list, default=None)
    return parser


def _read_instance(args, stdin, **kwargs):
    if args.instance == "-":
        data = stdin.read()
    else:
        with open(args.instance, "rb") as fh:
            data = fh.read()
    return parse_instance(data, auto_close=True if args.auto_close else None, **kwargs)


def _cmd_check(args, stdin):
    inst = _read_instance(args, stdin, require_preorder_relation=False)
    r = inst.relation
    pts = inst.ground.points
    witness = preorder_witness(r)
    fields = [("points", len(inst.ground)), ("relation_pairs", int(r.incidence.sum())),
              ("closed_automatically", inst.closed),
              ("reflexive", is_reflexive(r)), ("transitive", is_transitive(r))]
    if witness is not None:
        kind, where = witness
        named = [pts[where]] if kind == "reflexive" else [pts[k] for k in where]
        fields.append(("violation", f"{kind}: " + " ".join(named)))
    ok = witness is None
    if inst.cost is not None:
        cr = validate_cost(inst.cost)
        fields += [("cost_zero_diagonal", cr.zero_diagonal), ("cost_triangle", cr.triangle)]
        if cr.witness is not None:
            fields.append(("cost_triangle_witness", " ".join(pts[k] for k in cr.witness)))
        ok = ok and cr.ok
    fields.append(("ok", ok))
    return Report(fields), 0 if ok else 1


def _cmd_solve(args, stdin):
    inst = _read_instance(args, stdin)
    rep = certify_duality(inst.mu, inst.nu, inst.relation, oracle=True if args.oracle else None)
    pts = inst.ground.points
    inc = inst.relation.incidence
    report = Report([("primal_value", rep.primal_value), ("dual_value", rep.dual_value),
                     ("oracle_value", rep.oracle_value), ("certificate_ok", rep.certificate_ok),
                     ("optimal_set", rep.optimal_set.ids)])
    report.add_table("coupling", ("x", "y", "mass", "on_relation"),
                     [(pts[i], pts[j], m, bool(inc[i, j]))
                      for (i, j), m in sorted(rep.optimal_coupling.entries.items())])
    return report, 0 if rep.certificate_ok else 1


def _potential_of(inst):
    if inst.potential is None:
        raise ZeroOneOTError("instance has no \"potential\" field")
    return inst.potential


def _cmd_transform(args, stdin):
    inst = _read_instance(args, stdin)
    psi = _potential_of(inst)
    cost = inst.cost if inst.cost is not None else relation_to_cost(inst.relation)
    other = "second" if args.direction == "first" else "first"
    once = c_transform(psi, cost, args.direction)
    twice = c_transform(once, cost, other)
    report = Report([("direction", args.direction),
                     ("cost", "file" if inst.cost is not None else "1 - 1_R")])
    report.add_table("transform", ("point", "psi", "transform", "transform_back"),
                     zip(inst.ground.points, psi.values, once.values, twice.values))
    return report, 0


def _cmd_layercake(args, stdin):
    inst = _read_instance(args, stdin)
    cost = relation_to_cost(inst.relation)
    phi = rescale_to_unit(_potential_of(inst), cost)
    res = layer_cake_extract(phi, inst.mu, inst.nu, inst.relation)
    report = Report([("potential_objective", dual_objective(phi, inst.mu, inst.nu)),
                     ("threshold", res.threshold), ("set", res.set.ids), ("set_value", res.value)])
    report.add_table("rescaled_potential", ("point", "value"), zip(inst.ground.points, phi.values))
    return report, 0


def _cmd_counterexample(args, stdin):
    if args.shift is not None:
        report = Report()
        for n in args.resolutions:
            g = lab.build_grid_instance(n)
            sh = lab.shift_coupling(g, args.shift)
            labels = g.ground.labels
            inc = g.relation.incidence
            report.add_table(f"shift_n{n}_k{args.shift}", ("x", "y", "mass", "on_relation"),
                             [(labels[i], labels[j], m, bool(inc[i, j]))
                              for (i, j), m in sorted(sh.coupling.entries.items())])
            report.fields.append((f"mass_on_R_n{n}", sh.mass_on_R))
        return report, 0
    sweep = lab.resolution_sweep(args.resolutions)
    rows = [tuple(getattr(r, c) for c in lab.COLUMNS) for r in sweep.rows]
    return Report().add_table("sweep", lab.COLUMNS, rows), 0


def _cmd_fsigma(args, stdin):
    report = Report()
    ok = True
    for n in args.resolutions:
        g = lab.build_grid_instance(n)
        rows, fam = lab.approximant_sweep(g, args.approximants)
        union_matches = fam.union == g.relation
        report.fields += [(f"nested_n{n}", fam.nested), (f"union_equals_relation_n{n}", union_matches)]
        report.add_table(f"approximants_n{n}", ("parameter", "pairs", "primal_value"),
                         [(r.parameter, r.pairs, r.primal_value) for r in rows])
        ok = ok and fam.nested
    return report, 0 if ok else 1


_COMMANDS = {"check": _cmd_check, "solve": _cmd_solve, "transform": _cmd_transform,
             "layercake": _cmd_layercake, "counterexample": _cmd_counterexample,
             "fsigma": _cmd_fsigma}


def run_command(argv, stdin=None, stdout=None, stderr=None) -> int:
    """Run one subcommand; returns the exit status instead of exiting."""
    stdin = stdin if stdin is not None else sys.stdin.buffer
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report, status = _COMMANDS[args.command](args, stdin)
    except (ZeroOneOTError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    stdout.write(report.render(args.format))
    return status


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
