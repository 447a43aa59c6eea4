"""Command-line front end: ``qgauss <relations|decompose|verify|rmatrix> <group>``.

Exit codes: 0 when every selected check passes, 1 on a verification
failure, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable, Dict, List, Optional

from . import gauss
from .gauss import Check
from .ncalg import RewriteError, check_confluence, format_poly
from .qgroup import (PRESET_NAMES, QuantumGroup, canonical_name, corner_property, eliminate_dependents,
                     metric_element, preset, relation_listing, super_block_property)
from .qlinalg import centrality_check, column_expansion, inverse_check, qdet, resolve_adjugate, row_expansion
from .rmat import yang_baxter_check

SUITES = ("all", "frt", "gauss", "central", "ybe", "bcd")

# classical dimension of the group: independent Gauss generators
DIMENSIONS = {"sp2": 10, "so3": 3, "gl1|1": 4, "gl2|1": 9}


class UsageError(Exception):
    pass


# -- suites ---------------------------------------------------------------------

def suite_frt(grp: QuantumGroup, long: bool) -> List[Check]:
    out = [Check("FRT relations reduce to 0", "Eq. 2.3",
                 all(not grp.nf(p) for p in grp.relations))]
    bad = check_confluence(grp.system, 3)
    out.append(Check("rewrite system confluent (degree 3)", "Eq. 2.3 presentation", not bad,
                     "; ".join(format_poly(r) for _, r in bad[:3]) or None))
    if grp.series() == "GL" and not grp.is_super() and grp.N > 2 and (grp.N < 4 or long):
        for size in range(2, grp.N):
            fails = {k: v for k, v in corner_property(grp, size).items() if v}
            out.append(Check(f"every {size}x{size} block satisfies GL_q({size})",
                             "Sec. 2 corner and subalgebra property", not fails,
                             str(sorted(fails)[:3]) if fails else None))
    if grp.is_super():
        for (name, rows, cols), fails in sorted(super_block_property(grp).items()):
            out.append(Check(f"block rows {rows} cols {cols} satisfies {name}", "Sec. 4 sub-supergroups",
                             not fails, "; ".join(fails[:3]) or None))
    if grp.metric is not None:
        try:
            Q = metric_element(grp)
            out.append(Check("T C T^t C^-1 = C T^t C^-1 T = Q 1 with Q central", "Eq. 3.2",
                             centrality_check(grp, Q)))
        except ValueError as exc:
            out.append(Check("T C T^t C^-1 = C T^t C^-1 T = Q 1 with Q central", "Eq. 3.2", False, str(exc)))
    return out


def suite_ybe(grp: QuantumGroup, long: bool) -> List[Check]:
    ref = {"GL": "Eq. 2.1", "C": "Eq. 5.1", "B": "Sec. 3 R-matrix", "SUPER_GL": "Eq. 4.1"}.get(grp.series(), "")
    return [Check("R12 R13 R23 = R23 R13 R12", ref, yang_baxter_check(grp.R))]


def suite_central(grp: QuantumGroup, long: bool) -> List[Check]:
    out = []
    if grp.series() == "GL" and not grp.is_super():
        if grp.N > 3 and not long:
            return out
        d = qdet(grp)
        out.append(Check("det_q T central", "Eq. 2.5", centrality_check(grp, d)))
        for k in range(1, grp.N + 1):
            out.append(Check(f"row {k} expansion = det_q T", "Eq. 2.10", row_expansion(grp, k) == d))
            out.append(Check(f"column {k} expansion = det_q T", "Eq. 2.10", column_expansion(grp, k) == d))
        loc = gauss.new_localizer(grp)
        try:
            conv = resolve_adjugate(grp, loc)
            out.append(Check("T T^-1 = T^-1 T = 1", "Eq. 2.10", True, note=f"minor convention {conv}"))
        except ValueError as exc:
            out.append(Check("T T^-1 = T^-1 T = 1", "Eq. 2.10", False, str(exc)))
        f = gauss.decompose(grp)
        out.append(gauss.det_product_check(grp, f))
        out += gauss.telescoping_checks(grp, f)
    elif grp.is_super():
        f = gauss.decompose(grp)
        out.append(gauss.det_product_check(grp, f))
    elif grp.metric is not None:
        out.append(Check("metric element Q central", "Eq. 3.2", centrality_check(grp, grp.metric)))
    return out


def suite_gauss(grp: QuantumGroup, long: bool) -> List[Check]:
    f = gauss.decompose(grp)
    out = [Check(k, "Eq. 2.15" if "T_D" in k or "T_U" in k else "Eq. 2.6", v)
           for k, v in gauss.roundtrip(f).items()]
    out += gauss.closed_form_values(grp, f)
    if grp.series() == "GL" and not grp.is_super():
        if grp.N > 3 and not long:
            return out
        out += gauss.verify_rmatrix_exchange(grp, f)
    out += gauss.verify_factor_relations(grp, f)
    return out


def suite_bcd(grp: QuantumGroup, long: bool) -> List[Check]:
    if grp.metric is None:
        raise UsageError(f"suite bcd needs an orthogonal or symplectic group, not {grp.name}")
    f = gauss.decompose(grp)
    out = gauss.constraint_check_bcd(grp, f)
    if grp.series() == "C":
        out += gauss.symplectic_determinant_checks(grp, f)
    names = gauss.independent_generators(grp)
    want = DIMENSIONS.get(grp.name)
    out.append(Check(f"{len(names)} independent generators", "Eq. 5.13 context",
                     want is None or len(names) == want, None if want in (None, len(names)) else f"expected {want}",
                     note=" ".join(names)))
    return out


SUITE_FUNCS: Dict[str, Callable[[QuantumGroup, bool], List[Check]]] = {
    "frt": suite_frt, "ybe": suite_ybe, "central": suite_central, "gauss": suite_gauss, "bcd": suite_bcd,
}


def run_suite(grp: QuantumGroup, suite: str, long: bool = False) -> List[Check]:
    if suite != "all":
        return SUITE_FUNCS[suite](grp, long)
    out = []
    for name, fn in SUITE_FUNCS.items():
        if name == "bcd" and grp.metric is None:
            continue
        out += fn(grp, long)
    return out


# -- commands ---------------------------------------------------------------------

def cmd_relations(grp: QuantumGroup, args) -> tuple:
    lines = relation_listing(grp)
    if args.format == "json":
        data = [{"kind": k, "relation": r, "lhs": r.split(" = ")[0], "rhs": r.split(" = ")[1]} for k, r in lines]
        return 0, data
    return 0, [r for _, r in lines]


def cmd_decompose(grp: QuantumGroup, args) -> tuple:
    f = gauss.decompose(grp)
    loc = f.loc
    n = grp.N
    entries = {}
    for k in range(n):
        entries[f"A{k + 1}{k + 1}"] = str(loc.simplify(f.T_D[k]))
    for i in range(n):
        for j in range(n):
            if i > j:
                entries[f"l{i + 1}{j + 1}"] = str(loc.simplify(f.T_L[i][j]))
            elif i < j:
                entries[f"u{i + 1}{j + 1}"] = str(loc.simplify(f.T_U[i][j]))
    pivots = {d.name: format_poly(d.poly) for d in loc.dens}
    rt = gauss.roundtrip(f)
    code = 0 if all(rt.values()) else 1
    if args.format == "json":
        return code, {"group": grp.name, "entries": entries, "denominators": pivots, "roundtrip": rt}
    lines = [f"[{k}] = {v}" for k, v in pivots.items()]
    lines += [f"{k} = {v}" for k, v in entries.items()]
    lines += [f"{k}: {'ok' if v else 'FAILED'}" for k, v in rt.items()]
    return code, lines


def cmd_verify(grp: QuantumGroup, args) -> tuple:
    checks = run_suite(grp, args.suite, args.long)
    failed = [c for c in checks if not c.status]
    code = 1 if failed else 0
    if args.format == "json":
        return code, {"group": grp.name, "suite": args.suite, "checks": [c.as_dict() for c in checks],
                      "total": len(checks), "failed": [c.relation_id for c in failed]}
    lines = []
    for c in checks:
        line = f"{'PASS' if c.status else 'FAIL'}  {c.relation_id}  [{c.paper_ref}]"
        if c.note:
            line += f"  ({c.note})"
        lines.append(line)
        if c.residual:
            lines.append(f"      residual: {c.residual}")
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return code, lines


def cmd_rmatrix(grp: QuantumGroup, args) -> tuple:
    trip = grp.R.triplets()
    if args.format == "json":
        return 0, [{"row": r, "col": c, "value": v} for r, c, v in trip]
    return 0, [f"{r} {c} {v}" for r, c, v in trip]


COMMANDS = {"relations": cmd_relations, "decompose": cmd_decompose, "verify": cmd_verify, "rmatrix": cmd_rmatrix}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qgauss", description="Quantum groups from R-matrices and their Gauss decomposition.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("group", help=f"one of {', '.join(PRESET_NAMES)}")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--long", action="store_true", help="include the slow checks (rank 4 and above)")
    p.add_argument("--budget", type=int, default=None, help="rewrite step budget")
    p.add_argument("-o", "--output", default=None, help="write the report here instead of stdout")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    budget = args.budget
    if os.environ.get("QGAUSS_BUDGET"):
        budget = int(os.environ["QGAUSS_BUDGET"])
    try:
        name = canonical_name(args.group)
    except KeyError as exc:
        print(f"qgauss: {exc.args[0]}; known groups: {', '.join(PRESET_NAMES)}", file=sys.stderr)
        return 2
    try:
        grp = preset(name, budget=budget)
        code, report = COMMANDS[args.command](grp, args)
    except UsageError as exc:
        print(f"qgauss: {exc}", file=sys.stderr)
        return 2
    except RewriteError as exc:
        print(f"qgauss: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = "\n".join(report) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code and args.command == "verify" and args.format == "text":
        print("failing: " + ", ".join(c for c in _failed_ids(report)), file=sys.stderr)
    return code


def _failed_ids(lines: List[str]) -> List[str]:
    return [l.split("  ")[1] for l in lines if l.startswith("FAIL")]


if __name__ == "__main__":
    sys.exit(main())
