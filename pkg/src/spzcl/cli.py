"""Command-line front end: tables, verification campaigns, witnesses, TC polynomials.

    spzcl table -n 1 -g 1..5 -k 2
    spzcl table --example-3-1
    spzcl verify --grid n=1..3,g=1..3,k=2 --report out.json
    spzcl witness -n 1 -g 2 -k 2
    spzcl tcgen -n 2 -g 1

JSON output is always an object {meta, rows, failures}; the schema lives in
``spzcl/data/output.schema.json``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from typing import Dict, List, Optional, Sequence

from . import __version__
from .closed_forms import gap_case_table, zcl_closed
from .combinatorics import binary_profile, gap_p2n
from .properties import run_capacity_campaign
from .ring_core import RingContext
from .search_oracle import DEFAULT_BUDGET, reduction_soundness, search_zcl, verify_grid
from .tc_invariants import UnsupportedRegime, tc_bounds, tcgen_polynomial
from .tensor_ring import TensorContext

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

TABLE_COLUMNS = [
    "n", "g", "k", "zcl", "gap", "case",
    "tc_lower", "tc_upper", "tc_exact", "cat_cof_lower", "cat_cof_upper", "tc_rule",
]


def parse_range(text: str) -> List[int]:
    """'3', '1..5' or a comma list of either; values must be positive."""
    out: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = (int(x) for x in part.split("..", 1))
                if lo > hi:
                    raise argparse.ArgumentTypeError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer or a..b range: {part!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty range")
    if min(out) < 1:
        raise argparse.ArgumentTypeError(f"values must be >= 1: {text!r}")
    return sorted(set(out))


def parse_grid(text: str) -> Dict[str, List[int]]:
    """'n=1..3,g=1..3,k=2'; a bare value continues the previous key's list."""
    axes: Dict[str, List[str]] = {}
    key = None
    for tok in text.split(","):
        tok = tok.strip()
        if "=" in tok:
            key, tok = (s.strip() for s in tok.split("=", 1))
            if key not in ("n", "g", "k"):
                raise argparse.ArgumentTypeError(f"unknown grid axis {key!r}")
            axes[key] = []
        if key is None:
            raise argparse.ArgumentTypeError(f"grid must start with n=, g= or k=: {text!r}")
        axes[key].append(tok)
    missing = {"n", "g", "k"} - set(axes)
    if missing:
        raise argparse.ArgumentTypeError(f"grid is missing {sorted(missing)}")
    grid = {ax: parse_range(",".join(vals)) for ax, vals in axes.items()}
    if min(grid["k"]) < 2:
        raise argparse.ArgumentTypeError("k must be >= 2")
    return grid


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return v


def _meta(command: str, args: argparse.Namespace, **extra) -> dict:
    meta = {"command": command, "version": __version__}
    for name in ("budget", "threads", "seed"):
        if hasattr(args, name):
            meta[name] = getattr(args, name)
    meta.update(extra)
    return meta


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def _md_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    def cell(v):
        return "" if v is None else str(v)

    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
    lines += ["| " + " | ".join(cell(v) for v in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _csv_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(headers)
    for row in rows:
        w.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


# table


def table_rows(ns: Sequence[int], gs: Sequence[int], ks: Sequence[int]) -> List[dict]:
    rows = []
    for n in ns:
        for g in gs:
            for k in ks:
                zcl, tag = zcl_closed(n, g, k)
                rep = tc_bounds(n, g, k)
                rows.append({
                    "n": n,
                    "g": g,
                    "k": k,
                    "zcl": {"value": zcl, "rule": tag.label},
                    "gap": {"value": 2 * n * k - zcl, "rule": tag.label},
                    "tc": {
                        "lower": rep.tc_lower,
                        "upper": rep.tc_upper,
                        "exact": rep.tc_exact,
                        "rule": rep.justification,
                    },
                    "cat_cof": {
                        "lower": rep.cat_cof_lower,
                        "upper": rep.cat_cof_upper,
                        "exact": rep.cat_cof_exact,
                        "rule": rep.justification,
                    },
                    "thresholds": dict(tag.thresholds),
                    "annotations": rep.annotations,
                })
    return rows


def _flat(row: dict) -> list:
    return [
        row["n"], row["g"], row["k"], row["zcl"]["value"], row["gap"]["value"], row["zcl"]["rule"],
        row["tc"]["lower"], row["tc"]["upper"], row["tc"]["exact"],
        row["cat_cof"]["lower"], row["cat_cof"]["upper"], row["tc"]["rule"],
    ]


def render_gap_cases(n: int, fmt: str) -> str:
    pieces = gap_case_table(n)
    if fmt == "json":
        rows = [
            {
                "k": p.k,
                "g_min": p.g_lo,
                "g_max": p.g_hi,
                "gap": {"formula": p.formula(), "intercept": p.intercept, "slope": p.slope, "rule": p.case},
            }
            for p in pieces
        ]
        return _dump_json({"meta": {"command": "table", "preset": "gap-cases", "n": n}, "rows": rows, "failures": []})
    headers = ["k", "genus", f"gap_k(SP^{n}(N_g))", "case"]
    body = [[p.k, p.g_range(), p.formula(), p.case] for p in pieces]
    body.append(["otherwise", "", "0", ""])
    if fmt == "csv":
        return _csv_table(headers, body)
    prof = binary_profile(2 * n)
    powers = " + ".join(f"2^{j}" for j in reversed(range(prof.e + 1)) if prof.digits[j])
    k_last = max(p.k for p in pieces)
    projective = ", ".join(f"{gap_p2n(n, k)}" for k in range(2, k_last + 2))
    head = (
        f"# gap_k(SP^{n}(N_g))\n\n"
        f"2n = {2 * n} = {powers}\n\n"
        f"gap_k(P^{2 * n}) for k = 2..{k_last + 1}: {projective}\n\n"
    )
    return head + _md_table(headers, body)


def cmd_table(args: argparse.Namespace) -> int:
    if args.example_3_1 or args.gap_cases:
        n = 51 if args.example_3_1 else args.n[0]
        sys.stdout.write(render_gap_cases(n, args.format))
        return EXIT_OK
    if args.n is None or args.g is None or args.k is None:
        args.parser.error("table needs -n, -g and -k (or a preset)")
    if min(args.k) < 2:
        args.parser.error("k must be >= 2")
    rows = table_rows(args.n, args.g, args.k)
    if args.format == "json":
        sys.stdout.write(_dump_json({"meta": _meta("table", args), "rows": rows, "failures": []}))
    elif args.format == "csv":
        sys.stdout.write(_csv_table(TABLE_COLUMNS, [_flat(r) for r in rows]))
    else:
        sys.stdout.write(_md_table(TABLE_COLUMNS, [_flat(r) for r in rows]))
    return EXIT_OK


# verify


def cmd_verify(args: argparse.Namespace) -> int:
    if not (args.grid or args.reduction_soundness or args.capacity_props):
        args.parser.error("verify needs --grid, --reduction-soundness or --capacity-props")
    rows: List[dict] = []
    failures: List[dict] = []
    lines: List[str] = []
    t0 = time.perf_counter()

    if args.grid:
        grid = args.grid
        rep = verify_grid(
            grid["n"], grid["g"], grid["k"],
            restricted=not args.unrestricted,
            budget=args.budget,
            prune=not args.no_prune,
            workers=args.threads,
        )
        for cell in sorted(rep.cells, key=lambda c: (c.n, c.g, c.k)):
            row = {"campaign": "grid", **cell.as_dict(), "rule": cell.case}
            rows.append(row)
            if cell.status == "mismatch":
                failures.append(row)
        st = rep.stats()
        lines.append(
            f"grid: {st['cells']} cells, {st['agree']} agree, {st['mismatch']} mismatch, "
            f"{st['budget-exceeded']} over budget -> {'PASS' if rep.ok else 'FAIL'}"
        )
        for cell in rep.exhausted:
            lines.append(f"  budget exhausted at n={cell.n} g={cell.g} k={cell.k} (not counted as failure)")

    if args.reduction_soundness:
        cells = reduction_soundness(range(1, 3), range(1, 3), range(2, 4), budget=args.budget)
        bad = [c for c in cells if c.status == "mismatch"]
        for c in cells:
            row = {"campaign": "reduction-soundness", **c.as_dict(), "rule": "restricted-vs-unrestricted"}
            rows.append(row)
            if c.status == "mismatch":
                failures.append(row)
        lines.append(
            f"reduction soundness (n<=2, g<=2, k<=3): {len(cells)} cells, {len(bad)} mismatch "
            f"-> {'PASS' if not bad else 'FAIL'}"
        )

    if args.capacity_props:
        reports = run_capacity_campaign(args.seed, count=args.samples, final_count=max(1, args.samples // 10))
        for law, rep in reports.items():
            row = {"campaign": "capacity", **rep.as_dict(), "rule": law}
            rows.append(row)
            if not rep.ok:
                failures.append(row)
            lines.append(
                f"{law}: {rep.instances} instances, {len(rep.violations)} violations "
                f"-> {'PASS' if rep.ok else 'FAIL'}"
            )

    elapsed = time.perf_counter() - t0
    status = "PASS" if not failures else "FAIL"
    lines.append(f"overall: {status} ({elapsed:.2f} s)")
    payload = {"meta": _meta("verify", args, status=status), "rows": rows, "failures": failures}
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(_dump_json(payload))
    if args.format == "json":
        sys.stdout.write(_dump_json(payload))
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if not failures else EXIT_FAIL


# witness


def cmd_witness(args: argparse.Namespace) -> int:
    n, g, k = args.n, args.g, args.k
    if k < 2:
        args.parser.error("k must be >= 2")
    res = search_zcl(n, g, k, restricted=not args.unrestricted, budget=args.budget, workers=args.threads)
    if not res.exact:
        print(
            f"no witness: search budget of {args.budget} terms exhausted at n={n} g={g} k={k}; "
            f"raise --budget",
            file=sys.stderr,
        )
        return EXIT_FAIL
    tctx = TensorContext(RingContext(n, g), k)
    closed, tag = zcl_closed(n, g, k)
    wit = res.witness
    assert wit.verify(tctx)
    if args.format == "json":
        row = {
            "n": n, "g": g, "k": k,
            "zcl": {"value": res.value, "rule": "exhaustive-search"},
            "closed_form": {"value": closed, "rule": tag.label},
            "witness": wit.as_dict(tctx),
            "terms_expanded": res.terms_expanded,
        }
        failures = [] if closed == res.value else [row]
        sys.stdout.write(_dump_json({"meta": _meta("witness", args), "rows": [row], "failures": failures}))
    else:
        d = wit.as_dict(tctx)
        print(f"zcl_{k}(SP^{n}(N_{g})) = {res.value}")
        print(f"tuple: {d['exponents']}")
        print(f"survivor: {d['survivor']}")
        print(f"degree: {d['total_degree']}")
        print(f"closed form: {closed} ({tag.label})")
    return EXIT_OK if closed == res.value else EXIT_FAIL


# tcgen


def cmd_tcgen(args: argparse.Namespace) -> int:
    try:
        poly = tcgen_polynomial(args.n, args.g, use_literature=not args.no_literature)
    except UnsupportedRegime as exc:
        print(
            f"tcgen: unsupported regime ({exc}). The polynomial is available when "
            f"n is a power of two (any g), when g >= floor(gap_2(P^2n)/2) + 2, "
            f"or in general for g >= 2 with D = floor(gap_2(P^2n)/(g-1)) + 3.",
            file=sys.stderr,
        )
        return EXIT_USAGE
    lo, hi = poly.value_at_one()
    p1_ok = poly.exact and lo == 2 * args.n
    if args.format == "json":
        row = {
            "n": args.n,
            "g": args.g,
            "polynomial": poly.render(),
            "coefficients": [list(c) for c in poly.coeffs],
            "exact": poly.exact,
            "stabilization_index": poly.stabilization_index,
            "degree": poly.degree,
            "degree_bound": poly.degree_bound,
            "p_at_one": {"lower": lo, "upper": hi, "expected": 2 * args.n},
            "rules": {str(k): src for k, src in sorted(poly.sources.items())},
        }
        failures = [] if (p1_ok or not poly.exact) else [row]
        sys.stdout.write(_dump_json({"meta": _meta("tcgen", args), "rows": [row], "failures": failures}))
        return EXIT_OK if not failures else EXIT_FAIL
    flag = "exact" if poly.exact else "interval coefficients"
    p1 = str(lo) if lo == hi else f"[{lo}..{hi}]"
    print(f"P(t) = {poly.render()} ({flag}), P(1)={p1}")
    print(f"D = {poly.stabilization_index}, degree {poly.degree} (bound {poly.degree_bound})")
    if poly.exact:
        print(f"P(1) = cat(SP^{args.n}(N_{args.g})) = {2 * args.n}: {'ok' if p1_ok else 'FAILED'}")
    for k, src in sorted(poly.sources.items()):
        print(f"  TC_{k}: {src}")
    return EXIT_OK if (p1_ok or not poly.exact) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=positive_int, default=DEFAULT_BUDGET,
                        help="term budget per search (default %(default)s)")
    common.add_argument("--threads", type=positive_int, default=1,
                        help="worker processes for searches (default 1)")
    common.add_argument("--seed", type=int, default=7, help="seed for randomized sampling")
    common.add_argument("--format", choices=("md", "csv", "json"), default="md")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="spzcl",
        description="Zero-divisor cup lengths and TC bounds of symmetric products of non-orientable surfaces",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common], help="closed-form zcl, gap and TC bounds over a grid")
    p.add_argument("-n", type=parse_range)
    p.add_argument("-g", type=parse_range)
    p.add_argument("-k", type=parse_range)
    p.add_argument("--example-3-1", action="store_true",
                   help="piecewise gap table of SP^51(N_g) over all g and k")
    p.add_argument("--gap-cases", action="store_true", help="piecewise gap table for the single -n value")
    p.set_defaults(func=cmd_table, parser=p)

    p = sub.add_parser("verify", parents=[common], help="closed forms against search and property campaigns")
    p.add_argument("--grid", type=parse_grid, help="e.g. n=1..3,g=1..3,k=2")
    p.add_argument("--reduction-soundness", action="store_true",
                   help="reduced vs unrestricted search on n<=2, g<=2, k<=3")
    p.add_argument("--capacity-props", action="store_true", help="randomized capacity-law campaign")
    p.add_argument("--samples", type=positive_int, default=10_000, help="instances per capacity law")
    p.add_argument("--unrestricted", action="store_true", help="grid search over all tuples")
    p.add_argument("--no-prune", action="store_true", help="disable capacity pruning")
    p.add_argument("--report", help="write the JSON report to this file")
    p.set_defaults(func=cmd_verify, parser=p)

    p = sub.add_parser("witness", parents=[common], help="exponent tuple and surviving monomial")
    p.add_argument("-n", type=positive_int, required=True)
    p.add_argument("-g", type=positive_int, required=True)
    p.add_argument("-k", type=positive_int, required=True)
    p.add_argument("--unrestricted", action="store_true")
    p.set_defaults(func=cmd_witness, parser=p)

    p = sub.add_parser("tcgen", parents=[common], help="numerator of the TC-generating function")
    p.add_argument("-n", type=positive_int, required=True)
    p.add_argument("-g", type=positive_int, required=True)
    p.add_argument("--no-literature", action="store_true",
                   help="do not use literature values for TC_2 left open by the bounds")
    p.set_defaults(func=cmd_tcgen, parser=p)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "table" and args.gap_cases and (args.n is None or len(args.n) != 1):
        parser.error("--gap-cases needs a single -n value")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
