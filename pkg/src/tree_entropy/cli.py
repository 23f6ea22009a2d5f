"""Command-line front end.

    tree-entropy analyze FILE... [--k 0,1,2,4] [--pad sentinel|LABEL] [--normalized]
                                 [--format csv|markdown|json] [--unlabeled-shape]
    tree-entropy verify [--trials N] [--max-size N] [--sigma S] [--k-max K] [--seed S]
                        [--binary] [--unlabeled] [--no-families] [--fcns-pad PAD]
    tree-entropy family NAME --n N [--k K] [--emit term|xml|report]
    tree-entropy fcns (FILE | --term TERM) [--pad PAD] [--emit term|xml]

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import ROUND_HALF_EVEN, Decimal

from .entropy import MEASURES, EntropyReport, reports
from .families import (FAMILIES, FAMILY_PAD, FamilyRangeError, FamilySpec, closed_forms)
from .inequalities import SuiteResult, measure_closed_form, run_family_suites, run_random_suites
from .tree_model import PadPolicy, TermSyntaxError, build_tree, fcns
from .xml_ingest import IngestOptions, XMLStructureError, parse_xml_structure, to_xml

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2
DEFAULT_KS = (0, 1, 2, 4)
THREADS_ENV = "TREE_ENTROPY_THREADS"

INPUT_ERRORS = (OSError, XMLStructureError, TermSyntaxError, FamilyRangeError, ValueError)


def format_number(x: float, places: int, thousands: bool = False) -> str:
    """Round half-to-even to ``places`` decimals; optional space-grouped thousands."""
    d = Decimal(repr(float(x))).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN)
    if d == 0:
        d = abs(d)
    return format(d, ",").replace(",", " ") if thousands else str(d)


def parse_k_list(text: str) -> list[int]:
    try:
        ks = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")
    if not ks or min(ks) < 0:
        raise argparse.ArgumentTypeError("k list must be non-empty and non-negative")
    return ks


def _pad_arg(text: str) -> PadPolicy:
    try:
        return PadPolicy.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


# ---------------------------------------------------------------- analyze

def _analyze_one(path: str, ks: list[int], pad: PadPolicy, unlabeled_shape: bool):
    """(n, reports) or (None, error message); runs in a worker process."""
    try:
        t = parse_xml_structure(path, IngestOptions(pad=pad))
        return t.size, reports(t, ks, pad, unlabeled_shape=unlabeled_shape)
    except INPUT_ERRORS as exc:
        return None, f"{path}: {exc}"


def _worker_count(jobs: int) -> int:
    cap = os.cpu_count() or 1
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            pass
    return max(1, min(cap, jobs))


def _run_analyses(paths, ks, pad, unlabeled_shape):
    workers = _worker_count(len(paths))
    args = ([p for p in paths], [ks] * len(paths), [pad] * len(paths),
            [unlabeled_shape] * len(paths))
    if workers == 1:
        return list(map(_analyze_one, *args))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_analyze_one, *args))  # map keeps input order


def report_columns(normalized: bool, unlabeled_shape: bool) -> list[str]:
    measures = list(MEASURES) + (["H_shape_unlabeled"] if unlabeled_shape else [])
    cols = ["file", "n", "k"] + measures
    if normalized:
        cols += [f"{m}_per_n" for m in measures]
    return cols


def report_row(name: str, r: EntropyReport, normalized: bool, thousands: bool = False) -> dict:
    row = {"file": name, "n": str(r.size), "k": str(r.k)}
    for key, value in r.measures().items():
        row[key] = format_number(value, 2, thousands)
    if normalized:
        for key, value in r.normalized().items():
            row[key] = format_number(value, 4)
    return row


def render(rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, columns, lineterminator="\n", restval="")
        w.writeheader()
        for row in rows:
            w.writerow({c: row.get(c, "") for c in columns})
        return buf.getvalue()
    if fmt == "json":
        out = []
        for row in rows:
            if "error" in row:
                out.append({"file": row["file"], "error": row["error"]})
                continue
            rec = {"file": row["file"], "n": int(row["n"]), "k": int(row["k"])}
            rec.update({c: float(row[c].replace(" ", "")) for c in columns[3:]})
            out.append(rec)
        return json.dumps(out, indent=2) + "\n"
    lines = ["| " + " | ".join(columns) + " |",
             "|" + "|".join("---" if i == 0 else "---:" for i in range(len(columns))) + "|"]
    for row in rows:
        if "error" in row:
            cells = [row["file"], "error"] + [""] * (len(columns) - 2)
        else:
            cells = [row.get(c, "") for c in columns]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    results = _run_analyses(args.paths, args.k, args.pad, args.unlabeled_shape)
    columns = report_columns(args.normalized, args.unlabeled_shape)
    rows, status = [], EXIT_OK
    thousands = args.format == "markdown"
    for path, (n, payload) in zip(args.paths, results):
        if n is None:
            print(f"error: {payload}", file=sys.stderr)
            rows.append({"file": path, "error": payload})
            status = EXIT_INPUT
            continue
        for r in payload:
            rows.append(report_row(path, r, args.normalized, thousands))
    sys.stdout.write(render(rows, columns, args.format))
    return status


# ---------------------------------------------------------------- verify

def format_suite(res: SuiteResult) -> str:
    lines = []
    for name in res.names():
        lines.append(f"{name}: passed {res.passed[name]}, failed {res.failed[name]}")
    for name, (term, context, lhs, rhs) in sorted(res.counterexamples.items()):
        lines.append(f"first counterexample for {name} ({context}): lhs {lhs!r} > rhs {rhs!r}")
        lines.append(f"  {term}")
    lines.append("all checks passed" if res.ok else f"{sum(res.failed.values())} checks failed")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    selected = args.binary or args.unlabeled
    pads = (PadPolicy.sentinel(), FAMILY_PAD)
    res = run_random_suites(args.trials, args.max_size, args.sigma, args.k_max, args.seed,
                            labeled=not selected, binary=args.binary or not selected,
                            unlabeled=args.unlabeled or not selected,
                            pads=tuple(dict.fromkeys(pads + (args.fcns_pad,))),
                            fcns_pads=(args.fcns_pad,))
    if not args.no_families:
        run_family_suites(res)
    sys.stdout.write(format_suite(res))
    return EXIT_OK if res.ok else EXIT_FAILED


# ---------------------------------------------------------------- family

def _value(x: float) -> str:
    return repr(round(x, 9))


def family_report(spec: FamilySpec, k: int) -> str:
    """Measured entropies next to every applicable closed form."""
    t = spec.build()
    forms = closed_forms(spec, k)
    order = k if spec.name != "permutation" else spec.k - 1
    lines = [f"family {spec.name} n={spec.n}" + (f" tuple_k={spec.k}" if spec.k else "")
             + f" size={t.size} pad={FAMILY_PAD}"]
    r = reports(t, [order], FAMILY_PAD)[0]
    lines.append(f"measured at k={order}:")
    for name, value in r.measures().items():
        lines.append(f"  {name} = {_value(value)}")
    lines.append("closed forms:")
    cache: dict = {}
    for cf in forms:
        measured = measure_closed_form(t, cf, cache)
        label = cf.quantity if cf.k is None else f"{cf.quantity}_{cf.k}"
        lines.append(f"  {label} = {_value(measured)} (expected {_value(cf.value)}): "
                     f"{cf.status(measured)}")
    return "\n".join(lines) + "\n"


def cmd_family(args) -> int:
    if args.name == "permutation":
        spec = FamilySpec(args.name, args.n, args.k)
        order = None
    else:
        spec = FamilySpec(args.name, args.n)
        order = args.k if args.k is not None else 1
    if args.emit == "report":
        sys.stdout.write(family_report(spec, order))
        return EXIT_OK
    t = spec.build()
    sys.stdout.write((t.to_term() if args.emit == "term" else to_xml(t)) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- fcns

def cmd_fcns(args) -> int:
    if (args.term is None) == (args.path is None):
        raise ValueError("give exactly one of a file path or --term")
    if args.term is not None:
        t = build_tree(args.term)
    else:
        t = parse_xml_structure(args.path, IngestOptions(pad=args.pad))
    b = fcns(t, args.pad)
    sys.stdout.write((b.to_term() if args.emit == "term" else to_xml(b)) + "\n")
    print(f"size {b.size}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tree-entropy",
                                description="Empirical entropies of ordered labeled trees.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="entropy reports for XML files")
    a.add_argument("paths", nargs="+", help="XML files, optionally gzip-compressed")
    a.add_argument("--k", type=parse_k_list, default=list(DEFAULT_KS),
                   help="comma-separated orders (default 0,1,2,4)")
    a.add_argument("--pad", type=_pad_arg, default=PadPolicy.sentinel(),
                   help="'sentinel' (default) or an element name to pad with")
    a.add_argument("--normalized", action="store_true", help="add per-node columns")
    a.add_argument("--format", choices=("csv", "markdown", "json"), default="csv")
    a.add_argument("--unlabeled-shape", action="store_true",
                   help="add the label-shape entropy of the tree with all labels erased")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="check the entropy inequalities on random trees")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--max-size", type=int, default=300)
    v.add_argument("--sigma", type=int, default=5)
    v.add_argument("--k-max", type=int, default=4)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--binary", action="store_true", help="only the binary-tree suites")
    v.add_argument("--unlabeled", action="store_true", help="only the unlabeled-tree suite")
    v.add_argument("--no-families", action="store_true", help="skip the family closed forms")
    v.add_argument("--fcns-pad", type=_pad_arg, default=PadPolicy.sentinel(),
                   help="pad used for the fcns-of-binary-tree inequality (default sentinel)")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("family", help="emit a separation-family tree or its report")
    f.add_argument("name", choices=FAMILIES)
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--k", type=int, default=None,
                   help="entropy order (tuple length for the permutation family)")
    f.add_argument("--emit", choices=("term", "xml", "report"), default="term")
    f.set_defaults(func=cmd_family)

    c = sub.add_parser("fcns", help="first-child next-sibling encoding of a tree")
    c.add_argument("path", nargs="?", help="XML file")
    c.add_argument("--term", help="tree in term syntax, e.g. 'a(b c)'")
    c.add_argument("--pad", type=_pad_arg, default=PadPolicy.sentinel())
    c.add_argument("--emit", choices=("term", "xml"), default="term")
    c.set_defaults(func=cmd_fcns)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
