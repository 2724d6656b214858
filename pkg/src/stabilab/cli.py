"""Command-line front end.

Exit codes: 0 success, 2 validation or fault-tolerance failure, 3 parse
error, 4 fit failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import defaultdict
from importlib import resources
from pathlib import Path

from . import codefile
from .code import ExtendedCheckMatrix, StabilizerCode, min_distance, standard_form, syndrome_of, validate
from .codefile import CodeDefinition, CodeFileError
from .experiment import METHODS, default_shots, estimate_rates_all
from .fitting import FitError, fit_polynomial, leading_order_series, pseudo_threshold
from .ft import FaultToleranceViolation, build_lookup_table, check_fault_tolerance, propagated_errors, search_schedules
from .noise import ANISOTROPIC, STANDARD_DEPOLARIZING, NoiseModel
from .pauli import PauliOperator, format_sparse, parse_sparse, weight

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_FIT = 0, 2, 3, 4

CSV_HEADER = ["p", "noise", "method", "shots", "batches", "logical_mean", "logical_min", "logical_max",
              "total_mean", "total_min", "total_max", "fidelity_mean"]
NOISE_NAMES = {"std-dep": STANDARD_DEPOLARIZING, "anisotropic": ANISOTROPIC}


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _load(path: str) -> CodeDefinition:
    try:
        return codefile.load(None if path == "default" else path)
    except CodeFileError as exc:
        raise _Fail(EXIT_PARSE, f"{path}: {exc}") from None
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"{path}: {exc.strerror or exc}") from None


def _schedule(defn: CodeDefinition, name: str | None):
    try:
        return defn.schedule(name)
    except KeyError as exc:
        raise _Fail(EXIT_PARSE, str(exc.args[0])) from None


def _full_code(defn: CodeDefinition) -> StabilizerCode:
    code = defn.code()
    try:
        return code.with_logicals()
    except Exception:  # invalid generators: validate() reports the reason
        return code


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- validate ----------------------------------------------------------------

def cmd_validate(args) -> int:
    defn = _load(args.codefile)
    code = _full_code(defn)
    report = validate(code)
    print(report)
    if not report.ok:
        return EXIT_INVALID
    sf = standard_form(ExtendedCheckMatrix.from_code(code))
    print(f"r = {sf.r}, l = {sf.l}")
    d = min_distance(code, args.w_max)
    print(f"distance = {d}" if d is not None else f"distance > {args.w_max}")
    return EXIT_OK


# -- tables ------------------------------------------------------------------

def syndrome_tables(defn: CodeDefinition, sched_name: str | None) -> dict:
    code = defn.code()
    sched = _schedule(defn, sched_name)
    single = {}
    for q in range(code.n):
        for kind in "XYZ":
            single[f"{kind}{q}"] = syndrome_of(code, PauliOperator.single(code.n, q, kind))
    rows, seen = [], set()
    for pe in propagated_errors(code, sched):
        if weight(pe.representative) < 2:
            continue
        stab = "".join(f"{p}{q}" for q, p in sched.rows[pe.stabilizer])
        err = format_sparse(pe.representative)
        if (stab, err) in seen:
            continue
        seen.add((stab, err))
        rows.append({"stabilizer": stab, "error": err, "syndrome": syndrome_of(code, pe.representative)})
    table = build_lookup_table(code, sched)
    return {
        "code": defn.name,
        "schedule": sched_name or "generator-order",
        "single_qubit": single,
        "propagated": rows,
        "lookup": json.loads(table.to_json()),
    }


def _golden(name: str):
    return json.loads(resources.files("stabilab.data").joinpath(name).read_text())


def compare_golden(tables: dict) -> list[str]:
    """Differences between computed tables and the shipped transcriptions."""
    problems = []
    gold_single = _golden("single_qubit_syndromes.json")
    for err, syn in sorted(gold_single.items()):
        got = tables["single_qubit"].get(err)
        if got != syn:
            problems.append(f"single-qubit {err}: expected {syn}, got {got}")
    extra = set(tables["single_qubit"]) - set(gold_single)
    problems += [f"single-qubit {e}: not in golden table" for e in sorted(extra)]

    def key(r):  # factor order inside an error string is not significant
        return r["stabilizer"], format_sparse(parse_sparse(r["error"], n).unsigned())

    n = len(tables["single_qubit"]) // 3
    gold_prop = {key(r): r["syndrome"] for r in _golden("propagated_syndromes.json")}
    got4 = {key(r): r["syndrome"] for r in tables["propagated"]}
    for stab, err in sorted(set(gold_prop) | set(got4)):
        a, b = gold_prop.get((stab, err)), got4.get((stab, err))
        if a != b:
            problems.append(f"propagated {err} (from {stab}): expected {a}, got {b}")
    return problems


def cmd_tables(args) -> int:
    defn = _load(args.codefile)
    try:
        tables = syndrome_tables(defn, args.schedule)
    except FaultToleranceViolation as exc:
        print("schedule is not fault tolerant:")
        for v in exc.violations:
            print(f"  {v}")
        return EXIT_INVALID
    _emit(json.dumps(tables, indent=2, sort_keys=True) + "\n", args.out)
    if args.golden:
        problems = compare_golden(tables)
        for line in problems:
            print(f"MISMATCH {line}", file=sys.stderr)
        if problems:
            return EXIT_INVALID
        print(f"golden tables match ({len(tables['single_qubit'])} single-qubit, "
              f"{len({r['error'] for r in tables['propagated']})} propagated errors)", file=sys.stderr)
    return EXIT_OK


# -- ft-check / reorder-search -------------------------------------------------

def cmd_ft_check(args) -> int:
    defn = _load(args.codefile)
    verdict = check_fault_tolerance(defn.code(), _schedule(defn, args.schedule))
    print("fault tolerant" if verdict.fault_tolerant else "NOT fault tolerant")
    for v in verdict.violations:
        print(f"  {v}")
    return EXIT_OK if verdict.fault_tolerant else EXIT_INVALID


def cmd_reorder_search(args) -> int:
    defn = _load(args.codefile)
    start = _schedule(defn, args.schedule)
    found = search_schedules(defn.code(), args.budget, start)
    for i, sched in enumerate(found, 1):
        print(f"schedule found{i}")
        for j in range(len(sched.rows)):
            print(sched.format_row(j))
        print("end")
    if not found:
        print("# no fault-tolerant schedule found", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


# -- run ---------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def results_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for pt in rows:
        lm, lo, hi = pt.logical_stats
        tm, tlo, thi = pt.total_stats
        w.writerow([_fmt(pt.p), pt.noise, pt.method, pt.shots, pt.batches, _fmt(lm), _fmt(lo), _fmt(hi),
                    _fmt(tm), _fmt(tlo), _fmt(thi), _fmt(pt.fidelity_stats[0])])
    return buf.getvalue()


def _p_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad p list {text!r}") from None
    if not vals or any(not 0 <= v <= 1 for v in vals):
        raise argparse.ArgumentTypeError("p values must lie in [0, 1]")
    return vals


def cmd_run(args) -> int:
    defn = _load(args.codefile)
    code = defn.code()
    sched = _schedule(defn, args.schedule)
    verdict = check_fault_tolerance(code, sched)
    if not verdict.fault_tolerant:
        print(f"warning: schedule {args.schedule!r} is not fault tolerant", file=sys.stderr)
    noise = NoiseModel(NOISE_NAMES[args.noise])
    methods = METHODS if args.method == "both" else (args.method,)
    rows = []
    for p in args.p:
        shots = args.shots or default_shots(p)
        pts = estimate_rates_all(code, sched, noise, p, shots, args.batches, args.seed, args.max_rounds,
                                 args.threads)
        rows += [pts[m] for m in methods]
    _emit(results_csv(rows), args.out)
    return EXIT_OK


# -- fit ---------------------------------------------------------------------

def read_results(path: str) -> list[dict]:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != CSV_HEADER:
                raise _Fail(EXIT_PARSE, f"{path}: unexpected CSV header {reader.fieldnames}")
            return list(reader)
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"{path}: {exc.strerror or exc}") from None


def cmd_fit(args) -> int:
    groups: dict[tuple[str, str], list] = defaultdict(list)
    try:
        for row in read_results(args.results):
            p = float(row["p"])
            if p <= 0:
                continue
            rate = float(row[f"{args.metric}_mean"])
            total = int(row["shots"]) * int(row["batches"])
            var = max(rate, 1.0 / total) * (1.0 - rate) / total
            lo, hi = float(row[f"{args.metric}_min"]), float(row[f"{args.metric}_max"])
            groups[row["noise"], row["method"]].append((p, rate, var, lo, hi))
    except (KeyError, ValueError) as exc:
        raise _Fail(EXIT_PARSE, f"{args.results}: malformed row ({exc})") from None
    if not groups:
        raise _Fail(EXIT_FIT, "no rows with p > 0 to fit")

    status = EXIT_OK
    for (noise, method), pts in sorted(groups.items()):
        print(f"[{noise} / {method} / {args.metric}]")
        try:
            fit = fit_polynomial([(p, r, v) for p, r, v, _, _ in pts], args.degree)
        except FitError as exc:
            print(f"  fit failed: {exc}")
            status = EXIT_FIT
            continue
        coeffs = " ".join(f"a{i}={a:.6g}" for i, a in enumerate(fit.coefficients))
        print(f"  coefficients: {coeffs}")
        print(f"  leading order: {fit.leading_order:.6g}")
        if fit.linear_component:
            print(f"  linear component: {fit.linear:.6g} +- {fit.linear_sigma:.2g}")
        thr = pseudo_threshold(fit)
        print(f"  pseudo-threshold: {'none' if thr is None else f'{thr:.6g}'}")
        if args.series:
            print("  p, rate/p^2, min, max")
            for p, s, (lo, hi) in leading_order_series([(p, r, lo, hi) for p, r, _, lo, hi in sorted(pts)]):
                print(f"  {p:.6g}, {s:.6g}, {lo:.6g}, {hi:.6g}")
    return status


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stabilab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    codehelp = "code definition file ('default' for the bundled [[8,1,3]] code)"

    sp = sub.add_parser("validate", help="check code invariants and report distance")
    sp.add_argument("codefile", help=codehelp)
    sp.add_argument("--w-max", type=int, default=3, help="largest weight searched for logicals")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("tables", help="write single-qubit and propagated-error syndrome tables as JSON")
    sp.add_argument("codefile", help=codehelp)
    sp.add_argument("--schedule")
    sp.add_argument("--out")
    sp.add_argument("--golden", action="store_true", help="compare with the bundled reference tables")
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("ft-check", help="static fault-tolerance verdict for a schedule")
    sp.add_argument("codefile", help=codehelp)
    sp.add_argument("--schedule")
    sp.set_defaults(func=cmd_ft_check)

    sp = sub.add_parser("reorder-search", help="search gate orders for fault-tolerant schedules")
    sp.add_argument("codefile", help=codehelp)
    sp.add_argument("--schedule", help="starting schedule (default: generator order)")
    sp.add_argument("--budget", type=int, default=10)
    sp.set_defaults(func=cmd_reorder_search)

    sp = sub.add_parser("run", help="Monte Carlo error rates, one CSV row per p")
    sp.add_argument("codefile", help=codehelp)
    sp.add_argument("--schedule", default="ft")
    sp.add_argument("--noise", choices=sorted(NOISE_NAMES), default="std-dep")
    sp.add_argument("--method", choices=[*METHODS, "both"], default="modified")
    sp.add_argument("--p", type=_p_list, required=True, help="comma-separated physical error rates")
    sp.add_argument("--shots", type=int, default=None, help="trials per batch (default max(1e4, 100/p))")
    sp.add_argument("--batches", type=int, default=10)
    sp.add_argument("--max-rounds", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("fit", help="fit error rates from a results CSV")
    sp.add_argument("results")
    sp.add_argument("--metric", choices=["logical", "total"], default="logical")
    sp.add_argument("--degree", type=int, default=3)
    sp.add_argument("--series", action="store_true", help="also print the rate/p^2 series")
    sp.set_defaults(func=cmd_fit)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        if (args.shots is not None and args.shots < 1) or args.batches < 1 or args.max_rounds < 2:
            print("error: need --shots >= 1, --batches >= 1 and --max-rounds >= 2", file=sys.stderr)
            return EXIT_PARSE
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
