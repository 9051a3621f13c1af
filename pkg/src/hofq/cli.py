"""Command-line front end.

Subcommands: compute, verify, triangle, scan-selfsim, perturb, approx,
export-figure, hofstadter.  Data goes to stdout (or --out); progress and
error messages go to stderr.  Exit codes: 0 success, 1 usage error,
2 a computed sequence died, 3 verifier failure.

Identical invocations produce byte-identical output: ordering is stable and
data files carry no timestamps.  An optional --config JSON file supplies
per-flag defaults (keys are flag names without dashes); explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import analysis, engine, triangle, verify
from .errors import CapExceeded, InvalidFSpec, InvalidQ
from .fspec import parse_fspec

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DIED = 2
EXIT_VERIFY_FAILED = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_code_usage(message))

    def exit_code_usage(self, message):
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return EXIT_USAGE


def _default_threads() -> int | None:
    env = os.environ.get("HOFQ_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return None


def build_parser() -> _Parser:
    p = _Parser(prog="hofq", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--config", help="JSON file with default flag values")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add_common(sp, fmt=("text", "csv", "json"), n_default=None, f_flag=False):
        if f_flag:
            sp.add_argument("--f", dest="fspec", required=f_flag == "required",
                            help="driving-sequence spec (see grammar)")
        sp.add_argument("--n", type=int, default=n_default, help="trace length")
        sp.add_argument("--format", choices=fmt, default=fmt[0])
        sp.add_argument("--out", help="write data here instead of stdout")

    sp = sub.add_parser("compute", help="trace q for a driving sequence")
    add_common(sp, n_default=16, f_flag="required")

    sp = sub.add_parser("verify", help="run closed-form verifiers")
    sp.add_argument("--lemma", default="all",
                    help="all, or comma-separated names: "
                         + ", ".join(verify.REGISTRY))
    sp.add_argument("--n", type=int, default=None,
                    help="override the per-verifier default N")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out")
    sp.add_argument("--threads", type=int, default=_default_threads())

    sp = sub.add_parser("triangle", help="exhaustive attained-value triangle")
    sp.add_argument("--n", type=int, default=8)
    sp.add_argument("--cap", type=int, default=triangle.TRIANGLE_CAP)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out")

    sp = sub.add_parser("scan-selfsim", help="find exact self-similar intervals")
    add_common(sp, fmt=("text", "csv", "json"), n_default=160000, f_flag="required")
    sp.add_argument("--shifts", help="comma-separated shift candidates")
    sp.add_argument("--shift-range", help="LO:HI[:STEP] candidate range")
    sp.add_argument("--min-run", type=int, default=1000)
    sp.add_argument("--discover", action="store_true",
                    help="propose candidate shifts from repeated patterns")

    sp = sub.add_parser("perturb", help="compare a trace against a one-index bump")
    add_common(sp, n_default=2**19, f_flag="required")
    sp.add_argument("--at", type=int, default=16)
    sp.add_argument("--amount", type=int, default=1)

    sp = sub.add_parser("approx", help="error of an asymptotic model")
    add_common(sp, fmt=("text", "csv", "json"), n_default=160000, f_flag="required")
    sp.add_argument("--model", required=True,
                    help="sqrt:ALPHA | sqrt:gamma2 | const:A | power:A:P:B")

    sp = sub.add_parser("export-figure", help="write plot-ready data files")
    sp.add_argument("--which", required=True,
                    help="detrended | approach | perturbation | trace "
                         "(aliases: fig2, ascon, fig3)")
    sp.add_argument("--out", required=True)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--f", dest="fspec", default=None)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--full-resolution", action="store_true")
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--a", type=int, default=5)
    sp.add_argument("--at", type=int, default=16)
    sp.add_argument("--amount", type=int, default=1)

    sp = sub.add_parser("hofstadter", help="two-nested-lookup traces")
    sp.add_argument("--variant", choices=("hof", "tanny", "v", "quasipoly"),
                    default="hof")
    sp.add_argument("--n", type=int, default=10**5)
    sp.add_argument("--format", choices=("text", "csv", "json"), default="text")
    sp.add_argument("--out")
    return p


def _apply_config(args: argparse.Namespace, argv: list[str]) -> None:
    if not args.config:
        return
    with open(args.config) as fh:
        conf = json.load(fh)
    given = {tok.split("=", 1)[0] for tok in argv if tok.startswith("--")}
    for key, value in conf.items():
        flag = "--" + key
        dest = key.replace("-", "_")
        if flag in given or not hasattr(args, dest):
            continue
        setattr(args, dest, value)


class _Out:
    def __init__(self, path):
        self.path = path
        self.fh = open(path, "w") if path else sys.stdout

    def __enter__(self):
        return self.fh

    def __exit__(self, *exc):
        if self.path:
            self.fh.close()
        return False


def _outcome_json(outcome: engine.ExistenceOutcome) -> dict:
    return {"status": "exists" if outcome.exists else "died",
            "checked_to": outcome.checked_to,
            "died_at": outcome.died_at,
            "lookup_index": outcome.lookup_index}


def _emit_trace(args, trace: engine.QTrace, fh) -> None:
    idx = np.arange(trace.start, trace.n_max + 1, dtype=np.int64)
    has_f = trace.f_values is not None
    if args.format == "csv":
        print("n,f,q" if has_f else "n,q", file=fh)
        for j, n in enumerate(idx):
            if has_f:
                print(f"{n},{trace.f_values[j]},{trace.q_values[j]}", file=fh)
            else:
                print(f"{n},{trace.q_values[j]}", file=fh)
    elif args.format == "json":
        doc = {"schema": "hofq.trace/1",
               "fspec": trace.fspec.spec_str() if trace.fspec else None,
               "start": trace.start,
               "outcome": _outcome_json(trace.outcome),
               "q": [int(v) for v in trace.q_values]}
        if has_f:
            doc["f"] = [int(v) for v in trace.f_values]
        json.dump(doc, fh, separators=(",", ":"))
        fh.write("\n")
    else:
        head = " n  f  q" if has_f else " n  q"
        print(head, file=fh)
        for j, n in enumerate(idx):
            if has_f:
                print(f"{n:>2}  {trace.f_values[j]}  {trace.q_values[j]}", file=fh)
            else:
                print(f"{n:>2}  {trace.q_values[j]}", file=fh)
        print(f"outcome: {trace.outcome}", file=fh)


def _cmd_compute(args) -> int:
    trace = engine.compute_q(parse_fspec(args.fspec), args.n)
    with _Out(args.out) as fh:
        _emit_trace(args, trace, fh)
    if not trace.exists:
        print(f"hofq: sequence died at n = {trace.outcome.died_at} "
              f"(lookup index {trace.outcome.lookup_index})", file=sys.stderr)
        return EXIT_DIED
    return EXIT_OK


def _cmd_verify(args) -> int:
    names = None if args.lemma == "all" else [s.strip() for s in
                                              args.lemma.split(",") if s.strip()]
    try:
        results = verify.run_suite(names, args.n, args.threads)
    except KeyError as exc:
        print(f"hofq: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    with _Out(args.out) as fh:
        if args.format == "json":
            doc = {"schema": "hofq.verify/1",
                   "results": [{"name": r.name, "ok": r.ok,
                                "checked_up_to": r.checked_up_to,
                                "first_counterexample": r.first_counterexample,
                                "details": r.details} for r in results],
                   "ok": all(r.ok for r in results)}
            json.dump(doc, fh, separators=(",", ":"), default=str)
            fh.write("\n")
        else:
            for r in results:
                print(r, file=fh)
    return EXIT_OK if all(r.ok for r in results) else EXIT_VERIFY_FAILED


def _cmd_triangle(args) -> int:
    table = triangle.build_triangle(args.n, cap=args.cap)
    with _Out(args.out) as fh:
        if args.format == "json":
            fh.write(triangle.triangle_json(table))
            fh.write("\n")
        else:
            print(table.to_text(), file=fh)
    return EXIT_OK


def _parse_shift_args(args, trace) -> list[int]:
    shifts: list[int] = []
    if args.shifts:
        shifts.extend(int(s) for s in args.shifts.split(","))
    if args.shift_range:
        parts = [int(v) for v in args.shift_range.split(":")]
        if len(parts) == 2:
            lo, hi, step = parts[0], parts[1], 1
        elif len(parts) == 3:
            lo, hi, step = parts
        else:
            raise ValueError("shift range must be LO:HI[:STEP]")
        shifts.extend(range(lo, hi + 1, step))
    if args.discover:
        found = analysis.propose_shifts(trace, min_run=args.min_run)
        print(f"hofq: discovery proposed shifts {found}", file=sys.stderr)
        shifts.extend(found)
    return shifts


def _cmd_scan(args) -> int:
    trace = engine.compute_q(parse_fspec(args.fspec), args.n)
    if not trace.exists:
        print(f"hofq: sequence died at n = {trace.outcome.died_at}", file=sys.stderr)
        return EXIT_DIED
    shifts = _parse_shift_args(args, trace)
    if not shifts:
        print("hofq: no shifts given (use --shifts, --shift-range or --discover)",
              file=sys.stderr)
        return EXIT_USAGE
    matches = analysis.scan_self_similarity(trace, shifts, args.min_run)
    with _Out(args.out) as fh:
        if args.format == "json":
            doc = {"schema": "hofq.selfsim/1", "fspec": trace.fspec.spec_str(),
                   "n": args.n, "min_run": args.min_run,
                   "matches": [{"shift": m.shift, "delta": m.delta,
                                "lo": m.lo, "hi": m.hi} for m in matches]}
            json.dump(doc, fh, separators=(",", ":"))
            fh.write("\n")
        elif args.format == "csv":
            print("shift,delta,lo,hi", file=fh)
            for m in matches:
                print(f"{m.shift},{m.delta},{m.lo},{m.hi}", file=fh)
        else:
            for m in matches:
                print(f"shift {m.shift}: q(i+{m.shift}) - q(i) = {m.delta} "
                      f"for i in [{m.lo}, {m.hi}] (length {m.length})", file=fh)
            if not matches:
                print("no matches at this min-run", file=fh)
    return EXIT_OK


def _cmd_perturb(args) -> int:
    pert = analysis.perturb_compare(parse_fspec(args.fspec), args.at,
                                    args.amount, args.n)
    with _Out(args.out) as fh:
        if args.format == "json":
            doc = {"schema": "hofq.perturb/1", "fspec": pert.fspec,
                   "at": pert.at, "amount": pert.amount,
                   "base_outcome": pert.base_outcome,
                   "perturbed_outcome": pert.perturbed_outcome,
                   "zero_regions": [list(z) for z in pert.zero_regions]}
            json.dump(doc, fh, separators=(",", ":"))
            fh.write("\n")
        elif args.format == "csv":
            print("n,diff", file=fh)
            for j, d in enumerate(pert.diff):
                print(f"{j + 1},{d}", file=fh)
        else:
            print(f"base:      {pert.base_outcome}", file=fh)
            print(f"perturbed: {pert.perturbed_outcome}", file=fh)
            nz = int(np.count_nonzero(pert.diff))
            print(f"difference is nonzero at {nz} of {len(pert.diff)} indices",
                  file=fh)
            print(f"zero regions ({len(pert.zero_regions)}):", file=fh)
            for lo, hi in pert.zero_regions[:20]:
                print(f"  [{lo}, {hi}]", file=fh)
            if len(pert.zero_regions) > 20:
                print("  ...", file=fh)
    return EXIT_OK


def _cmd_approx(args) -> int:
    model = analysis.parse_model(args.model)
    report = analysis.approx_error(parse_fspec(args.fspec), model, args.n,
                                   keep_trace=args.format == "csv")
    with _Out(args.out) as fh:
        if args.format == "json":
            doc = {"schema": "hofq.approx/1", "fspec": report.fspec,
                   "model": report.model, "n": report.n_max,
                   "max_abs_error": report.max_abs_error,
                   "min_signed_error": report.min_signed_error,
                   "max_signed_error": report.max_signed_error}
            json.dump(doc, fh, separators=(",", ":"))
            fh.write("\n")
        elif args.format == "csv":
            print("n,error", file=fh)
            ns, errs = report.error_trace
            for n, e in zip(ns, errs):
                print(f"{n},{format(e, '.12g')}", file=fh)
        else:
            print(f"fspec:  {report.fspec}", file=fh)
            print(f"model:  {report.model}", file=fh)
            print(f"n:      {report.n_max}", file=fh)
            print(f"max |error|:  {report.max_abs_error:.6f}", file=fh)
            print(f"signed range: [{report.min_signed_error:.6f}, "
                  f"{report.max_signed_error:.6f}]", file=fh)
    return EXIT_OK


def _cmd_export(args) -> int:
    rows = analysis.export_figure_data(
        args.which, args.out, n_max=args.n, fspec=args.fspec, fmt=args.format,
        full_resolution=args.full_resolution, alpha=args.alpha, a=args.a,
        at=args.at, amount=args.amount)
    print(f"hofq: wrote {rows} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


_VARIANTS = {"hof": engine.hofstadter_spec, "tanny": engine.tanny_spec,
             "v": engine.v_variant_spec, "quasipoly": engine.quasipolynomial_spec}


def _cmd_hofstadter(args) -> int:
    spec = _VARIANTS[args.variant]()
    trace = engine.compute_two_term(spec, args.n)
    with _Out(args.out) as fh:
        if args.format == "text":
            q = trace.q_values
            print(f"variant: {spec.name}", file=fh)
            print(f"outcome: {trace.outcome}", file=fh)
            print(f"first terms (from index {trace.start}): "
                  + ", ".join(str(v) for v in q[:12]), file=fh)
            if len(q):
                print(f"max value: {int(q.max())}", file=fh)
        else:
            _emit_trace(args, trace, fh)
    if not trace.exists:
        print(f"hofq: sequence died at n = {trace.outcome.died_at} "
              f"(lookup index {trace.outcome.lookup_index})", file=sys.stderr)
        return EXIT_DIED
    return EXIT_OK


_COMMANDS = {
    "compute": _cmd_compute,
    "verify": _cmd_verify,
    "triangle": _cmd_triangle,
    "scan-selfsim": _cmd_scan,
    "perturb": _cmd_perturb,
    "approx": _cmd_approx,
    "export-figure": _cmd_export,
    "hofstadter": _cmd_hofstadter,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args, argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.cmd](args)
    except (InvalidFSpec, InvalidQ, CapExceeded, ValueError) as exc:
        print(f"hofq: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OverflowError as exc:
        print(f"hofq: overflow: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hofq: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
