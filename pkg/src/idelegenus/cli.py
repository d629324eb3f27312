"""Command-line front end.

Every subcommand reads an input document (window + cover), runs one library
operation and prints either aligned tables or, with ``--json``, one JSON
report.  Exit status: 0 ok, 1 invalid input, 2 mathematical precondition
failed, 3 internal invariant violated or a verify check failed, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

from . import cohomology as coh
from . import genus, ideles, verify
from .documents import Document, dumps, load_document, load_operand
from .errors import InvariantViolation, ModelError, PreconditionError, ValidationError
from .link import splitting_table

EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------- output

def format_table(headers: list[str], rows: list[list]) -> str:
    cells = [[str(h) for h in headers]] + [[str(x) for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths)))
             for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(line.rstrip() for line in lines)


def splitting_rows(doc: Document) -> list[list]:
    rows = []
    for k, s in splitting_table(doc.window, doc.cover).items():
        rows.append([k, "yes" if doc.cover.is_branched(k) else "", s.mu_char, s.lambda_char,
                     s.c, s.d, s.e, s.c * s.d * s.e, f"({s.beta_lambda[0]},{s.beta_lambda[1]})"])
    return rows


SPLIT_HEADERS = ["knot", "branch", "mu", "lambda", "c", "d", "e", "cde", "beta_lambda"]


def deviation_warnings(doc: Document) -> list[str]:
    return [f"{k}: t = {s.t} != 0, the norm of a longitude is t*mu + d*lambda, not d*lambda"
            for k, s in splitting_table(doc.window, doc.cover).items() if s.diagonal_deviation]


def idele_rows(x: ideles.BaseIdele, knots) -> list[list]:
    return [[k, *x[k]] for k in knots if x[k] != (0, 0)]


def cover_idele_rows(a: ideles.CoverIdele, knots) -> list[list]:
    return [[k, j, l, m] for k in knots for j, (l, m) in enumerate(a[k] or ())]


class Outcome:
    """What a subcommand computed: JSON payload plus human-readable blocks."""

    def __init__(self, result, blocks=(), status="ok", exit_code=0):
        self.result = result
        self.blocks = list(blocks)
        self.status = status
        self.exit_code = exit_code


# ---------------------------------------------------------------- commands

def cmd_cover_info(doc, args):
    table = splitting_table(doc.window, doc.cover)
    return Outcome({"splitting": [s.to_json() for s in table.values()]},
                   [("splitting", format_table(SPLIT_HEADERS, splitting_rows(doc)))])


def cmd_idele_delta(doc, args):
    A = load_operand(doc, "chain", args.idele)
    x = ideles.delta(doc.window, A)
    return Outcome({"chain": A.to_json(doc.window), "delta": x.to_json(doc.window)},
                   [("delta(A)", format_table(["knot", "l", "m"], idele_rows(x, doc.window.knots)))])


def cmd_idele_decompose(doc, args):
    x = load_operand(doc, "idele", args.idele)
    A, u = ideles.decompose(doc.window, x)
    return Outcome({"idele": x.to_json(doc.window), "chain": A.to_json(doc.window),
                    "unit": u.to_json(doc.window)},
                   [("principal part (chain A)",
                     format_table(["knot", "coeff"], [[k, A[k]] for k in doc.window.knots if A[k]])),
                    ("unit part u", format_table(["knot", "l", "m"], idele_rows(u, doc.window.knots)))])


def cmd_idele_norm(doc, args):
    a = load_operand(doc, "cover_idele", args.idele)
    x = ideles.norm(doc.window, doc.cover, a)
    return Outcome({"cover_idele": a.to_json(doc.window), "norm": x.to_json(doc.window),
                    "artin_symbol": ideles.artin_symbol(doc.window, doc.cover, x)},
                   [("norm", format_table(["knot", "l", "m"], idele_rows(x, doc.window.knots)))])


def cmd_satz90(doc, args):
    a = load_operand(doc, "cover_idele", args.idele)
    b = coh.hilbert90_solve(doc.window, doc.cover, a)
    return Outcome({"cover_idele": a.to_json(doc.window), "b": b.to_json(doc.window)},
                   [("b with (tau - 1) b = a",
                     format_table(["knot", "fiber", "l", "m"], cover_idele_rows(b, doc.window.knots)))])


def cmd_tate(doc, args):
    t = coh.window_tate(doc.window, doc.cover)
    rows = [[k, str(h0), str(h1)] for k, (h0, h1) in t["per_knot"].items()]
    return Outcome({"per_knot": {k: {"h0": h0.to_json(), "h1": h1.to_json()}
                                 for k, (h0, h1) in t["per_knot"].items()},
                    "h0": t["h0"].to_json(), "h1": t["h1"].to_json()},
                   [("Tate cohomology", format_table(["knot", "H^0", "H^1"], rows)),
                    ("total", f"H^0 = {t['h0']}\nH^1 = {t['h1']}")])


def cmd_genus_number(doc, args):
    g = genus.genus_number(doc.cover)
    return Outcome({"genus_number": g, "branch_indices": list(genus.branch_indices(doc.cover))},
                   [("genus number", str(g))])


def cmd_genus_image(doc, args):
    image = genus.genus_image(doc.cover)
    galois = genus.galois_kernel(doc.cover)
    warnings = []
    if {v.entries for v in image} != {v.entries for v in galois}:
        warnings.append("branch values are not n/e_i; the kernel of sum a_i x_i differs from "
                        "the kernel of sum (n/e_i) x_i and is the set of realizable genera")
    out = Outcome({"branch_indices": list(genus.branch_indices(doc.cover)),
                   "image": [v.to_json() for v in image],
                   "galois_kernel": [v.to_json() for v in galois]},
                  [("ker sum (n/e_i) x_i", "\n".join(str(list(v.entries)) for v in image) or "[]"),
                   ("ker sum a_i x_i", "\n".join(str(list(v.entries)) for v in galois) or "[]")])
    out.warnings = warnings
    return out


def _cycles(doc: Document, indices):
    if not doc.cycles:
        raise ValidationError("the input document has no cycles")
    chosen = range(len(doc.cycles)) if not indices else indices
    out = []
    for i in chosen:
        if not 0 <= i < len(doc.cycles):
            raise ValidationError(f"cycle index {i} out of range (document has {len(doc.cycles)})")
        out.append((i, doc.cycles[i]))
    return out


def cmd_chi(doc, args):
    rows, result = [], []
    for i, z in _cycles(doc, args.cycle):
        v = genus.chi(doc.window, doc.cover, z)
        rows.append([i, list(v.entries)])
        result.append({"cycle": i, "chi": v.to_json()})
    return Outcome({"chi": result}, [("genus vectors", format_table(["cycle", "chi"], rows))])


def cmd_same_genus(doc, args):
    picked = _cycles(doc, args.cycle or [0, 1])
    if len(picked) != 2:
        raise ValidationError("same-genus needs exactly two cycles (use --cycle twice)")
    (i, z), (j, w) = picked
    same = genus.same_genus(doc.window, doc.cover, z, w)
    vz, vw = genus.chi(doc.window, doc.cover, z), genus.chi(doc.window, doc.cover, w)
    return Outcome({"cycles": [i, j], "chi": [vz.to_json(), vw.to_json()], "same_genus": same},
                   [("comparison", format_table(["cycle", "chi"],
                                                [[i, list(vz.entries)], [j, list(vw.entries)]])),
                    ("same genus", "yes" if same else "no")])


def _parse_target(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")] if text.strip() else []
    except ValueError:
        raise ValidationError(f"--target must be comma-separated integers, got {text!r}") from None


def cmd_realize(doc, args):
    target = _parse_target(args.target)
    try:
        r = genus.realize_class(doc.window, doc.cover, target, args.bound)
    except genus.SearchExhausted as exc:
        exc.details["generated"] = [list(v) for v in sorted(exc.generated)]
        raise
    return Outcome({"target": target, "realization": r.to_json()},
                   [("witness cycle", format_table(["knot", "component", "coeff"],
                                                   [list(t) for t in r.cycle.terms])),
                    ("synthetic knots", format_table(["knot", "linking"],
                                                     [[k, list(v)] for k, v in r.synthetic]))])


COMMANDS: dict[str, tuple[Callable, str]] = {
    "cover-info": (cmd_cover_info, "splitting table (c, d, e) of every window knot"),
    "idele-delta": (cmd_idele_delta, "principal idele delta(A) of a 2-chain A"),
    "idele-decompose": (cmd_idele_decompose, "split an idele as delta(A) + unit"),
    "idele-norm": (cmd_idele_norm, "norm of a cover idele to the base"),
    "satz90": (cmd_satz90, "solve (tau - 1) b = a for a norm-zero cover idele"),
    "tate": (cmd_tate, "Tate cohomology of the cover idele module"),
    "genus-number": (cmd_genus_number, "prod e_i / n"),
    "genus-image": (cmd_genus_image, "enumerate the genus group"),
    "chi": (cmd_chi, "genus vector of cycles in the document"),
    "same-genus": (cmd_same_genus, "compare the genera of two cycles"),
    "realize": (cmd_realize, "find a cycle with a given genus vector"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="idelegenus",
                     description="Idele class and genus computations for branched cyclic covers "
                                 "of a finite window of an infinite link.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("document", help="input JSON with 'window' and 'cover'")
        p.add_argument("--json", action="store_true", help="print a JSON report")
        if name in ("idele-delta", "idele-decompose", "idele-norm", "satz90"):
            p.add_argument("--idele", metavar="PATH", help="JSON file holding the operand")
        if name in ("chi", "same-genus"):
            p.add_argument("--cycle", metavar="INDEX", type=int, action="append",
                           help="cycle index in the document (repeatable)")
        if name == "realize":
            p.add_argument("--target", required=True, metavar="X1,X2,...",
                           help="genus vector, one residue per branch knot")
            p.add_argument("--bound", type=int, default=None,
                           help="largest synthetic linking number (default n - 1)")
    v = sub.add_parser("verify", help="run the invariant battery",
                       description="run the invariant battery")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-n", type=int, default=8)
    v.add_argument("--max-knots", type=int, default=4)
    v.add_argument("--json", action="store_true", help="print a JSON report")
    return parser


# ---------------------------------------------------------------- driver

def _emit_error(exc: ModelError, report: dict, as_json: bool, out, err):
    if isinstance(exc, ValidationError):
        report["status"] = "invalid-input"
    elif isinstance(exc, PreconditionError):
        report["status"] = "precondition-failed"
    else:
        report["status"] = "invariant-violation"
    error = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ValidationError) and exc.violations:
        error["violations"] = [v.to_json() for v in exc.violations]
    if isinstance(exc, PreconditionError) and exc.details:
        error["details"] = exc.details
    report["error"] = error
    report["exit_code"] = exc.exit_code
    if as_json:
        out.write(dumps(report))
    else:
        err.write(f"error: {exc}\n")
        for v in getattr(exc, "violations", []):
            err.write(f"  - {v.kind}: {v.message}\n")
        for key, value in getattr(exc, "details", {}).items():
            err.write(f"  {key}: {value}\n")


def _run_verify(args, out) -> int:
    if args.max_n < 1 or args.max_knots < 1:
        raise ValidationError("--max-n and --max-knots must be at least 1")
    results = verify.run_battery(args.seed, args.max_n, args.max_knots)
    ok = all(r.passed for r in results)
    report = {"command": "verify",
              "input": {"seed": args.seed, "max_n": args.max_n, "max_knots": args.max_knots},
              "result": {"checks": [r.to_json() for r in results]},
              "warnings": [], "status": "ok" if ok else "failed", "exit_code": 0 if ok else 3}
    if args.json:
        out.write(dumps(report))
    else:
        rows = [[r.name, "PASS" if r.passed else "FAIL", r.instances, r.failures] for r in results]
        out.write(format_table(["check", "status", "instances", "failures"], rows) + "\n")
        for r in results:
            if not r.passed:
                out.write(f"\n{r.name}: {r.detail}\n  reproducer: {json.dumps(r.reproducer)}\n")
    return report["exit_code"]


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else EXIT_USAGE

    as_json = args.json
    report: dict = {"command": args.command}
    try:
        if args.command == "verify":
            return _run_verify(args, out)
        doc = load_document(args.document)
        report["input"] = doc.to_json()
        report["splitting"] = [s.to_json() for s in splitting_table(doc.window, doc.cover).values()]
        warnings = deviation_warnings(doc)
        outcome = COMMANDS[args.command][0](doc, args)
        warnings += getattr(outcome, "warnings", [])
    except ModelError as exc:
        _emit_error(exc, report, as_json, out, err)
        return exc.exit_code
    except Exception as exc:  # a bug, reported as an invariant violation
        wrapped = InvariantViolation(f"internal error: {type(exc).__name__}: {exc}")
        _emit_error(wrapped, report, as_json, out, err)
        return wrapped.exit_code

    report.update(result=outcome.result, warnings=warnings, status=outcome.status,
                  exit_code=outcome.exit_code)
    if as_json:
        out.write(dumps(report))
    else:
        blocks = [("cover", f"n = {doc.cover.n}, branch = "
                            + (", ".join(f"{k}:{a}" for k, a in doc.cover.branch) or "none"))]
        if args.command != "cover-info":
            blocks.append(("splitting", format_table(SPLIT_HEADERS, splitting_rows(doc))))
        blocks += outcome.blocks
        for title, body in blocks:
            out.write(f"{title}\n{body}\n\n")
        for w in warnings:
            out.write(f"warning: {w}\n")
    return outcome.exit_code


def main(argv: list[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
