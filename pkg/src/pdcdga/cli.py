"""Command-line surface.

Subcommands: run (full construction + report), verify (classification of a
single algebra file), cohomology (betti numbers and class products), and
corpus (emit a built-in instance).

Exit codes are a contract: 0 success, 1 parse or usage errors, 2 the input
fails its hypotheses (or is an invalid algebra), 3 an internal
verification failure, which would mean a bug, not a bad input.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Optional

from . import algfile, corpus, pipeline
from .algfile import ParseError
from .cdga import CDGA, InternalCheckError
from .cohomology import CohomologyRing, check_H_PD
from .duality import OrientedCDGA, derive_orientation, is_pd_cdga

PD_CLASS = "differential Poincare duality algebra"
CHAIN_CLASS = "valid, H PD, chain-level not PD"
H_CLASS = "valid, H not PD"
INVALID_CLASS = "not a valid CDGA"


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors on exit code 1 (2 means rejected input)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        sys.exit(1)


def _field_flag(s: str):
    if s in ("Q", "q"):
        return "Q"
    m = re.fullmatch(r"[Ff]?([0-9]+)", s)
    if m:
        return {"p": int(m.group(1))}
    raise argparse.ArgumentTypeError(
        "expected Q or a prime like 2 or F5, got %r" % s)


def _emit(text: str, output: Optional[str]):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_doc(path: str, args) -> tuple[CDGA, int, object]:
    """Load an algebra file, applying --field/--n/--max-degree overrides."""
    try:
        with open(path) as fh:
            doc = json.loads(fh.read())
    except OSError as e:
        raise ParseError("cannot read %s: %s" % (path, e)) from None
    except json.JSONDecodeError as e:
        raise ParseError("%s: not valid JSON: %s" % (path, e)) from None
    if getattr(args, "field", None) is not None:
        if not isinstance(doc, dict):
            raise ParseError("document: expected a JSON object")
        doc = dict(doc)
        doc["field"] = args.field
    if getattr(args, "n", None) is not None:
        if not isinstance(doc, dict):
            raise ParseError("document: expected a JSON object")
        if doc.get("n") != args.n:
            doc = dict(doc)
            doc["n"] = args.n
            # the stored orientation lives on the old top degree
            doc.pop("orientation", None)
    a, n, ori = algfile.algebra_from_doc(doc)
    bound = getattr(args, "max_degree", None)
    if bound is not None:
        if bound < n:
            raise ParseError("--max-degree %d is below n = %d" % (bound, n))
        if bound > a.trunc:
            raise ParseError("--max-degree %d exceeds the basis table"
                             " (top degree %d)" % (bound, a.trunc))
        if bound < a.trunc:
            a = a.truncate(bound)
    return a, n, ori


def _findings_lines(findings) -> list[str]:
    return [str(x) for x in findings]


def _render_run_text(rep: dict) -> str:
    lines = ["n = %d over %s" % (rep["n"], rep["field_name"])]
    lines.append("hypotheses: clean")
    lines.append("input dims:  %s" % rep["input_dims"])
    lines.append("betti 0..n:  %s" % rep["betti"])
    for st in rep["stages"]:
        gens = ", ".join("%s (deg %d)" % (nm, dg)
                         for nm, dg in st["generators"]) or "none"
        extra = ""
        if "half_acyclic" in st:
            extra = "; orphan cohomology zero through degree %d" % st["k"]
        lines.append("stage k=%d: l=%d, generators: %s%s"
                     % (st["k"], st["l"], gens, extra))
    if rep["mode"] == "formality":
        lines.append("formality shortcut (n <= 6): output is the"
                     " cohomology ring")
    lines.append("output dims: %s" % rep["output_dims"])
    lines.append("Poincare duality: %s"
                 % ("verified" if rep["pd"] is True else rep["pd"]))
    qi = rep["quasi_iso"]
    lines.append("composite quasi-isomorphism: %s"
                 % ("verified in degrees 0..%d" % rep["n"]
                    if qi is True else qi))
    fc = rep["fundamental_class_preserved"]
    if fc is not None:
        lines.append("fundamental class preserved: %s"
                     % ("yes" if fc is True else fc))
    return "\n".join(lines) + "\n"


def _failure_doc(kind: str, message: str, findings) -> dict:
    return {"kind": "pdcdga-report", "outcome": kind, "message": message,
            "findings": _findings_lines(findings)}


def _emit_failure(args, kind: str, message: str, findings) -> None:
    if args.format == "structured":
        _emit(json.dumps(_failure_doc(kind, message, findings), indent=2)
              + "\n", args.output)
    else:
        lines = ["%s: %s" % (kind, message)] + _findings_lines(findings)
        _emit("\n".join(lines) + "\n", args.output)


def cmd_run(args) -> int:
    try:
        a, n, ori = _read_doc(args.input, args)
    except ParseError as e:
        sys.stderr.write("parse error: %s\n" % e)
        return 1
    recheck = not args.skip_stage_checks
    try:
        if n <= 6:
            result = pipeline.formal_model(a, n)
        else:
            result = pipeline.run(a, n, eps=ori, recheck=recheck)
    except pipeline.HypothesisRejected as e:
        _emit_failure(args, "rejected", e.message, e.findings)
        return 2
    except InternalCheckError as e:
        _emit_failure(args, "internal-check-failed", str(e), e.findings)
        return 3

    rep = dict(result.report)
    rep["field_name"] = str(a.field)
    if recheck:
        vrep = pipeline.verify(result)
        rep["verify"] = vrep
        if not vrep["clean"]:
            _emit_failure(args, "internal-check-failed",
                          "independent re-verification failed",
                          vrep["findings"])
            return 3
    out = result.output
    rep["output"] = algfile.algebra_to_doc(out.algebra, n, out.orientation)
    if args.format == "structured":
        doc = {"kind": "pdcdga-report", "outcome": "ok"}
        doc.update(rep)
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
    else:
        _emit(_render_run_text(rep), args.output)
    return 0


def classify(a: CDGA, n: int, ori) -> tuple[str, list]:
    """The four-way verdict used by cmd_verify, with witness findings."""
    findings = a.validate()
    if findings:
        return INVALID_CLASS, findings
    h = CohomologyRing(a)
    findings = check_H_PD(h, n)
    if findings:
        return H_CLASS, findings
    if ori is None:
        ori = derive_orientation(a, n, h)
    findings = is_pd_cdga(OrientedCDGA(a, ori))
    if findings:
        return CHAIN_CLASS, findings
    return PD_CLASS, []


def cmd_verify(args) -> int:
    try:
        a, n, ori = _read_doc(args.input, args)
    except ParseError as e:
        sys.stderr.write("parse error: %s\n" % e)
        return 1
    verdict, findings = classify(a, n, ori)
    if args.format == "structured":
        doc = {"kind": "pdcdga-verify", "classification": verdict,
               "findings": _findings_lines(findings)}
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
    else:
        lines = [verdict] + _findings_lines(findings)
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_cohomology(args) -> int:
    try:
        a, n, _ = _read_doc(args.input, args)
    except ParseError as e:
        sys.stderr.write("parse error: %s\n" % e)
        return 1
    findings = a.validate()
    if findings:
        sys.stderr.write("not a valid CDGA:\n%s\n"
                         % "\n".join(_findings_lines(findings)))
        return 2
    h = CohomologyRing(a)
    ring = h.as_cdga()
    betti = list(h.betti[: n + 1])
    products = []
    for (i, s, j, t), vec in sorted(ring.mul.items()):
        if i == 0 or i + j > n:
            continue
        products.append({
            "deg_a": i, "a": ring.names[i][s],
            "deg_b": j, "b": ring.names[j][t],
            "value": [[ring.names[i + j][c], a.field.format(v)]
                      for c, v in sorted(vec.items())],
        })
    if args.format == "structured":
        doc = {"kind": "pdcdga-cohomology", "n": n, "betti": betti,
               "products": products}
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
    else:
        lines = ["betti 0..%d: %s" % (n, " ".join(map(str, betti)))]
        for pr in products:
            val = " + ".join("%s [%s]" % (c, nm) if c != "1" else "[%s]" % nm
                             for nm, c in pr["value"])
            lines.append("[%s] * [%s] = %s" % (pr["a"], pr["b"], val))
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_corpus(args) -> int:
    if args.list:
        lines = ["%-22s %s" % (inst.name, inst.description)
                 for inst in corpus.all_instances()]
        _emit("\n".join(lines) + "\n", args.output)
        return 0
    if not args.name:
        sys.stderr.write("error: give an instance name or --list\n")
        return 1
    try:
        inst = corpus.build(args.name)
    except KeyError:
        sys.stderr.write("unknown corpus instance %r; --list shows all\n"
                         % args.name)
        return 1
    _emit(algfile.dumps(inst.algebra, inst.n, inst.orientation), args.output)
    return 0


def _add_io_flags(p, max_degree=True, skip=False):
    p.add_argument("--field", type=_field_flag, default=None,
                   help="override the file's field (Q, 2, F5, ...)")
    p.add_argument("--n", type=int, default=None,
                   help="override the file's duality dimension")
    p.add_argument("--output", default=None, help="write here, not stdout")
    p.add_argument("--format", choices=("text", "structured"),
                   default="text", help="report style")
    if max_degree:
        p.add_argument("--max-degree", type=int, default=None,
                       help="truncate the input above this degree")
    if skip:
        p.add_argument("--skip-stage-checks", action="store_true",
                       help="skip the redundant end-to-end re-verification"
                       " (timing only; per-stage checks still run)")


def main(argv: Optional[list] = None) -> int:
    top = _Parser(prog="pdcdga",
                  description="build and verify differential Poincare"
                  " duality algebras")
    sub = top.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run the construction on an algebra file")
    p.add_argument("input")
    _add_io_flags(p, skip=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="classify an algebra file")
    p.add_argument("input")
    _add_io_flags(p)
    p.set_defaults(func=cmd_verify, skip_stage_checks=False)

    p = sub.add_parser("cohomology", help="betti numbers and class products")
    p.add_argument("input")
    _add_io_flags(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("corpus", help="emit a built-in instance")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true", help="list instances")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_corpus)

    args = top.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
