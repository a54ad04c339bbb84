"""Command line front end: ``quadmono present|table|builtin|verify|invariants``.

Exit codes: 0 success, 1 verification mismatch, 2 usage, 3 parse error,
4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .invariants import (
    DEFAULT_CAP,
    CapExceeded,
    bigness_certificate,
    compare_candidates,
    fingerprint,
    free_abelian_times_z2,
    free_times_z2,
    parse_battery,
)
from .monodromy import (
    BUILTIN_CASES,
    TableError,
    TableParseError,
    builtin_table,
    formula_relations,
    full_twist_check,
    parse_table,
    table_to_json,
    table_to_text,
    target_presentation,
)
from .presentation import (
    Presentation,
    PresentationError,
    canonical_labels,
    from_json,
    parse_presentation,
    render_gap,
    render_text,
    simplify,
    to_json,
)
from .vankampen import present
from .words import Word

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3, 4
BATTERY_ENV = "QUADMONO_BATTERY"


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ helpers

def _emit(p: Presentation, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(to_json(p), sort_keys=True, indent=2)
    notes = []
    if p.meta.get("reconstructed"):
        notes.append("# reconstructed table or relation schema")
    if p.meta.get("simplify_capped"):
        notes.append("# simplification stopped at a cap")
    body = render_gap(p) if fmt == "gap" else render_text(p)
    return "\n".join(notes + [body])


def _finish(p: Presentation, do_simplify: bool) -> Presentation:
    return canonical_labels(simplify(p)) if do_simplify else p


def _battery(args):
    return parse_battery(args.battery or os.environ.get(BATTERY_ENV))


def braid_table_for(family: str, n: int):
    case = f"{family.upper()}{n}"
    if case not in BUILTIN_CASES:
        raise UsageError(f"no built-in braid table for {case}; available: {', '.join(BUILTIN_CASES)}")
    return builtin_table(case)


def _presentation(family: str, n: int, source: str) -> Presentation:
    if n < 1:
        raise UsageError("n must be at least 1")
    if source == "formula":
        return formula_relations(family, n)
    return present(braid_table_for(family, n))


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load_presentation(text: str) -> Presentation:
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            return from_json(json.loads(stripped))
        except (ValueError, KeyError, TypeError) as exc:
            raise PresentationError(f"bad presentation JSON: {exc}") from None
    lines = [ln for ln in stripped.splitlines() if not ln.lstrip().startswith("#")]
    return parse_presentation(" ".join(lines))


# ----------------------------------------------------------------- commands

def cmd_present(args) -> int:
    p = _presentation(args.family, args.n, args.source)
    print(_emit(_finish(p, args.simplify), args.format))
    return EXIT_OK


def cmd_table(args) -> int:
    table = parse_table(_read(args.file))
    if not full_twist_check(table, seed=args.seed):
        print("# warning: the factors do not multiply to the full twist", file=sys.stderr)
    print(_emit(_finish(present(table), args.simplify), args.format))
    return EXIT_OK


def cmd_builtin(args) -> int:
    table = builtin_table(args.case)
    if args.format == "json":
        print(json.dumps(table_to_json(table), sort_keys=True, indent=2))
    else:
        print(table_to_text(table), end="")
    return EXIT_OK


@dataclass
class Report:
    lines: list[str] = field(default_factory=list)
    failed: bool = False

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.failed |= not ok
        self.lines.append(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))

    def info(self, text: str) -> None:
        self.lines.append(f"INFO {text}")


def run_verify(family: str, n: int, battery, cap: int, seed: int = 0) -> Report:
    """Formula and braid pipelines against the closed-form presentation."""
    fam = family.upper()
    rep = Report()
    target = target_presentation(fam, n)
    ref = fingerprint(target, battery, cap)
    rep.info(f"target {render_text(target)}")
    rep.info(f"target fingerprint {ref}")

    formula = formula_relations(fam, n)
    simp = canonical_labels(simplify(formula))
    tag = " (reconstructed schema)" if formula.meta.get("reconstructed") else ""
    rep.info(f"formula{tag} simplifies to {render_text(simp)}")
    fp = fingerprint(simp, battery, cap)
    rep.check("formula fingerprint", fp.consistent_with(ref), "; ".join(fp.diff(ref)) or "consistent")

    case = f"{fam}{n}"
    if case in BUILTIN_CASES:
        table = builtin_table(case)
        tag = " (reconstructed table)" if table.reconstructed else ""
        twist = full_twist_check(table, seed=seed)
        rep.info(f"braid table {case}{tag}: product is the full twist: {'yes' if twist else 'no'}")
        braid = canonical_labels(simplify(present(table)))
        rep.info(f"braid simplifies to {render_text(braid)}")
        fb = fingerprint(braid, battery, cap)
        rep.check("braid fingerprint", fb.consistent_with(ref), "; ".join(fb.diff(ref)) or "consistent")
    else:
        rep.info(f"no built-in braid table for {case}")

    if n >= 2:
        cert = bigness_certificate(target, ("a1", "a2"), battery, cap)
        rep.check("bigness certificate (a1, a2)", cert.ok,
                  cert.reason or f"quotient {render_text(cert.quotient)} consistent with Z * Z2")
    else:
        z2 = Presentation(("a",), (Word.gen(1, 2),))
        fz = fingerprint(z2, battery, cap)
        rep.check("n = 1 gives Z2", ref.consistent_with(fz), "; ".join(ref.diff(fz)) or "consistent")

    if fam == "A" and n >= 3:
        res = compare_candidates(target, {
            f"F{n - 1} * Z2": free_times_z2(n - 1),
            f"Z^{n - 1} * Z2": free_abelian_times_z2(n - 1),
        }, battery, cap)
        for name, (ok, diff) in res.items():
            rep.info(f"candidate {name}: {'consistent' if ok else 'distinguished (' + '; '.join(diff) + ')'}")
    return rep


def cmd_verify(args) -> int:
    rep = run_verify(args.family, args.n, _battery(args), args.cap, args.seed)
    print(f"verify family {args.family.upper()} n={args.n}")
    print("\n".join(rep.lines))
    print("RESULT " + ("FAIL" if rep.failed else "PASS"))
    return EXIT_MISMATCH if rep.failed else EXIT_OK


def cmd_invariants(args) -> int:
    p = _load_presentation(_read(args.file))
    fp = fingerprint(p, _battery(args), args.cap)
    if args.format == "json":
        print(json.dumps(fp.to_json(), sort_keys=True, indent=2))
    else:
        print(f"abelianization: {fp.abelian}")
        for name, count in fp.counts:
            print(f"homs to {name}: {count}")
    return EXIT_OK


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--battery", help="comma separated groups (s3,s4,a4,d4,zN or a .json table)")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap per group")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised checks")

    ap = argparse.ArgumentParser(prog="quadmono", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def fam(p):
        p.add_argument("--family", required=True, type=str.upper, choices=("A", "B", "C"))
        p.add_argument("--n", required=True, type=int)

    pr = sub.add_parser("present", parents=[common], help="presentation of a family member")
    fam(pr)
    pr.add_argument("--source", choices=("formula", "braid"), default="formula")
    pr.add_argument("--simplify", action=argparse.BooleanOptionalAction, default=True)
    pr.add_argument("--format", choices=("text", "json", "gap"), default="text")
    pr.set_defaults(func=cmd_present)

    tb = sub.add_parser("table", parents=[common], help="presentation from a table file")
    tb.add_argument("file", help="table file, or - for stdin")
    tb.add_argument("--simplify", action=argparse.BooleanOptionalAction, default=True)
    tb.add_argument("--format", choices=("text", "json", "gap"), default="text")
    tb.set_defaults(func=cmd_table)

    bi = sub.add_parser("builtin", parents=[common], help="print a built-in table")
    bi.add_argument("case", type=str.upper, choices=BUILTIN_CASES)
    bi.add_argument("--format", choices=("text", "json"), default="text")
    bi.set_defaults(func=cmd_builtin)

    ve = sub.add_parser("verify", parents=[common], help="check a family member end to end")
    fam(ve)
    ve.set_defaults(func=cmd_verify)

    iv = sub.add_parser("invariants", parents=[common], help="fingerprint of a presentation file")
    iv.add_argument("file", help="presentation as text '< a, b | ... >' or JSON, or - for stdin")
    iv.add_argument("--format", choices=("text", "json"), default="text")
    iv.set_defaults(func=cmd_invariants)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"quadmono: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TableParseError as exc:
        print(f"quadmono: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (PresentationError, TableError) as exc:
        print(f"quadmono: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"quadmono: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (OSError, ValueError) as exc:
        print(f"quadmono: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
