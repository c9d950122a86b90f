"""Command-line front end.

Every subcommand builds a :class:`~biprism.report.Report`.  ``--format text``
prints a human-readable rendering, ``--format structured`` prints the report
as JSON.  Exit status: 0 when no entry failed, 1 when some check failed, 2 on
usage or input errors.

File arguments that do not exist relative to the working directory are looked
up among the bundled data files, so ``--scheme prop1_t.scm`` works anywhere.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from importlib import resources

from . import __version__
from .forcing import (
    ForcingError, all_conditions, check_pi_properties, extend_to_separate, parse_condition,
    random_condition, render_condition, separates,
)
from .interpretations import (
    SchemeError, SchemeValidationError, apply_scheme, classify, compose, dump_scheme, load_scheme,
    translate_formula, validate_scheme_on,
)
from .logic import (
    FormulaError, Signature, depth, free_vars, load_theory, parse_formula, parse_signature,
    quantifier_depth, render_formula,
)
from .prover import NotDirectError, ProverBounds, check_direct_defeq
from .report import Report
from .structures import (
    CapExceeded, StructureError, automorphism_cap, automorphisms, definable_singletons,
    dump_structure, empty_structure, exists_connected_asymmetric_invariant, load_structure, orbits,
)
from .toy import SIGNATURES, nondefinability_check, prop1_bundle, roundtrip_check, t_sizes

log = logging.getLogger("biprism")

INPUT_ERRORS = (FormulaError, StructureError, SchemeError, ForcingError, CapExceeded, OSError,
                json.JSONDecodeError)

DEFAULT_PROBES = ("forall x. x = x", "exists>=2 x. x = x", "exists>=3 x. x = x",
                  "forall x. exists y. !(x = y)")
DEFAULT_POOL = ("x = y", "!(x = y)", "exists y. !(x = y)", "x = c", "forall y. x = y | !(x = y)")


class UsageError(Exception):
    pass


def data_path(name: str) -> str:
    """``name`` itself if it exists, else the bundled data file of that name."""
    if os.path.exists(name):
        return name
    bundled = resources.files("biprism") / "data" / name
    if bundled.is_file():
        return str(bundled)
    raise FileNotFoundError(f"no such file: {name}")


def _signature(arg: str | None) -> Signature | None:
    if arg is None:
        return None
    if arg in SIGNATURES:
        return SIGNATURES[arg]
    with open(data_path(arg)) as fh:
        return parse_signature(fh.read())


def _scheme(path: str):
    return load_scheme(data_path(path), SIGNATURES)


def _structure(path: str):
    return load_structure(data_path(path))


def _need(args, *names):
    for name in names:
        if getattr(args, name) in (None, []):
            raise UsageError(f"{args.command} needs --{name.replace('_', '-')}")


def _cap(args) -> int:
    return args.cap if args.cap is not None else automorphism_cap()


# --------------------------------------------------------------------------
# subcommands; each returns (report, text shown in text mode)


def cmd_parse(args):
    _need(args, "formula")
    f = parse_formula(args.formula, _signature(args.signature))
    text = render_formula(f)
    report = Report("parse")
    report.add("formula", True, text, witness={
        "free": sorted(free_vars(f)), "depth": depth(f), "quantifier_depth": quantifier_depth(f),
    })
    return report, text


def cmd_translate(args):
    _need(args, "scheme", "formula")
    sch = _scheme(args.scheme[0])
    f = parse_formula(args.formula, sch.source)
    out = render_formula(translate_formula(sch, f))
    report = Report(f"translate under {sch.name}")
    report.add(render_formula(f), True, out)
    return report, out


def _apply_text(res) -> str:
    classes = [[list(t) for t in cls] for cls in res.classes]
    return dump_structure(res.result) + "\nclasses: " + json.dumps(classes)


def cmd_apply(args):
    _need(args, "scheme", "structure")
    sch, A = _scheme(args.scheme[0]), _structure(args.structure)
    report = validate_scheme_on(sch, A)
    if not report.passed:
        return report, report.render_text()
    res = apply_scheme(sch, A)
    report.add("result", True, f"structure of size {res.result.size}",
               witness={"structure": json.loads(dump_structure(res.result)),
                        "representatives": [list(t) for t in res.rep]})
    return report, report.render_text() + "\n" + _apply_text(res)


def cmd_compose(args):
    _need(args, "scheme")
    if len(args.scheme) != 2:
        raise UsageError("compose needs --scheme OUTER --scheme INNER")
    outer, inner = (_scheme(p) for p in args.scheme)
    sch = compose(outer, inner)
    text = dump_scheme(sch, SIGNATURES)
    report = Report(f"compose({outer.name}, {inner.name})")
    report.add("scheme", True, f"dimension {sch.dim}", witness=json.loads(text))
    if args.structure:
        A = _structure(args.structure)
        sub = validate_scheme_on(sch, A)
        report.extend(sub, prefix="on structure: ")
        if sub.passed:
            text += "\n" + _apply_text(apply_scheme(sch, A))
    return report, text if report.passed else report.render_text()


def cmd_validate(args):
    _need(args, "scheme", "structure")
    report = validate_scheme_on(_scheme(args.scheme[0]), _structure(args.structure))
    return report, report.render_text()


def cmd_roundtrip(args):
    cap = _cap(args)
    sizes = [args.n] if args.n is not None else range(1, (args.max_size or 6) + 1)
    report = Report("round trips")
    for n in sizes:
        report.extend(roundtrip_check(n, cap), prefix=f"n={n}: ")
    return report, report.render_text()


def cmd_orbits(args):
    _need(args, "structure")
    A = _structure(args.structure)
    cap = _cap(args)
    arity = args.k if args.k is not None else 1
    orbs = orbits(A, arity, cap)
    singles = sorted(definable_singletons(A, cap))
    report = Report(f"orbits of arity {arity}")
    report.add("automorphisms", True, f"{len(automorphisms(A, cap))} automorphisms")
    lines = []
    for o in orbs:
        members = sorted(o)
        if arity == 1:
            members = [t[0] if isinstance(t, tuple) else t for t in members]
        report.add(f"orbit of size {len(o)}", True, witness=members)
        lines.append(f"orbit (size {len(o)}): {json.dumps(members)}")
    report.add("definable singletons", True, ", ".join(map(str, singles)) or "none", witness=singles)
    lines.append(f"{len(orbs)} orbit(s); definable singletons: {', '.join(map(str, singles)) or 'none'}")
    return report, "\n".join(lines)


def cmd_invariant_scan(args):
    cap = _cap(args)
    if args.structure:
        targets = [(args.structure, _structure(args.structure))]
    else:
        sizes = [args.n] if args.n is not None else range(2, (args.max_size or 5) + 1)
        targets = [(f"empty structure of size {n}", empty_structure(n)) for n in sizes]
    report = Report("connected asymmetric invariant relations")
    for label, A in targets:
        found = exists_connected_asymmetric_invariant(A, cap)
        report.add(f"{label}: none exists", found is None,
                   witness=None if found is None else sorted(found))
    return report, report.render_text()


def cmd_defeq(args):
    _need(args, "scheme", "theory")
    if len(args.scheme) != 2 or len(args.theory) != 2:
        raise UsageError("defeq check needs --scheme T0 --scheme T1 and --theory T0 --theory T1")
    t0, t1 = (_scheme(p) for p in args.scheme)
    T0, T1 = (load_theory(data_path(p), SIGNATURES) for p in args.theory)
    bounds = ProverBounds(args.depth or 32, args.budget or 400, args.max_size or 4)

    both = Signature("", {**dict(T0.signature.relations), **dict(T1.signature.relations)},
                     T0.signature.constants | T1.signature.constants)

    def parsed(texts):
        # each check keeps only the formulas over its own side's signature
        return [parse_formula(text, both) for text in texts]

    probes = parsed(args.probe or DEFAULT_PROBES)
    pool = parsed(args.pool or DEFAULT_POOL)
    try:
        res = check_direct_defeq(t0, t1, T0, T1, probes, pool, bounds, args.schema_bound)
    except NotDirectError as exc:
        raise UsageError(str(exc)) from None
    report = res.to_report()
    return report, report.render_text()


def cmd_pi_check(args):
    k = args.k or 1
    if args.exhaustive:
        samples = list(all_conditions(args.max_entries or 2, k, args.j_bound))
        label = f"exhaustive, <= {args.max_entries or 2} entries"
    else:
        rng = random.Random(args.seed)
        samples = [random_condition(rng, args.max_entries or 4, k, args.j_bound)
                   for _ in range(args.samples)]
        label = f"{args.samples} random samples, seed {args.seed}"
    report = check_pi_properties(k, samples)
    report.title += f" ({label})"
    return report, report.render_text()


def _column(text: str) -> tuple:
    try:
        e, i = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"column must be 'e,i', got {text!r}") from None
    return (e, i)


def cmd_separate(args):
    _need(args, "a", "b")
    p = parse_condition(args.condition or "")
    a, b = _column(args.a), _column(args.b)
    q = extend_to_separate(p, a, b)
    j = separates(q, a, b)
    report = Report("separation")
    report.add(f"extends {render_condition(p)}", True, render_condition(q),
               witness={"condition": render_condition(q), "j": j})
    return report, render_condition(q)


def cmd_demo(args):
    if args.example != "prop1":
        raise UsageError(f"unknown demo {args.example!r}")
    b = prop1_bundle()
    report = Report("toy theories T and S")
    lines = []
    for sch in (b.scheme_t, b.scheme_s):
        flags = classify(sch)
        report.add(f"scheme {sch.name}", True, str(flags))
        lines.append(f"{sch.name}: {sch.source.name} -> {sch.target.name}, dim {sch.dim}; {flags}")
    sizes = t_sizes(args.n or 6)
    for n, size in sizes.items():
        if args.n and n != args.n:
            continue
        report.add(f"|t(A_{n})| = {n + 1}", size == n + 1, f"got {size}")
    if args.roundtrip:
        ns = [args.n] if args.n else range(1, 7)
        for n in ns:
            report.extend(roundtrip_check(n, _cap(args)), prefix=f"n={n}: ")
            if n >= 2:
                report.extend(nondefinability_check(n, _cap(args)), prefix=f"n={n}: ")
    return report, "\n".join(lines) + "\n" + report.render_text()


COMMANDS = {
    "parse": cmd_parse, "translate": cmd_translate, "apply": cmd_apply, "compose": cmd_compose,
    "validate": cmd_validate, "roundtrip": cmd_roundtrip, "orbits": cmd_orbits,
    "invariant-scan": cmd_invariant_scan,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--cap", type=int, help="automorphism size cap (default $BIPRISM_CAP or 8)")
    common.add_argument("--scheme", action="append", help="scheme file (repeat for two schemes)")
    common.add_argument("--structure", help="structure file")
    common.add_argument("--formula")
    common.add_argument("--signature", help="signature name (L_T, L_S) or signature file")
    common.add_argument("--n", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--max-size", type=int)
    common.add_argument("--depth", type=int, help="tableau depth bound")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="biprism", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "parse": "parse and pretty-print a formula",
        "translate": "translate a formula along a scheme",
        "apply": "apply a scheme's model functor to a structure",
        "compose": "compose two schemes (outer first, then inner)",
        "validate": "check a scheme's preconditions on a structure",
        "roundtrip": "check the toy round-trip isomorphisms",
        "orbits": "automorphism orbits and definable singletons",
        "invariant-scan": "look for invariant connected asymmetric relations",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)

    d = sub.add_parser("defeq", help="bounded definitional-equivalence checks")
    dsub = d.add_subparsers(dest="action", required=True)
    dc = dsub.add_parser("check", parents=[common])
    dc.add_argument("--theory", action="append", help="theory file (T0 then T1)")
    dc.add_argument("--probe", action="append", help="probe sentence (repeatable)")
    dc.add_argument("--pool", action="append", help="pool formula (repeatable)")
    dc.add_argument("--budget", type=int, help="instantiation budget")
    dc.add_argument("--schema-bound", type=int, default=5)

    f = sub.add_parser("forcing", help="Cohen-pair poset combinatorics")
    fsub = f.add_subparsers(dest="action", required=True)
    pc = fsub.add_parser("pi-check", parents=[common])
    pc.add_argument("--exhaustive", action="store_true")
    pc.add_argument("--max-entries", type=int)
    pc.add_argument("--samples", type=int, default=10_000)
    pc.add_argument("--j-bound", type=int, default=3)
    fs = fsub.add_parser("separate", parents=[common])
    fs.add_argument("--condition", help="entries 'e,i,j=v' separated by spaces")
    fs.add_argument("--a", help="first column 'e,i'")
    fs.add_argument("--b", help="second column 'e,i'")

    dm = sub.add_parser("demo", parents=[common], help="worked examples")
    dm.add_argument("example", choices=("prop1",))
    dm.add_argument("--roundtrip", action="store_true")
    return p


def _dispatch(args):
    if args.command == "defeq":
        return cmd_defeq(args)
    if args.command == "forcing":
        return cmd_pi_check(args) if args.action == "pi-check" else cmd_separate(args)
    if args.command == "demo":
        return cmd_demo(args)
    return COMMANDS[args.command](args)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        report, text = _dispatch(args)
    except UsageError as exc:
        print(f"biprism: {exc}", file=sys.stderr)
        return 2
    except SchemeValidationError as exc:
        report, text = exc.report, exc.report.render_text()
    except INPUT_ERRORS as exc:
        print(f"biprism: {exc}", file=sys.stderr)
        return 2
    print(report.to_json() if args.format == "structured" else text)
    return 1 if report.status == "fail" else 0


if __name__ == "__main__":
    sys.exit(main())
