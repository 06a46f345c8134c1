"""Command-line entry points.

Subcommands: betti, audit, template, goodprimes, splitcheck, examples,
resolve-k.  Exit codes follow the audit convention: 0 when everything
checked is verified, 2 when a violation (or unusable input) was found,
3 when results are only truncated observations.
"""

from __future__ import annotations

import argparse
import sys

from .audits import CHECK_IDS, audit_algebra
from .corpus import (
    apolarity_gorenstein,
    builtin_corpus,
    complete_intersection_quadrics,
    edge_ideal,
    generic_quadrics,
    plucker_presentation,
    segre_presentation,
    veronese_presentation,
)
from .fields import is_prime
from .goodprimes import exceptional_prime, is_good
from .ideal_io import IdealFormatError, document_of_entry, load_ideal, serialize_ideal
from .koszul import KoszulComplex, koszul_of_algebra
from .products import splitting_report
from .resolution import resolve_residue_field
from .rings import LinearFormError, QuotientAlgebra, module_of_algebra
from .templates import render_template


class CliError(Exception):
    """Bad input; message goes to stderr, exit code 2."""


def _load_algebra(path):
    try:
        doc = load_ideal(path)
    except FileNotFoundError:
        raise CliError(f"{path}: no such file")
    except IdealFormatError as err:
        raise CliError(f"{path}: {err}")
    try:
        return doc, doc.algebra()
    except (LinearFormError, ValueError) as err:
        raise CliError(f"{path}: {err}")


# -- subcommands -------------------------------------------------------------


def _cmd_betti(args) -> int:
    doc, algebra = _load_algebra(args.ideal)
    j_max = args.jmax if args.jmax is not None else 2 * algebra.e
    if args.module:
        try:
            mdoc = load_ideal(args.module)
        except (FileNotFoundError, IdealFormatError) as err:
            raise CliError(f"{args.module}: {err}")
        if mdoc.field.characteristic != doc.field.characteristic:
            raise CliError("module file uses a different coefficient field")
        if mdoc.variables != doc.variables:
            raise CliError("module file uses different variables")
        tags = doc.variable_tags if doc.variable_tags == mdoc.variable_tags else None
        try:
            quotient = QuotientAlgebra(
                doc.field,
                doc.variables,
                doc.generators + mdoc.generators,
                variable_tags=tags,
            )
        except (LinearFormError, ValueError) as err:
            raise CliError(f"combined presentation: {err}")
        module = module_of_algebra(quotient, j_max)
        module.label = mdoc.name or "M"
        kc = KoszulComplex(module, i_max=args.imax, j_max=j_max)
    else:
        kc = koszul_of_algebra(algebra, i_max=args.imax, j_max=j_max)
    table = kc.betti_table(label=doc.name)
    sys.stdout.write(table.to_tsv())
    bad = [i for i, ok in enumerate(table.certified_columns) if not ok]
    if bad:
        sys.stdout.write(f"uncertified columns (window too small): {bad}\n")
        return 3
    return 0


def _cmd_audit(args) -> int:
    doc, algebra = _load_algebra(args.ideal)
    report = audit_algebra(
        algebra,
        i_max=args.imax,
        j_max=args.jmax,
        checks=args.checks,
        label=doc.name,
    )
    sys.stdout.write(report.summary())
    return report.exit_code()


def _cmd_template(args) -> int:
    if args.q < 2:
        raise CliError("--q must be at least 2")
    if args.cols < 1 or args.rows < 1:
        raise CliError("--cols and --rows must be positive")
    sys.stdout.write(render_template(args.q, args.cols - 1, args.rows - 1))
    return 0


def _cmd_goodprimes(args) -> int:
    n = args.n
    if n < 0:
        raise CliError("N must be nonnegative")
    lines = [f"characteristics good for binomials C({n}, i):"]
    chars = [0] + [p for p in range(2, n + 2) if is_prime(p)]
    for p in chars:
        v = is_good(n, p)
        extra = f" (n+1 = {p}^{v.s} * {v.u})" if v.case == "exceptional" else ""
        lines.append(f"  p={p}\t{'good' if v.good else 'bad'}\t{v.case}{extra}")
    exc = exceptional_prime(n)
    lines.append(f"exceptional prime <= n: {exc if exc is not None else 'none'}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _cmd_splitcheck(args) -> int:
    doc, algebra = _load_algebra(args.ideal)
    a, b = args.a, args.b
    if a < 1 or b < 1:
        raise CliError("--a and --b must be at least 1")
    if a + b > algebra.e:
        raise CliError(f"a + b = {a + b} exceeds the variable count {algebra.e}")
    j_max = args.jmax if args.jmax is not None else 2 * (a + b)
    kc = koszul_of_algebra(algebra, i_max=a + b, j_max=j_max)
    failed = 0
    checked = 0
    for j in range(a + b, j_max + 1):
        if kc.strand_dim(a + b, j) == 0:
            continue
        rep = splitting_report(kc, a, b, j)
        sys.stdout.write(rep.line() + "\n")
        checked += 1
        if rep.binomial_invertible and not rep.split_verified:
            failed += 1
    if not checked:
        sys.stdout.write("no nonzero strands in the window\n")
        return 3
    return 2 if failed else 0


_FAMILIES = {
    "veronese": lambda ps: veronese_presentation(int(ps[0]), int(ps[1])),
    "segre": lambda ps: segre_presentation(tuple(int(x) for x in ps)),
    "plucker": lambda ps: plucker_presentation(int(ps[0])),
    "ci": lambda ps: complete_intersection_quadrics(int(ps[0]), int(ps[1])),
    "generic": lambda ps: generic_quadrics(int(ps[0]), int(ps[1])),
    "gorenstein": lambda ps: apolarity_gorenstein(),
}


def _resolve_family(name: str):
    for entry in builtin_corpus():
        if entry.name == name:
            return entry
    if ":" in name:
        family, _, rest = name.partition(":")
        if family == "edge":
            nstr, _, espec = rest.partition(":")
            edges = []
            if espec:
                for chunk in espec.split(","):
                    u, _, v = chunk.partition("-")
                    edges.append((int(u), int(v)))
            return edge_ideal(int(nstr), edges)
        if family in _FAMILIES:
            params = [x for x in rest.split(",") if x]
            try:
                return _FAMILIES[family](params)
            except (IndexError, ValueError) as err:
                raise CliError(f"bad parameters for family {family}: {err}")
    known = ", ".join(sorted(e.name for e in builtin_corpus()))
    raise CliError(
        f"unknown family {name!r}; builtin names: {known}; parametric: "
        "veronese:q,n segre:d1,d2,... plucker:n ci:c,e generic:e,c "
        "gorenstein edge:n:u-v,..."
    )


def _cmd_examples(args) -> int:
    if args.action != "gen":
        raise CliError("only 'examples gen <family>' is supported")
    try:
        entry = _resolve_family(args.family)
    except (ValueError, TypeError) as err:
        if isinstance(err, CliError):
            raise
        raise CliError(str(err))
    if args.seed is not None:
        if entry.remake is None:
            raise CliError(f"family {entry.name} is deterministic; --seed not accepted")
        entry = entry.remake(args.seed)
    text = serialize_ideal(document_of_entry(entry))
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_resolve_k(args) -> int:
    doc, algebra = _load_algebra(args.ideal)
    if args.n < 0:
        raise CliError("--n must be nonnegative")
    res = resolve_residue_field(algebra, args.n)
    sys.stdout.write(f"minimal resolution of the residue field, {args.n} steps\n")
    sys.stdout.write("i\tj\tbeta\n")
    for (i, j), b in res.entries():
        sys.stdout.write(f"{i}\t{j}\t{b}\n")
    truncated = False
    for i in range(args.n + 1):
        val, cert = res.t_value(i)
        sys.stdout.write(f"t({i}) = {val}{'' if cert else ' (window-limited)'}\n")
        truncated = truncated or not cert
    return 3 if truncated else 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bettilab",
        description="Exact Betti numbers, Koszul homology, and syzygy-degree audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("betti", help="Betti table of an ideal's quotient (or a module)")
    p.add_argument("ideal")
    p.add_argument("--imax", type=int, default=None)
    p.add_argument("--jmax", type=int, default=None)
    p.add_argument("--module", default=None, help="ideal file of extra generators cutting the module")
    p.set_defaults(func=_cmd_betti)

    p = sub.add_parser("audit", help="run the inequality audit battery")
    p.add_argument("ideal")
    p.add_argument("--imax", type=int, default=None)
    p.add_argument("--jmax", type=int, default=None)
    p.add_argument("--checks", nargs="*", default=None, metavar="ID",
                   help=f"filter by check id prefix; ids: {', '.join(CHECK_IDS)}")
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("template", help="render the Betti template grid")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--rows", type=int, default=9)
    p.set_defaults(func=_cmd_template)

    p = sub.add_parser("goodprimes", help="good characteristics for a binomial row")
    p.add_argument("n", type=int)
    p.set_defaults(func=_cmd_goodprimes)

    p = sub.add_parser("splitcheck", help="verify the scaled splitting identity")
    p.add_argument("ideal")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--jmax", type=int, default=None)
    p.set_defaults(func=_cmd_splitcheck)

    p = sub.add_parser("examples", help="emit a built-in or parametric ideal file")
    p.add_argument("action", choices=["gen"])
    p.add_argument("family")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_examples)

    p = sub.add_parser("resolve-k", help="minimal resolution of k over the quotient")
    p.add_argument("ideal")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_resolve_k)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as err:
        sys.stderr.write(f"error: {err}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
