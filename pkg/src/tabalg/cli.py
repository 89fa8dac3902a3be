"""Command-line front end.

Subcommands map one-to-one onto library operations; exit code 0 means
success or a positive answer, 1 a verification failure or negative
answer, 2 a usage or input error.  Output is deterministic; timing is
printed only with --timing.
"""

from __future__ import annotations

import argparse
import sys
import time

from .bundled import AUXILIARY, BUNDLED, NAMED_SUBSETS, PARTIAL, load, resolve, resolve_partial
from .core import TableAlgebra, TableAlgebraError
from .deduction import PartialTable, propagate
from .fileformat import ParseError, parse_element_expr, serialize
from .iso import exact_isomorphic, restrict
from .structure import ClosedSubset, all_closed_subsets, closure, is_group_like, power_supports, quotient_by


class _Out:
    def __init__(self, machine: bool):
        self.machine = machine

    def text(self, line: str):
        if not self.machine:
            print(line)

    def fact(self, key: str, value):
        if self.machine:
            print(f"{key}\t{value}")


def _subset_from_spec(algebra: TableAlgebra, spec: str) -> ClosedSubset:
    """A named subset (C/D/E of a bundled algebra), a comma list of element
    names, or a single element name; closure is always taken."""
    named = NAMED_SUBSETS.get(algebra.name, {})
    if spec in named:
        return closure(algebra, named[spec])
    names = [s for s in spec.split(",") if s]
    return closure(algebra, names)


def _fmt_members(algebra: TableAlgebra, members) -> str:
    return " ".join(algebra.basis.name(i) for i in sorted(members))


def cmd_verify(args, out: _Out) -> int:
    algebra = resolve(args.algebra)
    t0 = time.perf_counter()
    report = algebra.verify_axioms(jobs=args.jobs, force_exact=args.exact)
    dt = time.perf_counter() - t0
    for check in report.checks:
        out.fact(f"check.{check.name}", "pass" if check.passed else "fail")
        if not check.passed:
            out.text(str(check))
    out.fact("triples", report.associativity_triples)
    out.fact("result", "pass" if report.ok else "fail")
    out.text(report.summary())
    if args.timing:
        print(f"timing: {dt:.3f}s", file=sys.stderr)
    return 0 if report.ok else 1


def cmd_mult(args, out: _Out) -> int:
    algebra = resolve(args.algebra)
    x = parse_element_expr(args.x, algebra.basis)
    y = parse_element_expr(args.y, algebra.basis)
    result = algebra.multiply(x, y)
    out.fact("product", algebra.format_element(result))
    out.text(algebra.format_element(result))
    return 0


def cmd_inner(args, out: _Out) -> int:
    algebra = resolve(args.algebra)
    x = parse_element_expr(args.x, algebra.basis)
    y = parse_element_expr(args.y, algebra.basis)
    value = algebra.inner(x, y)
    out.fact("inner", value)
    out.text(str(value))
    return 0


def cmd_subsets(args, out: _Out) -> int:
    algebra = resolve(args.algebra)
    lattice = all_closed_subsets(algebra)
    out.fact("count", len(lattice))
    for s in lattice:
        out.fact(f"subset.{len(s)}", _fmt_members(algebra, s.members))
        out.text(f"size {len(s):>3}: {_fmt_members(algebra, s.members)}")
    return 0


def cmd_closure(args, out: _Out) -> int:
    algebra = resolve(args.algebra)
    s = closure(algebra, args.names)
    out.fact("closure", _fmt_members(algebra, s.members))
    out.text(f"size {len(s)}: {_fmt_members(algebra, s.members)}")
    return 0


def cmd_powers(args, out: _Out) -> int:
    algebra = resolve(args.algebra)
    table = power_supports(algebra, args.name, args.max)
    for n, supp in table.rows:
        out.fact(f"power.{n}", _fmt_members(algebra, supp))
        out.text(f"{args.name}^{n}: {_fmt_members(algebra, supp)}")
    return 0


def cmd_quotient(args, out: _Out) -> int:
    algebra = resolve(args.algebra)
    q = quotient_by(algebra, _subset_from_spec(algebra, args.by))
    g = is_group_like(q)
    desc = g.description if g else "none"
    out.fact("classes", q.size)
    out.fact("group-like", desc)
    for label, members in zip(q.labels, q.classes):
        out.fact(f"class.{label}", _fmt_members(algebra, members))
    out.text(f"{q.size} classes; group-like: {desc}")
    for label, members in zip(q.labels, q.classes):
        out.text(f"  [{label}] {_fmt_members(algebra, members)}")
    return 0


def cmd_iso(args, out: _Out) -> int:
    a = resolve(args.algebra_a)
    b = resolve(args.algebra_b)
    cert = exact_isomorphic(a, b)
    if cert is None:
        out.fact("isomorphic", "no")
        out.text("not exactly isomorphic")
        return 1
    out.fact("isomorphic", "yes")
    pairs = cert.as_names(a, b)
    mapping = ", ".join(f"{x}->{y}" for x, y in pairs.items())
    out.fact("mapping", mapping)
    out.text("exactly isomorphic")
    out.text("  " + mapping)
    return 0


def cmd_restrict(args, out: _Out) -> int:
    algebra = resolve(args.algebra)
    sub = restrict(algebra, _subset_from_spec(algebra, args.to))
    text = serialize(sub)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.text(f"wrote {sub.name} (k={sub.size}) to {args.output}")
    else:
        print(text, end="")
    out.fact("size", sub.size)
    return 0


def cmd_deduce(args, out: _Out) -> int:
    name, basis, products = resolve_partial(args.table)
    seed = PartialTable(basis, {p: v for p, v in products.items() if p[0] != 0})
    table, trace = propagate(
        seed, max_steps=args.max_steps, introduce_names=not args.no_names
    )
    out.fact("status", trace.status)
    out.fact("steps", len(trace.steps))
    out.text(f"{name}: {trace.status} after {len(trace.steps)} steps")
    if trace.status == "contradiction":
        out.fact("witness", ",".join(map(str, trace.witness)))
        out.text(f"  witness: {trace.message}")
    elif trace.status == "stalled":
        out.fact("unresolved", len(trace.unresolved))
        out.text(f"  unresolved products: {len(trace.unresolved)}")
        for a, b in trace.unresolved[:10]:
            out.text(f"    {a}*{b}")
        if trace.budget_exhausted:
            out.text("  (step budget exhausted)")
    else:
        for (i, j) in sorted(table.known):
            if 0 < i <= j:
                value = table.value(i, j)
                out.text(f"  {basis.name(i)}*{basis.name(j)} = "
                         + _format_element(basis, value))
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(trace.serialize())
        out.text(f"trace written to {args.trace}")
    return 0 if trace.status == "completed" else 1


def _format_element(basis, x):
    parts = []
    for m in sorted(x.coeffs):
        c = x.coeffs[m]
        parts.append(basis.name(m) if c == 1 else f"{c} {basis.name(m)}")
    return " + ".join(parts) if parts else "0"


def cmd_bundled(args, out: _Out) -> int:
    if args.export:
        algebra = load(args.export)
        text = serialize(algebra)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
            out.text(f"wrote {args.export} to {args.output}")
        else:
            print(text, end="")
        return 0
    for name in BUNDLED:
        algebra = load(name)
        out.fact(f"bundled.{name}", algebra.size)
        out.text(f"{name:<6} k={algebra.size:<3} verified table algebra")
    for name in AUXILIARY:
        algebra = load(name)
        out.fact(f"aux.{name}", algebra.size)
        out.text(f"{name:<6} k={algebra.size:<3} group class algebra")
    for name in PARTIAL:
        out.fact(f"partial.{name}", "-")
        out.text(f"{name:<6} partial table (deduction seed)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tabalg",
        description="Exact arithmetic for normalized integral table algebras.",
    )
    ap.add_argument("--format", choices=("text", "machine"), default="text")
    ap.add_argument("--timing", action="store_true", help="print timing to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the axiom verifier")
    p.add_argument("algebra")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--exact", action="store_true", help="force the pure-integer sweep")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mult", help="multiply two elements")
    p.add_argument("algebra")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(func=cmd_mult)

    p = sub.add_parser("inner", help="inner product of two element expressions")
    p.add_argument("algebra")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(func=cmd_inner)

    p = sub.add_parser("subsets", help="lattice of closed subsets")
    p.add_argument("algebra")
    p.set_defaults(func=cmd_subsets)

    p = sub.add_parser("closure", help="closed subset generated by elements")
    p.add_argument("algebra")
    p.add_argument("names", nargs="+")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("powers", help="supports of powers of an element")
    p.add_argument("algebra")
    p.add_argument("name")
    p.add_argument("--max", type=int, default=6)
    p.set_defaults(func=cmd_powers)

    p = sub.add_parser("quotient", help="support-level quotient by a closed subset")
    p.add_argument("algebra")
    p.add_argument("--by", required=True, help="subset name (C/D/E) or comma list of elements")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("iso", help="test exact isomorphism")
    p.add_argument("algebra_a")
    p.add_argument("algebra_b")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("restrict", help="restrict to a closed subset")
    p.add_argument("algebra")
    p.add_argument("--to", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("deduce", help="complete a partial product table")
    p.add_argument("table")
    p.add_argument("--max-steps", type=int, default=1_000_000)
    p.add_argument("--trace")
    p.add_argument("--no-names", action="store_true",
                   help="disable the fresh-constituent naming convention")
    p.set_defaults(func=cmd_deduce)

    p = sub.add_parser("bundled", help="list or export bundled data")
    p.add_argument("--list", action="store_true")
    p.add_argument("--export")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bundled)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    out = _Out(machine=args.format == "machine")
    try:
        return args.func(args, out)
    except (ParseError, TableAlgebraError, FileNotFoundError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
