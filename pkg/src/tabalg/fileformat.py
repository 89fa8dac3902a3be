"""Line-oriented file format for table algebras.

Grammar (UTF-8, ``#`` starts a comment, blank lines ignored)::

    algebra <name>
    assume no-degree-1 no-degree-2          # optional flags line
    element <name> degree <int> dual <name>
    product <name> <name> = <int>? <name> (+ <int>? <name>)*

The identity is implicit: it is index 0, named ``1``, and may appear on
product right-hand sides.  An omitted coefficient means 1.  Element
names match ``[A-Za-z][A-Za-z0-9]*``; by convention the dual of ``x6``
is written ``x6bar``.  Only unordered pairs need product lines: ``(j,i)``
and the dual-image pair ``(ibar,jbar)`` are filled in by symmetry, and a
line that conflicts with an earlier or symmetry-derived one is rejected.
"""

from __future__ import annotations

import re

from .core import Element, BasisElement, TableAlgebra, TableBasis, TableAlgebraError

__all__ = ["ParseError", "parse", "parse_partial", "serialize", "parse_element_expr"]

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*$")
FLAG_NO_DEG1 = "no-degree-1"
FLAG_NO_DEG2 = "no-degree-2"


class ParseError(TableAlgebraError):
    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        where = f"line {line_no}: " if line_no else ""
        super().__init__(f"{where}{message}")


def _strip(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.strip()


def _parse_rhs(tokens: list[str], basis: TableBasis, line_no: int) -> dict[int, int]:
    """Right-hand side: terms separated by '+', each an optional count then a name."""
    terms: list[list[str]] = [[]]
    for tok in tokens:
        if tok == "+":
            if not terms[-1]:
                raise ParseError("empty term on right-hand side", line_no)
            terms.append([])
        else:
            terms[-1].append(tok)
    if not terms[-1]:
        raise ParseError("trailing '+' on right-hand side", line_no)
    out: dict[int, int] = {}
    for term in terms:
        if len(term) == 1:
            coeff, name = 1, term[0]
        elif len(term) == 2:
            try:
                coeff = int(term[0])
            except ValueError:
                raise ParseError(f"bad coefficient {term[0]!r}", line_no) from None
            name = term[1]
        else:
            raise ParseError(f"malformed term {' '.join(term)!r}", line_no)
        if coeff < 1:
            raise ParseError(f"coefficient must be positive, got {coeff}", line_no)
        idx = 0 if name == "1" else _lookup(basis, name, line_no)
        out[idx] = out.get(idx, 0) + coeff
    return out


def _lookup(basis: TableBasis, name: str, line_no: int) -> int:
    try:
        return basis.index_of(name)
    except TableAlgebraError:
        raise ParseError(f"unknown element name {name!r}", line_no) from None


def parse_element_expr(text: str, basis: TableBasis) -> Element:
    """Parse an element expression such as ``1 + 3 b5 + x9`` against a basis."""
    tokens = text.replace("+", " + ").split()
    return Element(_parse_rhs(tokens, basis, 0))


def _parse_lines(text: str):
    """Shared front end: returns (name, basis, product rows, derived-pair set)."""
    name = None
    flags = {FLAG_NO_DEG1: False, FLAG_NO_DEG2: False}
    raw_elements: list[tuple[int, str, int, str]] = []  # line, name, degree, dual
    raw_products: list[tuple[int, str, str, list[str]]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "algebra":
            if name is not None:
                raise ParseError("duplicate algebra header", line_no)
            if len(tokens) != 2:
                raise ParseError("expected: algebra <name>", line_no)
            name = tokens[1]
        elif head == "assume":
            for tok in tokens[1:]:
                if tok not in flags:
                    raise ParseError(f"unknown flag {tok!r}", line_no)
                flags[tok] = True
        elif head == "element":
            if len(tokens) != 6 or tokens[2] != "degree" or tokens[4] != "dual":
                raise ParseError("expected: element <name> degree <int> dual <name>", line_no)
            if not NAME_RE.match(tokens[1]):
                raise ParseError(f"bad element name {tokens[1]!r}", line_no)
            try:
                deg = int(tokens[3])
            except ValueError:
                raise ParseError(f"bad degree {tokens[3]!r}", line_no) from None
            raw_elements.append((line_no, tokens[1], deg, tokens[5]))
        elif head == "product":
            if len(tokens) < 5 or tokens[3] != "=":
                raise ParseError("expected: product <name> <name> = <expr>", line_no)
            raw_products.append((line_no, tokens[1], tokens[2], tokens[4:]))
        else:
            raise ParseError(f"unknown directive {head!r}", line_no)
    if name is None:
        raise ParseError("missing 'algebra <name>' header")

    elements = [BasisElement(0, "1", 1, 0)]
    index = {"1": 0}
    for line_no, ename, deg, _ in raw_elements:
        if ename in index:
            raise ParseError(f"duplicate element {ename!r}", line_no)
        index[ename] = len(elements)
        elements.append(None)  # placeholder until duals resolve
        if deg < 1:
            raise ParseError(f"element {ename!r} has degree {deg}", line_no)
    for line_no, ename, deg, dual_name in raw_elements:
        dual_key = "1" if dual_name == "1" else dual_name
        if dual_key not in index:
            raise ParseError(f"unknown dual name {dual_name!r}", line_no)
        i = index[ename]
        elements[i] = BasisElement(i, ename, deg, index[dual_key])
    basis = TableBasis(
        elements, no_degree_one=flags[FLAG_NO_DEG1], no_degree_two=flags[FLAG_NO_DEG2]
    )

    products: dict[tuple[int, int], dict[int, int]] = {}
    origins: dict[tuple[int, int], int] = {}
    degs = [e.degree for e in basis]

    def put(i: int, j: int, row: dict[int, int], line_no: int, derived: bool) -> None:
        key = (i, j) if i <= j else (j, i)
        if key in products:
            if products[key] != row:
                raise ParseError(
                    f"conflicting redefinition of product {basis.name(key[0])} {basis.name(key[1])}"
                    f" (first seen at line {origins[key]})",
                    line_no,
                )
            return
        products[key] = row
        origins[key] = line_no
        if not derived:
            s = sum(c * degs[m] for m, c in row.items())
            if s != degs[i] * degs[j]:
                raise ParseError(
                    f"degree sum {s} does not match {degs[i]}*{degs[j]}={degs[i]*degs[j]}", line_no
                )

    for line_no, a, b, rhs in raw_products:
        ia = 0 if a == "1" else _lookup(basis, a, line_no)
        ib = 0 if b == "1" else _lookup(basis, b, line_no)
        row = _parse_rhs(rhs, basis, line_no)
        if ia == 0 or ib == 0:
            other = ib if ia == 0 else ia
            if row != {other: 1}:
                raise ParseError("identity product must reproduce the other factor", line_no)
        put(ia, ib, row, line_no, derived=False)

    # symmetry completion: dual image of every known pair
    pending = list(products.keys())
    while pending:
        i, j = pending.pop()
        row = products[(i, j)]
        di, dj = basis.dual(i), basis.dual(j)
        key = (di, dj) if di <= dj else (dj, di)
        if key not in products:
            dual_row = {}
            for m, c in row.items():
                dual_row[basis.dual(m)] = c
            put(key[0], key[1], dual_row, origins[(i, j)], derived=True)
            pending.append(key)
    for j in range(basis.size):
        products.setdefault((0, j), {j: 1})
    return name, basis, products


def parse(text: str) -> TableAlgebra:
    """Parse a complete algebra file; every unordered pair must be determined."""
    name, basis, products = _parse_lines(text)
    k = basis.size
    missing = [
        (basis.name(i), basis.name(j))
        for i in range(k)
        for j in range(i, k)
        if (i, j) not in products
    ]
    if missing:
        shown = ", ".join(f"{a}*{b}" for a, b in missing[:8])
        more = "" if len(missing) <= 8 else f" (+{len(missing) - 8} more)"
        raise ParseError(f"incomplete table, missing products: {shown}{more}")
    return TableAlgebra.from_products(basis, products, name=name)


def parse_partial(text: str):
    """Parse a partial table: returns (name, basis, known products) without
    requiring completeness.  Used to seed the deduction engine."""
    return _parse_lines(text)


def _format_row(basis: TableBasis, row: dict[int, int]) -> str:
    parts = []
    for m in sorted(row):
        c = row[m]
        name = basis.name(m)
        parts.append(name if c == 1 else f"{c} {name}")
    return " + ".join(parts)


def serialize(algebra: TableAlgebra) -> str:
    """Canonical text form: declaration order, products sorted by (i, j).

    Identity rows and anything derivable from a listed pair by
    commutativity are omitted; dual-image pairs are written out so the
    file reads without symmetry chasing.  Output is deterministic.
    """
    basis = algebra.basis
    out = [f"algebra {algebra.name or 'unnamed'}"]
    flags = []
    if basis.no_degree_one:
        flags.append(FLAG_NO_DEG1)
    if basis.no_degree_two:
        flags.append(FLAG_NO_DEG2)
    if flags:
        out.append("assume " + " ".join(flags))
    for e in basis.elements[1:]:
        out.append(f"element {e.name} degree {e.degree} dual {basis.name(e.dual)}")
    k = basis.size
    for i in range(1, k):
        for j in range(i, k):
            row = dict(algebra.constants.row_items(i, j))
            out.append(f"product {basis.name(i)} {basis.name(j)} = {_format_row(basis, row)}")
    return "\n".join(out) + "\n"
