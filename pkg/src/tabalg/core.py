"""Exact representation of table algebras over a distinguished integer basis.

A table algebra is stored as an ordered basis (index 0 is the identity,
every element carries a positive integer degree and a dual partner) plus
the full tensor of nonnegative integer structure constants
``delta[i][j][m]``, the coefficient of ``b_m`` in ``b_i * b_j``.  All
arithmetic is exact; scalars are Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "TableAlgebraError",
    "MalformedElementError",
    "BasisElement",
    "TableBasis",
    "Element",
    "StructureConstants",
    "TableAlgebra",
    "CheckResult",
    "VerificationReport",
]


class TableAlgebraError(Exception):
    """Base error for structurally invalid table-algebra data."""


class MalformedElementError(TableAlgebraError):
    """An element refers to basis indices outside the algebra."""


@dataclass(frozen=True)
class BasisElement:
    index: int
    name: str
    degree: int
    dual: int

    @property
    def is_real(self) -> bool:
        return self.dual == self.index


class TableBasis:
    """Ordered basis with degrees and the involution pairing.

    The identity sits at index 0, is named ``"1"``, has degree 1 and is
    self-dual.  Optional flags record the standing hypotheses that the
    basis has no nonidentity element of degree 1 (``no_degree_one``) and
    no element of degree 2 (``no_degree_two``); when claimed they are
    enforced here.
    """

    __slots__ = ("elements", "no_degree_one", "no_degree_two", "_by_name")

    def __init__(
        self,
        elements: Sequence[BasisElement],
        *,
        no_degree_one: bool = False,
        no_degree_two: bool = False,
    ):
        elements = tuple(elements)
        if not elements:
            raise TableAlgebraError("empty basis")
        e0 = elements[0]
        if e0.index != 0 or e0.name != "1" or e0.degree != 1 or e0.dual != 0:
            raise TableAlgebraError("index 0 must be the identity '1' of degree 1, self-dual")
        names = set()
        for i, e in enumerate(elements):
            if e.index != i:
                raise TableAlgebraError(f"element {e.name!r} stored at wrong index")
            if e.name in names:
                raise TableAlgebraError(f"duplicate element name {e.name!r}")
            names.add(e.name)
            if e.degree < 1:
                raise TableAlgebraError(f"element {e.name!r} has degree < 1")
            if not (0 <= e.dual < len(elements)):
                raise TableAlgebraError(f"dual index of {e.name!r} out of range")
        for e in elements:
            d = elements[e.dual]
            if d.dual != e.index:
                raise TableAlgebraError(f"dual pairing of {e.name!r} is not an involution")
            if d.degree != e.degree:
                raise TableAlgebraError(f"{e.name!r} and its dual differ in degree")
        if no_degree_one and any(e.degree == 1 for e in elements[1:]):
            raise TableAlgebraError("basis claims no nonidentity degree-1 element but has one")
        if no_degree_two and any(e.degree == 2 for e in elements):
            raise TableAlgebraError("basis claims no degree-2 element but has one")
        self.elements = elements
        self.no_degree_one = no_degree_one
        self.no_degree_two = no_degree_two
        self._by_name = {e.name: e.index for e in elements}

    @property
    def size(self) -> int:
        return len(self.elements)

    def index_of(self, name: str) -> int:
        try:
            return self._by_name[name]
        except KeyError:
            raise MalformedElementError(f"unknown element name {name!r}") from None

    def name(self, i: int) -> str:
        return self.elements[i].name

    def degree(self, i: int) -> int:
        return self.elements[i].degree

    def dual(self, i: int) -> int:
        return self.elements[i].dual

    def __iter__(self) -> Iterator[BasisElement]:
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, TableBasis) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)


class Element:
    """A component: formal nonnegative integer combination of basis elements."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        clean: dict[int, int] = {}
        for i, c in items:
            if not isinstance(c, int) or isinstance(c, bool):
                raise MalformedElementError(f"coefficient of index {i} is not an integer")
            if c < 0:
                raise MalformedElementError(f"negative coefficient at index {i}")
            if c:
                clean[i] = clean.get(i, 0) + c
        self.coeffs = clean

    @classmethod
    def basis(cls, i: int) -> "Element":
        return cls({i: 1})

    @classmethod
    def zero(cls) -> "Element":
        return cls()

    def support(self) -> frozenset[int]:
        return frozenset(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs.get(i, 0)

    def __add__(self, other: "Element") -> "Element":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, 0) + c
        return Element(out)

    def scaled(self, c: int) -> "Element":
        if c < 0:
            raise MalformedElementError("negative scalar")
        return Element({i: c * v for i, v in self.coeffs.items()})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Element) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def items(self):
        return self.coeffs.items()

    def __repr__(self):
        return f"Element({self.coeffs!r})"


class StructureConstants:
    """Dense k*k*k tensor of nonnegative integers, delta[i][j][m].

    Rows are stored once per unordered pair (i <= j); lookups symmetrize.
    For k beyond 64 the rows are kept as sparse maps instead of tuples.
    """

    DENSE_LIMIT = 64

    __slots__ = ("k", "_rows", "_dense")

    def __init__(self, k: int, rows: Mapping[tuple[int, int], Mapping[int, int]]):
        self.k = k
        self._dense = k <= self.DENSE_LIMIT
        store: dict[tuple[int, int], tuple[int, ...] | dict[int, int]] = {}
        for i in range(k):
            for j in range(i, k):
                row = rows.get((i, j))
                if row is None:
                    raise TableAlgebraError(f"missing structure row for pair ({i},{j})")
                for m, v in row.items():
                    if not (0 <= m < k):
                        raise TableAlgebraError(f"row ({i},{j}) hits index {m} out of range")
                    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                        raise TableAlgebraError(f"row ({i},{j}) has a non-integer or negative entry")
                if self._dense:
                    dense = [0] * k
                    for m, v in row.items():
                        dense[m] = v
                    store[(i, j)] = tuple(dense)
                else:
                    store[(i, j)] = {m: v for m, v in row.items() if v}
        self._rows = store

    def delta(self, i: int, j: int, m: int) -> int:
        if i > j:
            i, j = j, i
        row = self._rows[(i, j)]
        if self._dense:
            return row[m]
        return row.get(m, 0)

    def row_items(self, i: int, j: int) -> Iterator[tuple[int, int]]:
        """Nonzero (m, delta[i][j][m]) pairs."""
        if i > j:
            i, j = j, i
        row = self._rows[(i, j)]
        if self._dense:
            return ((m, v) for m, v in enumerate(row) if v)
        return iter(row.items())

    def as_numpy(self) -> np.ndarray:
        if not self._dense:
            raise TableAlgebraError("tensor too large for dense export")
        k = self.k
        t = np.zeros((k, k, k), dtype=np.int64)
        for (i, j), row in self._rows.items():
            t[i, j, :] = row
            t[j, i, :] = row
        return t

    def max_value(self) -> int:
        best = 0
        for row in self._rows.values():
            vals = row if self._dense else row.values()
            for v in vals:
                if v > best:
                    best = v
        return best


@dataclass
class CheckResult:
    name: str
    passed: bool
    witnesses: tuple = ()
    checked: int = 0

    def __str__(self):
        tag = "PASS" if self.passed else "FAIL"
        extra = "" if self.passed else f" witnesses={list(self.witnesses)!r}"
        return f"{tag} {self.name}{extra}"


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)
    associativity_triples: int = 0

    MAX_WITNESSES = 20

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def summary(self) -> str:
        if self.ok:
            return f"PASS ({len(self.checks)} axiom classes, {self.associativity_triples} associativity triples)"
        bad = ", ".join(c.name for c in self.checks if not c.passed)
        return f"FAIL ({bad})"

    def lines(self) -> list[str]:
        return [str(c) for c in self.checks]


AXIOM_CHECKS = (
    "nonnegativity",
    "integrality",
    "identity",
    "commutativity",
    "involution",
    "degree-homomorphism",
    "normalization-symmetry",
    "associativity",
)


class TableAlgebra:
    """Immutable table algebra: basis plus verified-on-demand structure constants."""

    def __init__(
        self,
        basis: TableBasis,
        constants: StructureConstants,
        name: str = "",
        notes: str = "",
    ):
        if constants.k != basis.size:
            raise TableAlgebraError("basis size and tensor size disagree")
        self.basis = basis
        self.constants = constants
        self.name = name
        self.notes = notes
        self._report: VerificationReport | None = None

    @property
    def size(self) -> int:
        return self.basis.size

    # -- constructors --------------------------------------------------

    @classmethod
    def from_products(
        cls,
        basis: TableBasis,
        products: Mapping[tuple[int, int], Mapping[int, int]],
        name: str = "",
        notes: str = "",
    ) -> "TableAlgebra":
        """Build from products on unordered pairs; identity rows are implied."""
        k = basis.size
        rows: dict[tuple[int, int], dict[int, int]] = {}
        for j in range(k):
            rows[(0, j)] = {j: 1}
        for (i, j), row in products.items():
            if i > j:
                i, j = j, i
            if i == 0:
                if dict(row) != {j: 1}:
                    raise TableAlgebraError(f"identity row for {basis.name(j)} is not trivial")
                continue
            rows[(i, j)] = dict(row)
        return cls(basis, StructureConstants(k, rows), name=name, notes=notes)

    @classmethod
    def from_tensor(
        cls, basis: TableBasis, tensor: Sequence[Sequence[Sequence[int]]], name: str = ""
    ) -> "TableAlgebra":
        """Build from a full k*k*k tensor, checking commutativity on the way."""
        k = basis.size
        rows: dict[tuple[int, int], dict[int, int]] = {}
        for i in range(k):
            for j in range(i, k):
                row_ij = tensor[i][j]
                row_ji = tensor[j][i]
                if list(row_ij) != list(row_ji):
                    raise TableAlgebraError(f"tensor not commutative at pair ({i},{j})")
                rows[(i, j)] = {m: v for m, v in enumerate(row_ij) if v}
        return cls(basis, StructureConstants(k, rows), name=name)

    # -- element helpers -----------------------------------------------

    def element(self, spec: Mapping[str, int] | str) -> Element:
        """Element from a name->coefficient map or a single basis name."""
        if isinstance(spec, str):
            return Element.basis(self.basis.index_of(spec))
        return Element({self.basis.index_of(n): c for n, c in spec.items()})

    def format_element(self, x: Element) -> str:
        if not x:
            return "0"
        parts = []
        for i in sorted(x.coeffs):
            c = x.coeffs[i]
            name = self.basis.name(i)
            parts.append(name if c == 1 else f"{c} {name}")
        return " + ".join(parts)

    def _check_element(self, x: Element) -> None:
        for i in x.coeffs:
            if not (0 <= i < self.size):
                raise MalformedElementError(f"index {i} out of range for {self.name or 'algebra'}")

    # -- the four arithmetic operations ---------------------------------

    def basis_product(self, i: int, j: int) -> Element:
        return Element(dict(self.constants.row_items(i, j)))

    def multiply(self, x: Element, y: Element) -> Element:
        """Bilinear extension of the basis products; exact and nonnegative."""
        self._check_element(x)
        self._check_element(y)
        out: dict[int, int] = {}
        for i, a in x.coeffs.items():
            for j, b in y.coeffs.items():
                ab = a * b
                for m, v in self.constants.row_items(i, j):
                    out[m] = out.get(m, 0) + ab * v
        return Element(out)

    def conjugate(self, x: Element) -> Element:
        self._check_element(x)
        return Element({self.basis.dual(i): c for i, c in x.coeffs.items()})

    def inner(self, x: Element, y: Element) -> int:
        """Hermitian form with the basis orthonormal: sum of coefficient products."""
        self._check_element(x)
        self._check_element(y)
        if len(y.coeffs) < len(x.coeffs):
            x, y = y, x
        return sum(c * y.coeffs.get(i, 0) for i, c in x.coeffs.items())

    def degree_of(self, x: Element) -> int:
        self._check_element(x)
        return sum(c * self.basis.degree(i) for i, c in x.coeffs.items())

    # -- verification ----------------------------------------------------

    def verify_axioms(self, jobs: int = 1, force_exact: bool = False) -> VerificationReport:
        """Run every axiom class and the full k^3 associativity sweep.

        Failures become report entries with (i, j, l, m) witnesses, never
        exceptions.  The sweep uses an int64 tensor contraction when the
        values provably cannot overflow, otherwise exact Python integers.
        """
        basis, delta = self.basis, self.constants
        k = self.size
        rep = VerificationReport()
        maxw = VerificationReport.MAX_WITNESSES

        nonneg, integ = [], []
        for i in range(k):
            for j in range(i, k):
                for m, v in delta.row_items(i, j):
                    if not isinstance(v, int) or isinstance(v, bool):
                        integ.append((i, j, m))
                    elif v < 0:
                        nonneg.append((i, j, m))
        rep.checks.append(CheckResult("nonnegativity", not nonneg, tuple(nonneg[:maxw])))
        rep.checks.append(CheckResult("integrality", not integ, tuple(integ[:maxw])))

        bad = [(0, j, m) for j in range(k) for m, v in delta.row_items(0, j) if (m != j or v != 1)]
        bad += [(0, j, j) for j in range(k) if delta.delta(0, j, j) != 1]
        rep.checks.append(CheckResult("identity", not bad, tuple(bad[:maxw])))

        # storage is keyed on unordered pairs, so commutativity holds by
        # construction; recheck through the public accessor anyway.
        bad = []
        for i in range(k):
            for j in range(i, k):
                for m in range(k):
                    if delta.delta(i, j, m) != delta.delta(j, i, m):
                        bad.append((i, j, m))
        rep.checks.append(CheckResult("commutativity", not bad, tuple(bad[:maxw])))

        bad = []
        for i in range(k):
            for j in range(i, k):
                ib, jb = basis.dual(i), basis.dual(j)
                for m in range(k):
                    if delta.delta(i, j, m) != delta.delta(ib, jb, basis.dual(m)):
                        bad.append((i, j, m))
                        if len(bad) > maxw:
                            break
        rep.checks.append(CheckResult("involution", not bad, tuple(bad[:maxw])))

        bad = []
        degs = [e.degree for e in basis]
        for i in range(k):
            for j in range(i, k):
                s = sum(v * degs[m] for m, v in delta.row_items(i, j))
                if s != degs[i] * degs[j]:
                    bad.append((i, j))
        rep.checks.append(CheckResult("degree-homomorphism", not bad, tuple(bad[:maxw])))

        bad = []
        for i in range(k):
            for j in range(k):
                jb = basis.dual(j)
                for m in range(k):
                    if delta.delta(i, j, m) != delta.delta(jb, m, i):
                        bad.append((i, j, m))
                if len(bad) > maxw:
                    break
        rep.checks.append(CheckResult("normalization-symmetry", not bad, tuple(bad[:maxw])))

        witnesses, triples = self._associativity_sweep(jobs=jobs, force_exact=force_exact)
        rep.associativity_triples = triples
        rep.checks.append(
            CheckResult("associativity", not witnesses, tuple(witnesses[:maxw]), checked=triples)
        )
        return rep

    def _associativity_sweep(self, jobs: int = 1, force_exact: bool = False):
        k = self.size
        delta = self.constants
        triples = k * k * k
        can_vectorize = k <= StructureConstants.DENSE_LIMIT
        if can_vectorize and not force_exact:
            mx = delta.max_value()
            # sum over m of delta*delta stays exact in int64 when bounded
            if mx * mx * k < 2**62:
                t = delta.as_numpy()
                lhs = np.einsum("ijm,mln->ijln", t, t)
                rhs = np.einsum("jlm,imn->ijln", t, t)
                diff = np.argwhere(lhs != rhs)
                return [tuple(int(x) for x in w) for w in diff], triples

        def check_range(i_slice):
            found = []
            for i in i_slice:
                for j in range(k):
                    row_ij = list(delta.row_items(i, j))
                    for l in range(k):
                        lhs: dict[int, int] = {}
                        for m, v in row_ij:
                            for n, w in delta.row_items(m, l):
                                lhs[n] = lhs.get(n, 0) + v * w
                        rhs: dict[int, int] = {}
                        for m, v in delta.row_items(j, l):
                            for n, w in delta.row_items(i, m):
                                rhs[n] = rhs.get(n, 0) + v * w
                        if lhs != rhs:
                            keys = set(lhs) | set(rhs)
                            found.extend(
                                (i, j, l, n) for n in sorted(keys) if lhs.get(n, 0) != rhs.get(n, 0)
                            )
            return found

        if jobs > 1:
            from concurrent.futures import ThreadPoolExecutor

            chunks = [range(s, k, jobs) for s in range(jobs)]
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(check_range, chunks))
            witnesses = sorted(w for part in parts for w in part)
        else:
            witnesses = check_range(range(k))
        return witnesses, triples

    def verified(self) -> VerificationReport:
        """Cached verification report (immutable algebra, computed once)."""
        if self._report is None:
            self._report = self.verify_axioms()
        return self._report

    def __repr__(self):
        return f"TableAlgebra({self.name or '?'}, k={self.size})"
