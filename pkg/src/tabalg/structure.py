"""Closed subsets, power supports, and support-level quotients.

A closed subset (table subset) contains the identity, is closed under the
involution and under supports of products.  Quotients are taken at support
level only: classes are the double cosets through a closed subset and the
class composition records which classes meet each product support.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .core import Element, TableAlgebra, TableAlgebraError

__all__ = [
    "ClosedSubset",
    "PowerTable",
    "QuotientClassTable",
    "GroupTable",
    "closure",
    "all_closed_subsets",
    "power_supports",
    "quotient_by",
    "is_group_like",
]

LATTICE_SIZE_CAP = 64
LATTICE_NODE_CAP = 4096


@dataclass(frozen=True)
class ClosedSubset:
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(self.members)))

    def __contains__(self, i: int) -> bool:
        return i in set(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def names(self, algebra: TableAlgebra) -> tuple[str, ...]:
        return tuple(algebra.basis.name(i) for i in self.members)

    def verify(self, algebra: TableAlgebra) -> bool:
        """Independent membership re-check: identity, duals, all pair supports."""
        s = set(self.members)
        if 0 not in s:
            return False
        if any(algebra.basis.dual(i) not in s for i in s):
            return False
        for i in s:
            for j in s:
                for m, _ in algebra.constants.row_items(i, j):
                    if m not in s:
                        return False
        return True


def _resolve(algebra: TableAlgebra, seed: Iterable[int | str]) -> set[int]:
    out = set()
    for x in seed:
        out.add(algebra.basis.index_of(x) if isinstance(x, str) else x)
    for i in out:
        if not (0 <= i < algebra.size):
            raise TableAlgebraError(f"seed index {i} out of range")
    return out


def closure(algebra: TableAlgebra, seed: Iterable[int | str]) -> ClosedSubset:
    """Smallest closed subset containing the seed (fixed-point iteration)."""
    current = _resolve(algebra, seed)
    if not current:
        raise TableAlgebraError("closure of an empty seed")
    current.add(0)
    current |= {algebra.basis.dual(i) for i in set(current)}
    frontier = set(current)
    while frontier:
        new: set[int] = set()
        for i in frontier:
            for j in current:
                for m, _ in algebra.constants.row_items(i, j):
                    if m not in current:
                        new.add(m)
        new |= {algebra.basis.dual(m) for m in new}
        current |= new
        frontier = new
    return ClosedSubset(tuple(current))


def all_closed_subsets(algebra: TableAlgebra) -> list[ClosedSubset]:
    """Complete lattice of closed subsets.

    Closures of singletons, then pairwise joins to a fixed point.  Sorted
    by size, then lexicographically by member indices.  Capped at basis
    size 64 and 4096 lattice nodes.
    """
    if algebra.size > LATTICE_SIZE_CAP:
        raise TableAlgebraError(f"subset lattice capped at basis size {LATTICE_SIZE_CAP}")
    found: dict[tuple[int, ...], ClosedSubset] = {}

    def add(s: ClosedSubset):
        if s.members not in found:
            if len(found) >= LATTICE_NODE_CAP:
                raise TableAlgebraError(f"subset lattice exceeded {LATTICE_NODE_CAP} nodes")
            found[s.members] = s

    add(ClosedSubset((0,)))
    for i in range(algebra.size):
        add(closure(algebra, [i]))
    # joins until stable
    while True:
        pairs = list(combinations(list(found.values()), 2))
        before = len(found)
        for a, b in pairs:
            join = closure(algebra, set(a.members) | set(b.members))
            add(join)
        if len(found) == before:
            break
    return sorted(found.values(), key=lambda s: (len(s.members), s.members))


@dataclass(frozen=True)
class PowerTable:
    element: int
    rows: tuple[tuple[int, frozenset[int]], ...]

    def row(self, n: int) -> frozenset[int]:
        for e, s in self.rows:
            if e == n:
                return s
        raise KeyError(n)


def power_supports(algebra: TableAlgebra, b: int | str, max_n: int) -> PowerTable:
    """Supports of b, b^2, ..., b^max_n by exact repeated multiplication."""
    if max_n < 1:
        raise TableAlgebraError("max_n must be >= 1")
    i = algebra.basis.index_of(b) if isinstance(b, str) else b
    rows = []
    power = Element.basis(i)
    base = Element.basis(i)
    rows.append((1, power.support()))
    for n in range(2, max_n + 1):
        power = algebra.multiply(power, base)
        rows.append((n, power.support()))
    return PowerTable(i, tuple(rows))


@dataclass(frozen=True)
class GroupTable:
    order: int
    cayley: tuple[tuple[int, ...], ...]
    invariant_factors: Optional[tuple[int, ...]]

    @property
    def description(self) -> str:
        if self.invariant_factors is None:
            return f"group of order {self.order}"
        return " x ".join(f"cyclic({d})" for d in self.invariant_factors)


class QuotientClassTable:
    """Support-level quotient by a closed subset.

    Classes are the orbits of b ~ b' iff b' lies in Supp(C*b*C); the class
    of the identity is the defining subset itself.  compose(P, Q) is the
    set of classes meeting Supp(p*q) and is checked to be independent of
    the chosen representatives.
    """

    def __init__(self, algebra: TableAlgebra, by: ClosedSubset):
        if not by.verify(algebra):
            raise TableAlgebraError("quotient requires a verified closed subset")
        self.algebra = algebra
        self.by = by
        e_c = Element({i: 1 for i in by.members})
        k = algebra.size
        class_of: dict[int, int] = {}
        classes: list[tuple[int, ...]] = []
        for b in range(k):
            if b in class_of:
                continue
            sandwich = algebra.multiply(algebra.multiply(e_c, Element.basis(b)), e_c)
            members = sorted(sandwich.support())
            ci = len(classes)
            for m in members:
                if m in class_of and class_of[m] != ci:
                    raise TableAlgebraError("double cosets do not partition the basis")
                class_of[m] = ci
            classes.append(tuple(members))
        # re-check representative independence of the classes themselves
        for ci, members in enumerate(classes):
            for b in members:
                sandwich = algebra.multiply(algebra.multiply(e_c, Element.basis(b)), e_c)
                if sorted(sandwich.support()) != list(members):
                    raise TableAlgebraError(
                        f"class of {algebra.basis.name(b)} depends on the representative"
                    )
        self.classes = tuple(classes)
        self.class_of = class_of
        self.labels = tuple(
            min(algebra.basis.name(m) for m in members) for members in classes
        )
        n = len(classes)
        compose: dict[tuple[int, int], frozenset[int]] = {}
        for p in range(n):
            for q in range(p, n):
                value: frozenset[int] | None = None
                for bp in self.classes[p]:
                    for bq in self.classes[q]:
                        supp = frozenset(
                            class_of[m] for m, _ in algebra.constants.row_items(bp, bq)
                        )
                        if value is None:
                            value = supp
                        elif value != supp:
                            raise TableAlgebraError(
                                "class composition depends on representatives: "
                                f"classes {self.labels[p]}, {self.labels[q]}"
                            )
                compose[(p, q)] = value or frozenset()
                compose[(q, p)] = compose[(p, q)]
        self.composition = compose
        self.identity_class = class_of[0]

    @property
    def size(self) -> int:
        return len(self.classes)

    def compose(self, p: int, q: int) -> frozenset[int]:
        return self.composition[(p, q)]

    def dual_class(self, p: int) -> int:
        return self.class_of[self.algebra.basis.dual(self.classes[p][0])]


def quotient_by(algebra: TableAlgebra, by: ClosedSubset | Iterable[int | str]) -> QuotientClassTable:
    if not isinstance(by, ClosedSubset):
        by = ClosedSubset(tuple(_resolve(algebra, by)))
    return QuotientClassTable(algebra, by)


def _invariant_factors(order: int, element_orders: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Invariant factors of an abelian group of order <= 12 from its orders."""
    if order > 12:
        return None
    m = max(element_orders)
    if m == order:
        return (order,)
    rest = order // m
    if rest == 2:
        return (m, 2)
    if rest == 3:
        return (m, 3)
    if rest == 4 and m == 2:
        return (2, 2, 2)
    return None


def is_group_like(q: QuotientClassTable) -> Optional[GroupTable]:
    """Group table when every composition is a single class, else None."""
    n = q.size
    table = []
    for p in range(n):
        row = []
        for r in range(n):
            value = q.compose(p, r)
            if len(value) != 1:
                return None
            row.append(next(iter(value)))
        table.append(tuple(row))
    orders = []
    for p in range(n):
        x, o = p, 1
        while x != q.identity_class:
            x = table[x][p]
            o += 1
        orders.append(o)
    return GroupTable(n, tuple(table), _invariant_factors(n, orders))
