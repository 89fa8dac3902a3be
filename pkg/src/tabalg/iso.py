"""Exact isomorphism testing and sub-table-algebra restriction.

An exact isomorphism is a basis bijection carrying structure constants
identically.  The search is a backtracking assignment over degree-
compatible elements, pruned by invariant fingerprints; any certificate is
re-verified constant by constant before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import BasisElement, TableAlgebra, TableBasis, TableAlgebraError
from .structure import ClosedSubset

__all__ = ["IsoCertificate", "NotClosedError", "UnverifiedAlgebraError", "restrict", "exact_isomorphic"]


class NotClosedError(TableAlgebraError):
    """The requested subset is not closed under products or duals."""


class UnverifiedAlgebraError(TableAlgebraError):
    """Isomorphism testing requires inputs that pass the axiom verifier."""


@dataclass(frozen=True)
class IsoCertificate:
    mapping: tuple[int, ...]
    verified: bool

    def as_names(self, a: TableAlgebra, b: TableAlgebra) -> dict[str, str]:
        return {a.basis.name(i): b.basis.name(self.mapping[i]) for i in range(len(self.mapping))}


def restrict(algebra: TableAlgebra, subset: ClosedSubset) -> TableAlgebra:
    """Sub-table-algebra on a closed subset, reindexed in member order."""
    if not subset.verify(algebra):
        raise NotClosedError(
            f"subset {{{', '.join(subset.names(algebra))}}} is not closed in {algebra.name}"
        )
    members = list(subset.members)
    old_to_new = {old: new for new, old in enumerate(members)}
    basis = TableBasis(
        [
            BasisElement(
                old_to_new[old],
                algebra.basis.name(old),
                algebra.basis.degree(old),
                old_to_new[algebra.basis.dual(old)],
            )
            for old in members
        ],
        no_degree_one=algebra.basis.no_degree_one,
        no_degree_two=algebra.basis.no_degree_two,
    )
    products = {}
    for ni, oi in enumerate(members):
        for nj, oj in enumerate(members[ni:], start=ni):
            products[(ni, nj)] = {
                old_to_new[m]: v for m, v in algebra.constants.row_items(oi, oj)
            }
    name = f"{algebra.name}|{len(members)}" if algebra.name else f"restriction({len(members)})"
    return TableAlgebra.from_products(basis, products, name=name)


def _fingerprints(a: TableAlgebra) -> list:
    """Per-element invariants: degree, self-duality, dual-product row,
    self-inner-product profile, then one neighbourhood refinement round."""
    k = a.size
    base = []
    for i in range(k):
        di = a.basis.dual(i)
        row_dual = tuple(sorted(v for _, v in a.constants.row_items(i, di)))
        profile = []
        for j in range(k):
            x = a.basis_product(i, j)
            profile.append(a.inner(x, x))
        base.append(
            (a.basis.degree(i), i == di, row_dual, tuple(sorted(profile)))
        )
    refined = []
    for i in range(k):
        neigh = []
        for j in range(k):
            row = tuple(sorted((base[m][0], v) for m, v in a.constants.row_items(i, j)))
            neigh.append((base[j], row))
        refined.append((base[i], tuple(sorted(neigh))))
    return refined


def _compatible(a: TableAlgebra, b: TableAlgebra, mapping: dict[int, int], i: int, ii: int) -> bool:
    """Check all constraints among already-assigned elements after i -> ii."""
    for j, jj in mapping.items():
        for m, mm in mapping.items():
            if a.constants.delta(i, j, m) != b.constants.delta(ii, jj, mm):
                return False
        # the unassigned part of each row must still match as a multiset
        assigned = set(mapping)
        row_a = sorted(
            v for m, v in a.constants.row_items(i, j) if m not in assigned
        )
        assigned_b = set(mapping.values())
        row_b = sorted(
            v for m, v in b.constants.row_items(ii, jj) if m not in assigned_b
        )
        if row_a != row_b:
            return False
    return True


def exact_isomorphic(a: TableAlgebra, b: TableAlgebra) -> Optional[IsoCertificate]:
    """Certificate for an exact isomorphism a -> b, or None.

    Both inputs must pass verify_axioms.  The identity maps to the
    identity and dual pairs are assigned together; candidates are limited
    to equal fingerprints and the most constrained element is assigned
    first.  A found bijection is independently re-verified on all k^3
    constants.
    """
    for alg in (a, b):
        if not alg.verified().ok:
            raise UnverifiedAlgebraError(
                f"{alg.name or 'algebra'} fails verify_axioms: {alg.verified().summary()}"
            )
    if a.size != b.size:
        return None
    fa, fb = _fingerprints(a), _fingerprints(b)
    if sorted(map(repr, fa)) != sorted(map(repr, fb)):
        return None
    candidates = {
        i: [ii for ii in range(b.size) if fb[ii] == fa[i]] for i in range(a.size)
    }

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int, ii: int) -> list[tuple[int, int]]:
        """Assign i -> ii and its dual; returns the assignments made."""
        made = []
        for x, xx in ((i, ii), (a.basis.dual(i), b.basis.dual(ii))):
            if x in mapping:
                if mapping[x] != xx:
                    return []
                continue
            if xx in used or not _compatible(a, b, mapping, x, xx):
                for y, _ in made:
                    used.discard(mapping.pop(y))
                return []
            mapping[x] = xx
            used.add(xx)
            made.append((x, xx))
        return made or [(-1, -1)]  # dual pair already fully assigned

    def search() -> bool:
        free = [i for i in range(a.size) if i not in mapping]
        if not free:
            return True
        # first-fail: fewest live candidates, ties by index
        i = min(free, key=lambda i: (sum(1 for ii in candidates[i] if ii not in used), i))
        for ii in candidates[i]:
            if ii in used:
                continue
            made = extend(i, ii)
            if not made:
                continue
            if search():
                return True
            for y, _ in made:
                if y >= 0:
                    used.discard(mapping.pop(y))
        return False

    made0 = extend(0, 0)
    if not made0 or not search():
        return None
    psi = tuple(mapping[i] for i in range(a.size))

    # full re-verification, independent of the search bookkeeping
    for i in range(a.size):
        if a.basis.degree(i) != b.basis.degree(psi[i]) or psi[a.basis.dual(i)] != b.basis.dual(psi[i]):
            return None
        for j in range(a.size):
            for m in range(a.size):
                if a.constants.delta(i, j, m) != b.constants.delta(psi[i], psi[j], psi[m]):
                    return None
    return IsoCertificate(psi, verified=True)
