"""Product-table completion over a fixed basis.

A partial table holds exact per-coefficient knowledge for every unordered
pair of basis elements.  Propagation closes it under four rule families,
mirroring the lemma calculus used to pin down such algebras by hand:

  R1  degree bookkeeping: a remainder of degree zero vanishes; a remainder
      whose constraints force a single decomposition resolves.
  R2  the normalized-basis symmetry (b_m, b_i b_j) = (b_i, b_jbar b_m):
      every known coefficient transports around its symmetry orbit, which
      also keeps commutativity and the involution closure maintained.
  R3  associativity: a triple whose two bracketings expand with exactly
      one unknown product of unit coefficient solves that product as an
      exact difference; a negative difference is a contradiction.
  R4  inner-product counts and bounds: (xy, xy) and related inner products
      of pending entries are computed from known entries via
      (ab, cd) = (b*dbar, abar*c) and bound the shape of a remainder.

Propagation itself only ever writes forced values.  The optional naming
mode additionally models the working convention of christening a new
constituent ("let x be such that ..."): when the candidate decompositions
of a remainder differ only by a degree- and duality-respecting relabeling
of the basis that fixes every already-determined coefficient, the
least-indexed assignment is chosen, newest products first.  Conclusions
about already-distinguished elements are unaffected; only the naming of
so-far-indistinguishable ones is convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .core import Element, TableAlgebra, TableBasis, TableAlgebraError

__all__ = ["PartialTable", "DeductionStep", "DeductionTrace", "propagate", "complete_or_refute"]

SOLVER_NODE_CAP = 200_000
SOLVER_SOLUTION_CAP = 256


class Contradiction(TableAlgebraError):
    def __init__(self, witness, message):
        self.witness = witness
        super().__init__(message)


class _SolverOverflow(Exception):
    pass


@dataclass
class DeductionStep:
    number: int
    rule: str
    triple: tuple[str, str, str]
    entry: tuple[str, str]
    value: str

    def line(self) -> str:
        i, j, l = self.triple
        return (
            f"STEP {self.number} RULE {self.rule} TRIPLE {i},{j},{l} "
            f"SET {self.entry[0]}*{self.entry[1]} = {self.value}"
        )


@dataclass
class DeductionTrace:
    steps: list[DeductionStep] = field(default_factory=list)
    status: str = "stalled"  # completed | stalled | contradiction
    witness: Optional[tuple] = None
    message: str = ""
    unresolved: tuple[tuple[str, str], ...] = ()
    budget_exhausted: bool = False

    def serialize(self) -> str:
        lines = [s.line() for s in self.steps]
        tail = f"STATUS {self.status}"
        if self.witness:
            tail += " WITNESS " + ",".join(str(w) for w in self.witness)
        if self.budget_exhausted:
            tail += " BUDGET-EXHAUSTED"
        lines.append(tail)
        return "\n".join(lines) + "\n"


class PartialTable:
    """Exact partial knowledge of every unordered basis-pair product.

    ``cells[(i, j)][m]`` is the proven coefficient of ``b_m`` in
    ``b_i b_j``, or None while undetermined; entries are canonicalized to
    i <= j and identity rows are filled at construction.  Seeded products
    must satisfy the degree identity.
    """

    def __init__(
        self,
        basis: TableBasis,
        known: Mapping[tuple, Mapping[int, int] | Element] | None = None,
    ):
        self.basis = basis
        k = basis.size
        self.k = k
        self.deg = [e.degree for e in basis]
        self.dual = [e.dual for e in basis]
        self.cells: dict[tuple[int, int], list[Optional[int]]] = {}
        for i in range(k):
            for j in range(i, k):
                self.cells[(i, j)] = [None] * k
        self.known: set[tuple[int, int]] = set()
        self.newly_known: list[tuple[int, int]] = []
        self._queue: list[tuple[int, int, int, int]] = []
        for j in range(k):
            self.set_product(0, j, {j: 1})
        if known:
            for pair, value in known.items():
                i, j = (self.basis.index_of(x) if isinstance(x, str) else x for x in pair)
                coeffs = value.coeffs if isinstance(value, Element) else dict(value)
                self.set_product(i, j, coeffs)

    @classmethod
    def from_subtable(
        cls, algebra: TableAlgebra, pairs: Mapping[tuple, object] | list
    ) -> "PartialTable":
        """Seed with the algebra's own values on the given pairs."""
        known = {}
        for pair in pairs:
            i, j = (algebra.basis.index_of(x) if isinstance(x, str) else x for x in pair)
            known[(i, j)] = dict(algebra.constants.row_items(i, j))
        return cls(algebra.basis, known)

    # -- accessors --------------------------------------------------------

    def _canon(self, i: int, j: int) -> tuple[int, int]:
        return (i, j) if i <= j else (j, i)

    def is_known(self, i: int, j: int) -> bool:
        return self._canon(i, j) in self.known

    def value(self, i: int, j: int) -> Element:
        if not self.is_known(i, j):
            raise TableAlgebraError(f"product {i},{j} not known")
        row = self.cells[self._canon(i, j)]
        return Element({m: v for m, v in enumerate(row) if v})

    def pending_pairs(self) -> list[tuple[int, int]]:
        return sorted(p for p in self.cells if p not in self.known)

    def remainder_degree(self, pair: tuple[int, int]) -> int:
        i, j = pair
        row = self.cells[pair]
        s = sum(v * self.deg[m] for m, v in enumerate(row) if v)
        return self.deg[i] * self.deg[j] - s

    def names(self, pair: tuple[int, int]) -> tuple[str, str]:
        return (self.basis.name(pair[0]), self.basis.name(pair[1]))

    def copy(self) -> "PartialTable":
        out = PartialTable.__new__(PartialTable)
        out.basis = self.basis
        out.k = self.k
        out.deg = self.deg
        out.dual = self.dual
        out.cells = {p: list(r) for p, r in self.cells.items()}
        out.known = set(self.known)
        out.newly_known = list(self.newly_known)
        out._queue = list(self._queue)
        return out

    def as_algebra(self, name: str = "") -> TableAlgebra:
        """Completed table as a TableAlgebra (fails if anything is pending)."""
        products = {}
        for (i, j), row in self.cells.items():
            if any(v is None for v in row):
                raise TableAlgebraError("table is not complete")
            products[(i, j)] = {m: v for m, v in enumerate(row) if v}
        return TableAlgebra.from_products(self.basis, products, name=name)

    # -- writing facts ----------------------------------------------------

    def set_product(self, i: int, j: int, coeffs: Mapping[int, int]) -> None:
        total = sum(c * self.deg[m] for m, c in coeffs.items())
        if total != self.deg[i] * self.deg[j]:
            raise TableAlgebraError(
                f"product {self.basis.name(i)}*{self.basis.name(j)} violates the degree identity"
            )
        for m in range(self.k):
            self.set_cell(i, j, m, coeffs.get(m, 0))

    def set_cell(self, i: int, j: int, m: int, v: int) -> None:
        if v < 0:
            raise Contradiction(
                (self.basis.name(i), self.basis.name(j), self.basis.name(m)),
                f"negative coefficient of {self.basis.name(m)} in "
                f"{self.basis.name(i)}*{self.basis.name(j)}",
            )
        pair = self._canon(i, j)
        row = self.cells[pair]
        if row[m] is not None:
            if row[m] != v:
                raise Contradiction(
                    (self.basis.name(i), self.basis.name(j), self.basis.name(m)),
                    f"conflicting values {row[m]} and {v} for coefficient of "
                    f"{self.basis.name(m)} in {self.basis.name(i)}*{self.basis.name(j)}",
                )
            return
        row[m] = v
        self._queue.append((pair[0], pair[1], m, v))
        if all(x is not None for x in row):
            rem = self.remainder_degree(pair)
            if rem != 0:
                raise Contradiction(
                    self.names(pair) + ("degree",),
                    f"completed product {self.basis.name(pair[0])}*{self.basis.name(pair[1])} "
                    f"misses the degree identity by {rem}",
                )
            self.known.add(pair)
            self.newly_known.append(pair)

    def orbit(self, i: int, j: int, m: int):
        """Closure of the coefficient position (i, j, m) under commutativity,
        the involution and the normalization symmetry (i, j, m) -> (jbar, m, i)."""
        seen = set()
        stack = [(i, j, m)]
        while stack:
            t = stack.pop()
            if t in seen:
                continue
            seen.add(t)
            a, b, c = t
            stack.append((b, a, c))
            stack.append((self.dual[a], self.dual[b], self.dual[c]))
            stack.append((self.dual[b], c, a))
        return seen


def _lemma22_bound(p: PartialTable, i: int, j: int) -> Optional[int]:
    """(x t, x t) <= 2 when x xbar = 1 + (degree-8 element) is known and
    t has degree 3 or 4."""
    for x, t in ((i, j), (j, i)):
        if p.deg[x] == 3 and p.deg[t] in (3, 4) and p.is_known(x, p.dual[x]):
            val = p.value(x, p.dual[x]).coeffs
            if val.get(0) == 1 and len(val) == 2:
                other = next(m for m in val if m != 0)
                if p.deg[other] == 8 and val[other] == 1:
                    return 2
    return None


class _Engine:
    def __init__(self, table: PartialTable, introduce_names: bool, max_steps: int):
        self.p = table
        self.naming = introduce_names
        self.max_steps = max_steps
        self.trace = DeductionTrace()
        self._budget_hit = False
        self._claimed: set[tuple[int, int]] = set()
        # constituent -> known pairs whose value contains it
        self._index: dict[int, list[tuple[int, int]]] = {m: [] for m in range(table.k)}
        self._partners: dict[int, set[int]] = {m: set() for m in range(table.k)}
        self._r3_todo: set[tuple[int, int, int]] = set()

    # -- bookkeeping -------------------------------------------------------

    def log(self, rule: str, triple, pair) -> None:
        n = len(self.trace.steps) + 1
        value = self.p.value(*pair)
        names = self.p.names(pair)
        t = tuple(triple) if triple else (names[0], names[1], "-")
        self.trace.steps.append(DeductionStep(n, rule, t, names, self._format(value)))
        if n >= self.max_steps:
            self._budget_hit = True

    def _format(self, x: Element) -> str:
        if not x:
            return "0"
        parts = []
        for m in sorted(x.coeffs):
            c = x.coeffs[m]
            name = self.p.basis.name(m)
            parts.append(name if c == 1 else f"{c} {name}")
        return " + ".join(parts)

    # -- R2 transport plus trigger maintenance -----------------------------

    def sync(self) -> None:
        """Drain coefficient transports and register newly known entries."""
        p = self.p
        while p._queue or p.newly_known:
            while p._queue:
                i, j, m, v = p._queue.pop(0)
                for (a, b, c) in p.orbit(i, j, m):
                    p.set_cell(a, b, c, v)
            batch, p.newly_known = p.newly_known, []
            for pair in batch:
                if pair not in self._claimed:
                    self.log("R2", None, pair)
                self._register_known(pair)
                self._lemma22_closure(pair)

    def _register_known(self, pair: tuple[int, int]) -> None:
        p = self.p
        a, b = pair
        self._partners[a].add(b)
        self._partners[b].add(a)
        for m, _ in p.value(a, b).items():
            self._index[m].append(pair)
        # triples that may have become decidable
        for (x, y) in ((a, b), (b, a)):
            for l in self._partners[y]:
                self._r3_todo.add((x, y, l))
            for i in self._partners[x]:
                self._r3_todo.add((i, x, y))
        # triples whose expansion contains the entry (a, b)
        for l, other in ((b, a), (a, b)):
            for (i, j) in self._index[other]:
                self._r3_todo.add((i, j, l))
                self._r3_todo.add((j, i, l))
            for (j, l2) in self._index[other]:
                self._r3_todo.add((l, j, l2))
                self._r3_todo.add((l, l2, j))

    # -- R1: pure degree rule ------------------------------------------------

    def r1_scan(self) -> bool:
        p = self.p
        fired = False
        for pair in p.pending_pairs():
            if pair in p.known:
                continue  # resolved by a sync within this scan
            row = p.cells[pair]
            rem = p.remainder_degree(pair)
            unknown = [m for m in range(p.k) if row[m] is None]
            if rem < 0:
                raise Contradiction(
                    p.names(pair) + ("degree",),
                    f"known part of {p.names(pair)} already exceeds the degree identity",
                )
            if rem == 0:
                self._claimed.add(pair)
                for m in unknown:
                    p.set_cell(pair[0], pair[1], m, 0)
                self.log("R1", None, pair)
                fired = True
                if self._budget_hit:
                    return fired
                self.sync()
                continue
            if unknown and min(p.deg[m] for m in unknown) > rem:
                raise Contradiction(
                    p.names(pair) + ("degree",),
                    f"remainder of degree {rem} in {p.names(pair)} cannot be met by any "
                    "undetermined constituent",
                )
        return fired

    # -- R3: associativity -----------------------------------------------------

    def r3_process(self) -> bool:
        fired = False
        while self._r3_todo:
            batch = sorted(self._r3_todo)
            self._r3_todo.clear()
            for (i, j, l) in batch:
                if self._r3_triple(i, j, l):
                    fired = True
                    if self._budget_hit:
                        return fired
                    self.sync()
        return fired

    def r3_full_sweep(self) -> bool:
        """Safety net: enqueue every currently checkable triple."""
        for j in range(self.p.k):
            for i in self._partners[j]:
                for l in self._partners[j]:
                    self._r3_todo.add((i, j, l))
        return self.r3_process()

    def _r3_triple(self, i: int, j: int, l: int) -> bool:
        p = self.p
        if not (p.is_known(i, j) and p.is_known(j, l)):
            return False
        known_part: dict[int, int] = {}
        unknown_net: dict[tuple[int, int], int] = {}

        def accumulate(factor_value: Element, other: int, sign: int):
            for m, c in factor_value.items():
                pair = p._canon(m, other)
                if pair in p.known:
                    row = p.cells[pair]
                    for n, w in enumerate(row):
                        if w:
                            known_part[n] = known_part.get(n, 0) + sign * c * w
                else:
                    unknown_net[pair] = unknown_net.get(pair, 0) + sign * c

        accumulate(p.value(i, j), l, +1)
        accumulate(p.value(j, l), i, -1)
        unknown_net = {pair: c for pair, c in unknown_net.items() if c != 0}
        names3 = (p.basis.name(i), p.basis.name(j), p.basis.name(l))
        if not unknown_net:
            if any(c != 0 for c in known_part.values()):
                bad = sorted(m for m, c in known_part.items() if c != 0)
                raise Contradiction(
                    names3,
                    f"associativity fails on triple {names3} at "
                    + ", ".join(p.basis.name(m) for m in bad),
                )
            return False
        if len(unknown_net) != 1:
            return False
        (pair, net), = unknown_net.items()
        if abs(net) != 1:
            return False
        solved: dict[int, int] = {}
        for m, c in known_part.items():
            value = -c * net
            if value < 0:
                raise Contradiction(
                    names3,
                    f"triple {names3} forces a negative coefficient of "
                    f"{p.basis.name(m)} in {p.basis.name(pair[0])}*{p.basis.name(pair[1])}",
                )
            if value:
                solved[m] = value
        self._claimed.add(pair)
        p.set_product(pair[0], pair[1], solved)
        self.log("R3", names3, pair)
        return True

    # -- R4 / R1b: inner-product constrained resolution --------------------------

    def _inner_exact(self, i: int, j: int) -> Optional[int]:
        p = self.p
        if p.is_known(i, p.dual[i]) and p.is_known(j, p.dual[j]):
            a = p.value(i, p.dual[i])
            b = p.value(j, p.dual[j])
            return sum(c * b[m] for m, c in a.items())
        return None

    def _reality_mass(self, i: int, j: int) -> Optional[int]:
        p = self.p
        for x, y in ((j, p.dual[i]), (p.dual[j], i)):
            if p.is_known(x, x) and p.is_known(y, y):
                a = p.value(x, x)
                b = p.value(y, y)
                return sum(c * b[m] for m, c in a.items())
        return None

    def _cross_inners(self, i: int, j: int):
        """Inner products of the pending entry (i, j) against known entries,
        via (b_i b_j, b_p b_q) = (b_j b_qbar, b_ibar b_p)."""
        p = self.p
        out = []
        seen = set()
        for (pp, qq) in p.known:
            if pp == 0:
                continue
            for (x, y) in ((pp, qq), (qq, pp)):
                if (x, y) in seen:
                    continue
                seen.add((x, y))
                kappa = None
                if p.is_known(j, p.dual[y]) and p.is_known(p.dual[i], x):
                    u = p.value(j, p.dual[y])
                    w = p.value(p.dual[i], x)
                    kappa = sum(c * w[m] for m, c in u.items())
                elif p.is_known(i, p.dual[x]) and p.is_known(p.dual[j], y):
                    u = p.value(i, p.dual[x])
                    w = p.value(p.dual[j], y)
                    kappa = sum(c * w[m] for m, c in u.items())
                if kappa is not None:
                    out.append((p.value(x, y), kappa))
        return out

    def solver_scan(self, naming_phase: bool) -> bool:
        p = self.p
        pending = p.pending_pairs()
        if naming_phase:
            # christen new names on the newest element's products first,
            # mirroring the order in which generators introduce constituents
            pending.sort(key=lambda q: (q[1], q[0]))
        for pair in pending:
            if self._conjugate_primary(pair) != pair:
                continue
            if self._solve_entry(pair, naming_phase):
                rule = "R1" if naming_phase else "R4"
                self.log(rule, None, pair)
                if not self._budget_hit:
                    self.sync()
                return True
        return False

    def _conjugate_primary(self, pair: tuple[int, int]) -> tuple[int, int]:
        p = self.p
        other = p._canon(p.dual[pair[0]], p.dual[pair[1]])
        return min(pair, other)

    def _solve_entry(self, pair: tuple[int, int], naming_phase: bool) -> bool:
        p = self.p
        i, j = pair
        row = p.cells[pair]
        rem = p.remainder_degree(pair)
        unknown = [m for m in range(p.k) if row[m] is None]
        if not unknown or rem <= 0:
            return False
        s_exact = self._inner_exact(i, j)
        s_upper = _lemma22_bound(p, i, j) if s_exact is None else None
        sigma2 = sum(v * v for v in row if v)
        if s_exact is not None and sigma2 > s_exact:
            raise Contradiction(
                p.names(pair) + ("inner",),
                f"{p.names(pair)} already exceeds its inner product {s_exact}",
            )
        if s_upper is not None and sigma2 >= s_upper:
            raise Contradiction(
                p.names(pair) + ("inner-bound",),
                f"{p.names(pair)} has a nonzero remainder but its inner product "
                f"is capped at {s_upper}",
            )
        budget2 = None
        if s_exact is not None:
            budget2 = s_exact - sigma2
        elif s_upper is not None:
            budget2 = s_upper - sigma2
        candidates = [m for m in unknown if p.deg[m] <= rem]
        if not candidates:
            return False  # r1_scan raises on the impossible case
        if budget2 is None and rem // min(p.deg[m] for m in candidates) > 3:
            return False
        r_mass = self._reality_mass(i, j)

        def full_vector(assign: dict[int, int]) -> dict[int, int]:
            vec = {m: v for m, v in enumerate(row) if v}
            for m, c in assign.items():
                if c:
                    vec[m] = vec.get(m, 0) + c
            return vec

        def base_consistent(assign: dict[int, int]) -> bool:
            vec = full_vector(assign)
            if s_exact is not None and sum(c * c for c in vec.values()) != s_exact:
                return False
            if s_upper is not None and sum(c * c for c in vec.values()) > s_upper:
                return False
            if r_mass is not None:
                if sum(c * vec.get(p.dual[m], 0) for m, c in vec.items()) != r_mass:
                    return False
            return True

        solutions: list[dict[int, int]] = []
        nodes = 0

        def dfs(idx: int, deg_left: int, sq_left: Optional[int], assign: dict[int, int]):
            nonlocal nodes
            nodes += 1
            if nodes > SOLVER_NODE_CAP or len(solutions) > SOLVER_SOLUTION_CAP:
                raise _SolverOverflow
            if deg_left == 0:
                if base_consistent(assign):
                    solutions.append(dict(assign))
                return
            if idx == len(candidates):
                return
            m = candidates[idx]
            dm = p.deg[m]
            top = deg_left // dm
            if sq_left is not None:
                while top * top > sq_left:
                    top -= 1
            for c in range(top, -1, -1):
                if c:
                    assign[m] = c
                else:
                    assign.pop(m, None)
                nsq = sq_left - c * c if sq_left is not None else None
                dfs(idx + 1, deg_left - c * dm, nsq, assign)
            assign.pop(m, None)

        try:
            dfs(0, rem, budget2, {})
        except _SolverOverflow:
            return False
        if not solutions:
            raise Contradiction(
                p.names(pair) + ("no-decomposition",),
                f"no decomposition of the remainder of {p.names(pair)} satisfies the "
                "inner-product constraints",
            )
        if len(solutions) > 1:
            crosses = self._cross_inners(i, j)
            if crosses:
                filtered = []
                for assign in solutions:
                    vec = full_vector(assign)
                    if all(
                        sum(c * f[m] for m, c in vec.items()) == kappa for f, kappa in crosses
                    ):
                        filtered.append(assign)
                if not filtered:
                    raise Contradiction(
                        p.names(pair) + ("no-decomposition",),
                        f"no decomposition of the remainder of {p.names(pair)} matches its "
                        "inner products against known products",
                    )
                solutions = filtered
        chosen: Optional[dict[int, int]] = None
        if len(solutions) == 1:
            chosen = solutions[0]
        elif naming_phase and self.naming:
            chosen = self._canonical_naming(solutions)
        if chosen is None:
            return False
        self._claimed.add(pair)
        p.set_product(i, j, full_vector(chosen))
        return True

    def _canonical_naming(self, solutions: list[dict[int, int]]) -> Optional[dict[int, int]]:
        """Pick the least-indexed assignment when every other solution is the
        image of it under a basis relabeling that fixes all current knowledge.

        Choosing among such solutions is the usual "name the new constituent"
        convention: the alternatives describe the same table up to renaming
        elements the current state cannot tell apart."""
        best = min(solutions, key=lambda s: tuple(sorted(s.items())))
        for other in solutions:
            if other == best:
                continue
            perm = self._matching_relabeling(best, other)
            if perm is None or not self._fixes_knowledge(perm):
                return None
        return best

    def _matching_relabeling(
        self, a: dict[int, int], b: dict[int, int]
    ) -> Optional[dict[int, int]]:
        """Degree- and duality-respecting involution mapping solution a to b,
        identity outside the differing elements; None if the shapes differ."""
        p = self.p
        diff_a = sorted(m for m in a if a.get(m) != b.get(m))
        diff_b = sorted(m for m in b if a.get(m) != b.get(m))
        perm = {m: m for m in range(p.k)}

        def groups(diff, sol):
            out: dict[tuple, list[int]] = {}
            for m in diff:
                out.setdefault((p.deg[m], m == p.dual[m], sol[m]), []).append(m)
            return out

        ga, gb = groups(diff_a, a), groups(diff_b, b)
        if set(ga) != set(gb) or any(len(ga[k]) != len(gb[k]) for k in ga):
            return None
        swaps: dict[int, int] = {}
        for key in ga:
            for x, y in zip(sorted(ga[key]), sorted(gb[key])):
                for s, t in ((x, y), (y, x), (p.dual[x], p.dual[y]), (p.dual[y], p.dual[x])):
                    if s in swaps and swaps[s] != t:
                        return None
                    swaps[s] = t
        perm.update(swaps)
        if sorted(perm.values()) != list(range(p.k)):
            return None
        if any(perm[p.dual[m]] != p.dual[perm[m]] for m in range(p.k)):
            return None
        if any(p.deg[perm[m]] != p.deg[m] for m in range(p.k)):
            return None
        if {perm[m]: c for m, c in a.items()} != b:
            return None
        return perm

    def _fixes_knowledge(self, perm: dict[int, int]) -> bool:
        """True when every determined cell maps to an equal determined cell."""
        p = self.p
        for (i, j), row in p.cells.items():
            pi, pj = perm[i], perm[j]
            image_row = p.cells[p._canon(pi, pj)]
            for m, v in enumerate(row):
                if v is None:
                    continue
                if image_row[perm[m]] != v:
                    return False
        return True

    def _lemma22_closure(self, pair: tuple[int, int]) -> None:
        """When (x t, x t) = 2 with x xbar = 1 + n8 and both factors of
        degree 3, conclude t tbar = 1 + n8."""
        p = self.p
        i, j = pair
        if p.deg[i] != 3 or p.deg[j] != 3 or pair[0] == 0:
            return
        value = p.value(i, j)
        if sum(c * c for c in value.coeffs.values()) != 2:
            return
        for x, t in ((i, j), (j, i)):
            if p.is_known(x, p.dual[x]) and not p.is_known(t, p.dual[t]):
                base = p.value(x, p.dual[x]).coeffs
                if base.get(0) == 1 and len(base) == 2:
                    n8 = next(m for m in base if m != 0)
                    if p.deg[n8] == 8 and base[n8] == 1:
                        tpair = p._canon(t, p.dual[t])
                        self._claimed.add(tpair)
                        p.set_product(t, p.dual[t], {0: 1, n8: 1})
                        self.log("R4", None, tpair)

    # -- main loop -----------------------------------------------------------

    def run(self) -> None:
        p = self.p
        try:
            # everything known at seed time triggers the initial agenda
            p.newly_known = sorted(p.known)
            self._claimed.update(p.known)
            self.sync()
            while not self._budget_hit:
                if self.r1_scan():
                    continue
                if self.r3_process():
                    continue
                if self.solver_scan(naming_phase=False):
                    continue
                if self.naming and self.solver_scan(naming_phase=True):
                    continue
                if self.r3_full_sweep():
                    continue
                break
        except Contradiction as c:
            self.trace.status = "contradiction"
            self.trace.witness = c.witness
            self.trace.message = str(c)
            return
        pending = p.pending_pairs()
        if pending:
            self.trace.status = "stalled"
            self.trace.unresolved = tuple(p.names(q) for q in pending)
            self.trace.budget_exhausted = self._budget_hit
        else:
            self.trace.status = "completed"


def propagate(
    table: PartialTable, max_steps: int = 1_000_000, introduce_names: bool = False
) -> tuple[PartialTable, DeductionTrace]:
    """Fixed point of R1-R4 on a copy of the table.

    With ``introduce_names`` False every written entry is forced, so a
    seed drawn from a consistent algebra only ever derives that algebra's
    values.  The trace records one step per completed entry.
    """
    work = table.copy()
    engine = _Engine(work, introduce_names=introduce_names, max_steps=max_steps)
    engine.run()
    return work, engine.trace


def complete_or_refute(
    table: PartialTable, max_steps: int = 1_000_000, introduce_names: bool = False
) -> DeductionTrace:
    """Run propagation to its fixed point and classify the outcome."""
    if max_steps <= 0:
        raise TableAlgebraError("max_steps must be positive")
    _, trace = propagate(table, max_steps=max_steps, introduce_names=introduce_names)
    return trace
