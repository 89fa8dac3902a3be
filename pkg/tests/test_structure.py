import pytest
from hypothesis import given, settings, strategies as st

from tabalg import (
    BasisElement,
    TableAlgebra,
    TableBasis,
    all_closed_subsets,
    closure,
    is_group_like,
    power_supports,
    quotient_by,
)
from tabalg.structure import ClosedSubset

from oracles import class_algebra_tensor, cyclic, klein_four, subgroup_class_unions, symmetric3

C_NAMES = {"1", "b8", "x10", "b5", "c5", "c8", "x9"}
E_NAMES = C_NAMES | {"r3", "s6", "t15", "d9", "y3"}
D_NAMES = C_NAMES | {"c3", "c3bar", "d3", "d3bar", "c9", "c9bar", "b6", "b6bar", "y15", "y15bar"}


def oracle_algebra(group):
    sizes, duals, tensor = class_algebra_tensor(group)
    names = ["1"] + [f"c{i}" for i in range(1, len(sizes))]
    basis = TableBasis(
        [BasisElement(i, n, s, d) for i, (n, s, d) in enumerate(zip(names, sizes, duals))]
    )
    return TableAlgebra.from_tensor(basis, tensor, name=group.name + "-oracle")


class TestClosure:
    def test_b8_generates_C(self, B32):
        s = closure(B32, ["b8"])
        assert set(s.names(B32)) == C_NAMES

    def test_identity_generates_itself(self, B32):
        assert closure(B32, ["1"]).members == (0,)

    def test_b3_is_faithful(self, B32):
        assert len(closure(B32, ["b3"])) == 32

    def test_members_recheck(self, B32):
        assert closure(B32, ["c3"]).verify(B32)
        assert not ClosedSubset((0, 1)).verify(B32)

    @settings(max_examples=20, deadline=None)
    @given(data=st.data())
    def test_monotone_and_idempotent(self, B32, data):
        seed_s = data.draw(st.sets(st.integers(0, 31), min_size=1, max_size=3))
        seed_t = seed_s | data.draw(st.sets(st.integers(0, 31), max_size=2))
        cs = closure(B32, seed_s)
        ct = closure(B32, seed_t)
        assert set(cs.members) <= set(ct.members)
        assert closure(B32, cs.members).members == cs.members


class TestLattice:
    def test_B32_lattice(self, B32):
        subsets = all_closed_subsets(B32)
        by_size = {len(s): set(s.names(B32)) for s in subsets}
        assert sorted(by_size) == [1, 7, 12, 17, 32]
        assert by_size[7] == C_NAMES
        assert by_size[12] == E_NAMES
        assert by_size[17] == D_NAMES

    def test_B22_lattice(self, B22):
        subsets = all_closed_subsets(B22)
        assert [len(s) for s in subsets] == [1, 7, 12, 22]

    def test_D_and_E_are_maximal_with_intersection_C(self, B32):
        subsets = all_closed_subsets(B32)
        d = next(s for s in subsets if len(s) == 17)
        e = next(s for s in subsets if len(s) == 12)
        # nothing strictly between D (or E) and the whole basis
        for s in subsets:
            assert not (17 < len(s) < 32)
            assert not (12 < len(s) < 32 and set(s.members) > set(e.members))
        assert set(d.members) & set(e.members) == set(closure(B32, ["b8"]).members)

    def test_trivial_algebra(self):
        basis = TableBasis([BasisElement(0, "1", 1, 0)])
        A = TableAlgebra.from_products(basis, {}, name="unit")
        assert [s.members for s in all_closed_subsets(A)] == [(0,)]

    def test_group_lattice_matches_subgroup_oracle(self):
        for group in (cyclic(6), symmetric3()):
            A = oracle_algebra(group)
            ours = {frozenset(s.members) for s in all_closed_subsets(A)}
            oracle = {frozenset(s) for s in subgroup_class_unions(group)}
            assert ours == oracle, group.name

    def test_z6_lattice_is_divisor_lattice(self):
        A = oracle_algebra(cyclic(6))
        assert sorted(len(s) for s in all_closed_subsets(A)) == [1, 2, 3, 6]


class TestPowers:
    def test_table1_rows(self, B32):
        table = power_supports(B32, "b3", 10)
        names = lambda n: {B32.basis.name(i) for i in table.row(n)}
        assert names(2) == {"c3", "b6"}
        assert names(3) == {"r3", "s6", "t15"}
        assert names(4) == {"c3bar", "b6bar", "y15bar", "c9bar"}
        assert names(5) == {"b3bar", "x6bar", "x15bar", "b9bar", "z3"}
        assert names(6) == C_NAMES
        assert names(7) == {"b3", "x6", "x15", "b9", "z3bar"}
        assert names(8) == {"c3", "b6", "y15", "c9", "d3bar"}
        assert names(9) == {"r3", "s6", "t15", "d9", "y3"}
        assert names(10) == {"c3bar", "b6bar", "y15bar", "c9bar", "d3"}

    def test_table2_rows(self, B22):
        table = power_supports(B22, "b3", 7)
        names = lambda n: {B22.basis.name(i) for i in table.row(n)}
        assert names(1) == {"b3"}
        assert names(2) == {"r3", "s6"}
        assert names(3) == {"b3bar", "t6", "b15bar"}
        assert names(4) == C_NAMES
        assert names(5) == {"b3", "t6bar", "b15", "y9", "x3"}
        assert names(6) == {"r3", "s6", "t15", "d9", "y3"}
        assert names(7) == {"b3bar", "t6", "b15bar", "y9bar", "x3bar"}

    def test_identity_powers(self, B32):
        table = power_supports(B32, "1", 4)
        assert all(s == frozenset({0}) for _, s in table.rows)


class TestQuotient:
    def test_B32_mod_C_is_Z6(self, B32):
        q = quotient_by(B32, closure(B32, ["b8"]))
        assert q.size == 6
        g = is_group_like(q)
        assert g is not None and g.invariant_factors == (6,)
        assert g.description == "cyclic(6)"

    def test_B22_mod_C_is_Z4(self, B22):
        q = quotient_by(B22, closure(B22, ["b8"]))
        assert q.size == 4
        g = is_group_like(q)
        assert g is not None and g.invariant_factors == (4,)

    def test_quotient_by_trivial(self, B32):
        q = quotient_by(B32, ClosedSubset((0,)))
        assert q.size == 32
        # composition = support products
        idx = B32.basis.index_of
        p = q.class_of[idx("b3")]
        r = q.class_of[idx("b3bar")]
        got = {q.classes[c][0] for c in q.compose(p, r)}
        assert got == set(B32.basis_product(idx("b3"), idx("b3bar")).support())

    def test_quotient_by_everything(self, B32):
        q = quotient_by(B32, closure(B32, ["b3"]))
        assert q.size == 1

    def test_klein_four_quotient(self):
        A = oracle_algebra(klein_four())
        q = quotient_by(A, ClosedSubset((0,)))
        g = is_group_like(q)
        assert g is not None and g.invariant_factors == (2, 2)
        assert g.description == "cyclic(2) x cyclic(2)"

    def test_not_group_like(self, B32):
        # modding by the trivial subset leaves multi-valued composition
        q = quotient_by(B32, ClosedSubset((0,)))
        assert is_group_like(q) is None

    def test_class_labels_lex_least(self, B32):
        q = quotient_by(B32, closure(B32, ["b8"]))
        assert q.labels[q.identity_class] == "1"
        for label, members in zip(q.labels, q.classes):
            assert label == min(B32.basis.name(m) for m in members)
