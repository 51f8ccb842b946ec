import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lca_forge.relations import (
    Constraint,
    Relation,
    TaxonPair,
    Universe,
    as_pair,
    first_symmetric_pair,
    is_asymmetric,
    is_cross_consistent,
    is_f_csym,
    is_transitive,
    relation,
    support,
    support_plus,
    transitive_closure,
)


class TestPairs:
    def test_pair_is_unordered(self):
        assert TaxonPair("y", "x") == TaxonPair("x", "y")
        assert str(TaxonPair("y", "x")) == "xy"

    def test_singleton(self):
        assert TaxonPair("a", "a").is_singleton
        assert as_pair("a") == TaxonPair("a", "a")

    @pytest.mark.parametrize("text", ["ab", "a b", "b-a", ("b", "a")])
    def test_as_pair_forms(self, text):
        assert as_pair(text) == TaxonPair("a", "b")

    def test_long_names_use_dash(self):
        assert str(TaxonPair("t10", "t02")) == "t02-t10"

    def test_constraint_reversed(self):
        c = Constraint("xy", "ab")
        assert c.reversed() == Constraint("ab", "xy")
        assert str(c) == "(xy,ab)"


class TestUniverse:
    def test_pair_indexing_is_lexicographic(self):
        u = Universe("cab")
        assert [str(p) for p in u.pairs] == ["aa", "ab", "ac", "bb", "bc", "cc"]
        assert u.pid("ca") == 2

    def test_size(self):
        assert Universe("abcd").n_pairs == 10

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Universe([])

    def test_unknown_taxon(self):
        with pytest.raises(KeyError):
            Universe("ab").pid("az")


class TestRelation:
    u = Universe("abxy")

    def test_membership_and_len(self):
        r = relation(self.u, ("xy", "ab"), ("ay", "ay"))
        assert ("xy", "ab") in r
        assert ("ab", "xy") not in r
        assert len(r) == 2

    def test_set_algebra(self):
        r = relation(self.u, ("xy", "ab"))
        s = relation(self.u, ("ab", "xy"))
        assert len(r | s) == 2
        assert not (r & s)
        assert (r | s) - s == r
        assert r <= r | s and not (r | s) <= r

    def test_support(self):
        r = relation(self.u, ("xy", "ab"))
        assert support(r) == {TaxonPair("x", "y"), TaxonPair("a", "b")}
        assert len(support_plus(r)) == 6

    def test_restrict(self):
        r = relation(self.u, ("xy", "ab"), ("xy", "ay"))
        kept = r.restrict(self.u.mask_of(["xy", "ab"]))
        assert kept == relation(self.u, ("xy", "ab"))

    def test_transitive_closure_chain(self):
        r = relation(self.u, ("aa", "ab"), ("ab", "xy"), ("xy", "ay"))
        tc = transitive_closure(r)
        assert ("aa", "ay") in tc
        assert is_transitive(tc)
        assert len(tc) == 6

    def test_asymmetry(self):
        assert is_asymmetric(relation(self.u, ("xy", "ab")))
        assert not is_asymmetric(relation(self.u, ("ay", "ay")))
        sym = first_symmetric_pair(relation(self.u, ("xy", "ab"), ("ab", "xy")))
        assert sym is not None

    def test_cross_consistency(self):
        # a and b both occur below xy, so ab must too
        r = relation(self.u, ("aa", "xy"), ("bb", "xy"), ("ab", "ab"))
        assert not is_cross_consistent(r)

    def test_f_csym(self):
        r = relation(self.u, ("xy", "ab"))
        assert not is_f_csym(r, r)
        assert is_f_csym(r | r.transpose(), r)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=12))
def test_transitive_closure_matches_naive(items):
    u = Universe("abcd")
    r = Relation.from_index_pairs(u, items)
    naive = set(items)
    while True:
        extra = {(a, d) for a, b in naive for c, d in naive if b == c} - naive
        if not extra:
            break
        naive |= extra
    assert set(transitive_closure(r).index_pairs()) == naive
