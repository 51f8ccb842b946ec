import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import golden
from lca_forge.canonical import canonical_dag
from lca_forge.closure import cl_f
from lca_forge.dag import (
    Dag,
    DagError,
    PreconditionError,
    fr_extension,
    induced_relation,
    is_network,
    is_phylogenetic,
    is_two_lca_relevant,
    lca_set,
    saturated_witness,
    to_network,
    xy_extension,
)
from lca_forge.relations import Relation, Universe, relation
from lca_forge.verify import random_dag_sampler


def star(taxa="abc"):
    u = Universe(taxa)
    root = len(taxa)
    return Dag(u, [(root, k) for k in range(len(taxa))], dict(enumerate(u.taxa)))


class TestConstruction:
    def test_single_leaf(self):
        g = Dag(Universe("x"), [], {0: "x"})
        assert g.reach.below(0, 0)
        assert is_phylogenetic(g) and is_two_lca_relevant(g)

    def test_cycle_rejected(self):
        u = Universe("a")
        with pytest.raises(DagError, match="cycle"):
            Dag(u, [(1, 2), (2, 1), (1, 0)], {0: "a"})

    def test_labelled_internal_rejected(self):
        u = Universe("ab")
        with pytest.raises(DagError):
            Dag(u, [(0, 1)], {0: "a", 1: "b"})

    def test_unlabelled_leaf_rejected(self):
        u = Universe("a")
        with pytest.raises(DagError):
            Dag(u, [(1, 0), (1, 2)], {0: "a"})

    def test_missing_taxon_rejected(self):
        with pytest.raises(DagError):
            Dag(Universe("ab"), [], {0: "a"})


class TestLca:
    def test_path(self):
        u = Universe("w")
        g = Dag(u, [(0, 1), (1, 2)], {2: "w"})
        assert g.reach.below(2, 0) and not g.reach.below(0, 2)

    def test_singleton_is_leaf(self):
        g = star()
        assert lca_set(g, "aa").lca_set == {0}

    def test_star_root(self):
        ans = lca_set(star(), "bc")
        assert ans.well_defined and ans.vertex == 3

    def test_no_common_ancestor(self):
        g = Dag(Universe("ab"), [], {0: "a", 1: "b"})
        ans = lca_set(g, "ab")
        assert not ans.lca_set and ans.vertex is None

    def test_star_two_lca_relevant(self):
        assert is_two_lca_relevant(star())

    def test_closed_support_canonical_reachability(self):
        _, r, f = golden("closed_support")
        g = canonical_dag(r, f).dag
        assert g.reach.below(g.leaf_of["a"], g.lca("ay"))


class TestExtensions:
    def test_xy_extension_breaks_uniqueness(self):
        g = xy_extension(star(), "ab")
        # the old root and both new parents are incomparable common ancestors
        assert lca_set(g, "ab").lca_set == {3, 4, 5}
        assert lca_set(g, "bc").lca_set == lca_set(star(), "bc").lca_set
        assert not is_two_lca_relevant(g)
        assert {g.tags[v] for v in g.vertices if v >= 4} == {"ext:ab"}

    def test_xy_extension_needs_distinct_taxa(self):
        with pytest.raises(PreconditionError):
            xy_extension(star(), "aa")

    def test_fr_extension_needs_extension_single(self):
        _, r, f = golden("needs_extension")
        g = canonical_dag(r, f).dag
        h = fr_extension(g, r, f)
        assert len(h.vertices) == len(g.vertices) + 2
        assert set(h.tags.values()) - set(g.tags.values()) == {"ext:ay"}

    def test_fr_extension_noop(self):
        _, r, f = golden("closed_support")
        g = canonical_dag(r, f).dag
        assert fr_extension(g, r, f) is g
        assert fr_extension(g, r, Relation.empty(r.universe)) is g

    def test_to_network(self):
        g = Dag(Universe("ab"), [(2, 0), (3, 1), (2, 1), (3, 0)], {0: "a", 1: "b"})
        n = to_network(g)
        assert is_network(n) and n.tags[n.roots[0]] == "rho"
        assert to_network(n) is n

    def test_needs_extension_network(self):
        _, r, f = golden("needs_extension")
        n = to_network(fr_extension(canonical_dag(r, f).dag, r, f))
        assert is_network(n) and is_phylogenetic(n)

    def test_path_not_phylogenetic(self):
        assert not is_phylogenetic(Dag(Universe("x"), [(1, 0)], {0: "x"}))


class TestSaturatedWitness:
    @pytest.mark.parametrize("name", ["idle_symmetry", "closed_support"])
    def test_induced_equals_closure(self, name):
        _, r, f = golden(name)
        g = saturated_witness(r, f, canonical_dag(r, f))
        assert induced_relation(g) == cl_f(r, f).closure

    def test_full_support_is_unchanged(self):
        u = Universe("ab")
        r = relation(u, ("aa", "ab"), ("bb", "ab"))
        c = canonical_dag(r, Relation.empty(u))
        assert saturated_witness(r, Relation.empty(u), c) == c.dag

    def test_rejects_unrealizable(self):
        u = Universe("xy")
        r = relation(u, ("xy", "xx"), ("xx", "xy"))
        with pytest.raises(PreconditionError):
            saturated_witness(r, Relation.empty(u), None)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_extension_preserves_old_order_and_other_lcas(seed):
    rng = random.Random(seed)
    u = Universe("abcd")
    g = random_dag_sampler(u, rng.randint(1, 6), seed)
    p = rng.choice([p for p in u.pairs if not p.is_singleton])
    h = xy_extension(g, p)
    for v in g.vertices:
        for w in g.vertices:
            assert g.reach.below(v, w) == h.reach.below(v, w)
    for q in u.pairs:
        if q != p:
            assert lca_set(g, q).lca_set == lca_set(h, q).lca_set
    assert len(lca_set(h, p).lca_set) >= 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_extensions_commute(seed):
    rng = random.Random(seed)
    u = Universe("abcd")
    g = random_dag_sampler(u, rng.randint(1, 6), seed)
    p, q = rng.sample([p for p in u.pairs if not p.is_singleton], 2)
    assert induced_relation(xy_extension(xy_extension(g, p), q)) == induced_relation(
        xy_extension(xy_extension(g, q), p)
    )


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_to_network_keeps_welldefined_lcas(seed):
    g = random_dag_sampler(Universe("abcd"), 5, seed)
    n = to_network(g)
    assert is_network(n)
    for p in g.universe.pairs:
        if g.lca(p) is not None:
            assert n.lca(p) == g.lca(p)
    if is_phylogenetic(g):
        assert is_phylogenetic(n)
