import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import golden, mixed_instance
from lca_forge.canonical import (
    QuotientPoset,
    Y1Violation,
    canonical_dag,
    hasse_diagram,
    quotient_poset,
)
from lca_forge.closure import cl_empty, cl_f
from lca_forge.decide import check_y1
from lca_forge.relations import Relation, Universe, relation, transitive_closure
from lca_forge.verify import verify_rf


def _class_names(q: QuotientPoset) -> list[str]:
    return [",".join(str(p) for p in q.members(k)) for k in range(len(q))]


class TestQuotient:
    def test_merging_symmetry_merges_under_f(self):
        _, r, f = golden("merging_symmetry")
        assert "xz,yz" in _class_names(quotient_poset(cl_f(r, f).closure))

    def test_merging_symmetry_separate_without_f(self):
        _, r, _ = golden("merging_symmetry")
        names = _class_names(quotient_poset(cl_empty(r).closure))
        assert "xz" in names and "yz" in names

    def test_empty_relation_gives_singletons(self):
        u = Universe("abc")
        q = quotient_poset(cl_empty(Relation.empty(u)).closure)
        assert _class_names(q) == ["aa", "bb", "cc"]
        assert hasse_diagram(q) == []

    def test_chain_has_two_covers(self):
        u = Universe("abc")
        q = quotient_poset(cl_empty(relation(u, ("aa", "ab"), ("ab", "ac"))).closure)
        chain = [q.class_of_pair[u.pid(p)] for p in ("aa", "ab", "ac")]
        arcs = hasse_diagram(q)
        assert (chain[1], chain[0]) in arcs and (chain[2], chain[1]) in arcs
        assert (chain[2], chain[0]) not in arcs


class TestCanonicalDag:
    def test_closed_support_structure(self):
        _, r, f = golden("closed_support")
        c = canonical_dag(r, f)
        g = c.dag
        assert sorted(g.tags.values()) == ["class:ab,ay", "class:xy"]
        xy, top = g.lca("xy"), g.lca("ab")
        assert g.lca("ay") == top
        assert set(g.children[top]) == {g.leaf_of["a"], g.leaf_of["b"], xy}
        assert set(g.children[xy]) == {g.leaf_of["x"], g.leaf_of["y"]}

    def test_idle_symmetry_realizes(self):
        _, r, f = golden("idle_symmetry")
        c = canonical_dag(r, f)
        assert c.dag == canonical_dag(r, Relation.empty(r.universe)).dag
        assert verify_rf(c.dag, r, f).ok

    def test_merging_symmetry_merged_lca(self):
        _, r, f = golden("merging_symmetry")
        g = canonical_dag(r, f).dag
        assert g.lca("xz") == g.lca("yz")
        plain = canonical_dag(r, Relation.empty(r.universe)).dag
        assert not verify_rf(plain, r, f).ok

    def test_needs_extension_realizes_only_restricted(self):
        _, r, f = golden("needs_extension")
        g = canonical_dag(r, f).dag
        assert verify_rf(g, r, Relation.empty(r.universe)).ok
        assert not verify_rf(g, r, f).ok

    def test_refuses_y1_violation(self):
        u = Universe("xy")
        with pytest.raises(Y1Violation) as err:
            canonical_dag(relation(u, ("xy", "xx")), Relation.empty(u))
        assert str(err.value.constraint) == "(xy,xx)"


def _instance(seed):
    rng = random.Random(seed)
    while True:
        u, r, f = mixed_instance(rng, 5)
        if check_y1(r, f) is None:
            return u, r, f


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_canonical_lca_identities(seed):
    u, r, f = _instance(seed)
    res = cl_f(r, f)
    c = canonical_dag(r, f)
    g = c.dag
    q = c.poset
    for x in u.taxa:
        assert g.lca_vertices(u.pair(x)) == {g.leaf_of[x]}
    for p, k in q.class_of_pair.items():
        pair = u.pairs[p]
        if not pair.is_singleton:
            assert g.lca_vertices(pair) == {k}
    # lca order on the support agrees with the closure
    for p in q.class_of_pair:
        for s in q.class_of_pair:
            below = g.reach.below(g.lca(u.pairs[p]), g.lca(u.pairs[s]))
            assert below == res.closure.has(p, s)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_closure_invariance_and_hasse(seed):
    u, r, f = _instance(seed)
    cl = cl_f(r, f).closure
    assert canonical_dag(r, f).dag == canonical_dag(cl, f).dag
    q = quotient_poset(cl)
    n = len(q)
    reach = {(b, a) for a, b in hasse_diagram(q)}
    changed = True
    while changed:
        extra = {(x, z) for x, y in reach for y2, z in reach if y == y2} - reach
        reach |= extra
        changed = bool(extra)
    strict = {(a, b) for a in range(n) for b in range(n) if a != b and q.leq(a, b)}
    assert reach == strict
    assert transitive_closure(r) <= cl
