"""Quotient poset of a closure, its Hasse diagram and the canonical DAG."""

from __future__ import annotations

from dataclasses import dataclass

from .closure import cl_f
from .dag import Dag
from .relations import Constraint, Relation, TaxonPair, iter_bits, support_plus_mask


class Y1Violation(ValueError):
    def __init__(self, constraint: Constraint):
        super().__init__(f"closure contains {constraint}: a pair lies below a singleton")
        self.constraint = constraint


def y1_violation(closure: Relation) -> Constraint | None:
    """First ``(ab, xx)`` with ``ab != xx`` in ``closure`` (by pair index)."""
    u = closure.universe
    cols = closure.columns()
    hits = []
    for t in range(len(u)):
        s = u.pair_id(t, t)
        below = cols[s] & ~(1 << s)
        if below:
            hits.append((next(iter_bits(below)), s))
    if not hits:
        return None
    i, j = min(hits)
    return Constraint(u.pairs[i], u.pairs[j])


@dataclass(frozen=True)
class QuotientPoset:
    closure: Relation
    class_masks: tuple[int, ...]
    class_of_pair: dict[int, int]
    up: tuple[int, ...]

    @property
    def classes(self) -> list[frozenset[TaxonPair]]:
        u = self.closure.universe
        return [frozenset(u.pairs_of(m)) for m in self.class_masks]

    def __len__(self) -> int:
        return len(self.class_masks)

    def members(self, k: int) -> list[TaxonPair]:
        return self.closure.universe.pairs_of(self.class_masks[k])

    def representative(self, k: int) -> TaxonPair:
        return self.closure.universe.pairs[next(iter_bits(self.class_masks[k]))]

    def leq(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    def strictly_above(self, k: int) -> int:
        return self.up[k] & ~(1 << k)


def quotient_poset(closure: Relation) -> QuotientPoset:
    """Mutual-reachability classes over supp+ of a transitive, supp+-reflexive
    closure, ordered by their smallest member."""
    supp = support_plus_mask(closure)
    rows = closure.rows
    cols = closure.columns()
    masks: list[int] = []
    of_pair: dict[int, int] = {}
    for p in iter_bits(supp):
        if p in of_pair:
            continue
        cls = (rows[p] & cols[p] & supp) | 1 << p
        for q in iter_bits(cls):
            of_pair[q] = len(masks)
        masks.append(cls)
    up = []
    for m in masks:
        rep = next(iter_bits(m))
        row = 0
        for q in iter_bits(rows[rep] | 1 << rep):
            row |= 1 << of_pair[q]
        up.append(row)
    return QuotientPoset(closure, tuple(masks), of_pair, tuple(up))


def hasse_diagram(q: QuotientPoset) -> list[tuple[int, int]]:
    """Cover arcs ``(A, B)`` with ``B < A``, oriented from larger to smaller."""
    arcs = []
    for b in range(len(q)):
        above = q.strictly_above(b)
        implied = 0
        for c in iter_bits(above):
            implied |= q.strictly_above(c)
        for a in iter_bits(above & ~implied):
            arcs.append((a, b))
    return sorted(arcs)


@dataclass(frozen=True)
class CanonicalDag:
    dag: Dag
    class_of_vertex: dict[int, int]
    poset: QuotientPoset


def canonical_dag(r: Relation, f: Relation, *, closure: Relation | None = None) -> CanonicalDag:
    """Hasse diagram of the quotient poset of cl_F(R), each singleton class
    relabelled as its leaf. Vertex ``k`` is class ``k``.

    Refuses with :class:`Y1Violation` when some pair sits below a singleton,
    since the relabelling would then be ill-defined.
    """
    if closure is None:
        closure = cl_f(r, f).closure
    bad = y1_violation(closure)
    if bad is not None:
        raise Y1Violation(bad)
    q = quotient_poset(closure)
    u = closure.universe
    labels: dict[int, str] = {}
    tags: dict[int, str] = {}
    for k in range(len(q)):
        members = q.members(k)
        rep = members[0]
        if rep.is_singleton:
            labels[k] = rep.lo
        else:
            tags[k] = "class:" + ",".join(str(p) for p in members)
    g = Dag(u, hasse_diagram(q), labels, vertices=range(len(q)), tags=tags)
    return CanonicalDag(g, {k: k for k in range(len(q))}, q)
