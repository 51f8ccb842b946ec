"""DAGs on a taxon set: reachability, LCAs, the induced relation and the
extensions used to build witnesses."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property

from .relations import (
    PairLike,
    Relation,
    TaxonPair,
    Universe,
    iter_bits,
    support_mask,
    support_plus_mask,
)


class DagError(ValueError):
    """The vertex/arc data does not describe a DAG on the universe."""


class PreconditionError(ValueError):
    pass


class Reachability:
    """Descendant/ancestor bitsets over dense vertex positions."""

    def __init__(self, order: tuple[int, ...], desc: list[int], anc: list[int]):
        self.order = order
        self.pos = {v: k for k, v in enumerate(order)}
        self.desc = desc
        self.anc = anc

    def below(self, v: int, u: int) -> bool:
        """``v`` is a descendant of ``u`` (reflexive)."""
        return bool(self.desc[self.pos[u]] >> self.pos[v] & 1)

    def strictly_below(self, v: int, u: int) -> bool:
        return v != u and self.below(v, u)

    def vertices_of(self, mask: int) -> list[int]:
        return [self.order[k] for k in iter_bits(mask)]


@dataclass(frozen=True)
class LcaAnswer:
    pair: TaxonPair
    lca_set: frozenset[int]

    @property
    def well_defined(self) -> bool:
        return len(self.lca_set) == 1

    @property
    def vertex(self) -> int | None:
        if len(self.lca_set) == 1:
            return next(iter(self.lca_set))
        return None


class Dag:
    """Immutable DAG whose leaves are exactly the taxa of ``universe``.

    ``labels`` maps each leaf vertex to its taxon. ``tags`` carries optional
    display payloads (``class:ab,xz``, ``ext:xy``, ``rho``).
    """

    def __init__(
        self,
        universe: Universe,
        arcs: Iterable[tuple[int, int]],
        labels: Mapping[int, str],
        vertices: Iterable[int] | None = None,
        tags: Mapping[int, str] | None = None,
    ):
        self.universe = universe
        arcs = frozenset((int(a), int(b)) for a, b in arcs)
        verts = set(int(v) for v in vertices) if vertices is not None else set()
        verts.update(labels)
        for a, b in arcs:
            verts.add(a)
            verts.add(b)
        if not verts:
            raise DagError("a DAG needs at least one vertex")
        self.vertices: tuple[int, ...] = tuple(sorted(verts))
        self.arcs = arcs
        self.labels = dict(labels)
        self.tags = {v: t for v, t in (tags or {}).items() if v in verts}
        children: dict[int, list[int]] = {v: [] for v in self.vertices}
        parents: dict[int, list[int]] = {v: [] for v in self.vertices}
        for a, b in sorted(arcs):
            if a == b:
                raise DagError(f"self-loop at vertex {a}")
            children[a].append(b)
            parents[b].append(a)
        self.children = {v: tuple(c) for v, c in children.items()}
        self.parents = {v: tuple(p) for v, p in parents.items()}
        self._topo = self._toposort()
        self._check_leaves()
        self.leaf_of = {t: v for v, t in self.labels.items()}
        self._lca: dict[TaxonPair, frozenset[int]] = {}

    def _toposort(self) -> tuple[int, ...]:
        indeg = {v: len(p) for v, p in self.parents.items()}
        ready = [v for v in self.vertices if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop()
            order.append(v)
            for c in self.children[v]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(order) != len(self.vertices):
            raise DagError("the graph contains a directed cycle")
        return tuple(order)

    def _check_leaves(self) -> None:
        seen = set()
        for v, taxon in self.labels.items():
            if taxon not in self.universe:
                raise DagError(f"vertex {v} is labelled with unknown taxon {taxon!r}")
            if taxon in seen:
                raise DagError(f"taxon {taxon!r} labels more than one vertex")
            seen.add(taxon)
            if self.children[v]:
                raise DagError(f"labelled vertex {v} ({taxon}) is not a leaf")
        missing = set(self.universe.taxa) - seen
        if missing:
            raise DagError(f"taxa without a leaf: {sorted(missing)}")
        for v in self.vertices:
            if not self.children[v] and v not in self.labels:
                raise DagError(f"unlabelled leaf {v}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return (
            self.universe == other.universe
            and self.vertices == other.vertices
            and self.arcs == other.arcs
            and self.labels == other.labels
            and self.tags == other.tags
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.vertices, self.arcs))

    def __repr__(self) -> str:
        return f"Dag(|V|={len(self.vertices)}, |E|={len(self.arcs)}, X={list(self.universe.taxa)})"

    def outdeg(self, v: int) -> int:
        return len(self.children[v])

    def indeg(self, v: int) -> int:
        return len(self.parents[v])

    @property
    def roots(self) -> list[int]:
        return [v for v in self.vertices if not self.parents[v]]

    def next_id(self) -> int:
        return self.vertices[-1] + 1

    @cached_property
    def reach(self) -> Reachability:
        order = self.vertices
        pos = {v: k for k, v in enumerate(order)}
        desc = [0] * len(order)
        anc = [0] * len(order)
        for v in reversed(self._topo):
            k = pos[v]
            m = 1 << k
            for c in self.children[v]:
                m |= desc[pos[c]]
            desc[k] = m
        for v in self._topo:
            k = pos[v]
            m = 1 << k
            for p in self.parents[v]:
                m |= anc[pos[p]]
            anc[k] = m
        return Reachability(order, desc, anc)

    def lca_vertices(self, pair: TaxonPair) -> frozenset[int]:
        cached = self._lca.get(pair)
        if cached is not None:
            return cached
        rc = self.reach
        pos = rc.pos
        common = rc.anc[pos[self.leaf_of[pair.lo]]] & rc.anc[pos[self.leaf_of[pair.hi]]]
        desc = rc.desc
        minimal = frozenset(
            rc.order[k] for k in iter_bits(common) if desc[k] & common == 1 << k
        )
        self._lca[pair] = minimal
        return minimal

    def lca(self, pair: PairLike) -> int | None:
        """The unique LCA of ``pair``, or ``None`` when it is not well-defined."""
        found = self.lca_vertices(self.universe.pair(pair))
        return next(iter(found)) if len(found) == 1 else None


def ancestors(g: Dag) -> Reachability:
    return g.reach


def lca_set(g: Dag, p: PairLike) -> LcaAnswer:
    pair = g.universe.pair(p)
    return LcaAnswer(pair, g.lca_vertices(pair))


def lca_table(g: Dag) -> list[int | None]:
    """Well-defined LCA (or ``None``) for every pair index of the universe."""
    return [g.lca(p) for p in g.universe.pairs]


def induced_relation(g: Dag) -> Relation:
    """All ``(ab, xy)`` with well-defined LCAs and ``lca(ab)`` below ``lca(xy)``."""
    u = g.universe
    rc = g.reach
    table = lca_table(g)
    defined = [(k, rc.pos[v]) for k, v in enumerate(table) if v is not None]
    rows = [0] * u.n_pairs
    for i, vi in defined:
        row = 0
        for j, vj in defined:
            if rc.desc[vj] >> vi & 1:
                row |= 1 << j
        rows[i] = row
    return Relation(u, rows)


def xy_extension(g: Dag, p: PairLike) -> Dag:
    """Add two fresh common parents of the distinct leaves ``x`` and ``y``."""
    pair = g.universe.pair(p)
    if pair.is_singleton:
        raise PreconditionError(f"an xy-extension needs two distinct taxa, got {pair}")
    x, y = g.leaf_of[pair.lo], g.leaf_of[pair.hi]
    u = g.next_id()
    v = u + 1
    tags = dict(g.tags)
    tags[u] = tags[v] = f"ext:{pair}"
    arcs = set(g.arcs) | {(u, x), (u, y), (v, x), (v, y)}
    return Dag(g.universe, arcs, g.labels, vertices=g.vertices + (u, v), tags=tags)


def extend_pairs(g: Dag, mask: int) -> Dag:
    """Apply one xy-extension per pair index in ``mask``, ascending."""
    pairs = g.universe.pairs
    if not mask:
        return g
    arcs = set(g.arcs)
    tags = dict(g.tags)
    verts = list(g.vertices)
    nxt = g.next_id()
    for k in iter_bits(mask):
        pair = pairs[k]
        if pair.is_singleton:
            raise PreconditionError(f"an xy-extension needs two distinct taxa, got {pair}")
        x, y = g.leaf_of[pair.lo], g.leaf_of[pair.hi]
        for w in (nxt, nxt + 1):
            arcs.add((w, x))
            arcs.add((w, y))
            tags[w] = f"ext:{pair}"
            verts.append(w)
        nxt += 2
    return Dag(g.universe, arcs, g.labels, vertices=verts, tags=tags)


def fr_extension(g: Dag, r: Relation, f: Relation) -> Dag:
    """Extend every pair of supp(F) outside supp+(R) so its LCA becomes ambiguous."""
    return extend_pairs(g, support_mask(f) & ~support_plus_mask(r))


def to_network(g: Dag) -> Dag:
    """Give a multi-root DAG a fresh root ``rho`` above all of its roots."""
    roots = g.roots
    if len(roots) == 1:
        return g
    rho = g.next_id()
    tags = dict(g.tags)
    tags[rho] = "rho"
    arcs = set(g.arcs) | {(rho, r) for r in roots}
    return Dag(g.universe, arcs, g.labels, vertices=g.vertices + (rho,), tags=tags)


def is_network(g: Dag) -> bool:
    return len(g.roots) == 1


def is_phylogenetic(g: Dag) -> bool:
    return not any(g.outdeg(v) == 1 and g.indeg(v) <= 1 for v in g.vertices)


def is_two_lca_relevant(g: Dag) -> bool:
    hit = {v for v in lca_table(g) if v is not None}
    return hit == set(g.vertices)


def saturated_witness(r: Relation, f: Relation, canonical) -> Dag:
    """Extend the canonical DAG at every pair outside supp+(R).

    The result realizes (R, F) and its induced relation is exactly cl_F(R).
    """
    from .decide import check_y1, check_y2

    g = getattr(canonical, "dag", canonical)
    for check in (check_y1, check_y2):
        bad = check(r, f)
        if bad is not None:
            raise PreconditionError(f"(R, F) is not RF-realizable: {check.__name__} fails at {bad}")
    return extend_pairs(g, r.universe.full_mask & ~support_plus_mask(r))
