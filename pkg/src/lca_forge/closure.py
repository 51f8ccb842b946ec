"""The F-closure cl_F(R): exhaustive application of reflexivity, transitivity,
cross-consistency and F-conditional-symmetry, plus a brute-force oracle."""

from __future__ import annotations

import itertools
import random
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field

from .relations import (
    Constraint,
    Relation,
    TaxonPair,
    iter_bits,
    support_plus_mask,
)

RULES = ("R2", "R3", "R4")


@dataclass(frozen=True)
class ClosureResult:
    closure: Relation
    support_plus: frozenset[TaxonPair]
    raw_trace: tuple[tuple[str, int, int], ...] = field(repr=False, default=())

    @property
    def trace(self) -> list[tuple[str, Constraint]]:
        """Rule tag and added constraint, in the order the engine added them."""
        pairs = self.closure.universe.pairs
        return [(tag, Constraint(pairs[i], pairs[j])) for tag, i, j in self.raw_trace]


def _saturate(r: Relation, f: Relation, rng: random.Random | None) -> ClosureResult:
    u = r.universe
    if f.universe != u:
        raise ValueError("R and F must share a universe")
    n = u.n_pairs
    pid = u.pair_id
    pair_taxa = u.pair_taxa
    supp = support_plus_mask(r)
    succ = list(r.rows)
    pred = r.columns()
    frows = f.rows
    trace: list[tuple[str, int, int]] = []
    pending: list[tuple[int, int]] = [(i, j) for i, j in r.index_pairs()]

    def add(i: int, j: int, tag: str) -> None:
        if succ[i] >> j & 1:
            return
        succ[i] |= 1 << j
        pred[j] |= 1 << i
        pending.append((i, j))
        trace.append((tag, i, j))

    for k in iter_bits(supp):
        add(k, k, "R1")

    # per upper pair q: taxa occurring in some processed (., q), and all pairs over them
    taxa_below = [0] * n
    inner = [0] * n

    def fire_r2(p: int, q: int) -> None:
        for s in _ordered(succ[q] & ~succ[p], rng):
            add(p, s, "R2")
        for o in _ordered(pred[p] & ~pred[q], rng):
            add(o, q, "R2")

    def fire_r3(p: int, q: int) -> None:
        seen = taxa_below[q]
        for t in pair_taxa[p]:
            if seen >> t & 1:
                continue
            seen |= 1 << t
            acc = inner[q]
            for s in iter_bits(seen):
                acc |= 1 << pid(t, s)
            inner[q] = acc
        taxa_below[q] = seen
        for o in _ordered(inner[q] & supp & ~pred[q], rng):
            add(o, q, "R3")

    def fire_r4(p: int, q: int) -> None:
        if frows[p] >> q & 1:
            add(q, p, "R4")

    fire = {"R2": fire_r2, "R3": fire_r3, "R4": fire_r4}

    if rng is None:
        queue = deque(pending)
        pending.clear()
        while queue or pending:
            if pending:
                queue.extend(pending)
                pending.clear()
            p, q = queue.popleft()
            fire_r2(p, q)
            fire_r3(p, q)
            fire_r4(p, q)
    else:
        work: list[tuple[int, int]] = []
        while work or pending:
            work.extend(pending)
            pending.clear()
            k = rng.randrange(len(work))
            work[k], work[-1] = work[-1], work[k]
            p, q = work.pop()
            order = list(RULES)
            rng.shuffle(order)
            for tag in order:
                fire[tag](p, q)

    closure = Relation(u, succ)
    return ClosureResult(
        closure=closure,
        support_plus=frozenset(u.pairs_of(supp)),
        raw_trace=tuple(trace),
    )


def _ordered(mask: int, rng: random.Random | None) -> Iterable[int]:
    if rng is None or not mask:
        return iter_bits(mask)
    items = list(iter_bits(mask))
    rng.shuffle(items)
    return items


def cl_f(r: Relation, f: Relation, *, rng: random.Random | None = None) -> ClosureResult:
    """Compute cl_F(R).

    Reflexivity on supp+(R) is applied first; the other three rules are then
    run to exhaustion from a worklist of newly added constraints. With
    ``rng`` given, the worklist is drained in random order and the rules
    are tried in random order, which must not change the result.
    """
    return _saturate(r, f, rng)


def cl_empty(r: Relation) -> ClosureResult:
    return _saturate(r, Relation.empty(r.universe), None)


class OracleTooLarge(ValueError):
    pass


def oracle_cl_f(r: Relation, f: Relation, max_support: int = 4) -> Relation:
    """Intersection of every supp+-reflexive, transitive, cross-consistent,
    F-csym superset of ``r`` inside ``supp+ x supp+``.

    Up to four support pairs all candidate relations are enumerated. For
    larger supports (only when ``max_support`` allows it) the family is
    intersection-closed, so its intersection is its least member; that
    member is built by naive clause iteration and then checked to satisfy
    every defining property.
    """
    u = r.universe
    if f.universe != u:
        raise ValueError("R and F must share a universe")
    pairs = sorted(iter_bits(support_plus_mask(r)))
    if len(pairs) > max_support:
        raise OracleTooLarge(
            f"|supp+| = {len(pairs)} exceeds the brute-force limit {max_support}"
        )
    base = {(p, p) for p in pairs} | set(r.index_pairs())
    forbidden = set(f.index_pairs())
    taxa_of = {p: set(u.pair_taxa[p]) for p in pairs}

    def is_member(rel: set[tuple[int, int]]) -> bool:
        for p, q in rel:
            for s in pairs:
                if (q, s) in rel and (p, s) not in rel:
                    return False
        for p, q in rel:
            if (p, q) in forbidden and (q, p) not in rel:
                return False
        for xy in pairs:
            below = [p for p in pairs if (p, xy) in rel]
            for ab in pairs:
                a, b = u.pair_taxa[ab]
                has_a = any(a in taxa_of[p] for p in below)
                has_b = any(b in taxa_of[p] for p in below)
                if has_a and has_b and (ab, xy) not in rel:
                    return False
        return True

    if len(pairs) <= 4:
        free = [(p, q) for p in pairs for q in pairs if (p, q) not in base]
        meet: set[tuple[int, int]] | None = None
        for bits in itertools.product((False, True), repeat=len(free)):
            cand = base | {cell for cell, on in zip(free, bits) if on}
            if is_member(cand):
                meet = cand if meet is None else meet & cand
        assert meet is not None  # supp+ x supp+ itself is always a member
        return Relation.from_index_pairs(u, meet)

    clauses: list[tuple[tuple[tuple[int, int], ...], tuple[int, int]]] = []
    for p, q, s in itertools.product(pairs, repeat=3):
        clauses.append((((p, q), (q, s)), (p, s)))
    for p, q in forbidden:
        if p in taxa_of and q in taxa_of:
            clauses.append((((p, q),), (q, p)))
    for xy, ab in itertools.product(pairs, repeat=2):
        a, b = u.pair_taxa[ab]
        for ac in pairs:
            if a not in taxa_of[ac]:
                continue
            for bd in pairs:
                if b in taxa_of[bd]:
                    clauses.append((((ac, xy), (bd, xy)), (ab, xy)))
    least = set(base)
    changed = True
    while changed:
        changed = False
        for premises, conclusion in clauses:
            if conclusion not in least and all(c in least for c in premises):
                least.add(conclusion)
                changed = True
    if not is_member(least):
        raise AssertionError("least clause model is not a member of the family")
    return Relation.from_index_pairs(u, least)
