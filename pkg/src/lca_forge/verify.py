"""Definition-level checks of whether a concrete DAG realizes (R, F).

Nothing here consults the closure or the canonical construction; the checks
read lcas straight off the DAG.
"""

from __future__ import annotations

import enum
import random
from collections.abc import Iterable
from dataclasses import dataclass

from .dag import Dag
from .relations import Constraint, Relation, Universe, iter_bits, support_plus_mask, transitive_closure


class Flavor(str, enum.Enum):
    F = "F"
    F_NPRECEQ = "F_NPRECEQ"
    F_LCA = "F_LCA"


@dataclass(frozen=True)
class Violation:
    tag: str
    constraint: Constraint
    explanation: str


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def tags(self) -> set[str]:
        return {v.tag for v in self.violations}

    def first(self, tag: str) -> Violation | None:
        return next((v for v in self.violations if v.tag == tag), None)


def _same_universe(g: Dag, *rels: Relation) -> None:
    for rel in rels:
        if rel.universe != g.universe:
            raise ValueError("DAG and relations must share a taxon set")


def _welldef(g: Dag, r: Relation) -> tuple[list[int | None], list[Violation]]:
    u = r.universe
    lcas: list[int | None] = [None] * u.n_pairs
    out = []
    supp = support_plus_mask(r)
    for k in iter_bits(supp):
        lcas[k] = g.lca(u.pairs[k])
    for i, j in r.index_pairs():
        for k in (i, j):
            if lcas[k] is None:
                out.append(Violation(
                    "WELLDEF", Constraint(u.pairs[i], u.pairs[j]),
                    f"lca({u.pairs[k]}) is not well-defined",
                ))
    return lcas, out


def _check_required(g: Dag, r: Relation, strict: bool) -> tuple[list[int | None], list[Violation]]:
    _same_universe(g, r)
    lcas, out = _welldef(g, r)
    rc = g.reach
    tc = transitive_closure(r) if not strict else None
    pairs = r.universe.pairs
    for i, j in r.index_pairs():
        lo, hi = lcas[i], lcas[j]
        if lo is None or hi is None:
            continue
        c = Constraint(pairs[i], pairs[j])
        if strict or not tc.has(j, i):
            if not rc.strictly_below(lo, hi):
                tag = "I0" if strict else "I1"
                out.append(Violation(tag, c, f"lca({c.lower}) is not strictly below lca({c.upper})"))
        elif lo != hi:
            out.append(Violation("I2", c, f"reverse is implied, but lca({c.lower}) != lca({c.upper})"))
    return lcas, out


def verify_realizes(g: Dag, r: Relation) -> Verdict:
    return Verdict(tuple(_check_required(g, r, False)[1]))


def verify_strict(g: Dag, r: Relation) -> Verdict:
    return Verdict(tuple(_check_required(g, r, True)[1]))


def verify_rf(
    g: Dag,
    r: Relation,
    f: Relation,
    flavor: Flavor | str = Flavor.F,
    *,
    strict: bool = False,
) -> Verdict:
    """Required constraints plus the forbidden-constraint axiom of ``flavor``.

    The forbidden axiom is checked over all of ``f``. Under ``F`` and
    ``F_NPRECEQ`` a constraint binds only when both lcas are well-defined;
    ``F_LCA`` additionally demands that they are.
    """
    flavor = Flavor(flavor)
    _same_universe(g, f)
    _, out = _check_required(g, r, strict)
    rc = g.reach
    pairs = f.universe.pairs
    for i, j in f.index_pairs():
        c = Constraint(pairs[i], pairs[j])
        lo, hi = g.lca(pairs[i]), g.lca(pairs[j])
        if lo is None or hi is None:
            if flavor is Flavor.F_LCA:
                bad = c.lower if lo is None else c.upper
                out.append(Violation("F_LCA", c, f"lca({bad}) is not well-defined"))
            continue
        if flavor is Flavor.F_NPRECEQ:
            if rc.below(lo, hi):
                out.append(Violation("F_NPRECEQ", c, f"lca({c.lower}) is below or equal to lca({c.upper})"))
        elif rc.strictly_below(lo, hi):
            out.append(Violation(flavor.value, c, f"lca({c.lower}) is strictly below lca({c.upper})"))
    return Verdict(tuple(out))


def random_dag_sampler(x: Universe | Iterable[str], size_budget: int, seed: int) -> Dag:
    """Seeded random DAG on ``x``.

    Up to ``size_budget`` internal vertices are spread over one to three
    layers; every internal vertex gets each lower vertex (including leaves)
    as a child with probability 1/2, and internal sinks are then wired to a
    random leaf.
    """
    u = x if isinstance(x, Universe) else Universe(x)
    rng = random.Random(seed)
    n = len(u)
    leaves = list(range(n))
    labels = {k: t for k, t in enumerate(u.taxa)}
    n_layers = rng.randint(1, 3)
    n_internal = rng.randint(1, max(1, size_budget))
    layer_of = sorted(rng.randrange(n_layers) for _ in range(n_internal))
    internal = list(range(n, n + n_internal))
    arcs = []
    for v, lv in zip(internal, layer_of):
        lower = [w for w, lw in zip(internal, layer_of) if lw > lv] + leaves
        kids = [w for w in lower if rng.random() < 0.5]
        if not kids:
            kids = [rng.choice(leaves)]
        arcs.extend((v, w) for w in kids)
    return Dag(u, arcs, labels, vertices=leaves + internal)
