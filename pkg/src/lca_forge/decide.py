"""Decision procedures for the four realization modes.

Every positive answer carries a witness DAG and a rooted network, both
re-checked by :mod:`lca_forge.verify`. Every negative answer carries a
:class:`FailureCert` naming the failed condition and one concrete
constraint that exhibits it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .canonical import CanonicalDag, canonical_dag, y1_violation
from .closure import cl_f
from .dag import Dag, fr_extension, to_network
from .relations import (
    Constraint,
    Relation,
    first_symmetric_pair,
    iter_bits,
    support_mask,
    transitive_closure,
)
from .verify import Flavor, Verdict, verify_rf


class Mode(str, enum.Enum):
    RF = "rf"
    STRICT_RF = "strict"
    RF_NPRECEQ = "npreceq"
    RF_LCA = "lca"


CONDITIONS = ("Y1", "Y2", "ASYMMETRY", "F_CAP_CL", "Y2_LCA", "Y1_LCA")


@dataclass(frozen=True)
class FailureCert:
    failed_condition: str
    witness_constraint: Constraint
    detail: str = ""

    def __post_init__(self) -> None:
        if self.failed_condition not in CONDITIONS:
            raise ValueError(f"unknown condition {self.failed_condition!r}")


@dataclass(frozen=True)
class Decision:
    realizable: bool
    mode: Mode
    witness_dag: Dag | None = None
    witness_network: Dag | None = None
    certificate: FailureCert | None = None
    closure: Relation | None = None
    canonical: CanonicalDag | None = None


class WitnessRejected(AssertionError):
    """A constructed witness failed verification; indicates a bug."""


def check_y1(r: Relation, f: Relation, closure: Relation | None = None) -> Constraint | None:
    """Return a constraint ``(ab, xx)`` with ``ab != xx`` in cl_F(R), or ``None``."""
    if closure is None:
        closure = cl_f(r, f).closure
    return y1_violation(closure)


def check_y2(r: Relation, f: Relation, closure: Relation | None = None) -> Constraint | None:
    """Return the first ``(ab, xy)`` in R whose reverse is absent from tc(R)
    but present in cl_F(R), or ``None``."""
    if closure is None:
        closure = cl_f(r, f).closure
    tc = transitive_closure(r)
    pairs = r.universe.pairs
    for i, j in r.index_pairs():
        if not tc.has(j, i) and closure.has(j, i):
            return Constraint(pairs[i], pairs[j])
    return None


def _verified(g: Dag, n: Dag, r: Relation, f: Relation, flavor: Flavor, strict: bool) -> None:
    for label, graph in (("DAG", g), ("network", n)):
        verdict: Verdict = verify_rf(graph, r, f, flavor, strict=strict)
        if not verdict.ok:
            v = verdict.violations[0]
            raise WitnessRejected(f"witness {label} fails {v.tag} at {v.constraint}: {v.explanation}")


def decide_rf(r: Relation, f: Relation, strict: bool = False) -> Decision:
    if r.universe != f.universe:
        raise ValueError("R and F must share a taxon set")
    mode = Mode.STRICT_RF if strict else Mode.RF
    closure = cl_f(r, f).closure

    def no(cond: str, c: Constraint, detail: str) -> Decision:
        return Decision(False, mode, certificate=FailureCert(cond, c, detail), closure=closure)

    bad = y1_violation(closure)
    if bad is not None:
        return no("Y1", bad, f"{bad} lies in the closure")
    bad = check_y2(r, f, closure)
    if bad is not None:
        return no("Y2", bad, f"{bad.reversed()} lies in the closure but not in tc(R)")
    if strict:
        sym = first_symmetric_pair(transitive_closure(r))
        if sym is not None:
            pairs = r.universe.pairs
            c = Constraint(pairs[sym[0]], pairs[sym[1]])
            return no("ASYMMETRY", c, f"both {c} and {c.reversed()} lie in tc(R)")

    canon = canonical_dag(r, f, closure=closure)
    g = fr_extension(canon.dag, r, f)
    n = to_network(g)
    _verified(g, n, r, f, Flavor.F, strict)
    return Decision(True, mode, g, n, closure=closure, canonical=canon)


def decide_npreceq(r: Relation, f: Relation) -> Decision:
    """R must be realizable and no forbidden constraint may lie in cl_0(R)."""
    if r.universe != f.universe:
        raise ValueError("R and F must share a taxon set")
    base = decide_rf(r, Relation.empty(r.universe))
    mode = Mode.RF_NPRECEQ
    if not base.realizable:
        return Decision(False, mode, certificate=base.certificate, closure=base.closure)
    hit = f & base.closure
    if hit:
        c = next(iter(hit))
        cert = FailureCert("F_CAP_CL", c, f"{c} is forbidden but lies in cl_0(R)")
        return Decision(False, mode, certificate=cert, closure=base.closure)
    g = fr_extension(base.canonical.dag, r, f)
    n = to_network(g)
    _verified(g, n, r, f, Flavor.F_NPRECEQ, False)
    return Decision(True, mode, g, n, closure=base.closure, canonical=base.canonical)


def lca_augmented(r: Relation, f: Relation) -> Relation:
    """R together with ``(ab, ab)`` for every pair ``ab`` occurring in F."""
    extra = [(k, k) for k in iter_bits(support_mask(f))]
    return r | Relation.from_index_pairs(r.universe, extra)


_LCA_COND = {"Y1": "Y1_LCA", "Y2": "Y2_LCA"}


def decide_lca(r: Relation, f: Relation) -> Decision:
    if r.universe != f.universe:
        raise ValueError("R and F must share a taxon set")
    inner = decide_rf(lca_augmented(r, f), f)
    mode = Mode.RF_LCA
    if not inner.realizable:
        cert = inner.certificate
        cert = FailureCert(_LCA_COND[cert.failed_condition], cert.witness_constraint, cert.detail)
        return Decision(False, mode, certificate=cert, closure=inner.closure)
    _verified(inner.witness_dag, inner.witness_network, r, f, Flavor.F_LCA, False)
    return Decision(True, mode, inner.witness_dag, inner.witness_network,
                    closure=inner.closure, canonical=inner.canonical)


def decide(r: Relation, f: Relation, mode: Mode | str = Mode.RF) -> Decision:
    mode = Mode(mode)
    if mode is Mode.RF:
        return decide_rf(r, f)
    if mode is Mode.STRICT_RF:
        return decide_rf(r, f, strict=True)
    if mode is Mode.RF_NPRECEQ:
        return decide_npreceq(r, f)
    return decide_lca(r, f)
