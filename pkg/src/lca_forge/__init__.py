"""Realizability of required and forbidden LCA constraints by DAGs and networks."""

from .canonical import CanonicalDag, QuotientPoset, canonical_dag, hasse_diagram, quotient_poset
from .closure import ClosureResult, cl_empty, cl_f, oracle_cl_f
from .dag import (
    Dag,
    LcaAnswer,
    ancestors,
    fr_extension,
    induced_relation,
    is_phylogenetic,
    is_two_lca_relevant,
    lca_set,
    saturated_witness,
    to_network,
    xy_extension,
)
from .decide import (
    Decision,
    FailureCert,
    Mode,
    check_y1,
    check_y2,
    decide,
    decide_lca,
    decide_npreceq,
    decide_rf,
)
from .relations import Constraint, Relation, TaxonPair, Universe, relation, transitive_closure
from .verify import Flavor, Verdict, random_dag_sampler, verify_realizes, verify_rf, verify_strict

__all__ = [
    "CanonicalDag", "ClosureResult", "Constraint", "Dag", "Decision", "FailureCert", "Flavor",
    "LcaAnswer", "Mode", "QuotientPoset", "Relation", "TaxonPair", "Universe", "Verdict",
    "ancestors", "canonical_dag", "check_y1", "check_y2", "cl_empty", "cl_f", "decide",
    "decide_lca", "decide_npreceq", "decide_rf", "fr_extension", "hasse_diagram",
    "induced_relation", "is_phylogenetic", "is_two_lca_relevant", "lca_set", "oracle_cl_f",
    "quotient_poset", "random_dag_sampler", "relation", "saturated_witness", "to_network",
    "transitive_closure", "verify_realizes", "verify_rf", "verify_strict", "xy_extension",
]
