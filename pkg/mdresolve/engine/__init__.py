"""Engine layer for mdresolve - pure resolution logic with no file I/O."""

from .instance import (
    Attribute,
    ChangeSet,
    Instance,
    Position,
    RelationSchema,
    Schema,
    TupleRef,
    Value,
    diff,
)
from .similarity import SimilarityRegistry, SimilaritySpec, evaluate
from .mdspec import (
    LhsPair,
    MatchingDependency,
    MDClass,
    MDSet,
    RhsPair,
    classify,
)
from .closure import (
    EquivPartition,
    attribute_closure,
    closure_of_set,
    tuple_attribute_closure,
    tuple_closure,
)
from .resolve import (
    ResolutionResult,
    SatisfactionReport,
    Violation,
    chase,
    chase_step,
    check_fan_pair,
    check_pair,
    compute_mris,
    enforcement_components,
    is_stable,
    level_sum,
    modifiable_positions,
    oracle_mris,
    resolve,
    verify_mri,
)
from .query import Atom, Const, ConjunctiveQuery, Equality, Var, cross_class_join, evaluate_query, is_ucaj
from .rewrite import RewrittenQuery, eval_rewritten, rewrite
from .answers import resolved_answers
from .cqa import (
    KeyConstraint,
    RepairSet,
    check_reduction,
    compose_with_reduction,
    consistent_answers,
    enumerate_repairs,
    reduce_instance,
)

__all__ = [
    "Attribute",
    "ChangeSet",
    "Instance",
    "Position",
    "RelationSchema",
    "Schema",
    "TupleRef",
    "Value",
    "diff",
    "SimilarityRegistry",
    "SimilaritySpec",
    "evaluate",
    "LhsPair",
    "MatchingDependency",
    "MDClass",
    "MDSet",
    "RhsPair",
    "classify",
    "EquivPartition",
    "attribute_closure",
    "closure_of_set",
    "tuple_attribute_closure",
    "tuple_closure",
    "ResolutionResult",
    "SatisfactionReport",
    "Violation",
    "chase",
    "chase_step",
    "check_fan_pair",
    "check_pair",
    "compute_mris",
    "enforcement_components",
    "is_stable",
    "level_sum",
    "modifiable_positions",
    "oracle_mris",
    "resolve",
    "verify_mri",
    "Atom",
    "Const",
    "ConjunctiveQuery",
    "Equality",
    "Var",
    "evaluate_query",
    "is_ucaj",
    "cross_class_join",
    "RewrittenQuery",
    "eval_rewritten",
    "rewrite",
    "resolved_answers",
    "KeyConstraint",
    "RepairSet",
    "check_reduction",
    "compose_with_reduction",
    "consistent_answers",
    "enumerate_repairs",
    "reduce_instance",
]
