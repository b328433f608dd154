"""Structural-property engine for finite-domain CSPs.

Detects fixable, removable, substitutable, interchangeable, inconsistent,
implied, determined, dependent and irrelevant values/variables by three
routes: an exact brute-force oracle, sound local reasoning over constraint
coverings, and polynomial reductions for boolean Schaefer classes.  The
relationship catalog between the properties is executable, and a
simplifier applies satisfiability-preserving fixes and removals.
"""

from .boolean import (
    AffineEquation,
    BooleanFormula,
    ClassMismatchError,
    Clause,
    ClosedLanguage,
    Literal,
    SchaeferClass,
    SchaeferClassification,
    SchaeferLanguage,
    UnsupportedQueryError,
    classify_schaefer,
    complement_conjunction,
    instantiate_project,
    sat_restricted,
    to_extensional,
    tract_check,
)
from .hierarchy import (
    RelationshipEdge,
    Violation,
    edge_catalog,
    reverse_edge,
    validate_hierarchy,
)
from .instances import (
    FactoringSpec,
    Graph,
    ParseError,
    RandomSpec,
    boolean_corpus,
    decode_factors,
    emit_csp,
    emit_dimacs,
    encode_solution,
    factoring_space,
    gen_coloring,
    gen_factoring,
    gen_random,
    gen_random_boolean,
    parse_csp,
    parse_dimacs,
    standard_corpus,
)
from .local import (
    Covering,
    LocalVerdict,
    UnsoundLocalCheckError,
    default_covering,
    local_check,
    pure_value_fixable,
    subproblem,
)
from .model import (
    AssignmentTuple,
    Constraint,
    CspInstance,
    Relation,
    SearchSpace,
    enumerate_space,
)
from .oracle import (
    KINDS,
    OracleVerdict,
    PropertyQuery,
    Transformation,
    all_queries,
    check_dependent,
    check_determined,
    check_fixable,
    check_implied,
    check_inconsistent,
    check_interchangeable,
    check_irrelevant,
    check_removable,
    check_substitutable,
    count_solutions,
    enumerate_solutions,
    evaluate,
    is_solution_preserving,
    satisfiable,
    solution_table,
)
from .simplify import (
    ProvedUnsatisfiable,
    SimplificationResult,
    SimplificationStep,
    apply_fix,
    apply_remove,
    replay,
    simplify_fixpoint,
)

__version__ = "0.1.0"
