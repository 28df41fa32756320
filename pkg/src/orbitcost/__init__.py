"""Exact cost calculus for finite orbit equivalence relations."""

from .relcore import (
    EdgeBudgetError,
    EdgeSet,
    FiniteSpace,
    Graphing,
    ModelError,
    NotInSameCycleError,
    PartialMap,
    Relation,
    Subset,
    brute_force_min_cost,
    compression_sides,
    cost,
    first_return_map,
    generated_relation,
    generates,
    is_treeing,
    min_cost,
    nu_measure,
    orbit_exponent,
    reduce_to_treeing,
    restrict_map,
    restrict_relation,
    single_full_generator,
    spanning_treeing,
    to_edge_set,
    transversal,
)
from .rotation import (
    Arc,
    CostCurve,
    CurveRow,
    Path,
    RotationSystem,
    Segment,
    UnreachableArcError,
    connection_path,
    cost_epsilon_curve,
    epsilon_graphing,
    expected_relation,
    first_hitting_time,
    full_graphing,
)
from .schreier import (
    GroupSpec,
    GroupInvariants,
    PermAction,
    coincidence_report,
    compression_check,
    derive_seed,
    factor_cost,
    group_invariants,
    mix64,
    rank_gradient,
    sample_free_action,
    subgroup_rank,
)

__version__ = "0.1.0"
