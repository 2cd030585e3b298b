"""Exact log-discrepancy, complement and blow-up calculus on resolution
dual graphs of surface singularities."""

__version__ = "0.1.0"

from .graphs import (
    CurveNode,
    DualGraph,
    SingularityClass,
    classify,
    generate_chain,
    generate_dr,
    generate_e_type,
    intersection_matrix,
    is_contractible,
    parse_graph,
    serialize_graph,
)
from .discrepancy import (
    DiscrepancyProfile,
    bound_report,
    chain_324_profile,
    discrepancy_index,
    dr_reduce,
    is_eps_lc,
    mld,
    solve_log_discrepancies,
)
from .complement import (
    BoundaryP1,
    ComplementResult,
    chain_subboundary,
    find_curve_complement,
    floor_condition,
    is_complement_p1,
    round_up_to_set,
    round_up_to_standard,
)
from .blowup import (
    SmoothModel,
    blow_down,
    blow_up_between,
    blow_up_on,
    check_blowup_identities,
    check_negativity_bounds,
    check_single_blowup_jump,
    count_nested_double_run,
    is_strictly_monotonic,
    model_from_solved_graph,
    negativity,
    negativity_report,
)
from .oracle import (
    EnumerationSpec,
    VerificationReport,
    brute_force_complement,
    e_type_atlas,
    enumerate_and_verify,
    random_towers,
)
