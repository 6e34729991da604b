"""Local, global and universal rigidity certificates, and gluing of globally rigid frameworks."""

from .certify import (
    Certificate,
    Verdict,
    certify_generic_global_rigidity,
    certify_global_rigidity_2d_combinatorial,
    check_super_stability,
    hendrickson_property,
    is_redundantly_rigid,
)
from .combine import (
    SharedVertexMap,
    blend_stress_matrices,
    combine_erase_bar,
    extend_stress_matrix,
    glue_union,
    superimpose_tensegrities,
)
from .connectivity import vertex_connectivity_at_least
from .generators import (
    complete_bipartite,
    complete_graph,
    convex_quadrilateral_tensegrity,
    named_examples,
    random_configuration,
)
from .linalg import (
    NumericTolerance,
    equilibrium_stress_basis,
    is_locally_rigid_at,
    is_positive_semidefinite,
    is_universal_for,
    lies_on_conic_at_infinity,
    max_rank_stress,
    numeric_rank,
    rigidity_matrix,
    stress_matrix,
    universal_configuration,
    verify_equilibrium,
)
from .model import (
    Configuration,
    Framework,
    InputError,
    Member,
    MemberKind,
    PreconditionError,
    Stress,
    TensegrityGraph,
    congruent,
    dominates,
    equivalent,
    member_length,
)
from .pebble import pebble_game_rigid_2d

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "Configuration",
    "Framework",
    "InputError",
    "Member",
    "MemberKind",
    "NumericTolerance",
    "PreconditionError",
    "SharedVertexMap",
    "Stress",
    "TensegrityGraph",
    "Verdict",
    "blend_stress_matrices",
    "certify_generic_global_rigidity",
    "certify_global_rigidity_2d_combinatorial",
    "check_super_stability",
    "combine_erase_bar",
    "complete_bipartite",
    "complete_graph",
    "congruent",
    "convex_quadrilateral_tensegrity",
    "dominates",
    "equilibrium_stress_basis",
    "equivalent",
    "extend_stress_matrix",
    "glue_union",
    "hendrickson_property",
    "is_locally_rigid_at",
    "is_positive_semidefinite",
    "is_redundantly_rigid",
    "is_universal_for",
    "lies_on_conic_at_infinity",
    "max_rank_stress",
    "member_length",
    "named_examples",
    "numeric_rank",
    "pebble_game_rigid_2d",
    "random_configuration",
    "rigidity_matrix",
    "stress_matrix",
    "superimpose_tensegrities",
    "universal_configuration",
    "verify_equilibrium",
    "vertex_connectivity_at_least",
]
