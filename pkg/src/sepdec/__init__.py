"""Canonical decompositions of separable bipartite states.

The core pipeline: a bipartite PSD matrix is filtered on one side so its
marginal becomes a projection, the filtered block grid is jointly
diagonalized, and the joint eigenstructure is pulled back into a canonical
list of product terms.  On top of that sit a marginal-rank separability
test, PPT, channel classification through Choi matrices, seeded instance
generators, and a report/verification layer with file formats and a CLI.
"""

from .bipartite import (
    BipartiteMatrix,
    BlockGrid,
    FilteredPair,
    blocks,
    from_blocks,
    local_filter_B,
    partial_trace_A,
    partial_trace_B,
    product_range,
    reconstruct,
    swap_sides,
)
from .channels import (
    ChannelClass,
    HolevoForm,
    apply_channel_from_choi,
    choi_of_holevo,
    detect_cq,
    detect_qc,
)
from .decompose import (
    CanonicalDecomposition,
    FaceReport,
    FaceSummand,
    PureProductDecomposition,
    SeparabilityVerdict,
    b_independent_form,
    b_orthogonal_form,
    face_summary,
    independent_form,
    is_unique_pure_decomposition,
    marginal_rank_separability,
    ppt_check,
    pure_product_decomposition,
)
from .errors import (
    ClusterAmbiguityError,
    InfeasibleRanksError,
    NotAIndependentError,
    NotBIndependentError,
    NotBOrthogonalError,
    NotCommutingFamilyError,
    NotHermitianError,
    NotPSDError,
    NotSquareError,
    ParseError,
    SepdecError,
    ShapeMismatchError,
    VerificationFailedError,
    ZeroMatrixError,
)
from .generators import (
    generate_b_independent,
    generate_entangled_pure,
    generate_marginal_rank,
)
from .jointdiag import (
    FamilyDiagnostics,
    JointEigenstructure,
    is_commuting_normal_family,
    joint_eigenspaces,
)
from .matcore import (
    DEFAULT_TOL,
    HermitianEigenSystem,
    ToleranceConfig,
    herm_eig,
    is_normal,
    kron,
    pseudo_inverse,
    psd_sqrt,
    rank_tol,
    support_projection,
)
from .matio import (
    emit_matrix_file,
    emit_matrix_text,
    parse_matrix_file,
    parse_matrix_text,
)
from .report import (
    DecompositionReport,
    build_report,
    render_text,
    report_from_json,
    report_to_json,
    verify_report,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteMatrix",
    "BlockGrid",
    "CanonicalDecomposition",
    "ChannelClass",
    "ClusterAmbiguityError",
    "DEFAULT_TOL",
    "DecompositionReport",
    "FaceReport",
    "FaceSummand",
    "FamilyDiagnostics",
    "FilteredPair",
    "HermitianEigenSystem",
    "HolevoForm",
    "InfeasibleRanksError",
    "JointEigenstructure",
    "NotAIndependentError",
    "NotBIndependentError",
    "NotBOrthogonalError",
    "NotCommutingFamilyError",
    "NotHermitianError",
    "NotPSDError",
    "NotSquareError",
    "ParseError",
    "PureProductDecomposition",
    "SeparabilityVerdict",
    "SepdecError",
    "ShapeMismatchError",
    "ToleranceConfig",
    "VerificationFailedError",
    "ZeroMatrixError",
    "apply_channel_from_choi",
    "b_independent_form",
    "b_orthogonal_form",
    "blocks",
    "build_report",
    "choi_of_holevo",
    "detect_cq",
    "detect_qc",
    "emit_matrix_file",
    "emit_matrix_text",
    "face_summary",
    "from_blocks",
    "generate_b_independent",
    "generate_entangled_pure",
    "generate_marginal_rank",
    "herm_eig",
    "independent_form",
    "is_commuting_normal_family",
    "is_normal",
    "is_unique_pure_decomposition",
    "joint_eigenspaces",
    "kron",
    "local_filter_B",
    "marginal_rank_separability",
    "parse_matrix_file",
    "parse_matrix_text",
    "partial_trace_A",
    "partial_trace_B",
    "ppt_check",
    "product_range",
    "pseudo_inverse",
    "psd_sqrt",
    "pure_product_decomposition",
    "rank_tol",
    "reconstruct",
    "render_text",
    "report_from_json",
    "report_to_json",
    "support_projection",
    "swap_sides",
    "verify_report",
]
