"""Condition-number control for small dense matrices via tail singular-value
replacement, with persistent-homology tooling to quantify the spatial effect
on point clouds of matrices and their inverses."""

__version__ = "0.1.0"

from .errors import (
    BudgetExceeded,
    EmptyCloud,
    InvalidInput,
    InvalidPlan,
    SingularMatrix,
)
from .linalg import (
    SvdFactors,
    condition_number,
    inverse,
    inverse_spectral_norm,
    reconstruct,
    singular_values,
    spectral_norm,
    svd,
)
from .surgery import (
    FULL_ORTHO,
    HALF_HALF,
    TAIL_TO_SIGMA2,
    THIRD_ONE,
    SurgeryPlan,
    SurgeryReport,
    apply_surgery,
    build_plan,
    preset_plans,
    replaced_value,
)
from .cloud import (
    Gaussian,
    MatrixSet,
    PointCloud,
    Uniform,
    flatten_normalize,
    generate_matrices,
    inverse_cloud,
    read_cloud,
    sample_torus,
    write_cloud,
)
from .homology import (
    PersistenceDiagram,
    PersistencePair,
    barcode_svg,
    barcodes,
    enclosing_radius,
    h0_persistence,
    pairwise_distances,
    read_diagram,
    rips_persistence,
    write_diagram,
)
from .metrics import MatchingProblem, bottleneck_distance

__all__ = [
    "BudgetExceeded",
    "EmptyCloud",
    "InvalidInput",
    "InvalidPlan",
    "SingularMatrix",
    "SvdFactors",
    "svd",
    "reconstruct",
    "singular_values",
    "spectral_norm",
    "inverse_spectral_norm",
    "condition_number",
    "inverse",
    "SurgeryPlan",
    "SurgeryReport",
    "build_plan",
    "replaced_value",
    "apply_surgery",
    "preset_plans",
    "TAIL_TO_SIGMA2",
    "THIRD_ONE",
    "HALF_HALF",
    "FULL_ORTHO",
    "Gaussian",
    "Uniform",
    "MatrixSet",
    "PointCloud",
    "generate_matrices",
    "flatten_normalize",
    "inverse_cloud",
    "sample_torus",
    "write_cloud",
    "read_cloud",
    "PersistencePair",
    "PersistenceDiagram",
    "pairwise_distances",
    "enclosing_radius",
    "h0_persistence",
    "rips_persistence",
    "barcodes",
    "write_diagram",
    "read_diagram",
    "barcode_svg",
    "MatchingProblem",
    "bottleneck_distance",
]
