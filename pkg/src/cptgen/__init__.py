"""cptgen: conditional probability tables from weighted anchor distributions.

Build a full multi-parent CPT from linearly many elicited distributions and
relative parent weights, check the result geometrically (every generated row
must land in the convex hull of the anchors that built it), and fine-tune
interactively through a what-if HTTP service.
"""

from .document import (
    DocumentError,
    ElicitationDocument,
    apply_overrides,
    load_document,
    save_document,
)
from .elicit import (
    AnchorCompletenessError,
    AnchorSet,
    CompatibilityLookupError,
    CompatibilityMap,
    DiagonalUnavailableError,
    build_diagonal_compatibility,
    distinct_anchor_count,
    expand_anchors,
    resolve_compatible,
)
from .engine import (
    GenerationResult,
    competing_modes,
    generate_cpt,
    generate_row,
    modality_profile,
)
from .export import export_cpt, import_cpt
from .geometry import (
    ConnectionTensor,
    HullCertificate,
    InteriorViolationError,
    MetricMatrix,
    NonMemberError,
    SimplexPoint,
    connection_coefficients,
    fisher_metric,
    from_mixture,
    geodesic_point,
    hull_membership,
    recover_weights,
    to_mixture,
)
from .model import (
    Cpt,
    Distribution,
    NetworkSpec,
    ParentSpec,
    ParentalConfiguration,
    SpecViolation,
    ValidationError,
    enumerate_configurations,
    validate_spec,
)
from .verify import VerificationReport, verify_generation, verify_rows

__version__ = "0.1.0"

__all__ = [
    "AnchorCompletenessError",
    "AnchorSet",
    "CompatibilityLookupError",
    "CompatibilityMap",
    "ConnectionTensor",
    "Cpt",
    "DiagonalUnavailableError",
    "Distribution",
    "DocumentError",
    "ElicitationDocument",
    "GenerationResult",
    "HullCertificate",
    "InteriorViolationError",
    "MetricMatrix",
    "NetworkSpec",
    "NonMemberError",
    "ParentSpec",
    "ParentalConfiguration",
    "SimplexPoint",
    "SpecViolation",
    "ValidationError",
    "VerificationReport",
    "apply_overrides",
    "build_diagonal_compatibility",
    "competing_modes",
    "connection_coefficients",
    "distinct_anchor_count",
    "enumerate_configurations",
    "expand_anchors",
    "export_cpt",
    "fisher_metric",
    "from_mixture",
    "generate_cpt",
    "generate_row",
    "geodesic_point",
    "hull_membership",
    "import_cpt",
    "load_document",
    "modality_profile",
    "recover_weights",
    "resolve_compatible",
    "save_document",
    "to_mixture",
    "validate_spec",
    "verify_generation",
    "verify_rows",
]
