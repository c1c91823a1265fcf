"""Exact counterexample lab for projections over the ternary Cantor set.

Everything is computed in exact arithmetic over eventually periodic ternary
words: a deterministic dense family with tagged approximant sequences, the
punctured product space, exact projection images with their open-plus-isolated
decompositions, and machine-checkable witnesses that the projection restricted
to a closed piece with interior is never an open map onto its image.
"""

from .words import (
    CantorPoint,
    ClopenSet,
    Cylinder,
    RationalInterval,
    WordError,
    ZERO_POINT,
    all_words,
    cantor_stage,
    complement,
    cylinder_interval,
    diam,
    distance,
    flip,
    intersect,
    is_empty,
    member,
    parse_clopen,
    parse_point,
    point_value,
    repr_point,
    separation_depth,
    subset,
    union,
)
from .family import (
    Approximant,
    DensePair,
    Family,
    FamilyError,
    Fiber,
    approximant_depth,
    ceil_log3,
    diag_pair,
    lenlex_word,
)
from .images import (
    ImagePiece,
    ImageSet,
    PieceError,
    Rect,
    RectUnion,
    TailSet,
    adjust_open,
    image_member,
    image_trace,
    parse_rect,
    parse_rect_union,
    piece_member,
    project_rect,
    project_union,
)
from .certify import (
    CertificationError,
    Decomposition,
    IsolatedPoint,
    LC2Certificate,
    closure_split,
    decompose,
    decomposition_member,
    lc2_certificate,
    lc2_valid,
    resolvable_probe,
)
from .witness import (
    MissingApproximant,
    NonMonotoneTraceError,
    SearchBudgetExceeded,
    WitnessCertificate,
    falsify_restriction,
    piecewise_open_check,
    scattered_check,
    stabilization_probe,
    verify_witness,
    witness_from_dict,
    witness_to_dict,
)
from .suites import RunConfig, run_all

__version__ = "0.1.0"

__all__ = [
    "Approximant",
    "CantorPoint",
    "CertificationError",
    "ClopenSet",
    "Cylinder",
    "Decomposition",
    "DensePair",
    "Family",
    "FamilyError",
    "Fiber",
    "ImagePiece",
    "ImageSet",
    "IsolatedPoint",
    "LC2Certificate",
    "MissingApproximant",
    "NonMonotoneTraceError",
    "PieceError",
    "RationalInterval",
    "Rect",
    "RectUnion",
    "RunConfig",
    "SearchBudgetExceeded",
    "TailSet",
    "WitnessCertificate",
    "WordError",
    "ZERO_POINT",
    "adjust_open",
    "all_words",
    "approximant_depth",
    "cantor_stage",
    "ceil_log3",
    "closure_split",
    "complement",
    "cylinder_interval",
    "decompose",
    "decomposition_member",
    "diag_pair",
    "diam",
    "distance",
    "falsify_restriction",
    "flip",
    "image_member",
    "image_trace",
    "intersect",
    "is_empty",
    "lc2_certificate",
    "lc2_valid",
    "lenlex_word",
    "member",
    "parse_clopen",
    "parse_point",
    "parse_rect",
    "parse_rect_union",
    "piece_member",
    "piecewise_open_check",
    "point_value",
    "project_rect",
    "project_union",
    "repr_point",
    "resolvable_probe",
    "run_all",
    "scattered_check",
    "separation_depth",
    "stabilization_probe",
    "subset",
    "union",
    "verify_witness",
    "witness_from_dict",
    "witness_to_dict",
]
