"""KMS-state classification for Cuntz-Krieger algebras of finite
higher-rank graphs without sources."""

from .kgraph import (
    Component,
    CubeInconsistency,
    Degree,
    DegreeOutOfRange,
    DuplicateId,
    DuplicateSquare,
    Edge,
    GraphFormatError,
    KGraph,
    KGraphError,
    KGraphSpec,
    MissingSquare,
    NonCommutingMatrices,
    NotComposable,
    Path,
    SourceVertex,
    Square,
    UnknownReference,
    ValidationError,
    load_kgraph,
    parse_kgraph,
    to_document,
    to_dot,
    validate,
)
from .spectral import (
    CertificationFailure,
    NonConvergence,
    WellChosenSet,
    a_f_matrix,
    certify_well_chosen,
    default_well_chosen,
    perron_vector,
    spectral_radius,
)
from .harmonic import (
    Dynamics,
    HarmonicComponentInfo,
    HarmonicVector,
    ResidualTooLarge,
    admissible_temperatures,
    classify_components,
    component_spectrum,
    decompose,
    extremal_vector,
    f_independence_check,
    harmonic_components_for,
    is_harmonic,
    verify_harmonic,
)
from .pathspace import (
    Character,
    CylinderMeasure,
    PeriodicityGroup,
    SearchExplosion,
    check_consistency,
    check_quasi_invariance,
    isotropy_cylinder_bounds,
    periodicity_group,
    restrict_torus_point,
    shift_relation_holds,
)
from .algebra import (
    AlgebraElement,
    ComplexBox,
    GaugeInvariantState,
    SpanningElement,
    TwistedState,
    UncertifiedPeriodicity,
    adjoint,
    ck4_expand,
    dynamics,
    evaluate,
    extremal_states,
    gauge_state,
    gauge_transform,
    multiply,
    spanning,
    twisted_state,
    verify_kms,
    verify_symmetry,
    vertex_projection,
)

__version__ = "0.1.0"
