"""Labeled graphs with legs, leg bundles over them, projectivizations and
their graph equivariant cohomology, computed exactly over the integers."""

from .bundle import (
    BundleError,
    CongruenceViolation,
    DegenerateFiber,
    GenerationFailed,
    InternalInvariant,
    InvalidMorphism,
    LegBundle,
    Projectivization,
    TautologicalBundle,
    TransportInferenceError,
    TransportNotInverse,
    build_leg_bundle,
    fiber,
    infer_transport,
    is_face,
    projectivize,
    pullback,
    random_leg_bundle,
    tautological,
)
from .cohomology import (
    CohomologyClass,
    CohomologyError,
    FiberIntegralityFailure,
    ModuleDecomposition,
    NonGKMFiber,
    NotGKM,
    NotInCohomology,
    NotInFiberCohomology,
    PresentationElement,
    bh_residue,
    c1_tautological,
    chern,
    constant_class,
    decompose,
    fiber_decompose,
    interpolate_fiber,
    mu,
    presentation_multiply,
    pullback_class,
    reduce_presentation,
    validate_class,
)
from .graph import Graph, GraphMorphism, ValidationReport, validate_graph, validate_morphism
from .io import parse, serialize
from .labeled import (
    CongruenceReport,
    LabeledGraph,
    is_gkm,
    validate_connection,
    validate_labeled_morphism,
    validate_labels,
)
from .poly import (
    NotDivisible,
    Polynomial,
    RankMismatch,
    ZeroDivisor,
    divide_exact,
    elementary_symmetric,
    linear_form,
)

__version__ = "0.1.0"
