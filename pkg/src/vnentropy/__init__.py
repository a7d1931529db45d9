"""Spectral entropy of weighted graphs.

Exact von Neumann graph entropy via a dense eigensolver oracle, four
linear-time quadratic estimators driven by purity tr(rho^2), calibrated
estimator mixtures, Jensen-Shannon graph distance, seeded random-graph
generators, and a deterministic experiment harness with a CLI.
"""

from .approximations import (
    ALL_METHODS,
    EXACT,
    FINGER,
    MODIFIED_TAYLOR,
    QUADRATIC_METHODS,
    RADIAL_PROJECTION,
    TAYLOR,
    EntropyEstimate,
    estimate_entropy,
    finger,
    modified_taylor,
    quadratic_estimates,
    radial_projection,
    sigma_coefficient,
    taylor,
)
from .calibration import (
    AFFINE4,
    PRESETS,
    TWO_TERM,
    FitResult,
    MixtureWeights,
    TrainingSample,
    fit_affine4,
    fit_two_term,
    load_samples,
    load_weights,
    mixture_entropy,
    mixture_value,
    project_simplex,
    sample_from_graph,
    save_samples,
    save_weights,
    train_test_gap,
)
from .errors import (
    DomainError,
    DuplicateEdgeError,
    EmptyGraphError,
    EmptyTrainingSetError,
    GraphError,
    InvalidSpecError,
    MissingEstimatorError,
    NegativeWeightError,
    NoConvergenceError,
    NumericalError,
    ParseError,
    SelfLoopError,
    SizeMismatchError,
    TooLargeForDenseError,
    VertexOutOfRangeError,
    VnentropyError,
)
from .generators import BA, ER, MODELS, WS, ModelSpec, generate, perturb_weights
from .graph import Graph, SpectralSummary, build_graph, load_edge_list, trace_laplacian
from .harness import (
    ExperimentRecord,
    correlation_study,
    derive_seed,
    error_sweep,
    linear_fit_r2,
    pearson_r,
    timing_study,
)
from .purity import purity
from .similarity import JsDistanceResult, average_graph, js_distance
from .spectral import (
    DENSE_LIMIT_DEFAULT,
    entropy_from_spectrum,
    exact_spectrum,
    exact_vnge,
    lambda_max,
    spectral_summary,
)

__version__ = "0.1.0"
