"""Mixed chain graphs: separation, closures, equivalence, transforms and
Gaussian SEM audits."""

from .errors import (
    CycleError,
    EdgeConflictError,
    FamilyError,
    GraphError,
    GuardError,
    MaximalityError,
    ParseError,
    PositiveDefiniteError,
    QueryError,
    UnknownNodeError,
)
from .equivalence import (
    ClassEnumeration,
    MaximalSets,
    Triplex,
    enumerate_same_skeleton,
    markov_equivalent,
    maximal_sets,
    representability_search,
    triplex_class,
    triplex_edges,
    triplex_equivalent,
    triplexes,
)
from .gaussian import (
    CiThresholds,
    Covariance,
    FaithfulnessReport,
    SemConfig,
    SemParameters,
    audit_faithfulness,
    component_conditionals,
    joint_covariance,
    partial_correlation,
    sample_parameters,
)
from .graphoid import (
    CLOSURE_RULES,
    RULES,
    ClosureResult,
    ModelDiff,
    PropertyViolation,
    check_properties,
    closure,
    models_equal,
    pairwise_base,
)
from .graphs import (
    FAMILIES,
    Edge,
    EdgeKind,
    MixedGraph,
    ValidityReport,
    Violation,
    components,
    neighborhood,
    reachable,
    validate,
)
from .separation import (
    CRITERIA,
    enumerate_model,
    restrict_model,
    separated,
    separated_route_oracle,
    singleton_layer,
)
from .statements import (
    DeterminationMap,
    IndependenceModel,
    IndependenceStatement,
    determined_set,
)
from .textio import GraphDocument, parse_graph, parse_graph_file, to_dot, to_text
from .transforms import (
    ErrorGraph,
    eampify,
    emampify,
    latent_lift,
    marginalize,
    selectionize,
)
from .fixtures import FIXTURE_NAMES, fixture_graph, fixture_path

__version__ = "0.1.0"
