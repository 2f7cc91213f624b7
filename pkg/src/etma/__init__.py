"""Event tree workbench: build, reduce, and evaluate outcome trees."""

from .errors import (
    CapacityError,
    ConflictError,
    DirectiveError,
    DocumentError,
    EtmaError,
    EvaluationError,
    InvalidModelError,
    PartitionError,
    RedundancyError,
    UnknownComponentError,
)
from .model import (
    ComponentDef,
    ProbabilityTable,
    StateLabel,
    SystemModel,
    Violation,
    exp_reliability,
    exp_unreliability,
    model_content_hash,
    model_from_doc,
    model_to_doc,
    table_from_doc,
    table_to_doc,
    validate_model,
    validate_probabilities,
)
from .engine import (
    EventTree,
    Node,
    PartitionQuery,
    PartitionResult,
    Path,
    ReductionDirective,
    add_parallel_redundancy,
    apply_reduction,
    count_paths,
    directives_from_doc,
    directives_to_doc,
    enumerate_paths,
    expand_probability_table,
    generate_complete,
    partition,
    partition_probability,
    partition_query_from_doc,
    partition_query_to_doc,
    path_probability,
    tree_from_doc,
    tree_to_doc,
)
from .oracle import oracle_brute_force, oracle_monte_carlo
from .render import RenderOptions, histogram_data, paths_report, to_dot

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ComponentDef",
    "ConflictError",
    "DirectiveError",
    "DocumentError",
    "EtmaError",
    "EvaluationError",
    "EventTree",
    "InvalidModelError",
    "Node",
    "PartitionError",
    "PartitionQuery",
    "PartitionResult",
    "Path",
    "ProbabilityTable",
    "RedundancyError",
    "ReductionDirective",
    "RenderOptions",
    "StateLabel",
    "SystemModel",
    "UnknownComponentError",
    "Violation",
    "add_parallel_redundancy",
    "apply_reduction",
    "count_paths",
    "directives_from_doc",
    "directives_to_doc",
    "enumerate_paths",
    "exp_reliability",
    "exp_unreliability",
    "expand_probability_table",
    "generate_complete",
    "histogram_data",
    "model_content_hash",
    "model_from_doc",
    "model_to_doc",
    "oracle_brute_force",
    "oracle_monte_carlo",
    "partition",
    "partition_probability",
    "partition_query_from_doc",
    "partition_query_to_doc",
    "path_probability",
    "paths_report",
    "table_from_doc",
    "table_to_doc",
    "to_dot",
    "tree_from_doc",
    "tree_to_doc",
    "validate_model",
    "validate_probabilities",
]
