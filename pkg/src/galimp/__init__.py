"""Galois concept lattices and Bayesian-filtered implicative graphs.

The package turns a symbolic term-usage table into a binary context, builds
its concept lattice and structural implications, computes Loevinger-H
implicative statistics from a per-user observation log, and filters the
resulting descriptive graph with posterior lower credibility bounds.
"""

__version__ = "0.1.0"

from .bayes import BayesConfig, CredibilityBound, filter_graph, posterior_lower_bound
from .context import (
    FormalContext,
    SymbolicTable,
    UsageMatrix,
    binarize,
    context_from_csv,
    context_to_csv,
    extent,
    intent,
    parse_observations,
    parse_symbolic_table,
)
from .errors import GalimpError, ParseError, UnknownLabelError, ValidationError
from .graph import (
    Edge,
    EdgeKind,
    ImplicativeGraph,
    Stage,
    build_descriptive_graph,
    from_json,
    to_dot,
    to_json,
)
from .lattice import (
    AttributeImplication,
    ConceptLattice,
    FormalConcept,
    concepts,
    hasse,
    pairwise_implications,
)
from .stats import (
    ClassificationThresholds,
    ContingencyTable,
    HQuadruple,
    ImplicationClass,
    Orientation,
    Quadrant,
    Strength,
    classify,
    contingency,
    h_matrix,
    loevinger_h,
    pair_tables,
)

__all__ = [
    "AttributeImplication",
    "BayesConfig",
    "ClassificationThresholds",
    "ConceptLattice",
    "ContingencyTable",
    "CredibilityBound",
    "Edge",
    "EdgeKind",
    "FormalConcept",
    "FormalContext",
    "GalimpError",
    "HQuadruple",
    "ImplicationClass",
    "ImplicativeGraph",
    "Orientation",
    "ParseError",
    "Quadrant",
    "Stage",
    "Strength",
    "SymbolicTable",
    "UnknownLabelError",
    "UsageMatrix",
    "ValidationError",
    "binarize",
    "build_descriptive_graph",
    "classify",
    "concepts",
    "context_from_csv",
    "context_to_csv",
    "contingency",
    "extent",
    "filter_graph",
    "from_json",
    "h_matrix",
    "hasse",
    "intent",
    "loevinger_h",
    "pair_tables",
    "pairwise_implications",
    "parse_observations",
    "parse_symbolic_table",
    "posterior_lower_bound",
    "to_dot",
    "to_json",
]
