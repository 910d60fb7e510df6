"""Concept-lattice engine with probe-driven, layered exploration.

Core pieces: formal contexts with exact bitset derivation operators,
concept/lattice/AOC construction, and probe sessions that layer attribute
groups by weighted semantic distance. A FastAPI service and a CLI sit on
top.
"""

from .context import (
    ContextError,
    FormalContext,
    closure_attributes,
    closure_objects,
    derive_attributes,
    derive_objects,
    generate_benchmark,
    parse_csv,
    parse_cxt,
    transpose,
    write_csv,
    write_cxt,
)
from .lattice import (
    AocPoset,
    AttributeGroup,
    Concept,
    ConceptLattice,
    LatticeOverflowError,
    attribute_concept,
    build_aoc,
    build_lattice,
    compute_groups,
    enumerate_concepts,
    export_dot,
    iceberg_filter,
    object_concept,
    support,
)
from .probe import (
    Layout,
    ProbeState,
    RevealResult,
    TransitionDelta,
    complementary_cover,
    diff_layout,
    layout,
    reveal,
    semantic_distance,
    sub_context,
    visible_groups,
)

__version__ = "0.1.0"

__all__ = [
    "AocPoset",
    "AttributeGroup",
    "Concept",
    "ConceptLattice",
    "ContextError",
    "FormalContext",
    "LatticeOverflowError",
    "Layout",
    "ProbeState",
    "RevealResult",
    "TransitionDelta",
    "attribute_concept",
    "build_aoc",
    "build_lattice",
    "closure_attributes",
    "closure_objects",
    "complementary_cover",
    "compute_groups",
    "derive_attributes",
    "derive_objects",
    "diff_layout",
    "enumerate_concepts",
    "export_dot",
    "generate_benchmark",
    "iceberg_filter",
    "layout",
    "object_concept",
    "parse_csv",
    "parse_cxt",
    "reveal",
    "semantic_distance",
    "sub_context",
    "support",
    "transpose",
    "visible_groups",
    "write_csv",
    "write_cxt",
]
