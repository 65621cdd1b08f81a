"""Connected-sum decomposition, genus and stability for surface A-diffeomorphisms
with one-dimensional attractors and repellers, plus a DA-map numerical harness."""

from .generators import (
    GeneratorConfig,
    example_f1,
    example_f2,
    example_pretzel,
    generate_for_genus,
    random_valid_spec,
)
from .model import (
    BasicSet,
    Bunch,
    ComplementComponent,
    DiffeoSpec,
    InvalidSpecError,
    Kind,
    SpecParseError,
    ValidationReport,
    parse_spec,
    serialize_spec,
    validate_spec,
)
from .stability import build_prec_graph, detect_cycles, stability_verdict
from .topology import (
    basic_set_genus,
    build_pairing_graph,
    cycle_rank,
    decompose,
    euler_char_closed_from_bunches,
    euler_char_with_boundary,
    saddle_index,
    surgery_trace,
    total_genus,
)

__version__ = "0.1.0"
