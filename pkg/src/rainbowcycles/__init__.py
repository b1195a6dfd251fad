"""rainbowcycles: rainbow structures in properly edge-colored complete graphs.

Library + CLI for building properly edge-colored instances, growing rainbow
path forests and minimizing their path count by swap search, sampling color
classes, verifying expansion, running the rotation-extension pipeline for long
rainbow cycles, and checking everything against brute-force oracles at desk
scale.
"""

from .errors import RainbowError
from .graph import (
    ColoredGraph,
    build_colored_graph,
    edges_between,
    neighborhood,
    read_graph,
    remove_color_classes,
    subgraph_by_colors,
    write_graph,
)
from .generators import (
    GeneratorSpec,
    circular_odd,
    generate,
    latin_symmetric,
    rainbow_complete,
    random_proper,
    round_robin_even,
)
from .forest import (
    PathForest,
    SearchBudget,
    Swap,
    apply_swap,
    greedy_rainbow_forest,
    hamilton_from_forest,
    legal_swaps,
    spanning_completion,
    swap_minimize,
)
from .sampling import (
    SampleParams,
    adversarial_pair_scan,
    check_degree_concentration,
    check_pair_density,
    is_nearly_rainbow,
    partition_nearly_rainbow,
    sample_color_subgraph,
)
from .expander import ExpanderParams, check_expander, robust_margin
from .pipeline import (
    PipelineParams,
    SplitBundle,
    close_cycle,
    extend_to_long_path,
    long_rainbow_cycle,
    path_builder_step,
    split_four,
)
from .oracle import (
    SequenceCheckInput,
    brute_longest_rainbow_cycle,
    brute_longest_rainbow_path,
    brute_min_spanning_forest,
    sequence_bound_sweep,
    swap_closure,
    verify_cycle_structure,
    verify_forest,
    verify_rainbow_cycle,
    verify_sequence_bound,
    verify_sequence_condition,
)

__version__ = "0.1.0"

__all__ = [
    "ColoredGraph",
    "ExpanderParams",
    "GeneratorSpec",
    "PathForest",
    "PipelineParams",
    "RainbowError",
    "SampleParams",
    "SearchBudget",
    "SequenceCheckInput",
    "SplitBundle",
    "Swap",
    "adversarial_pair_scan",
    "apply_swap",
    "brute_longest_rainbow_cycle",
    "brute_longest_rainbow_path",
    "brute_min_spanning_forest",
    "build_colored_graph",
    "check_degree_concentration",
    "check_expander",
    "check_pair_density",
    "circular_odd",
    "close_cycle",
    "edges_between",
    "extend_to_long_path",
    "generate",
    "greedy_rainbow_forest",
    "hamilton_from_forest",
    "is_nearly_rainbow",
    "latin_symmetric",
    "legal_swaps",
    "long_rainbow_cycle",
    "neighborhood",
    "partition_nearly_rainbow",
    "path_builder_step",
    "rainbow_complete",
    "random_proper",
    "read_graph",
    "remove_color_classes",
    "robust_margin",
    "round_robin_even",
    "sample_color_subgraph",
    "sequence_bound_sweep",
    "spanning_completion",
    "split_four",
    "subgraph_by_colors",
    "swap_closure",
    "swap_minimize",
    "verify_cycle_structure",
    "verify_forest",
    "verify_rainbow_cycle",
    "verify_sequence_bound",
    "verify_sequence_condition",
    "write_graph",
]
