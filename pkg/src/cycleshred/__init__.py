"""cycleshred: split graphs into few edge-disjoint simple cycles and edges."""

from .graph import (
    Decomposition,
    Graph,
    canonical_edge,
    connected_components,
    cycle_edges,
    degree,
    is_euler,
    odd_vertices,
    read_edge_list,
    remove_edges,
    symmetric_difference,
    write_edge_list,
)
from .gen import SplitSpec, derive_seed, gnp, odd_parity_probability, split
from .euler import (
    EulerRepair,
    euler_reduction,
    greedy_odd_matching,
    pair_via_paths,
    small_component_edges,
)
from .extract import (
    StripResult,
    count_short_cycles,
    expansion_witness,
    find_long_cycle,
    k_core,
    peel_cycles,
    strip_long_cycles,
)
from .connect import (
    ClosureResult,
    ConnectResult,
    PairRequest,
    TaggedMatching,
    build_auxiliary_pairing,
    close_matching_into_cycles,
    connect_pairs,
    edge_color,
    neighborhood_ratio,
    sparsify_split,
    split_avoiding_duplicates,
)
from .hamilton import PackResult, find_hamilton_cycle, pack_hamilton_cycles
from .pipeline import (
    PipelineConfig,
    RunReport,
    decompose,
    decompose_dense,
    decompose_intermediate,
    decompose_sparse,
)
from .verify import (
    ProbeStats,
    VerifyReport,
    lower_bound,
    probe_properties,
    verify_decomposition,
)

__version__ = "0.1.0"
