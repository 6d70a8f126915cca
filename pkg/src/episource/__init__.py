"""Epidemic source detection on finite graphs under the SI spreading model:
exact and closed-form snapshot likelihoods, spreading-order centralities,
and distance-based source estimators, with a seeded benchmark harness."""

from .graph import (
    CycleInfo,
    Graph,
    GraphError,
    RootedTreeView,
    all_pairs_distance,
    bfs_levels,
    bfs_rooted,
    cycle_distance,
    format_edge_list,
    minimum_cycle_sizes,
    parse_edge_list,
    two_core,
    unicyclic_spanning_trees,
)
from .generators import GeneratorSpec, generate, parse_generator_spec, rng_from
from .spread import (
    InfectionSnapshot,
    NodeRates,
    irregular_vertices,
    realized_order_probability,
    simulate,
)
from .exact import (
    ENUMERATION_CAP,
    LikelihoodProfile,
    OracleCapError,
    OracleResult,
    broom_graph,
    broom_likelihood,
    closure_position_counts,
    cyclic_position_probability,
    irregular_position_probability,
    line_likelihood,
    marker_position_counts,
    oracle_enumerate,
    oracle_profile,
    regular_tree_order_probability,
    tree_extension_count,
    unicyclic_likelihood,
)
from .centrality import (
    CentralityScores,
    bfs_rumor_centrality,
    distance_centrality,
    epidemic_centrality,
    epidemic_centrality_tree,
    epidemic_centrality_unicyclic,
    jordan_centrality,
    locate_epidemic_center_unicyclic,
    sdc_weights,
    statistical_distance_centrality,
)
from .estimators import EstimatorResult, algo1_kappa, hop_error, sct, topk_wrapper
from .bench import (
    ExperimentConfig,
    TrialRecord,
    records_to_csv,
    replay,
    run_experiment,
    summarize,
)

__version__ = "0.1.0"
