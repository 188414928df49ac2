"""Community detection in stochastic block models by likelihood maximization.

Provides the plug-in and integrated likelihood objectives over labelings,
exact and greedy maximizers over size-constrained label spaces, the
phase-transition constant governing exact recovery, and a simulation
harness with reproducible sweeps.
"""

from .errors import (
    DegenerateBlockError,
    InfeasibleError,
    ParameterError,
    SbmfitError,
    SearchSpaceError,
)
from .graphs import (
    BlockCounters,
    ConfusionMatrix,
    Graph,
    Labeling,
    block_counters,
    confusion,
    disagreement_fraction,
    hamming_distance,
    meets_min_size,
    misclassification,
)
from .metrics import nmi
from .modularity import (
    ModularityValue,
    evaluate,
    integrated_likelihood_modularity,
    likelihood_modularity,
    modularity_gap,
)
from .sampling import (
    SbmParams,
    derive_seed,
    expected_block_density,
    expected_edge_counts,
    sample,
)
from .search import FitResult, SearchConfig, exact_argmax, greedy_argmax
from .theory import (
    PhaseConstant,
    edge_count_deviation,
    expected_likelihood_modularity,
    max_pairwise_divergence,
    mixture_information,
    modularity_excess,
    phase_transition_constant,
)

__version__ = "0.1.0"

__all__ = [
    "BlockCounters",
    "ConfusionMatrix",
    "DegenerateBlockError",
    "FitResult",
    "Graph",
    "InfeasibleError",
    "Labeling",
    "ModularityValue",
    "ParameterError",
    "PhaseConstant",
    "SbmParams",
    "SbmfitError",
    "SearchConfig",
    "SearchSpaceError",
    "block_counters",
    "confusion",
    "derive_seed",
    "disagreement_fraction",
    "edge_count_deviation",
    "evaluate",
    "exact_argmax",
    "expected_block_density",
    "expected_edge_counts",
    "expected_likelihood_modularity",
    "greedy_argmax",
    "hamming_distance",
    "integrated_likelihood_modularity",
    "likelihood_modularity",
    "max_pairwise_divergence",
    "meets_min_size",
    "misclassification",
    "mixture_information",
    "modularity_excess",
    "modularity_gap",
    "nmi",
    "phase_transition_constant",
    "sample",
]
