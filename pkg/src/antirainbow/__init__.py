"""antirainbow: constructive anti-Ramsey colourings of sparse graphs.

Given a graph whose K_k-components stay below the critical density
((k+1)/2 for k >= 5, 15/7 for k = 4), produce a proper partial
edge-colouring in which every K_k is non-rainbow, with every structural
step of the underlying argument (peel classification, badness ledger,
stage bounds) checked at runtime.  Brute-force oracles and Monte Carlo
threshold experiments round out the toolkit.
"""

from .colouring import (
    Colouring,
    Stage,
    StageReport,
    anti_rainbow_colouring,
    check_stage,
    colour_graph,
    combine_components,
    extend_colouring,
    stage_bound,
)
from .density import Rational, max_2_density, max_density, max_density_scan
from .errors import (
    AntiRainbowError,
    ClassificationError,
    DensityError,
    DomainError,
    GuardExceededError,
    ParseError,
    ProofInvariantError,
)
from .experiments import (
    CorpusGraph,
    ScanRow,
    corpus,
    dense_subgraph_census,
    gnp,
    threshold_scan,
)
from .graph import Graph, enumerate_cliques, parse_graph
from .k4 import (
    K4Ledger,
    anti_rainbow_colouring_k4,
    badness_k4,
    colour_graph_k4,
    component_vertex_bound_check,
    peel_trace_k4,
    witness_j,
)
from .oracle import (
    RainbowWitness,
    brute_force_no_rainbow_colouring,
    complete_colouring,
    find_rainbow_clique,
    forced_rainbow,
)
from .structure import (
    KvConfig,
    NeighbourhoodSplit,
    PeelTrace,
    badness,
    classify_kv,
    kk_components,
    min_degree_vertex,
    peel_trace,
    reduce_step,
    split_neighbourhood,
)

__version__ = "0.1.0"
