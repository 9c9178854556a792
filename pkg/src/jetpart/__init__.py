"""jetpart: balanced k-way graph partitioning with multilevel Jet refinement."""

from .coarsen import Hierarchy, build_hierarchy, contract, match_vertices
from .conn import ConnectivityTable, build_conn, update_conn
from .driver import PartitionResult, partition, project
from .errors import (
    BalanceInfeasibleError,
    JetpartError,
    ParseError,
    PreprocessError,
    RebalanceInfeasibleError,
)
from .estimator import JetPartitioner
from .graph import (
    Graph,
    PartitionState,
    cutsize,
    imbalance_of,
    is_balanced,
    part_weight_limit,
    preprocess,
)
from .initpart import initial_partition
from .io import load_graph, read_partition, write_metis, write_partition
from .moves import MoveList
from .refine import RefinerConfig, jet_refine, jetlp_pass

__version__ = "0.1.0"

__all__ = [
    "BalanceInfeasibleError",
    "ConnectivityTable",
    "Graph",
    "Hierarchy",
    "JetPartitioner",
    "JetpartError",
    "MoveList",
    "ParseError",
    "PartitionResult",
    "PartitionState",
    "PreprocessError",
    "RebalanceInfeasibleError",
    "RefinerConfig",
    "build_conn",
    "build_hierarchy",
    "contract",
    "cutsize",
    "imbalance_of",
    "initial_partition",
    "is_balanced",
    "jet_refine",
    "jetlp_pass",
    "load_graph",
    "match_vertices",
    "part_weight_limit",
    "partition",
    "preprocess",
    "project",
    "read_partition",
    "update_conn",
    "write_metis",
    "write_partition",
]
