"""Balanced graph-cut clustering on random geometric graphs."""

from .geometry import (
    GAUSSIAN,
    INDICATOR,
    Kernel,
    PointCloud,
    RectDomain,
    ScalingRegime,
    epsilon_for,
    sample_uniform,
    surface_tension,
)
from .graph import (
    GeometricGraph,
    build_graph,
    connected_components,
    degree_regularity,
    giant_component_fraction,
)
from .functionals import (
    CHEEGER,
    RATIO,
    CutResult,
    ObjectiveKind,
    Partition,
    balance_two_way,
    cut_value,
    graph_total_variation,
    multiway,
    normalized_indicator,
    objective,
)
from .continuum import ContinuumCut, continuum_objective, optimal_axis_cut, rescaled_limit_target
from .solvers import (
    GroundTruthInit,
    RandomInit,
    SolveOutcome,
    SolverConfig,
    brute_force_optimal,
    canonicalize,
    local_search,
    prox_threshold,
    solve,
)
from .matching import (
    BottleneckResult,
    bottleneck_match,
    misclassification_error,
    raw_disagreement,
    reference_grid,
)

__version__ = "0.1.0"
