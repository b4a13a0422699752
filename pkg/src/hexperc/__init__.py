"""Critical site percolation on the triangular lattice.

Lattice approximations of smooth domains, interface sampling under two-arc
boundary conditions, exact loop-configuration observables, and the
hypergeometric conformal maps they converge to.
"""

__version__ = "0.1.0"

from .conformal import (
    BranchHint,
    OnBranchCut,
    boundary_segment,
    cardy_formula,
    disk_to_halfplane,
    hyp2f1,
    passage_difference_limit,
    rhombus_map,
    schramm_formula,
)
from .engine import (
    EstimateReport,
    ObservableEstimate,
    crossing_probability_mc,
    observable_mc,
    observable_table_exact,
    pair_probabilities_mc,
    surrounding_probability_mc,
)
from .hexgrid import (
    DiskDomain,
    EmptyApproximation,
    HexDomain,
    InvalidDomain,
    Midpoint,
    NotOnBoundary,
    PolygonDomain,
    build_lattice_approximation,
)
from .loops import (
    LinkPattern,
    LoopConfig,
    NoPath,
    ObservableValue,
    TooLarge,
    classify_link_pattern,
    edge_set_of_coloring,
    loop_config_with_four_disorders,
    observable_exact,
    reference_path,
)
from .percolation import (
    Coloring,
    InterfacePath,
    OutOfDomain,
    Outcome,
    SideComponents,
    sample_coloring,
    side_components,
    split_components,
    trace_interface,
)

__all__ = [
    "BranchHint",
    "Coloring",
    "DiskDomain",
    "EmptyApproximation",
    "EstimateReport",
    "HexDomain",
    "InterfacePath",
    "InvalidDomain",
    "LinkPattern",
    "LoopConfig",
    "Midpoint",
    "NoPath",
    "NotOnBoundary",
    "SideComponents",
    "side_components",
    "ObservableEstimate",
    "ObservableValue",
    "OnBranchCut",
    "OutOfDomain",
    "Outcome",
    "PolygonDomain",
    "TooLarge",
    "boundary_segment",
    "build_lattice_approximation",
    "cardy_formula",
    "classify_link_pattern",
    "crossing_probability_mc",
    "disk_to_halfplane",
    "edge_set_of_coloring",
    "hyp2f1",
    "loop_config_with_four_disorders",
    "observable_exact",
    "observable_mc",
    "observable_table_exact",
    "pair_probabilities_mc",
    "passage_difference_limit",
    "reference_path",
    "rhombus_map",
    "sample_coloring",
    "schramm_formula",
    "split_components",
    "surrounding_probability_mc",
    "trace_interface",
    "__version__",
]
