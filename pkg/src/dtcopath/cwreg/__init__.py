"""Cell width-regularization by clustering, bin packing and clustered-cell composition."""

from .baseline import (RegularizedStats, avg_fanout, placement_induced_cluster,
                       regularized_netlist_stats)
from .binpack import OversizeItem, best_fit_decreasing, best_fit_pack, min_bins_bruteforce
from .cluster import ClusterMap, build_clustered, cluster_score, cwr_fc_cluster
from .compose import (ClusteredCellLayout, CompositionError, Slot, clustered_library,
                      compose_all, compose_clustered_cell, site_alignment)

__all__ = [
    "RegularizedStats", "avg_fanout", "placement_induced_cluster", "regularized_netlist_stats",
    "OversizeItem", "best_fit_decreasing", "best_fit_pack", "min_bins_bruteforce",
    "ClusterMap", "build_clustered", "cluster_score", "cwr_fc_cluster",
    "ClusteredCellLayout", "CompositionError", "Slot", "clustered_library", "compose_all",
    "compose_clustered_cell", "site_alignment",
]
