"""Desk-scale physical design: floorplans, placement, tangling, routing, timing and Kth."""

from .floorplan import Floorplan, FloorplanError
from .kth import (CLKP_GRID, DEFAULT_K_GRID, DRC_THRESHOLD, UTIL_GRID, KthResult,
                  achievable_utilization, kth, kth_on_placement, pdn_derates, tap_keepout_fn)
from .place import Placement, PlacementError, connectivity, place
from .route import Layer, RouteConfig, RouteResult, layer_stack, route
from .sta import TimingResult, sta
from .tangle import Tangler, neighbor_swap_tangle, neighbor_table

__all__ = [
    "CLKP_GRID", "DEFAULT_K_GRID", "DRC_THRESHOLD", "UTIL_GRID", "Floorplan", "FloorplanError",
    "KthResult", "Layer", "Placement", "PlacementError", "RouteConfig", "RouteResult",
    "Tangler", "TimingResult", "achievable_utilization", "connectivity", "kth",
    "kth_on_placement", "layer_stack", "neighbor_swap_tangle", "neighbor_table",
    "pdn_derates", "place", "route", "sta", "tap_keepout_fn",
]
