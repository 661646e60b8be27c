"""Netlist hypergraph model, cell libraries, file formats and topology extraction."""

from .formats import NetlistSyntaxError, emit_netlist, parse_netlist
from .hypergraph import (COMBINATIONAL, KINDS, PRIMARY_IO, SEQUENTIAL, TAP,
                         Hyperedge, Hypergraph, NetlistError, Vertex)
from .library import (PRESETS, CellLibrary, CellSpec, LibraryError, TechProfile,
                      dump_library, load_library, preset, resolve_library)
from .topo import (PARAM_NAMES, CombinationalCycleError, TopoParams, bin_grid_side,
                   comb_depths, endpoint_depths, extract_topo_params, total_width,
                   width_regularize_naive)

__all__ = [
    "COMBINATIONAL", "KINDS", "PRIMARY_IO", "SEQUENTIAL", "TAP", "PARAM_NAMES", "PRESETS",
    "CellLibrary", "CellSpec", "CombinationalCycleError", "Hyperedge", "Hypergraph",
    "LibraryError", "NetlistError", "NetlistSyntaxError", "TechProfile", "TopoParams",
    "Vertex", "bin_grid_side", "comb_depths", "dump_library", "emit_netlist",
    "endpoint_depths", "extract_topo_params", "load_library", "parse_netlist", "preset",
    "resolve_library", "total_width", "width_regularize_naive",
]
