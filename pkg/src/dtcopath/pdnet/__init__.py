"""Power delivery networks: PDN options, tap cells, router derates and resistive extraction."""

from .config import (BACKSIDE_KINDS, BPR_KINDS, COLUMN, KINDS, P_BB, P_BS, P_FB, P_FS,
                     SCHEMES, STAGGERED, TAP_KINDS, TAP_PITCHES, TAP_WIDTH_CPP, PdnConfig,
                     PdnConfigError, StripeSpec, default_stripes, format_pdn_config,
                     parse_pdn_config)
from .extract import (DisconnectedInstanceError, NetGraph, ResistiveNetwork,
                      check_connectivity, extract_resistive_network)
from .mesh import (DEFAULT_RAIL_RES, DEFAULT_SHEET_RES, V0_V3_OHM, V4_V11_OHM, V12_OHM, Line,
                   Link, PdnMesh, build_pdn, routing_derate, routing_derates, stripe_centers,
                   tsv_resistance)
from .taps import (VDD, VSS, TapCell, TapError, expected_tap_count, insert_tap_cells,
                   rail_net, tap_rows)

__all__ = [
    "BACKSIDE_KINDS", "BPR_KINDS", "COLUMN", "DEFAULT_RAIL_RES", "DEFAULT_SHEET_RES", "KINDS",
    "P_BB", "P_BS", "P_FB", "P_FS", "SCHEMES", "STAGGERED", "TAP_KINDS", "TAP_PITCHES",
    "TAP_WIDTH_CPP", "V0_V3_OHM", "V12_OHM", "V4_V11_OHM", "VDD", "VSS",
    "DisconnectedInstanceError", "Line", "Link", "NetGraph", "PdnConfig", "PdnConfigError",
    "PdnMesh", "ResistiveNetwork", "StripeSpec", "TapCell", "TapError", "build_pdn",
    "check_connectivity", "default_stripes", "expected_tap_count", "extract_resistive_network",
    "format_pdn_config", "insert_tap_cells", "parse_pdn_config", "rail_net", "routing_derate",
    "routing_derates", "stripe_centers", "tap_rows", "tsv_resistance",
]
