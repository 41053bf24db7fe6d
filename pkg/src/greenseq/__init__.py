"""Maximal green sequences, support tilting posets and slices for quivers of
type A_n and Ã_{n,1}."""

__version__ = "0.1.0"

from .errors import GreenSeqError
from .mgs import (
    OrientedExchangeGraph,
    SpectrumReport,
    build_exchange_graph,
    default_depth_bound,
    enumerate_mgs,
    length_spectrum,
)
from .quiver import (
    ClusterQuiver,
    IceQuiver,
    VertexColor,
    canonical_key,
    coframed,
    color_of,
    framed,
    green_vertices,
    iso_fixing_frozen,
    mutate,
    parse_quiver,
)

__all__ = [
    "ClusterQuiver",
    "GreenSeqError",
    "IceQuiver",
    "OrientedExchangeGraph",
    "SpectrumReport",
    "VertexColor",
    "build_exchange_graph",
    "canonical_key",
    "coframed",
    "color_of",
    "default_depth_bound",
    "enumerate_mgs",
    "framed",
    "green_vertices",
    "iso_fixing_frozen",
    "length_spectrum",
    "mutate",
    "parse_quiver",
]
