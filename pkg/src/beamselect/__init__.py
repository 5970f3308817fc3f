"""Opportunistic collaborative beamforming node selection over Rayleigh fading."""

from beamselect.bounds import BoundConstants, bound_constants, f_of_r, sector_gain
from beamselect.channel import ChannelGain, ChannelRealization, RngSeed, sample_channel
from beamselect.selection import (
    ComplexityLimitError,
    SelectionOutcome,
    amplitude_threshold_select,
    coherent_power,
    composite_gain,
    exhaustive_select,
    greedy_select,
    received_power,
    sector_select,
    single_best_select,
    two_node_rule,
    with_fallback,
)

__version__ = "0.1.0"

__all__ = [
    "BoundConstants",
    "ChannelGain",
    "ChannelRealization",
    "ComplexityLimitError",
    "RngSeed",
    "SelectionOutcome",
    "amplitude_threshold_select",
    "bound_constants",
    "coherent_power",
    "composite_gain",
    "exhaustive_select",
    "f_of_r",
    "greedy_select",
    "received_power",
    "sample_channel",
    "sector_gain",
    "sector_select",
    "single_best_select",
    "two_node_rule",
    "with_fallback",
]
