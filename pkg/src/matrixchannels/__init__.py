"""Matrix channels over finite fields: capacities, error-trapping codes, exhaustive oracles."""

from .capacity import capacity_amc, capacity_mmc, capacity_report, ammc_lower_bound, ammc_upper_bound
from .channels import ChannelVariant, transmit
from .codec import CodeConfig, decode, encode, failure_probability_bound
from .field import FieldMatrix, gf
from .montecarlo import run_campaign
from .params import ChannelParams

__all__ = [
    "ChannelParams", "ChannelVariant", "CodeConfig", "FieldMatrix",
    "ammc_lower_bound", "ammc_upper_bound", "capacity_amc", "capacity_mmc", "capacity_report",
    "decode", "encode", "failure_probability_bound", "gf", "run_campaign", "transmit",
]
