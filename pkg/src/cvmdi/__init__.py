"""Secure key rate of MDI CV-QKD sharing a fiber with classical DWDM traffic."""

__version__ = "0.1.0"

from .channel_plan import ChannelPlan, FwmTriple, build_configuration, enumerate_fwm_triples
from .config import RunConfig, default_scenario
from .noise import DetectionParams, DwdmParams, FiberSpec, FwmParams, NoiseBudget
from .raman import RamanTable, default_table
from .scenario import LinkScenario, SweepResult, max_distance, path_noise, rate_at, split_lengths, sweep
from .security import (
    CovarianceState,
    EquivalentChannel,
    ProtocolParams,
    RateBreakdown,
    key_fraction,
)

__all__ = [
    "ChannelPlan", "FwmTriple", "build_configuration", "enumerate_fwm_triples",
    "RunConfig", "default_scenario",
    "DetectionParams", "DwdmParams", "FiberSpec", "FwmParams", "NoiseBudget",
    "RamanTable", "default_table",
    "LinkScenario", "SweepResult", "max_distance", "path_noise", "rate_at", "split_lengths", "sweep",
    "CovarianceState", "EquivalentChannel", "ProtocolParams", "RateBreakdown", "key_fraction",
]
