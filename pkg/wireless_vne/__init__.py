"""
Wireless VNE - Virtual network embedding on interference-limited wireless substrates

Joint node/link embedding driven by influence weights, schedulability checks on the
link conflict graph, comparison variants and an online time-window simulator.
"""

__version__ = "1.0.0"
__author__ = "Wireless VNE Team"

# Main components
from .model import AlgorithmVariant, Embedding, FeasibilityVerdict, ResourceLedger, SubstrateNetwork, VirtualNetworkRequest
from .embedding import Embedder, embed_with_variant, wem_embed
from .registry import CheckerRegistry
from .config import ExperimentConfig, PresetManager, load_config

# Core components
from .engine import OnlineEngine, SimulationState, run_experiment, run_replications

__all__ = [
    "AlgorithmVariant",
    "Embedding",
    "FeasibilityVerdict",
    "ResourceLedger",
    "SubstrateNetwork",
    "VirtualNetworkRequest",
    "Embedder",
    "embed_with_variant",
    "wem_embed",
    "CheckerRegistry",
    "ExperimentConfig",
    "PresetManager",
    "load_config",
    "OnlineEngine",
    "SimulationState",
    "run_experiment",
    "run_replications",
]
