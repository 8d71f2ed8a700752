import os

from .settings import (
    CheckerSettings,
    ExperimentConfig,
    RequestSettings,
    SubstrateSettings,
    flatten,
    load_config,
    merge_config,
    parse_override,
    unflatten,
)
from .preset_manager import PresetManager, SweepPreset

INSTANCE_DIR = os.path.join(os.path.dirname(__file__), "instances")

__all__ = [
    "CheckerSettings",
    "ExperimentConfig",
    "RequestSettings",
    "SubstrateSettings",
    "flatten",
    "load_config",
    "merge_config",
    "parse_override",
    "unflatten",
    "PresetManager",
    "SweepPreset",
    "INSTANCE_DIR",
]
