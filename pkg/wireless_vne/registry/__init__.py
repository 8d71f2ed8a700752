from .checker_registry import ERROR_PREFIX, CheckerRegistry, ExactParams, SimulationParams, SufficientParams

__all__ = ["ERROR_PREFIX", "CheckerRegistry", "ExactParams", "SimulationParams", "SufficientParams"]
