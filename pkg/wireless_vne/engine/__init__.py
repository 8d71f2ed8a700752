from .online_engine import ActiveVN, OnlineEngine, SimulationState, WindowRecord, step_window
from .experiment_runner import (
    METRIC_COLUMNS,
    ExperimentResult,
    build_embedder,
    generate_arrivals,
    run_experiment,
    run_replications,
    write_metrics_csv,
)
from .sweep_executor import SweepCell, SweepExecutor, SweepPlan, write_sweep_csv
from .plot_data import plot_preset, plot_series

__all__ = [
    "ActiveVN",
    "OnlineEngine",
    "SimulationState",
    "WindowRecord",
    "step_window",
    "METRIC_COLUMNS",
    "ExperimentResult",
    "build_embedder",
    "generate_arrivals",
    "run_experiment",
    "run_replications",
    "write_metrics_csv",
    "SweepCell",
    "SweepExecutor",
    "SweepPlan",
    "write_sweep_csv",
    "plot_preset",
    "plot_series",
]
