from .sufficient import SUFFICIENT_TOL, sufficient_check
from .mwis import greedy_mwis, greedy_schedule, is_independent, set_weight
from .simulation import simulate_check
from .exact_oracle import InstanceTooLargeError, exact_oracle, maximal_independent_sets

__all__ = [
    "SUFFICIENT_TOL",
    "sufficient_check",
    "greedy_mwis",
    "greedy_schedule",
    "is_independent",
    "set_weight",
    "simulate_check",
    "InstanceTooLargeError",
    "exact_oracle",
    "maximal_independent_sets",
]
