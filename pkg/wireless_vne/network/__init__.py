from .conflict_graph import build_conflict_graph, derive_interference
from .loads import potential_loads, required_bandwidth
from .generators import (
    DENSITY_RANGES,
    RandomTopologyParams,
    RequestGenerationError,
    RequestParams,
    derive_seed,
    generate_connected_topology,
    generate_grid_topology,
    generate_random_topology,
    generate_vn_request,
)
from .network_io import (
    load_check_input,
    load_requests,
    load_substrate,
    save_requests,
    save_substrate,
    substrate_from_dict,
    substrate_to_dict,
)

__all__ = [
    "build_conflict_graph",
    "derive_interference",
    "potential_loads",
    "required_bandwidth",
    "DENSITY_RANGES",
    "RandomTopologyParams",
    "RequestGenerationError",
    "RequestParams",
    "derive_seed",
    "generate_connected_topology",
    "generate_grid_topology",
    "generate_random_topology",
    "generate_vn_request",
    "load_check_input",
    "load_requests",
    "load_substrate",
    "save_requests",
    "save_substrate",
    "substrate_from_dict",
    "substrate_to_dict",
]
