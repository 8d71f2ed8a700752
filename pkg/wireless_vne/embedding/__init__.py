from .resources import extended_remaining, extended_required, rank_by_remaining, revenue, select_roots, vn_node_sequence
from .routing import RoutedPath, influence_distance, influence_weight, link_weights, shortest_paths_from
from .metrics import sigma, sigma_increment
from .candidate_builder import CandidateBuilder, Placement, build_candidate, place_next_node
from .embedder import Checker, Embedder, wem_embed
from .baselines import ALGORITHMS, embed_with_variant

__all__ = [
    "extended_remaining",
    "extended_required",
    "rank_by_remaining",
    "revenue",
    "select_roots",
    "vn_node_sequence",
    "RoutedPath",
    "influence_distance",
    "influence_weight",
    "link_weights",
    "shortest_paths_from",
    "sigma",
    "sigma_increment",
    "CandidateBuilder",
    "Placement",
    "build_candidate",
    "place_next_node",
    "Checker",
    "Embedder",
    "wem_embed",
    "ALGORITHMS",
    "embed_with_variant",
]
