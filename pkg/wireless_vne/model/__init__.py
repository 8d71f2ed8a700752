from .network import (
    ConflictGraph,
    Link,
    LoadVector,
    Node,
    ResourceLedger,
    SubstrateNetwork,
    VirtualNetworkRequest,
    link_key,
    path_links,
)
from .embedding import AlgorithmVariant, CandidateScore, Embedding
from .verdict import FeasibilityVerdict, SchedulerState

__all__ = [
    "ConflictGraph",
    "Link",
    "LoadVector",
    "Node",
    "ResourceLedger",
    "SubstrateNetwork",
    "VirtualNetworkRequest",
    "link_key",
    "path_links",
    "AlgorithmVariant",
    "CandidateScore",
    "Embedding",
    "FeasibilityVerdict",
    "SchedulerState",
]
