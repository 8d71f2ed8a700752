import dataclasses
import logging
from typing import Dict, Set

import networkx as nx

from ..model.network import ConflictGraph, Link, SubstrateNetwork

_logger = logging.getLogger(__name__)


def build_conflict_graph(sn: SubstrateNetwork, k: int) -> ConflictGraph:
    """
    由基底網路推導衝突圖。

    若 sn 帶有明確的干擾關係則直接使用（優先於 k-hop 規則）；否則兩條相異連結 i, j
    相鄰若且唯若 i 與 j 的任一端點之間最短跳數 <= k-1
    （k=1：共用端點；k=2：共用端點或端點相鄰）。

    Args:
        sn: SubstrateNetwork, 基底網路。
        k: int, 干擾跳數（>= 1）。

    Returns:
        ConflictGraph, 頂點為 sn.links。

    Examples:
        >>> cg = build_conflict_graph(path_abcd, 2)
        >>> cg.degree[("A", "B")]
        2

    Raises:
        ValueError: k < 1。
    """
    if k < 1:
        raise ValueError("干擾跳數 k 必須 >= 1。")

    adjacency: Dict[Link, Set[Link]] = {l: set() for l in sn.links}

    if sn.interference is not None:
        for pair in sn.interference:
            a, b = tuple(pair)
            adjacency[a].add(b)
            adjacency[b].add(a)
        return ConflictGraph(vertices=sn.links, adjacency={l: frozenset(n) for l, n in adjacency.items()})

    # 每個節點 k-1 跳內可達的節點
    reach = {n: set(dists) for n, dists in nx.all_pairs_shortest_path_length(sn.graph, cutoff=k - 1)}

    for l in sn.links:
        u, v = l
        near = reach[u] | reach[v]
        for n in near:
            for other in sn.incident_links(n):
                if other != l:
                    adjacency[l].add(other)

    cg = ConflictGraph(vertices=sn.links, adjacency={l: frozenset(n) for l, n in adjacency.items()})
    _logger.debug("conflict graph (k=%d): %d vertices, %d edges",
                  k, len(cg.vertices), sum(cg.degree.values()) // 2)
    return cg


def derive_interference(sn: SubstrateNetwork, k: int) -> SubstrateNetwork:
    """
    回傳帶有明確干擾關係（依 k-hop 規則推導）的新快照。已有明確關係時原樣保留。
    """
    if sn.interference is not None:
        return sn
    cg = build_conflict_graph(sn, k)
    pairs = frozenset(frozenset((a, b)) for a in cg.vertices for b in cg.adjacency[a] if a < b)
    return dataclasses.replace(sn, interference=pairs, interference_hops=k)
