"""
由指定根節點建構單一候選嵌入。

三種節點/連結耦合方式共用同一套路徑與帳本邏輯：
    - full：逐一放置節點，同時以最短路徑連回已放置的鄰居（WEM 規則）。
    - intermediate：節點依與根節點的距離放置，之後才路由連結。
    - none：節點依延伸剩餘資源放置，之後才路由連結。
"""
import logging
from typing import Dict, List, Mapping, NamedTuple, Optional, Tuple

import networkx as nx

from ..model.embedding import AlgorithmVariant, Embedding, LinkWeight
from ..model.network import CAPACITY_TOL, Link, Node, ResourceLedger, SubstrateNetwork, VirtualNetworkRequest, link_key, path_links
from .resources import TIE_DECIMALS, extended_remaining, rank_by_remaining, vn_node_sequence
from .routing import influence_distance, link_weights, shortest_paths_from

_logger = logging.getLogger(__name__)


class Placement(NamedTuple):
    """place_next_node 的結果：選中的 SN 節點、新連結的路徑與其分數。"""
    node: Node
    paths: Dict[Link, Tuple[Node, ...]]
    score: float


def _cpu_admissible(ledger: ResourceLedger, n: Node, cpu: float) -> bool:
    return ledger.residual_cpu[n] >= cpu - CAPACITY_TOL


def _route_links_in_order(sn: SubstrateNetwork,
                          ledger: ResourceLedger,
                          vn: VirtualNetworkRequest,
                          node_map: Mapping[Node, Node],
                          links: List[Link],
                          pending: Dict[Link, float],
                          link_weight: LinkWeight) -> Optional[Dict[Link, Tuple[Node, ...]]]:
    """依序路由 links，每條路徑佔用的頻寬立即累加到 pending。任一條失敗回傳 None。"""
    paths: Dict[Link, Tuple[Node, ...]] = {}
    for u, v in links:
        bw = vn.bw_req[link_key(u, v)]
        routed = influence_distance(sn, ledger, node_map[u], node_map[v], bw, pending, link_weight)
        if routed is None:
            return None
        paths[link_key(u, v)] = routed.path
        for l in path_links(routed.path):
            pending[l] = pending.get(l, 0.0) + bw
    return paths


def place_next_node(sn: SubstrateNetwork,
                    ledger: ResourceLedger,
                    vn: VirtualNetworkRequest,
                    partial: Embedding,
                    next_node: Node,
                    alpha: float,
                    link_weight: LinkWeight = "influence") -> Optional[Placement]:
    """
    依 arg min Σ_{u ∈ A(next)} BW^V(u, next) * dist(E(u), n) 放置下一個 VN 節點。

    候選為 partial 尚未使用且剩餘 CPU 足夠的 SN 節點；每一項距離都必須可達。
    分數同值時取較小 id。選中節點的路徑會依序重算，讓同一節點的多條新連結
    彼此看得到對方佔用的頻寬；若重算後某條不再可達，改試下一名。
    沒有已放置鄰居時，改選延伸剩餘資源最高者。

    Args:
        sn: SubstrateNetwork, 基底網路。
        ledger: ResourceLedger, 資源帳本（不會被修改）。
        vn: VirtualNetworkRequest, VN 請求。
        partial: Embedding, 目前已放置的部分嵌入。
        next_node: Node, 要放置的 VN 節點。
        alpha: float, 延伸剩餘資源的頻寬權重。
        link_weight: LinkWeight, 距離所用的連結權重。

    Returns:
        Optional[Placement], 沒有可行節點時為 None。

    Examples:
        >>> p = place_next_node(sn, ledger, vn, partial, "b", 10.0)
        >>> p.node, round(p.score, 3)
        ('A', 0.701)
    """
    used = set(partial.node_map.values())
    cpu = vn.cpu_req[next_node]
    admissible = [n for n in sn.nodes if n not in used and _cpu_admissible(ledger, n, cpu)]
    if not admissible:
        return None

    anchors = [u for u in vn.neighbors(next_node) if u in partial.node_map]
    if not anchors:
        best = min(admissible, key=lambda n: (-round(extended_remaining(sn, ledger, n, alpha), TIE_DECIMALS), n))
        return Placement(best, {}, 0.0)

    weights = link_weights(sn, link_weight)
    pending = dict(partial.bw_alloc)
    trees = {
        u: shortest_paths_from(sn, ledger, partial.node_map[u], vn.bw_req[link_key(u, next_node)], weights, pending)
        for u in anchors
    }

    scores: Dict[Node, float] = {}
    for n in admissible:
        if all(n in trees[u] for u in anchors):
            scores[n] = sum(vn.bw_req[link_key(u, next_node)] * trees[u][n].weight for u in anchors)
    ranked = sorted(scores, key=lambda n: (round(scores[n], TIE_DECIMALS), n))
    _logger.debug("placement scores for %s/%s: %s", vn.vn_id, next_node,
                  {n: round(scores[n], 6) for n in ranked[:5]})

    for n in ranked:
        node_map = dict(partial.node_map)
        node_map[next_node] = n
        paths = _route_links_in_order(sn, ledger, vn, node_map, [(u, next_node) for u in anchors],
                                      dict(pending), link_weight)
        if paths is not None:
            return Placement(n, paths, scores[n])
    return None


class CandidateBuilder:
    """
    候選嵌入建構器，依 AlgorithmVariant 的耦合方式與連結權重由根節點建出一個候選。

    建構過程只讀取 sn 與 ledger，不產生副作用，因此不同根節點可以並行建構。

    Args:
        sn: SubstrateNetwork, 基底網路。
        ledger: ResourceLedger, 資源帳本（唯讀使用）。
        alpha: float, 延伸資源的頻寬權重。
        variant: AlgorithmVariant, 演算法變體，預設為 WEM。

    Examples:
        >>> builder = CandidateBuilder(sn, ResourceLedger.fresh(sn), 10.0)
        >>> builder.build(vn, "C").node_map
        {'a': 'C', 'b': 'A', 'c': 'B'}
    """

    def __init__(self,
                 sn: SubstrateNetwork,
                 ledger: ResourceLedger,
                 alpha: float,
                 variant: Optional[AlgorithmVariant] = None):
        if not isinstance(sn, SubstrateNetwork):
            raise TypeError("sn must be an instance of SubstrateNetwork")
        if not isinstance(ledger, ResourceLedger):
            raise TypeError("ledger must be an instance of ResourceLedger")
        if alpha < 0:
            raise ValueError("alpha 必須 >= 0。")
        self.sn = sn
        self.ledger = ledger
        self.alpha = alpha
        self.variant = variant or AlgorithmVariant.wem()
        # 預先計算衝突圖，避免多執行緒同時觸發快取
        self._weights = link_weights(sn, self.variant.link_weight)

    def build(self, vn: VirtualNetworkRequest, root: Node) -> Optional[Embedding]:
        """
        以 root 承載第一個 VN 節點，建出完整候選；任何一步失敗回傳 None。

        Raises:
            ValueError: vn 不連通。
        """
        sequence = vn_node_sequence(vn, self.alpha)
        if not _cpu_admissible(self.ledger, root, vn.cpu_req[sequence[0]]):
            return None
        if self.variant.coupling == "full":
            return self._build_joint(vn, sequence, root)
        return self._build_two_stage(vn, sequence, root)

    def _build_joint(self, vn: VirtualNetworkRequest, sequence: List[Node], root: Node) -> Optional[Embedding]:
        node_map: Dict[Node, Node] = {sequence[0]: root}
        path_map: Dict[Link, Tuple[Node, ...]] = {}
        for next_node in sequence[1:]:
            partial = Embedding.assemble(vn, node_map, path_map)
            placement = place_next_node(self.sn, self.ledger, vn, partial, next_node, self.alpha,
                                        self.variant.link_weight)
            if placement is None:
                _logger.debug("root %s: no placement for %s/%s", root, vn.vn_id, next_node)
                return None
            node_map[next_node] = placement.node
            path_map.update(placement.paths)
        return Embedding.assemble(vn, node_map, path_map)

    def _build_two_stage(self, vn: VirtualNetworkRequest, sequence: List[Node], root: Node) -> Optional[Embedding]:
        node_map: Dict[Node, Node] = {sequence[0]: root}
        order = self._node_stage_order(root)
        for next_node in sequence[1:]:
            used = set(node_map.values())
            cpu = vn.cpu_req[next_node]
            host = next((n for n in order if n not in used and _cpu_admissible(self.ledger, n, cpu)), None)
            if host is None:
                return None
            node_map[next_node] = host

        # 連結依較晚端點在序列中的位置路由
        position = {n: i for i, n in enumerate(sequence)}
        links = []
        for next_node in sequence[1:]:
            earlier = sorted((u for u in vn.neighbors(next_node) if position[u] < position[next_node]),
                             key=position.get)
            links.extend((u, next_node) for u in earlier)
        paths = _route_links_in_order(self.sn, self.ledger, vn, node_map, links, {}, self.variant.link_weight)
        if paths is None:
            return None
        return Embedding.assemble(vn, node_map, paths)

    def _node_stage_order(self, root: Node) -> List[Node]:
        """兩階段變體的 SN 節點偏好順序（root 本身排除在外）。"""
        if self.variant.coupling == "none":
            return [n for n in rank_by_remaining(self.sn, self.ledger, self.alpha) if n != root]
        g = nx.Graph()
        g.add_nodes_from(self.sn.nodes)
        g.add_weighted_edges_from((u, v, w) for (u, v), w in self._weights.items())
        dist = nx.single_source_dijkstra_path_length(g, root, weight="weight")
        return sorted((n for n in dist if n != root), key=lambda n: (round(dist[n], TIE_DECIMALS), n))


def build_candidate(sn: SubstrateNetwork,
                    ledger: ResourceLedger,
                    vn: VirtualNetworkRequest,
                    root: Node,
                    alpha: float,
                    variant: Optional[AlgorithmVariant] = None) -> Optional[Embedding]:
    """CandidateBuilder 的函式形式。"""
    return CandidateBuilder(sn, ledger, alpha, variant).build(vn, root)
