"""
連結權重與受容量限制的最短路徑。

路徑搜尋只依各連結的剩餘容量剪枝，不考慮干擾；干擾可行性留給可行性檢查。
"""
import heapq
from typing import Dict, Mapping, NamedTuple, Optional, Tuple

from ..model.embedding import LinkWeight
from ..model.network import CAPACITY_TOL, Link, Node, ResourceLedger, SubstrateNetwork, link_key
from .resources import TIE_DECIMALS


class RoutedPath(NamedTuple):
    """最短路徑結果：路徑權重總和與節點序列（由起點到終點）。"""
    weight: float
    path: Tuple[Node, ...]


def influence_weight(sn: SubstrateNetwork, l: Link) -> float:
    """
    d_I(l) = (d_l + 1) / CAP^S(l)，d_l 為衝突圖中的干擾連結數。

    Examples:
        >>> influence_weight(sn, ("B", "C"))   # d=3, CAP=100
        0.04
    """
    return (sn.conflict_graph.degree[l] + 1) / sn.cap[l]


def link_weights(sn: SubstrateNetwork, kind: LinkWeight = "influence") -> Dict[Link, float]:
    """回傳所有 SN 連結的權重；hop 權重每條連結皆為 1。"""
    if kind == "hop":
        return {l: 1.0 for l in sn.links}
    if kind == "influence":
        return {l: influence_weight(sn, l) for l in sn.links}
    raise ValueError(f"未知的連結權重：{kind}")


def _admissible(sn: SubstrateNetwork, ledger: ResourceLedger, l: Link, bw: float,
                pending: Mapping[Link, float]) -> bool:
    return ledger.allocated_bw.get(l, 0.0) + pending.get(l, 0.0) + bw <= sn.cap[l] + CAPACITY_TOL


def shortest_paths_from(sn: SubstrateNetwork,
                        ledger: ResourceLedger,
                        src: Node,
                        bw: float,
                        weights: Mapping[Link, float],
                        pending: Optional[Mapping[Link, float]] = None) -> Dict[Node, RoutedPath]:
    """
    單源 Dijkstra，只走能再容納 bw 的連結。

    同權重的路徑以節點序列字典序決勝，因此結果與走訪順序無關。

    Args:
        sn: SubstrateNetwork, 基底網路。
        ledger: ResourceLedger, 目前的資源帳本。
        src: Node, 起點。
        bw: float, 要承載的頻寬。
        weights: Mapping[Link, float], 連結權重。
        pending: Optional[Mapping[Link, float]], 同一個候選嵌入中已配置但尚未寫入帳本的頻寬。

    Returns:
        Dict[Node, RoutedPath], 所有可達節點（含 src 本身，權重 0、空路徑）。

    Raises:
        KeyError: src 不是 sn 的節點。
    """
    if src not in sn.adjacency:
        raise KeyError(f"未知的基底網路節點：{src}")
    pending = pending or {}
    settled: Dict[Node, RoutedPath] = {src: RoutedPath(0.0, ())}
    heap = [(0.0, (src,), 0.0)]
    done = set()
    while heap:
        _, path, dist = heapq.heappop(heap)
        node = path[-1]
        if node in done:
            continue
        done.add(node)
        if node != src:
            settled[node] = RoutedPath(dist, path)
        for nbr in sn.adjacency[node]:
            if nbr in done:
                continue
            l = link_key(node, nbr)
            if not _admissible(sn, ledger, l, bw, pending):
                continue
            nd = dist + weights[l]
            heapq.heappush(heap, (round(nd, TIE_DECIMALS), path + (nbr,), nd))
    return settled


def influence_distance(sn: SubstrateNetwork,
                       ledger: ResourceLedger,
                       src: Node,
                       dst: Node,
                       bw: float,
                       pending: Optional[Mapping[Link, float]] = None,
                       link_weight: LinkWeight = "influence") -> Optional[RoutedPath]:
    """
    src 到 dst 的最小影響權重路徑（link_weight="hop" 時為最少跳數路徑）。

    Args:
        sn: SubstrateNetwork, 基底網路。
        ledger: ResourceLedger, 資源帳本。
        src: Node, 起點。
        dst: Node, 終點。
        bw: float, 要承載的頻寬。
        pending: Optional[Mapping[Link, float]], 同一候選嵌入中已佔用的頻寬。
        link_weight: LinkWeight, "influence" 或 "hop"。

    Returns:
        Optional[RoutedPath], 不可達時為 None；src == dst 時為 (0.0, ())。

    Examples:
        >>> influence_distance(sn, ResourceLedger.fresh(sn), "B", "D", 1.0)
        RoutedPath(weight=0.12, path=('B', 'C', 'D'))
    """
    if dst not in sn.adjacency:
        raise KeyError(f"未知的基底網路節點：{dst}")
    if src == dst:
        return RoutedPath(0.0, ())
    tree = shortest_paths_from(sn, ledger, src, bw, link_weights(sn, link_weight), pending)
    return tree.get(dst)
