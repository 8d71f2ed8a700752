"""
節點排序與根節點選擇所用的「延伸資源」計算，以及請求收益。
"""
from typing import List

import networkx as nx

from ..model.network import Node, ResourceLedger, SubstrateNetwork, VirtualNetworkRequest

# 浮點值比較前的進位位數（之後再以 id 決勝）
TIE_DECIMALS = 12


def extended_required(vn: VirtualNetworkRequest, n: Node, alpha: float) -> float:
    """
    VN 節點的延伸需求資源：CPU^V(n) + alpha * Σ_{l ∈ L(n)} BW^V(l)。

    Args:
        vn: VirtualNetworkRequest, VN 請求。
        n: Node, VN 節點。
        alpha: float, 頻寬權重（>= 0）。

    Returns:
        float

    Examples:
        >>> extended_required(vn, "a", 10.0)   # cpu 10, 相連頻寬 10 + 5
        160.0

    Raises:
        KeyError: n 不是 vn 的節點。
        ValueError: alpha < 0。
    """
    if alpha < 0:
        raise ValueError("alpha 必須 >= 0。")
    return vn.cpu_req[n] + alpha * sum(vn.bw_req[l] for l in vn.incident_links(n))


def vn_node_sequence(vn: VirtualNetworkRequest, alpha: float) -> List[Node]:
    """
    決定 VN 節點的嵌入順序。

    第一個節點為延伸需求最大者（同值取較小 id）；其餘依
    (與第一個節點的跳數 升冪, 延伸需求 降冪, id 升冪) 排序。

    Raises:
        ValueError: vn 為空或不連通。
    """
    if not vn.nodes:
        raise ValueError(f"VN {vn.vn_id} 沒有任何節點")
    if not vn.is_connected():
        raise ValueError(f"VN {vn.vn_id} 不連通")

    score = {n: round(extended_required(vn, n, alpha), TIE_DECIMALS) for n in vn.nodes}
    first = min(vn.nodes, key=lambda n: (-score[n], n))
    hops = nx.single_source_shortest_path_length(vn.graph, first)
    rest = sorted((n for n in vn.nodes if n != first), key=lambda n: (hops[n], -score[n], n))
    return [first] + rest


def extended_remaining(sn: SubstrateNetwork, ledger: ResourceLedger, n: Node, alpha: float) -> float:
    """
    SN 節點的延伸剩餘資源：CPU^S_Rem(n) + alpha * Σ_{l ∈ L(n)} BW^S_Rem(l)。

    Examples:
        >>> extended_remaining(sn, ResourceLedger.fresh(sn), "C", 10.0)

    Raises:
        KeyError: n 不是 sn 的節點。
    """
    links = sn.incident_links(n)
    return ledger.residual_cpu[n] + alpha * sum(ledger.residual_bw(sn, l) for l in links)


def select_roots(sn: SubstrateNetwork, ledger: ResourceLedger, k: int, alpha: float) -> List[Node]:
    """
    延伸剩餘資源最高的 k 個 SN 節點（同值取較小 id）。節點不足 k 個時全部回傳。

    Raises:
        ValueError: k < 1。
    """
    if k < 1:
        raise ValueError("搜尋數 K 必須 >= 1。")
    return rank_by_remaining(sn, ledger, alpha)[:k]


def rank_by_remaining(sn: SubstrateNetwork, ledger: ResourceLedger, alpha: float) -> List[Node]:
    """所有 SN 節點依延伸剩餘資源由高到低排序。"""
    score = {n: round(extended_remaining(sn, ledger, n, alpha), TIE_DECIMALS) for n in sn.nodes}
    return sorted(sn.nodes, key=lambda n: (-score[n], n))


def revenue(vn: VirtualNetworkRequest, alpha: float) -> float:
    """
    請求收益 R = Σ CPU^V(n) + alpha * Σ BW^V(l)。

    Examples:
        >>> revenue(vn, 10.0)   # cpu {10, 10, 10}, bw {10, 5, 3}
        210.0
    """
    if alpha < 0:
        raise ValueError("alpha 必須 >= 0。")
    return sum(vn.cpu_req.values()) + alpha * sum(vn.bw_req.values())
