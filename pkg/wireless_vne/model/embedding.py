from dataclasses import dataclass
from typing import Any, Dict, Literal, Optional, Tuple

from .network import Link, Node, VirtualNetworkRequest, link_key, path_links

Coupling = Literal["none", "intermediate", "full"]
LinkWeight = Literal["hop", "influence"]
FeasibleFlag = Literal["unchecked", "feasible", "infeasible"]


@dataclass(frozen=True)
class Embedding:
    """
    一個 VN 請求的嵌入結果 E : G^V -> (N*, P*, R^N, R^L)。

    屬性:
        - vn_id (str): 請求識別碼。
        - node_map (Dict[Node, Node]): VN 節點 -> SN 節點，單射。
        - path_map (Dict[Link, Tuple[Node, ...]]): VN 連結 -> SN 簡單路徑（由 VN 連結較小端點出發）。
        - cpu_alloc (Dict[Node, float]): SN 節點 -> 佔用 CPU。
        - bw_alloc (Dict[Link, float]): SN 連結 -> 佔用頻寬。

    使用範例:
        >>> e = Embedding.assemble(vn, {"a": "C", "b": "A"}, {("a", "b"): ("C", "A")})
        >>> e.bw_alloc
        {('A', 'C'): 5.0}
    """
    vn_id: str
    node_map: Dict[Node, Node]
    path_map: Dict[Link, Tuple[Node, ...]]
    cpu_alloc: Dict[Node, float]
    bw_alloc: Dict[Link, float]

    @classmethod
    def assemble(cls,
                 vn: VirtualNetworkRequest,
                 node_map: Dict[Node, Node],
                 path_map: Dict[Link, Tuple[Node, ...]]) -> "Embedding":
        """
        由節點與路徑映射組出完整的嵌入，並計算 R^N 與 R^L。

        可能觸發的錯誤:
            - ValueError: node_map 非單射、路徑端點不符或路徑非簡單路徑。
        """
        if len(set(node_map.values())) != len(node_map):
            raise ValueError(f"{vn.vn_id} 的節點映射必須是單射")
        cpu_alloc: Dict[Node, float] = {}
        for v, s in node_map.items():
            cpu_alloc[s] = cpu_alloc.get(s, 0.0) + vn.cpu_req[v]

        bw_alloc: Dict[Link, float] = {}
        normalized: Dict[Link, Tuple[Node, ...]] = {}
        for vlink, path in path_map.items():
            u, v = link_key(*vlink)
            path = tuple(path)
            if len(set(path)) != len(path):
                raise ValueError(f"{vlink} 的路徑 {path} 不是簡單路徑")
            ends = {path[0], path[-1]} if path else set()
            if ends != {node_map[u], node_map[v]}:
                raise ValueError(f"路徑 {path} 沒有連接 {vlink} 兩端的宿主節點")
            if path[0] != node_map[u]:
                path = tuple(reversed(path))
            normalized[(u, v)] = path
            for l in path_links(path):
                bw_alloc[l] = bw_alloc.get(l, 0.0) + vn.bw_req[(u, v)]
        return cls(vn_id=vn.vn_id, node_map=dict(node_map), path_map=normalized,
                   cpu_alloc=cpu_alloc, bw_alloc=bw_alloc)

    def substrate_links(self) -> Tuple[Link, ...]:
        return tuple(sorted(self.bw_alloc))

    def to_record(self) -> Dict[str, Any]:
        """
        轉成可記錄、可重播的 JSON 紀錄。

        格式:
            {"vn_id": str,
             "node_map": [[vn_node, sn_node], ...],
             "path_map": [{"link": [u, v], "path": [n0, n1, ...]}, ...],
             "cpu_alloc": [[sn_node, cpu], ...],
             "bw_alloc": [{"link": [a, b], "bw": float}, ...]}
        """
        return {
            "vn_id": self.vn_id,
            "node_map": [[v, s] for v, s in sorted(self.node_map.items())],
            "path_map": [{"link": list(l), "path": list(p)} for l, p in sorted(self.path_map.items())],
            "cpu_alloc": [[n, c] for n, c in sorted(self.cpu_alloc.items())],
            "bw_alloc": [{"link": list(l), "bw": b} for l, b in sorted(self.bw_alloc.items())],
        }

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> "Embedding":
        return cls(
            vn_id=record["vn_id"],
            node_map={v: s for v, s in record["node_map"]},
            path_map={tuple(item["link"]): tuple(item["path"]) for item in record["path_map"]},
            cpu_alloc={n: float(c) for n, c in record["cpu_alloc"]},
            bw_alloc={tuple(item["link"]): float(item["bw"]) for item in record["bw_alloc"]},
        )


@dataclass
class CandidateScore:
    """候選嵌入的比較結果：σ 與可行性檢查狀態。"""
    root: Node
    sigma: float
    feasible_flag: FeasibleFlag = "unchecked"
    embedding: Optional[Embedding] = None


_VARIANT_NAMES = {
    ("none", "hop"): "alg1",
    ("intermediate", "hop"): "alg2",
    ("full", "hop"): "alg3",
    ("none", "influence"): "alg4",
    ("intermediate", "influence"): "alg5",
    ("full", "influence"): "alg6",
}


@dataclass(frozen=True)
class AlgorithmVariant:
    """
    比較演算法的兩個軸：節點/連結耦合程度 × 連結權重。
    (full, influence) 即 WEM 本身（alg6）。
    """
    coupling: Coupling = "full"
    link_weight: LinkWeight = "influence"

    def __post_init__(self):
        if (self.coupling, self.link_weight) not in _VARIANT_NAMES:
            raise ValueError(f"未知的演算法變體：({self.coupling}, {self.link_weight})")

    @property
    def name(self) -> str:
        return _VARIANT_NAMES[(self.coupling, self.link_weight)]

    @classmethod
    def from_name(cls, name: str) -> "AlgorithmVariant":
        for (coupling, weight), alias in _VARIANT_NAMES.items():
            if alias == name.lower():
                return cls(coupling=coupling, link_weight=weight)
        raise ValueError(f"未知的演算法：{name}（可用 alg1..alg6）")

    @classmethod
    def wem(cls) -> "AlgorithmVariant":
        return cls("full", "influence")
