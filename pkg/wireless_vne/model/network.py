from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Tuple

import networkx as nx

Node = Hashable
Link = Tuple[Node, Node]
Position = Tuple[float, float]

# 浮點比較容忍值（資源帳本與容量檢查共用）
CAPACITY_TOL = 1e-9


def link_key(u: Node, v: Node) -> Link:
    """
    回傳無向連結的標準形式 (較小 id, 較大 id)。

    使用範例:
        >>> link_key("C", "A")
        ('A', 'C')
    """
    return (u, v) if u <= v else (v, u)


def path_links(path: Iterable[Node]) -> List[Link]:
    """將節點序列轉為其經過的標準連結列表。"""
    nodes = list(path)
    return [link_key(a, b) for a, b in zip(nodes, nodes[1:])]


@dataclass(frozen=True)
class SubstrateNetwork:
    """
    無線基底網路（SN）的不可變快照。

    屬性:
        - nodes (Tuple[Node, ...]): 節點 id，已排序。
        - links (Tuple[Link, ...]): 標準形式的無向連結，已排序。
        - cpu (Dict[Node, float]): 每個節點的 CPU 資源（>= 0）。
        - cap (Dict[Link, float]): 每條連結的容量（> 0）。
        - positions (Dict[Node, Position]): 部署平面座標，僅供產生器與輸出使用。
        - interference (Optional[FrozenSet[FrozenSet[Link]]]): 明確給定的干擾關係；
          為 None 時以 k-hop 規則推導。
        - interference_hops (int): k-hop 干擾模型的 k。

    使用範例:
        >>> sn = SubstrateNetwork(nodes=("A", "B"), links=(("A", "B"),),
        ...                       cpu={"A": 100, "B": 100}, cap={("A", "B"): 50})
        >>> sn.conflict_graph.degree[("A", "B")]
        0

    可能觸發的錯誤:
        - ValueError: 連結端點重複或不存在、資源為負、容量非正、干擾關係包含自身。
    """
    nodes: Tuple[Node, ...]
    links: Tuple[Link, ...]
    cpu: Dict[Node, float]
    cap: Dict[Link, float]
    positions: Dict[Node, Position] = field(default_factory=dict)
    interference: Optional[FrozenSet[FrozenSet[Link]]] = None
    interference_hops: int = 2

    def __post_init__(self):
        nodes = tuple(sorted(self.nodes))
        if len(set(nodes)) != len(nodes):
            raise ValueError("基底網路節點 id 不可重複。")
        node_set = set(nodes)

        links: List[Link] = []
        cap: Dict[Link, float] = {}
        for u, v in self.links:
            if u == v:
                raise ValueError(f"連結兩端必須是不同節點：({u}, {v})")
            if u not in node_set or v not in node_set:
                raise ValueError(f"連結 ({u}, {v}) 引用了不存在的節點")
            key = link_key(u, v)
            capacity = self.cap.get(key, self.cap.get((v, u) if key == (u, v) else (u, v)))
            if capacity is None or capacity <= 0:
                raise ValueError(f"連結 {key} 的容量必須為正數")
            links.append(key)
            cap[key] = float(capacity)
        if len(set(links)) != len(links):
            raise ValueError("基底網路連結不可重複。")

        cpu: Dict[Node, float] = {}
        for n in nodes:
            value = self.cpu.get(n)
            if value is None or value < 0:
                raise ValueError(f"節點 {n} 的 CPU 必須 >= 0")
            cpu[n] = float(value)

        if self.interference is not None:
            link_set = set(links)
            normalized = set()
            for pair in self.interference:
                members = [link_key(*l) for l in pair]
                if len(set(members)) != 2:
                    raise ValueError("干擾關係必須由兩條不同的連結組成。")
                if not set(members) <= link_set:
                    raise ValueError(f"干擾關係 {members} 引用了不存在的連結")
                normalized.add(frozenset(members))
            object.__setattr__(self, "interference", frozenset(normalized))

        if self.interference_hops < 1:
            raise ValueError("interference_hops 必須 >= 1。")

        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "links", tuple(sorted(links)))
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "cpu", cpu)
        object.__setattr__(self, "positions", {n: tuple(p) for n, p in self.positions.items()})

    @cached_property
    def graph(self) -> nx.Graph:
        """以 networkx 表示的拓樸（只含結構，資源以欄位查詢）。"""
        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(self.links)
        return g

    @cached_property
    def adjacency(self) -> Dict[Node, Tuple[Node, ...]]:
        return {n: tuple(sorted(self.graph.neighbors(n))) for n in self.nodes}

    @cached_property
    def conflict_graph(self):
        """依 interference 或 interference_hops 推導的衝突圖（延遲計算並快取）。"""
        from ..network.conflict_graph import build_conflict_graph

        return build_conflict_graph(self, self.interference_hops)

    def incident_links(self, n: Node) -> Tuple[Link, ...]:
        """L(n)：節點 n 相連的連結。未知節點拋出 KeyError。"""
        if n not in self.adjacency:
            raise KeyError(f"未知的基底網路節點：{n}")
        return tuple(link_key(n, m) for m in self.adjacency[n])

    def is_connected(self) -> bool:
        return len(self.nodes) > 0 and nx.is_connected(self.graph)


@dataclass(frozen=True)
class VirtualNetworkRequest:
    """
    虛擬網路（VN）請求。

    屬性:
        - vn_id (str): 請求識別碼。
        - nodes (Tuple[Node, ...]): 虛擬節點。
        - links (Tuple[Link, ...]): 虛擬連結（標準形式）。
        - cpu_req (Dict[Node, float]): 節點 CPU 需求（> 0）。
        - bw_req (Dict[Link, float]): 連結頻寬需求（> 0）。
        - duration (int): 服務時間窗數（>= 1）。
        - arrival_window (int): 到達的時間窗（>= 0）。

    連通性由產生器保證、由載入器驗證；這裡只檢查欄位本身。
    """
    vn_id: str
    nodes: Tuple[Node, ...]
    links: Tuple[Link, ...]
    cpu_req: Dict[Node, float]
    bw_req: Dict[Link, float]
    duration: int = 1
    arrival_window: int = 0

    def __post_init__(self):
        nodes = tuple(sorted(self.nodes))
        node_set = set(nodes)
        if len(node_set) != len(nodes):
            raise ValueError("VN 節點 id 不可重複。")
        links: List[Link] = []
        bw: Dict[Link, float] = {}
        for u, v in self.links:
            if u == v or u not in node_set or v not in node_set:
                raise ValueError(f"不合法的 VN 連結 ({u}, {v})")
            key = link_key(u, v)
            value = self.bw_req.get(key, self.bw_req.get((v, u)))
            if value is None or value <= 0:
                raise ValueError(f"VN 連結 {key} 的頻寬需求必須為正數")
            links.append(key)
            bw[key] = float(value)
        cpu: Dict[Node, float] = {}
        for n in nodes:
            value = self.cpu_req.get(n)
            if value is None or value <= 0:
                raise ValueError(f"VN 節點 {n} 的 CPU 需求必須為正數")
            cpu[n] = float(value)
        if self.duration < 1:
            raise ValueError("duration 必須 >= 1。")
        if self.arrival_window < 0:
            raise ValueError("arrival_window 必須 >= 0。")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "links", tuple(sorted(set(links))))
        object.__setattr__(self, "cpu_req", cpu)
        object.__setattr__(self, "bw_req", bw)

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(self.links)
        return g

    def incident_links(self, n: Node) -> Tuple[Link, ...]:
        if n not in self.cpu_req:
            raise KeyError(f"未知的 VN 節點：{n}")
        return tuple(link_key(n, m) for m in sorted(self.graph.neighbors(n)))

    def neighbors(self, n: Node) -> Tuple[Node, ...]:
        if n not in self.cpu_req:
            raise KeyError(f"未知的 VN 節點：{n}")
        return tuple(sorted(self.graph.neighbors(n)))

    def is_connected(self) -> bool:
        return len(self.nodes) > 0 and nx.is_connected(self.graph)

    @property
    def expiry(self) -> int:
        return self.arrival_window + self.duration


@dataclass(frozen=True)
class ConflictGraph:
    """
    衝突圖：頂點為 SN 連結，兩連結互相干擾即相鄰。

    屬性:
        - vertices (Tuple[Link, ...]): 已排序的頂點。
        - adjacency (Dict[Link, FrozenSet[Link]]): 對稱、無自迴圈的鄰接關係。

    頂點型別不限於 SN 連結，任何可排序、可雜湊的 id 都可使用（測試中以整數建構隨機衝突圖）。
    """
    vertices: Tuple[Hashable, ...]
    adjacency: Dict[Hashable, FrozenSet[Hashable]]

    def __post_init__(self):
        for v, nbrs in self.adjacency.items():
            if v in nbrs:
                raise ValueError(f"衝突圖頂點 {v} 不可與自身相鄰")
            for u in nbrs:
                if v not in self.adjacency.get(u, frozenset()):
                    raise ValueError(f"衝突圖鄰接關係在 ({v}, {u}) 不對稱")

    @classmethod
    def from_edges(cls, vertices: Iterable[Hashable], edges: Iterable[Tuple[Hashable, Hashable]]) -> "ConflictGraph":
        verts = tuple(sorted(vertices))
        adj: Dict[Hashable, set] = {v: set() for v in verts}
        for a, b in edges:
            if a == b:
                continue
            adj[a].add(b)
            adj[b].add(a)
        return cls(vertices=verts, adjacency={v: frozenset(n) for v, n in adj.items()})

    @cached_property
    def degree(self) -> Dict[Hashable, int]:
        """d_l：干擾連結數（不含自身）。"""
        return {v: len(self.adjacency[v]) for v in self.vertices}

    def neighbors(self, v: Hashable) -> FrozenSet[Hashable]:
        return self.adjacency[v]

    def adjacent(self, a: Hashable, b: Hashable) -> bool:
        return b in self.adjacency.get(a, frozenset())

    def induced(self, keep: Iterable[Hashable]) -> "ConflictGraph":
        """回傳只保留 keep 頂點的導出子圖。"""
        kept = set(keep)
        return ConflictGraph(
            vertices=tuple(v for v in self.vertices if v in kept),
            adjacency={v: frozenset(self.adjacency[v] & kept) for v in self.vertices if v in kept},
        )

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from((v, u) for v in self.vertices for u in self.adjacency[v] if v < u)
        return g


@dataclass(frozen=True)
class LoadVector:
    """
    每條 SN 連結的潛在正規化負載 λ_l = Req(l) / CAP(l)。
    未出現的連結視為 0。
    """
    load: Dict[Hashable, float]

    def get(self, l: Hashable) -> float:
        return self.load.get(l, 0.0)

    def positive(self) -> Dict[Hashable, float]:
        return {l: v for l, v in self.load.items() if v > 0}

    def max_load(self) -> float:
        return max(self.load.values(), default=0.0)

    def mean_load(self) -> float:
        return sum(self.load.values()) / len(self.load) if self.load else 0.0


@dataclass
class ResourceLedger:
    """
    剩餘資源帳本（唯一可變的型別，只由線上引擎在單一執行緒中修改）。

    屬性:
        - residual_cpu (Dict[Node, float]): CPU^S_Rem(n)。
        - allocated_bw (Dict[Link, float]): 已配置頻寬 Req(l)。

    BW^S_Rem(l) = CAP^S(l) - allocated_bw(l)，由 residual_bw() 計算。
    """
    residual_cpu: Dict[Node, float]
    allocated_bw: Dict[Link, float]

    @classmethod
    def fresh(cls, sn: SubstrateNetwork) -> "ResourceLedger":
        return cls(residual_cpu=dict(sn.cpu), allocated_bw={l: 0.0 for l in sn.links})

    @classmethod
    def recompute(cls, sn: SubstrateNetwork, active: Iterable) -> "ResourceLedger":
        """由目前所有生效中的嵌入重新計算帳本（一致性檢查用）。"""
        ledger = cls.fresh(sn)
        for embedding in active:
            ledger.commit(sn, embedding)
        return ledger

    def copy(self) -> "ResourceLedger":
        return ResourceLedger(residual_cpu=dict(self.residual_cpu), allocated_bw=dict(self.allocated_bw))

    def residual_bw(self, sn: SubstrateNetwork, l: Link) -> float:
        return sn.cap[l] - self.allocated_bw.get(l, 0.0)

    def commit(self, sn: SubstrateNetwork, embedding) -> None:
        """
        將嵌入的資源配置寫入帳本。

        可能觸發的錯誤:
            - KeyError: 嵌入使用未知的節點或連結。
            - ValueError: 配置後 CPU 為負或連結超過容量（帳本不會被修改）。
        """
        for n, amount in embedding.cpu_alloc.items():
            if n not in self.residual_cpu:
                raise KeyError(f"嵌入 {embedding.vn_id} 使用了不存在的節點 {n}")
            if self.residual_cpu[n] - amount < -CAPACITY_TOL:
                raise ValueError(f"嵌入 {embedding.vn_id} 超賣節點 {n} 的 CPU")
        for l, amount in embedding.bw_alloc.items():
            if l not in sn.cap:
                raise KeyError(f"嵌入 {embedding.vn_id} 使用了不存在的連結 {l}")
            if self.allocated_bw.get(l, 0.0) + amount > sn.cap[l] + CAPACITY_TOL:
                raise ValueError(f"嵌入 {embedding.vn_id} 超賣連結 {l} 的頻寬")
        for n, amount in embedding.cpu_alloc.items():
            self.residual_cpu[n] -= amount
        for l, amount in embedding.bw_alloc.items():
            self.allocated_bw[l] = self.allocated_bw.get(l, 0.0) + amount

    def release(self, sn: SubstrateNetwork, embedding) -> None:
        """歸還嵌入佔用的資源，並把浮點誤差夾回原始資源範圍內。"""
        for n, amount in embedding.cpu_alloc.items():
            self.residual_cpu[n] = min(sn.cpu[n], self.residual_cpu[n] + amount)
        for l, amount in embedding.bw_alloc.items():
            self.allocated_bw[l] = max(0.0, self.allocated_bw[l] - amount)

    def matches(self, other: "ResourceLedger", tol: float = 1e-6) -> bool:
        if self.residual_cpu.keys() != other.residual_cpu.keys():
            return False
        if any(abs(self.residual_cpu[n] - other.residual_cpu[n]) > tol for n in self.residual_cpu):
            return False
        links = set(self.allocated_bw) | set(other.allocated_bw)
        return all(abs(self.allocated_bw.get(l, 0.0) - other.allocated_bw.get(l, 0.0)) <= tol for l in links)
