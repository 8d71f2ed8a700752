"""
可重現的隨機拓樸與 VN 請求產生器。

所有產生器都使用 numpy 的 ``default_rng``（PCG64 位元產生器）並接受 64-bit 種子；
相同 (參數, 種子) 一定得到相同結果。
"""
import logging
import math
from typing import Dict, List, Literal, Optional, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..model.network import Link, SubstrateNetwork, VirtualNetworkRequest, link_key

_logger = logging.getLogger(__name__)

# 傳輸範圍區間（依部署密度命名）
DENSITY_RANGES: Dict[str, Tuple[float, float]] = {
    "high": (20.0, 40.0),
    "middle": (15.0, 30.0),
    "low": (10.0, 20.0),
}

DEFAULT_RESOURCE_INTERVAL = (100.0, 300.0)

VNShape = Literal["random", "star", "tree", "hub_and_spoke"]


class RequestGenerationError(RuntimeError):
    """VN 請求在重抽上限內仍無法得到連通圖。"""


def _check_interval(interval: Tuple[float, float], name: str, strictly_positive: bool = True) -> None:
    low, high = interval
    if low > high or (strictly_positive and low <= 0) or low < 0:
        raise ValueError(f"{name} 必須滿足 0 < low <= high，收到 {interval}")


class RandomTopologyParams(BaseModel):
    """隨機幾何拓樸的參數。"""
    model_config = ConfigDict(extra="forbid")

    n_nodes: int = Field(50, ge=1, description="SN 節點數")
    square_side: float = Field(100.0, gt=0, description="部署正方形邊長")
    range_interval: Tuple[float, float] = Field(DENSITY_RANGES["middle"], description="傳輸範圍的均勻分布區間")
    resource_interval: Tuple[float, float] = Field(DEFAULT_RESOURCE_INTERVAL, description="CPU 與容量的均勻分布區間")
    interference_hops: int = Field(2, ge=1)

    @model_validator(mode="after")
    def _intervals(self):
        _check_interval(self.range_interval, "range_interval")
        _check_interval(self.resource_interval, "resource_interval")
        return self


class RequestParams(BaseModel):
    """VN 請求的分布參數。"""
    model_config = ConfigDict(extra="forbid")

    node_count: Tuple[int, int] = Field((4, 10), description="節點數的均勻整數區間")
    connect_prob: Tuple[float, float] = Field((0.2, 0.6), description="節點對連線機率的區間，每個請求抽一次")
    requirement: Tuple[float, float] = Field((1.0, 10.0), description="CPU/頻寬需求的均勻分布區間")
    mean_duration: float = Field(4.0, gt=0, description="指數分布持有時間的平均（時間窗）")
    shape: VNShape = "random"
    max_attempts: int = Field(1000, ge=1)

    @model_validator(mode="after")
    def _intervals(self):
        if not 1 <= self.node_count[0] <= self.node_count[1]:
            raise ValueError(f"node_count 必須滿足 1 <= low <= high，收到 {self.node_count}")
        _check_interval(self.connect_prob, "connect_prob", strictly_positive=False)
        if self.connect_prob[1] > 1:
            raise ValueError("connect_prob 必須位於 [0, 1]。")
        _check_interval(self.requirement, "requirement")
        return self


def derive_seed(seed: int, *salt: int) -> int:
    """由主種子與 salt 推導子種子（SeedSequence，與呼叫順序無關）。"""
    return int(np.random.SeedSequence([seed, *salt]).generate_state(1, dtype=np.uint64)[0])


def _draw_resources(rng: np.random.Generator, nodes: List[int], links: List[Link],
                    resource_interval: Tuple[float, float]) -> Tuple[Dict[int, float], Dict[Link, float]]:
    low, high = resource_interval
    cpu = {n: float(x) for n, x in zip(nodes, rng.uniform(low, high, len(nodes)))}
    cap = {l: float(x) for l, x in zip(links, rng.uniform(low, high, len(links)))}
    return cpu, cap


def generate_random_topology(n_nodes: int = 50,
                             square_side: float = 100.0,
                             range_interval: Tuple[float, float] = DENSITY_RANGES["middle"],
                             seed: int = 0,
                             resource_interval: Tuple[float, float] = DEFAULT_RESOURCE_INTERVAL,
                             interference_hops: int = 2) -> SubstrateNetwork:
    """
    在正方形上均勻隨機放置節點，並以「互在彼此傳輸範圍內」建立連結。

    Args:
        n_nodes: int, 節點數（>= 1）。
        square_side: float, 正方形邊長。
        range_interval: Tuple[float, float], 每個節點傳輸範圍的均勻分布區間。
        seed: int, 種子。
        resource_interval: Tuple[float, float], CPU 與容量的均勻分布區間。
        interference_hops: int, 干擾模型 k。

    Returns:
        SubstrateNetwork, 可能不連通（由呼叫端決定是否重抽）。

    Examples:
        >>> sn = generate_random_topology(50, 100.0, (15.0, 30.0), seed=7)
        >>> len(sn.nodes)
        50
    """
    params = RandomTopologyParams(n_nodes=n_nodes, square_side=square_side, range_interval=range_interval,
                                  resource_interval=resource_interval, interference_hops=interference_hops)
    rng = np.random.default_rng(seed)
    positions = rng.uniform(0.0, params.square_side, size=(params.n_nodes, 2))
    ranges = rng.uniform(params.range_interval[0], params.range_interval[1], size=params.n_nodes)

    nodes = list(range(params.n_nodes))
    links: List[Link] = []
    for i in nodes:
        for j in range(i + 1, params.n_nodes):
            distance = float(np.linalg.norm(positions[i] - positions[j]))
            # 需互相涵蓋：距離不超過兩端各自的傳輸範圍
            if distance <= min(ranges[i], ranges[j]):
                links.append((i, j))

    cpu, cap = _draw_resources(rng, nodes, links, params.resource_interval)
    return SubstrateNetwork(
        nodes=tuple(nodes),
        links=tuple(links),
        cpu=cpu,
        cap=cap,
        positions={n: (float(positions[n][0]), float(positions[n][1])) for n in nodes},
        interference_hops=params.interference_hops,
    )


def generate_connected_topology(params: RandomTopologyParams, seed: int, max_attempts: int = 100) -> SubstrateNetwork:
    """
    重抽隨機拓樸直到連通。第 i 次嘗試使用 derive_seed(seed, i)。

    Raises:
        RuntimeError: max_attempts 次內都不連通。
    """
    for attempt in range(max_attempts):
        sn = generate_random_topology(params.n_nodes, params.square_side, params.range_interval,
                                      seed=derive_seed(seed, attempt),
                                      resource_interval=params.resource_interval,
                                      interference_hops=params.interference_hops)
        if sn.is_connected():
            return sn
        _logger.warning("random substrate (seed=%d, attempt=%d) is disconnected, resampling", seed, attempt)
    raise RuntimeError(f"重抽 {max_attempts} 次仍無法產生連通的基底網路（seed={seed}）")


def generate_grid_topology(width: int = 7,
                           height: int = 7,
                           resource_interval: Tuple[float, float] = DEFAULT_RESOURCE_INTERVAL,
                           seed: int = 0,
                           spacing: float = 1.0,
                           interference_hops: int = 2) -> SubstrateNetwork:
    """
    四鄰接格狀拓樸；節點 id 為 row * width + col。

    Examples:
        >>> sn = generate_grid_topology(7, 7, seed=1)
        >>> len(sn.nodes), len(sn.links)
        (49, 84)
    """
    if width < 1 or height < 1:
        raise ValueError("格狀網路的寬與高必須 >= 1。")
    _check_interval(resource_interval, "resource_interval")
    rng = np.random.default_rng(seed)
    nodes = list(range(width * height))
    links: List[Link] = []
    for r in range(height):
        for c in range(width):
            n = r * width + c
            if c + 1 < width:
                links.append((n, n + 1))
            if r + 1 < height:
                links.append((n, n + width))
    links.sort()
    cpu, cap = _draw_resources(rng, nodes, links, resource_interval)
    return SubstrateNetwork(
        nodes=tuple(nodes),
        links=tuple(links),
        cpu=cpu,
        cap=cap,
        positions={n: ((n % width) * spacing, (n // width) * spacing) for n in nodes},
        interference_hops=interference_hops,
    )


def _random_structure(rng: np.random.Generator, n: int, params: RequestParams) -> List[Link]:
    p = rng.uniform(params.connect_prob[0], params.connect_prob[1])
    for _ in range(params.max_attempts):
        draws = rng.random(n * (n - 1) // 2)
        links = []
        idx = 0
        for i in range(n):
            for j in range(i + 1, n):
                if draws[idx] < p:
                    links.append((i, j))
                idx += 1
        if _connected(n, links):
            return links
    raise RequestGenerationError(f"重抽 {params.max_attempts} 次仍無法產生 {n} 個節點的連通 VN（p={p:.3f}）")


def _connected(n: int, links: List[Link]) -> bool:
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(links)
    return nx.is_connected(g)


def generate_vn_request(params: Optional[RequestParams] = None,
                        seed: int = 0,
                        vn_id: str = "vn-0",
                        arrival_window: int = 0) -> VirtualNetworkRequest:
    """
    依分布參數產生一個 VN 請求。

    形狀:
        - random：每個請求抽一次連線機率，逐對連線，不連通則重抽（上限 max_attempts）。
        - star / hub_and_spoke：節點 0 為中心，與其他所有節點相連。
        - tree：節點 i 接到均勻選出的既有節點 j < i。

    Args:
        params: Optional[RequestParams], 分布參數；None 使用預設。
        seed: int, 種子。
        vn_id: str, 請求識別碼。
        arrival_window: int, 到達時間窗。

    Returns:
        VirtualNetworkRequest, 連通。

    Raises:
        RequestGenerationError: random 形狀重抽上限內仍不連通。
    """
    params = params or RequestParams()
    rng = np.random.default_rng(seed)
    n = int(rng.integers(params.node_count[0], params.node_count[1] + 1))
    nodes = list(range(n))

    if params.shape == "random":
        links = _random_structure(rng, n, params)
    elif params.shape in ("star", "hub_and_spoke"):
        links = [(0, i) for i in range(1, n)]
    else:
        links = [link_key(int(rng.integers(0, i)), i) for i in range(1, n)]

    low, high = params.requirement
    cpu_req = {v: float(x) for v, x in zip(nodes, rng.uniform(low, high, n))}
    bw_req = {l: float(x) for l, x in zip(links, rng.uniform(low, high, len(links)))}
    duration = max(1, math.ceil(rng.exponential(params.mean_duration)))
    return VirtualNetworkRequest(vn_id=vn_id, nodes=tuple(nodes), links=tuple(links), cpu_req=cpu_req,
                                 bw_req=bw_req, duration=duration, arrival_window=arrival_window)
