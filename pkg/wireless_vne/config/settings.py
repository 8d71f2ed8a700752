"""
實驗設定：pydantic 模型、扁平點號鍵的讀取與 --set 覆寫。

設定檔為 JSON，鍵以點號表示巢狀欄位，例如::

    {
      "algorithm": "alg6",
      "substrate.density": "middle",
      "requests.arrival_rate": 5,
      "checker.method": "simulation",
      "checker.epsilon": 0.3
    }
"""
import json
from pathlib import Path
from typing import Any, Dict, Iterable, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..model.embedding import AlgorithmVariant
from ..model.network import SubstrateNetwork
from ..network.generators import (
    DEFAULT_RESOURCE_INTERVAL,
    DENSITY_RANGES,
    RandomTopologyParams,
    RequestParams,
    generate_connected_topology,
    generate_grid_topology,
)
from ..network.network_io import load_substrate

Density = Literal["high", "middle", "low"]
CheckerMethod = Literal["sufficient", "simulation", "exact"]


class SubstrateSettings(BaseModel):
    """基底網路來源：隨機幾何拓樸、格狀拓樸或檔案。"""
    model_config = ConfigDict(extra="forbid")

    kind: Literal["random", "grid", "file"] = "random"
    n_nodes: int = Field(50, ge=1)
    square_side: float = Field(100.0, gt=0)
    density: Density = "middle"
    range_interval: Optional[Tuple[float, float]] = Field(None, description="指定時覆蓋 density 的傳輸範圍區間")
    resource_interval: Tuple[float, float] = DEFAULT_RESOURCE_INTERVAL
    grid_width: int = Field(7, ge=1)
    grid_height: int = Field(7, ge=1)
    path: Optional[str] = None
    max_attempts: int = Field(100, ge=1)

    @model_validator(mode="after")
    def _file_needs_path(self):
        if self.kind == "file" and not self.path:
            raise ValueError("substrate.kind 為 'file' 時必須提供 substrate.path。")
        return self

    def max_link_count(self) -> Optional[int]:
        """產生的基底網路最多可能有幾條連結；檔案來源回傳 None（讀檔前無法得知）。"""
        if self.kind == "grid":
            return self.grid_width * (self.grid_height - 1) + self.grid_height * (self.grid_width - 1)
        if self.kind == "random":
            return self.n_nodes * (self.n_nodes - 1) // 2
        return None

    def build(self, seed: int, interference_hops: int) -> SubstrateNetwork:
        """
        依設定產生（或讀取）基底網路。

        Raises:
            RuntimeError: 隨機拓樸在重抽上限內都不連通。
            FileNotFoundError: kind="file" 且檔案不存在。
        """
        if self.kind == "file":
            sn = load_substrate(self.path)
            if sn.interference_hops != interference_hops and sn.interference is None:
                sn = SubstrateNetwork(nodes=sn.nodes, links=sn.links, cpu=sn.cpu, cap=sn.cap,
                                      positions=sn.positions, interference_hops=interference_hops)
            return sn
        if self.kind == "grid":
            return generate_grid_topology(self.grid_width, self.grid_height, self.resource_interval,
                                          seed=seed, interference_hops=interference_hops)
        params = RandomTopologyParams(
            n_nodes=self.n_nodes,
            square_side=self.square_side,
            range_interval=self.range_interval or DENSITY_RANGES[self.density],
            resource_interval=self.resource_interval,
            interference_hops=interference_hops,
        )
        return generate_connected_topology(params, seed, self.max_attempts)


class RequestSettings(BaseModel):
    """到達流程與 VN 請求分布。"""
    model_config = ConfigDict(extra="forbid")

    arrival_rate: float = Field(5.0, ge=0, description="每個時間窗的 Poisson 到達平均數")
    mean_duration: float = Field(4.0, gt=0, description="指數分布持有時間的平均（時間窗）")
    node_count: Tuple[int, int] = (4, 10)
    connect_prob: Tuple[float, float] = (0.2, 0.6)
    requirement: Tuple[float, float] = (1.0, 10.0)
    shape: Literal["random", "star", "tree", "hub_and_spoke"] = "random"

    def params(self) -> RequestParams:
        return RequestParams(node_count=self.node_count, connect_prob=self.connect_prob,
                             requirement=self.requirement, mean_duration=self.mean_duration,
                             shape=self.shape)


class CheckerSettings(BaseModel):
    """可行性檢查方法與其參數。"""
    model_config = ConfigDict(extra="forbid")

    method: CheckerMethod = "simulation"
    epsilon: float = Field(0.3, ge=0, lt=1)
    horizon: int = Field(2000, ge=1)
    q_max: float = Field(50.0, gt=0)
    slope_tol: float = Field(1e-3, ge=0)
    stochastic: bool = False
    max_vertices: int = Field(20, ge=1)

    def params(self, seed: int = 0) -> Dict[str, Any]:
        """回傳 method 對應的 handler 參數（CheckerRegistry.create 使用）。"""
        if self.method == "sufficient":
            return {}
        if self.method == "exact":
            return {"max_vertices": self.max_vertices}
        return {"epsilon": self.epsilon, "horizon": self.horizon, "seed": seed, "q_max": self.q_max,
                "slope_tol": self.slope_tol, "stochastic": self.stochastic}


class ExperimentConfig(BaseModel):
    """
    一次線上實驗的完整設定；所有欄位都可由設定檔或 --set 覆寫。

    使用範例:
        >>> config = load_config(overrides=["requests.arrival_rate=2", "algorithm=alg3"])
        >>> config.requests.arrival_rate, config.k_search
        (2.0, 8)

    可能觸發的錯誤:
        - pydantic.ValidationError: 未知的鍵或不合法的值（在執行前即拒絕）。
    """
    model_config = ConfigDict(extra="forbid")

    substrate: SubstrateSettings = Field(default_factory=SubstrateSettings)
    requests: RequestSettings = Field(default_factory=RequestSettings)
    checker: CheckerSettings = Field(default_factory=CheckerSettings)
    algorithm: str = "alg6"
    alpha: float = Field(10.0, ge=0)
    k_search: int = Field(8, ge=1)
    interference_hops: int = Field(2, ge=1)
    windows: int = Field(200, ge=1)
    warmup: int = Field(20, ge=0)
    replications: int = Field(1, ge=1)
    seed: int = Field(0, ge=0)
    max_workers: int = Field(1, ge=1)
    timing: bool = False

    @field_validator("algorithm")
    @classmethod
    def _known_algorithm(cls, value: str) -> str:
        return AlgorithmVariant.from_name(value).name

    @model_validator(mode="after")
    def _warmup_inside_horizon(self):
        if self.warmup >= self.windows:
            raise ValueError(f"warmup ({self.warmup}) 必須小於 windows ({self.windows})")
        return self

    @model_validator(mode="after")
    def _exact_checker_fits_substrate(self):
        # 精確判定只適用於小型實例：基底網路的連結數可能超過上限時，在執行前拒絕
        links = self.substrate.max_link_count()
        if self.checker.method == "exact" and links is not None and links > self.checker.max_vertices:
            raise ValueError(
                f"checker.method=exact 最多處理 {self.checker.max_vertices} 條有負載的連結，"
                f"但此基底網路最多可能有 {links} 條連結；請改用 simulation 或調高 checker.max_vertices"
            )
        return self

    @property
    def variant(self) -> AlgorithmVariant:
        return AlgorithmVariant.from_name(self.algorithm)


def unflatten(flat: Dict[str, Any]) -> Dict[str, Any]:
    """把 {"a.b": 1} 轉成 {"a": {"b": 1}}；已巢狀的值原樣合併。"""
    nested: Dict[str, Any] = {}
    for key, value in flat.items():
        parts = key.split(".")
        node = nested
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ValueError(f"設定鍵 '{key}' 與既有的純量值衝突")
        if isinstance(value, dict) and isinstance(node.get(parts[-1]), dict):
            node[parts[-1]].update(value)
        else:
            node[parts[-1]] = value
    return nested


def flatten(nested: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in nested.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, f"{name}."))
        else:
            flat[name] = value
    return flat


def parse_override(item: str) -> Tuple[str, Any]:
    """
    解析 "key=value"；value 先以 JSON 解析，失敗時保留為字串。

    Raises:
        ValueError: 缺少 '='。
    """
    if "=" not in item:
        raise ValueError(f"覆寫格式必須為 key=value，收到 '{item}'")
    key, raw = item.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def merge_config(config: ExperimentConfig, updates: Dict[str, Any]) -> ExperimentConfig:
    """回傳套用扁平更新後的新設定（重新驗證）。"""
    flat = flatten(config.model_dump())
    flat.update(updates)
    return ExperimentConfig.model_validate(unflatten(flat))


def load_config(path: Optional[Union[str, Path]] = None, overrides: Iterable[str] = ()) -> ExperimentConfig:
    """
    讀取設定檔（可省略）並套用覆寫。

    Raises:
        FileNotFoundError: 設定檔不存在。
        ValueError: 覆寫格式錯誤或設定不合法。
    """
    flat: Dict[str, Any] = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise ValueError("設定檔內容必須是 JSON 物件。")
        flat.update(flatten(data))
    for item in overrides:
        key, value = parse_override(item)
        flat[key] = value
    return ExperimentConfig.model_validate(unflatten(flat))
