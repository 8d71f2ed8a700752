"""
由 ExperimentConfig 執行完整的線上實驗，輸出每窗指標與摘要。
"""
import concurrent.futures
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from ..config.settings import ExperimentConfig
from ..embedding.embedder import Embedder
from ..model.network import VirtualNetworkRequest
from ..network.generators import derive_seed, generate_vn_request
from ..registry.checker_registry import CheckerRegistry
from .online_engine import OnlineEngine, SimulationState, WindowRecord

_logger = logging.getLogger(__name__)

METRIC_COLUMNS = [
    "window",
    "R_t",
    "cumulative_avg_revenue",
    "accepted",
    "rejected",
    "active_count",
    "mean_link_load",
    "max_link_load",
]

CSV_FLOAT_FORMAT = "%.10g"

# derive_seed 的 salt：各隨機來源使用獨立子種子
_SUBSTRATE_SALT = 0
_ARRIVAL_SALT = 1
_REQUEST_SALT = 2


@dataclass
class ExperimentResult:
    """
    一次實驗（單一種子）的結果。

    屬性:
        - seed (int): 種子。
        - config (Dict[str, Any]): 實驗設定（model_dump）。
        - records (List[WindowRecord]): 每窗紀錄。
        - summary (Dict[str, float]): 暖機後的時間平均收益、接受率與負載統計。
    """
    seed: int
    config: Dict[str, Any]
    records: List[WindowRecord]
    summary: Dict[str, float] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        """
        轉成每窗指標表，欄位依 METRIC_COLUMNS。

        cumulative_avg_revenue 為暖機結束後到該窗為止的 R(t) 平均；暖機中的列為 0。
        """
        warmup = self.config.get("warmup", 0)
        frame = pd.DataFrame({
            "window": [r.window for r in self.records],
            "R_t": [r.revenue for r in self.records],
            "accepted": [r.accepted for r in self.records],
            "rejected": [r.rejected for r in self.records],
            "active_count": [r.active_count for r in self.records],
            "mean_link_load": [r.mean_link_load for r in self.records],
            "max_link_load": [r.max_link_load for r in self.records],
        })
        measured = frame["R_t"].where(frame["window"] >= warmup)
        running = measured.expanding().mean().fillna(0.0)
        frame["cumulative_avg_revenue"] = running
        return frame[METRIC_COLUMNS]


def summarize(records: List[WindowRecord], warmup: int) -> Dict[str, float]:
    """暖機後視窗的時間平均收益與其他摘要。"""
    measured = [r for r in records if r.window >= warmup]
    accepted = sum(r.accepted for r in records)
    rejected = sum(r.rejected for r in records)
    attempts = accepted + rejected
    return {
        "avg_revenue": float(np.mean([r.revenue for r in measured])) if measured else 0.0,
        "acceptance_ratio": accepted / attempts if attempts else 0.0,
        "accepted": accepted,
        "rejected": rejected,
        "mean_link_load": float(np.mean([r.mean_link_load for r in measured])) if measured else 0.0,
        "max_link_load": max((r.max_link_load for r in records), default=0.0),
        "embed_time_ms": 1000.0 * sum(r.embed_seconds for r in records) / attempts if attempts else 0.0,
    }


def generate_arrivals(config: ExperimentConfig, seed: int) -> List[List[VirtualNetworkRequest]]:
    """
    產生每個時間窗的到達請求：Poisson 個數、獨立同分布的請求圖。

    請求的 vn_id 為 "vn-<window>-<index>"，每個請求使用獨立子種子，因此調整
    到達率不會改變已存在請求的內容。
    """
    rng = np.random.default_rng(derive_seed(seed, _ARRIVAL_SALT))
    counts = rng.poisson(config.requests.arrival_rate, size=config.windows)
    params = config.requests.params()
    return [
        [
            generate_vn_request(params, seed=derive_seed(seed, _REQUEST_SALT, t, i),
                                vn_id=f"vn-{t}-{i}", arrival_window=t)
            for i in range(int(counts[t]))
        ]
        for t in range(config.windows)
    ]


def build_embedder(config: ExperimentConfig, seed: int, registry: Optional[CheckerRegistry] = None) -> Embedder:
    registry = registry or CheckerRegistry()
    checker = registry.create(config.checker.method, **config.checker.params(seed))
    return Embedder(checker, config.variant, config.k_search, config.alpha)


def run_experiment(config: ExperimentConfig, seed: Optional[int] = None) -> ExperimentResult:
    """
    執行一次線上實驗。

    Args:
        config: ExperimentConfig, 已驗證的設定。
        seed: Optional[int], 種子；None 時使用 config.seed。

    Returns:
        ExperimentResult

    Examples:
        >>> result = run_experiment(load_config(overrides=["windows=30", "warmup=5"]), seed=1)
        >>> len(result.records)
        30
    """
    seed = config.seed if seed is None else seed
    sn = config.substrate.build(derive_seed(seed, _SUBSTRATE_SALT), config.interference_hops)
    if config.checker.method == "exact" and len(sn.links) > config.checker.max_vertices:
        raise ValueError(f"checker.method=exact 最多處理 {config.checker.max_vertices} 條連結，"
                         f"基底網路有 {len(sn.links)} 條；請改用 simulation 或調高 checker.max_vertices")
    arrivals = generate_arrivals(config, seed)
    engine = OnlineEngine(build_embedder(config, seed))
    _logger.info("experiment seed=%d: %s, %d substrate nodes, %d links, %d requests",
                 seed, config.algorithm, len(sn.nodes), len(sn.links), sum(len(a) for a in arrivals))

    state = SimulationState.initial(sn)
    for batch in arrivals:
        engine.step_window(state, batch)

    summary = summarize(state.records, config.warmup)
    _logger.info("experiment seed=%d finished: avg revenue %.3f, acceptance %.3f",
                 seed, summary["avg_revenue"], summary["acceptance_ratio"])
    return ExperimentResult(seed=seed, config=config.model_dump(), records=state.records, summary=summary)


def _run_experiment_dump(config_data: Dict[str, Any], seed: int) -> ExperimentResult:
    return run_experiment(ExperimentConfig.model_validate(config_data), seed)


def run_replications(config: ExperimentConfig, max_workers: Optional[int] = None) -> List[ExperimentResult]:
    """
    以種子 config.seed + i（i < config.replications）執行獨立重複實驗，結果依種子順序回傳。
    """
    seeds = [config.seed + i for i in range(config.replications)]
    workers = max_workers or config.max_workers
    if workers <= 1 or len(seeds) == 1:
        return [run_experiment(config, s) for s in seeds]

    data = config.model_dump()
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(_run_experiment_dump, data, s) for s in seeds]
        return [future.result() for future in futures]


def write_metrics_csv(result: ExperimentResult, path: Union[str, Path]) -> None:
    """以固定欄位與浮點格式寫出每窗指標（相同結果必得到位元組相同的檔案）。"""
    result.to_frame().to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
