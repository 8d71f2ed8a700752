import concurrent.futures
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Union

import pandas as pd

from ..config.preset_manager import SweepPreset
from ..config.settings import ExperimentConfig, merge_config
from .experiment_runner import CSV_FLOAT_FORMAT, run_experiment

_logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ["avg_revenue", "acceptance_ratio", "accepted", "rejected", "mean_link_load", "max_link_load"]
TIMING_COLUMN = "embed_time_ms"


@dataclass
class SweepCell:
    """
    掃描中的單一格點（一組參數 × 一個種子）。

    屬性:
        - index (int): 在計畫中的位置。
        - values (Dict[str, Any]): 此格點覆寫的扁平設定。
        - seed (int): 種子。

    使用範例:
        >>> SweepCell(index=0, values={"algorithm": "alg1"}, seed=3)
    """
    index: int
    values: Dict[str, Any]
    seed: int


@dataclass
class SweepPlan:
    """
    掃描計畫：preset 的所有格點依宣告順序展開，每個格點再依種子展開。

    屬性:
        - cells (List[SweepCell]): 格點列表，長度 = 格點數 × 重複次數。
        - description (str): 說明。
        - base_updates (Dict[str, Any]): 套用在所有格點上的扁平設定。
    """
    cells: List[SweepCell]
    description: str
    base_updates: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_preset(cls, preset: SweepPreset, base: ExperimentConfig) -> "SweepPlan":
        cells = []
        for values in preset.cells():
            for r in range(base.replications):
                cells.append(SweepCell(index=len(cells), values=values, seed=base.seed + r))
        return cls(cells=cells, description=preset.description, base_updates=dict(preset.base))


def run_cell(config_data: Dict[str, Any], values: Dict[str, Any], seed: int) -> Dict[str, Any]:
    """執行單一格點並回傳一列結果（格點鍵、種子與摘要欄位）。"""
    config = merge_config(ExperimentConfig.model_validate(config_data), values)
    result = run_experiment(config, seed)
    row: Dict[str, Any] = {key: values[key] for key in values}
    row["seed"] = seed
    for column in SUMMARY_COLUMNS:
        row[column] = result.summary[column]
    if config.timing:
        row[TIMING_COLUMN] = result.summary[TIMING_COLUMN]
    return row


class SweepExecutor:
    """
    掃描執行器，負責格點的並行執行與結果收集。

    每個格點自成一體（設定 + 種子），以行程池並行；結果依計畫順序收集，
    因此輸出與 worker 數量無關。

    Args:
        max_workers: int, 行程數；1 表示在目前行程中循序執行。
    """

    def __init__(self, max_workers: int = 1):
        if max_workers < 1:
            raise ValueError("max_workers 必須 >= 1。")
        self.max_workers = max_workers

    def execute_plan(self, plan: SweepPlan, base: ExperimentConfig) -> pd.DataFrame:
        """
        執行計畫中的所有格點。

        Returns:
            pd.DataFrame, 每個格點一列，順序與 plan.cells 相同。
        """
        if not plan.cells:
            return pd.DataFrame()

        data = merge_config(base, plan.base_updates).model_dump()
        if self.max_workers == 1:
            rows = [self._execute_single_cell(data, cell, len(plan.cells)) for cell in plan.cells]
        else:
            with concurrent.futures.ProcessPoolExecutor(max_workers=self.max_workers) as executor:
                futures = [executor.submit(run_cell, data, cell.values, cell.seed) for cell in plan.cells]
                rows = []
                for cell, future in zip(plan.cells, futures):
                    rows.append(future.result())
                    _logger.info("sweep cell %d/%d done: %s seed=%d", cell.index + 1, len(plan.cells),
                                 cell.values, cell.seed)
        return pd.DataFrame(rows)

    def _execute_single_cell(self, data: Dict[str, Any], cell: SweepCell, total: int) -> Dict[str, Any]:
        _logger.info("sweep cell %d/%d: %s seed=%d", cell.index + 1, total, cell.values, cell.seed)
        return run_cell(data, cell.values, cell.seed)


def write_sweep_csv(frame: pd.DataFrame, path: Union[str, Path]) -> None:
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
