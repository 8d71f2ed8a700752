"""
把 sweep 結果整理成繪圖用的序列：每個 (x 值, 分組) 一列，含平均、標準差、樣本數與
95% 常態近似信賴區間半寬。
"""
from typing import List, Optional

import numpy as np
import pandas as pd

from ..config.preset_manager import SweepPreset

Z_95 = 1.959963984540054
PLOT_COLUMNS = ["mean", "std", "count", "ci95_half_width"]


def plot_series(frame: pd.DataFrame, x: str, series: Optional[str] = None, metric: str = "avg_revenue") -> pd.DataFrame:
    """
    依 x（與 series）分組彙整 metric。

    Args:
        frame: pd.DataFrame, sweep 輸出。
        x: str, x 軸欄位。
        series: Optional[str], 分組欄位。
        metric: str, 彙整的指標欄位。

    Returns:
        pd.DataFrame, 欄位為 [x, (series), "metric", "mean", "std", "count", "ci95_half_width"]，
        列順序依 x 與 series 在輸入中第一次出現的順序。

    Raises:
        KeyError: 欄位不存在。
    """
    keys: List[str] = [x] + ([series] if series else [])
    for column in keys + [metric]:
        if column not in frame.columns:
            raise KeyError(f"掃描輸出沒有欄位 '{column}'")

    grouped = frame.groupby(keys, sort=False)[metric]
    out = grouped.agg(["mean", "std", "count"]).reset_index()
    # 單一樣本的標準差定義為 0
    out["std"] = out["std"].fillna(0.0)
    out["ci95_half_width"] = Z_95 * out["std"] / np.sqrt(out["count"])
    out.insert(len(keys), "metric", metric)
    return out[keys + ["metric"] + PLOT_COLUMNS]


def plot_preset(frame: pd.DataFrame, preset: SweepPreset, metric: str = "avg_revenue") -> pd.DataFrame:
    return plot_series(frame, preset.x, preset.series, metric)
