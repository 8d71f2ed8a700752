import itertools
import json
import os
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class SweepPreset(BaseModel):
    """
    一組參數掃描。

    屬性:
        - description (str): 說明。
        - base (Dict[str, Any]): 套用在所有格點上的扁平設定。
        - grid (Dict[str, List[Any]]): 掃描的鍵與值，格點為各鍵值的笛卡兒積（依鍵的宣告順序）。
        - x (str): plot-data 的 x 軸鍵。
        - series (Optional[str]): plot-data 的分組鍵。
    """
    model_config = ConfigDict(extra="forbid")

    description: str
    base: Dict[str, Any] = Field(default_factory=dict)
    grid: Dict[str, List[Any]]
    x: str
    series: Optional[str] = None

    def cells(self) -> List[Dict[str, Any]]:
        keys = list(self.grid)
        return [dict(zip(keys, values)) for values in itertools.product(*(self.grid[k] for k in keys))]


class PresetManager:
    """
    掃描預設管理器，從套件內的 JSON 讀取預設。

    Args:
        config_path: str, 預設檔路徑，相對於 config 目錄。

    Exceptions:
        FileNotFoundError: 預設檔不存在。

    Examples:
        >>> manager = PresetManager()
        >>> len(manager.get("arrival_rate").cells())
        48
    """

    def __init__(self, config_path: str = "presets.json"):
        self.config_path = os.path.join(os.path.dirname(__file__), config_path)
        self._load_presets()

    def _load_presets(self):
        if not os.path.exists(self.config_path):
            raise FileNotFoundError(f"Preset configuration file not found at {self.config_path}")

        with open(self.config_path, 'r', encoding='utf-8') as f:
            config_data = json.load(f)

        self.presets: Dict[str, SweepPreset] = {
            name: SweepPreset.model_validate(entry) for name, entry in config_data.items()
        }

    def names(self) -> List[str]:
        return list(self.presets)

    def get(self, name: str) -> SweepPreset:
        """
        Raises:
            KeyError: 未知的預設名稱。
        """
        if name not in self.presets:
            raise KeyError(f"未知的掃描預設：{name}（可用：{', '.join(self.presets)}）")
        return self.presets[name]
