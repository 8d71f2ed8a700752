from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, Literal

CheckMethod = Literal["sufficient", "simulation", "exact"]


@dataclass(frozen=True)
class FeasibilityVerdict:
    """
    可行性檢查結果。

    屬性:
        - feasible (bool): 是否可排程。
        - method (CheckMethod): 使用的檢查方法。
        - detail (Dict[str, Any]): 診斷資訊；sufficient 為違反的頂點與其負載和，
          simulation 為尾段佇列統計，exact 為時間分配憑證。
    """
    feasible: bool
    method: CheckMethod
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_record(self) -> Dict[str, Any]:
        return {"feasible": self.feasible, "method": self.method, "detail": self.detail}


@dataclass
class SchedulerState:
    """模擬檢查中的佇列狀態：每個衝突圖頂點的積壓量與目前時槽。"""
    queues: Dict[Hashable, float]
    slot: int = 0

    def total_backlog(self) -> float:
        return sum(self.queues.values())
