import functools
import logging
from typing import Any, Callable, Dict, List, Type

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..feasibility.exact_oracle import DEFAULT_MAX_VERTICES, ORACLE_TOL, exact_oracle
from ..feasibility.simulation import DEFAULT_EPSILON, DEFAULT_HORIZON, DEFAULT_Q_MAX, DEFAULT_SLOPE_TOL, simulate_check
from ..feasibility.sufficient import SUFFICIENT_TOL, sufficient_check
from ..model.network import ConflictGraph, LoadVector
from ..model.verdict import FeasibilityVerdict

_logger = logging.getLogger(__name__)

# 錯誤訊息前綴，提供一致且可辨識的錯誤格式。
ERROR_PREFIX = "[CheckerError]"

Checker = Callable[[ConflictGraph, LoadVector], FeasibilityVerdict]


class SufficientParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tol: float = Field(SUFFICIENT_TOL, ge=0, description="不等式容忍值")


class SimulationParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    epsilon: float = Field(DEFAULT_EPSILON, ge=0, lt=1, description="排程器退化係數 ε")
    horizon: int = Field(DEFAULT_HORIZON, ge=1, description="模擬時槽數")
    seed: int = Field(0, description="隨機到達模式的種子")
    q_max: float = Field(DEFAULT_Q_MAX, gt=0, description="尾段積壓上限")
    slope_tol: float = Field(DEFAULT_SLOPE_TOL, ge=0, description="尾段斜率上限")
    stochastic: bool = Field(False, description="是否使用隨機（Bernoulli）到達")
    prune: bool = Field(True, description="是否跳過鄰域條件已保證有界的連通分量")


class ExactParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    max_vertices: int = Field(DEFAULT_MAX_VERTICES, ge=1, description="正負載頂點數上限")
    tol: float = Field(ORACLE_TOL, ge=0, description="總時間與 1 比較的容忍值")


class CheckerRegistry:
    """
    可行性檢查註冊表。

    提供檢查方法的註冊、參數驗證、建立與執行。每個方法由名稱、說明、pydantic 參數
    模型與處理函式 handler(cg, loads, **params) 組成。

    使用情境：
        - 線上引擎以 `create()` 取得已綁定參數的檢查函式，交給 `Embedder`。
        - CLI 的 check 指令以 `execute_check()` 執行單次檢查並取得 verdict。

    使用範例：
        >>> registry = CheckerRegistry()
        >>> checker = registry.create("simulation", epsilon=0.3, horizon=10_000)
        >>> checker(cg, loads).feasible
        False
        >>> registry.execute_check("unknown", cg=cg, loads=loads).detail["error"]
        '[CheckerError] 未知的檢查方法：unknown'

    內建檢查方法：
        - sufficient：鄰域負載和 <= 1 的充分條件。
        - simulation：ε 退化的貪婪最大權重排程模擬。
        - exact：小型實例的線性規劃精確判定。
    """

    def __init__(self) -> None:
        self._registry: Dict[str, Dict[str, Any]] = {}
        self._register_default_checkers()

    def _register_default_checkers(self) -> None:
        self.register_checker(
            name="sufficient",
            description="Sufficient condition: every vertex's load plus its neighbours' loads is at most 1.",
            parameters=SufficientParams,
            handler=sufficient_check,
        )
        self.register_checker(
            name="simulation",
            description="Simulate an epsilon-degraded greedy max-weight scheduler and test queue stability.",
            parameters=SimulationParams,
            handler=simulate_check,
        )
        self.register_checker(
            name="exact",
            description="Exact time-sharing LP over maximal independent sets (small instances only).",
            parameters=ExactParams,
            handler=exact_oracle,
        )

    def register_checker(self,
                         *,
                         name: str,
                         description: str,
                         parameters: Type[BaseModel],
                         handler: Callable[..., FeasibilityVerdict]) -> None:
        """
        註冊檢查方法，同名者覆蓋。

        參數：
            name：方法名稱（唯一）。
            description：方法說明。
            parameters：pydantic 參數模型類別，用於驗證 handler 的關鍵字參數。
            handler：呼叫簽名為 `handler(cg, loads, **params)`。

        例外：
            ValueError：name 為空、handler 不可呼叫或 parameters 不是 BaseModel 子類別。
        """
        if not name or not isinstance(name, str):
            raise ValueError("檢查方法名稱不可為空，且需為字串。")
        if not callable(handler):
            raise ValueError("handler 必須可呼叫。")
        if not (isinstance(parameters, type) and issubclass(parameters, BaseModel)):
            raise ValueError("parameters 必須是 pydantic BaseModel 的子類別。")
        self._registry[name] = {"description": description, "parameters": parameters, "handler": handler}

    def names(self) -> List[str]:
        return sorted(self._registry)

    def describe(self) -> List[Dict[str, Any]]:
        """回傳每個方法的名稱、說明與參數 JSON schema。"""
        return [
            {"name": name, "description": entry["description"],
             "parameters": entry["parameters"].model_json_schema()}
            for name, entry in sorted(self._registry.items())
        ]

    def create(self, checker_name: str, /, **params: Any) -> Checker:
        """
        建立已綁定（並驗證過）參數的檢查函式。

        例外：
            KeyError：未註冊的方法。
            ValueError：參數驗證失敗（pydantic.ValidationError 為其子類別）。
        """
        entry = self._registry.get(checker_name)
        if entry is None:
            raise KeyError(f"{ERROR_PREFIX} 未知的檢查方法：{checker_name}")
        validated = entry["parameters"](**params)
        return functools.partial(entry["handler"], **validated.model_dump())

    # '/' 讓方法名稱成為位置限定參數，'*' 之後的框架旗標與衝突圖、負載一律以名稱傳遞。
    def execute_check(self,
                      checker_name: str,
                      /,
                      *,
                      cg: ConflictGraph,
                      loads: LoadVector,
                      raise_on_error: bool = False,
                      **params: Any) -> FeasibilityVerdict:
        """
        執行一次檢查。

        失敗時（未註冊、參數錯誤、handler 例外）若 raise_on_error 為 False，回傳
        feasible=False 且 detail["error"] 以固定前綴開頭的 verdict；否則拋出原例外。
        """
        try:
            checker = self.create(checker_name, **params)
        except KeyError:
            if raise_on_error:
                raise
            return self._error_verdict(checker_name, f"{ERROR_PREFIX} 未知的檢查方法：{checker_name}")
        except (ValidationError, TypeError, ValueError) as e:
            if raise_on_error:
                raise
            return self._error_verdict(checker_name, f"{ERROR_PREFIX} '{checker_name}' 的參數不合法：{e}")

        try:
            return checker(cg, loads)
        except Exception as e:
            if raise_on_error:
                raise
            _logger.error("checker '%s' failed: %s", checker_name, e)
            return self._error_verdict(checker_name, f"{ERROR_PREFIX} 檢查方法 '{checker_name}' 執行失敗：{e}")

    @staticmethod
    def _error_verdict(checker_name: str, message: str) -> FeasibilityVerdict:
        return FeasibilityVerdict(False, checker_name, {"error": message})
