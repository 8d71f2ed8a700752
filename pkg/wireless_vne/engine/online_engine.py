"""
時間窗離散的線上嵌入模擬：釋放到期請求、依收益排序處理到達、記錄每窗收益。
"""
import logging
from dataclasses import dataclass, field
from typing import List, Sequence

from ..embedding.embedder import Embedder
from ..embedding.resources import revenue
from ..model.embedding import Embedding
from ..model.network import ResourceLedger, SubstrateNetwork, VirtualNetworkRequest
from ..network.loads import potential_loads

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ActiveVN:
    """
    服務中的 VN。

    屬性:
        - request (VirtualNetworkRequest): 原始請求。
        - embedding (Embedding): 被接受的嵌入。
        - revenue (float): 請求收益（接受時計算一次）。
    """
    request: VirtualNetworkRequest
    embedding: Embedding
    revenue: float

    @property
    def expiry(self) -> int:
        return self.request.expiry


@dataclass(frozen=True)
class WindowRecord:
    """
    單一時間窗的統計。

    屬性:
        - window (int): 時間窗編號。
        - revenue (float): R(t)，處理完到達後所有服務中 VN 的收益和。
        - accepted (int): 本窗接受數。
        - rejected (int): 本窗拒絕數。
        - active_count (int): 處理後服務中的 VN 數。
        - mean_link_load (float): 所有 SN 連結 λ 的平均。
        - max_link_load (float): 所有 SN 連結 λ 的最大值。
        - embed_seconds (float): 本窗所有嵌入嘗試的總耗時。
    """
    window: int
    revenue: float
    accepted: int
    rejected: int
    active_count: int
    mean_link_load: float
    max_link_load: float
    embed_seconds: float = 0.0


@dataclass
class SimulationState:
    """
    線上模擬狀態。ledger 只由 OnlineEngine 在單一執行緒中修改。

    使用範例:
        >>> state = SimulationState.initial(sn)
        >>> state.window, state.current_revenue()
        (0, 0.0)
    """
    sn: SubstrateNetwork
    ledger: ResourceLedger
    window: int = 0
    active: List[ActiveVN] = field(default_factory=list)
    pending: List[VirtualNetworkRequest] = field(default_factory=list)
    records: List[WindowRecord] = field(default_factory=list)

    @classmethod
    def initial(cls, sn: SubstrateNetwork) -> "SimulationState":
        return cls(sn=sn, ledger=ResourceLedger.fresh(sn))

    def active_embeddings(self) -> List[Embedding]:
        return [a.embedding for a in self.active]

    def current_revenue(self) -> float:
        return sum(a.revenue for a in self.active)

    def is_consistent(self, tol: float = 1e-6) -> bool:
        """帳本是否等於由服務中嵌入重新計算的結果。"""
        return self.ledger.matches(ResourceLedger.recompute(self.sn, self.active_embeddings()), tol)


class OnlineEngine:
    """
    線上嵌入引擎。

    Args:
        embedder: Embedder, 嵌入器（帶有演算法變體、K、alpha 與可行性檢查）。

    Examples:
        >>> engine = OnlineEngine(Embedder(checker))
        >>> state = engine.step_window(SimulationState.initial(sn), arrivals)
        >>> state.records[-1].accepted
        2

    Raises:
        TypeError: embedder 型別錯誤。
    """

    def __init__(self, embedder: Embedder):
        if not isinstance(embedder, Embedder):
            raise TypeError("embedder must be an instance of Embedder")
        self.embedder = embedder

    def step_window(self, state: SimulationState, arrivals: Sequence[VirtualNetworkRequest]) -> SimulationState:
        """
        處理一個時間窗並回傳（原地更新的）狀態。

        順序:
            1. 釋放 expiry <= 目前時間窗的 VN，歸還 CPU 與頻寬。
            2. 到達請求依 (收益 降冪, vn_id 升冪) 排序，逐一嵌入；接受者立即寫入帳本，
               影響後續請求；拒絕者直接丟棄。
            3. 記錄 R(t) 與連結負載統計，時間窗加一。

        Raises:
            ValueError: 到達請求的 arrival_window 不是目前時間窗。
        """
        t = state.window
        for vn in arrivals:
            if vn.arrival_window != t:
                raise ValueError(f"請求 {vn.vn_id} 的到達時間窗為 {vn.arrival_window}，但引擎目前在第 {t} 窗")

        expired = [a for a in state.active if a.expiry <= t]
        for a in expired:
            state.ledger.release(state.sn, a.embedding)
        state.active = [a for a in state.active if a.expiry > t]

        alpha = self.embedder.alpha
        state.pending = sorted(arrivals, key=lambda vn: (-revenue(vn, alpha), vn.vn_id))
        accepted = rejected = 0
        elapsed = 0.0
        while state.pending:
            vn = state.pending.pop(0)
            embedding = self.embedder.embed(state.sn, state.ledger, state.active_embeddings(), vn)
            elapsed += self.embedder.last_elapsed
            if embedding is None:
                rejected += 1
                continue
            state.ledger.commit(state.sn, embedding)
            state.active.append(ActiveVN(request=vn, embedding=embedding, revenue=revenue(vn, alpha)))
            accepted += 1

        loads = potential_loads(state.sn, state.active_embeddings())
        record = WindowRecord(
            window=t,
            revenue=state.current_revenue(),
            accepted=accepted,
            rejected=rejected,
            active_count=len(state.active),
            mean_link_load=loads.mean_load(),
            max_link_load=loads.max_load(),
            embed_seconds=elapsed,
        )
        state.records.append(record)
        _logger.debug("window %d: released=%d accepted=%d rejected=%d R=%.3f",
                      t, len(expired), accepted, rejected, record.revenue)
        state.window = t + 1
        return state


def step_window(state: SimulationState,
                arrivals: Sequence[VirtualNetworkRequest],
                embedder: Embedder) -> SimulationState:
    """OnlineEngine.step_window 的函式形式。"""
    return OnlineEngine(embedder).step_window(state, arrivals)
