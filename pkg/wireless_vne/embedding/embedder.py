import concurrent.futures
import logging
import time
from typing import Callable, Iterable, List, Optional

from ..model.embedding import AlgorithmVariant, CandidateScore, Embedding
from ..model.network import CAPACITY_TOL, ConflictGraph, LoadVector, Node, ResourceLedger, SubstrateNetwork, VirtualNetworkRequest
from ..model.verdict import FeasibilityVerdict
from ..network.loads import potential_loads
from .candidate_builder import CandidateBuilder
from .metrics import sigma
from .resources import TIE_DECIMALS, rank_by_remaining, vn_node_sequence

_logger = logging.getLogger(__name__)

Checker = Callable[[ConflictGraph, LoadVector], FeasibilityVerdict]


class Embedder:
    """
    K 根搜尋嵌入器：選出 K 個根並各建一個候選，依 σ 排序後逐一做可行性檢查。

    所有演算法變體（alg1..alg6）共用這個流程，差別只在 CandidateBuilder 的建構方式。

    Args:
        checker: Checker, 可行性檢查函式 (衝突圖, 負載) -> FeasibilityVerdict。
        variant: AlgorithmVariant, 演算法變體，預設 WEM（alg6）。
        k_search: int, 候選數 K（>= 1）。
        alpha: float, 頻寬權重（>= 0）。
        max_workers: int, 建構候選的執行緒數；1 表示循序建構。

    Examples:
        >>> embedder = Embedder(checker=sufficient_check, k_search=1)
        >>> embedding = embedder.embed(sn, ResourceLedger.fresh(sn), [], vn)
        >>> embedding.node_map
        {'a': 'C', 'b': 'A', 'c': 'B'}

    Raises:
        TypeError: checker 不可呼叫或 variant 型別錯誤。
        ValueError: k_search < 1、alpha < 0 或 max_workers < 1。
    """

    def __init__(self,
                 checker: Checker,
                 variant: Optional[AlgorithmVariant] = None,
                 k_search: int = 8,
                 alpha: float = 10.0,
                 max_workers: int = 1):
        if not callable(checker):
            raise TypeError("checker must be callable")
        if variant is not None and not isinstance(variant, AlgorithmVariant):
            raise TypeError("variant must be an instance of AlgorithmVariant")
        if k_search < 1:
            raise ValueError("搜尋數 K 必須 >= 1。")
        if alpha < 0:
            raise ValueError("alpha 必須 >= 0。")
        if max_workers < 1:
            raise ValueError("max_workers 必須 >= 1。")

        self.checker = checker
        self.variant = variant or AlgorithmVariant.wem()
        self.k_search = k_search
        self.alpha = alpha
        self.max_workers = max_workers
        self.last_elapsed: float = 0.0
        self.last_candidates: List[CandidateScore] = []

    def roots(self, sn: SubstrateNetwork, ledger: ResourceLedger, vn: VirtualNetworkRequest) -> List[Node]:
        """延伸剩餘資源最高、且 CPU 足以承載第一個 VN 節點的 K 個根節點。"""
        first = vn_node_sequence(vn, self.alpha)[0]
        need = vn.cpu_req[first]
        ranked = rank_by_remaining(sn, ledger, self.alpha)
        return [n for n in ranked if ledger.residual_cpu[n] >= need - CAPACITY_TOL][:self.k_search]

    def candidates(self,
                   sn: SubstrateNetwork,
                   ledger: ResourceLedger,
                   active: Iterable[Embedding],
                   vn: VirtualNetworkRequest) -> List[CandidateScore]:
        """
        建出所有根節點的候選並依 (σ, 根節點 id) 排序；建構失敗的根節點略過。
        """
        active = list(active)
        roots = self.roots(sn, ledger, vn)
        builder = CandidateBuilder(sn, ledger, self.alpha, self.variant)

        if self.max_workers > 1 and len(roots) > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                futures = [executor.submit(builder.build, vn, root) for root in roots]
                built = [future.result() for future in futures]
        else:
            built = [builder.build(vn, root) for root in roots]

        scored = [
            CandidateScore(root=root, sigma=sigma(sn, active, embedding), embedding=embedding)
            for root, embedding in zip(roots, built)
            if embedding is not None
        ]
        scored.sort(key=lambda c: (round(c.sigma, TIE_DECIMALS), c.root))
        return scored

    def embed(self,
              sn: SubstrateNetwork,
              ledger: ResourceLedger,
              active: Iterable[Embedding],
              vn: VirtualNetworkRequest) -> Optional[Embedding]:
        """
        回傳通過可行性檢查、σ 最小的候選；沒有任何候選通過時回傳 None（拒絕）。

        可行性永遠以「生效中嵌入 + 候選」的合併負載檢查，並依 σ 順序逐一檢查，
        遇到第一個通過者即停止。
        """
        start = time.perf_counter()
        active = list(active)
        ranked = self.candidates(sn, ledger, active, vn)
        self.last_candidates = ranked
        chosen: Optional[Embedding] = None
        for candidate in ranked:
            verdict = self.checker(sn.conflict_graph, potential_loads(sn, active, candidate.embedding))
            candidate.feasible_flag = "feasible" if verdict.feasible else "infeasible"
            _logger.debug("%s root=%s sigma=%.6f verdict=%s", vn.vn_id, candidate.root, candidate.sigma,
                          verdict.to_record())
            if verdict.feasible:
                chosen = candidate.embedding
                break
        self.last_elapsed = time.perf_counter() - start
        if chosen is None:
            _logger.debug("%s rejected by %s after %d candidates", vn.vn_id, self.variant.name, len(ranked))
        return chosen


def wem_embed(sn: SubstrateNetwork,
              ledger: ResourceLedger,
              active: Iterable[Embedding],
              vn: VirtualNetworkRequest,
              k_search: int,
              alpha: float,
              checker: Checker) -> Optional[Embedding]:
    """WEM 嵌入的函式形式：Embedder(checker, WEM, K, alpha).embed(...)。"""
    return Embedder(checker, AlgorithmVariant.wem(), k_search, alpha).embed(sn, ledger, active, vn)
