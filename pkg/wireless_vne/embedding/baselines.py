"""
比較用的演算法變體（連結權重 × 耦合程度）。

    | 名稱 | coupling     | link_weight |
    |------|--------------|-------------|
    | alg1 | none         | hop         |
    | alg2 | intermediate | hop         |
    | alg3 | full         | hop         |
    | alg4 | none         | influence   |
    | alg5 | intermediate | influence   |
    | alg6 | full         | influence   |  (WEM)

全部共用同一套 K 根搜尋、σ 排序與可行性檢查。
"""
from typing import Dict, Iterable, Optional

from ..model.embedding import AlgorithmVariant, Embedding
from ..model.network import ResourceLedger, SubstrateNetwork, VirtualNetworkRequest
from .embedder import Checker, Embedder

ALGORITHMS: Dict[str, AlgorithmVariant] = {
    name: AlgorithmVariant.from_name(name) for name in ("alg1", "alg2", "alg3", "alg4", "alg5", "alg6")
}


def embed_with_variant(variant: AlgorithmVariant,
                       sn: SubstrateNetwork,
                       ledger: ResourceLedger,
                       active: Iterable[Embedding],
                       vn: VirtualNetworkRequest,
                       k_search: int,
                       alpha: float,
                       checker: Checker) -> Optional[Embedding]:
    """
    以指定變體嵌入 vn；拒絕時回傳 None。

    Examples:
        >>> embed_with_variant(ALGORITHMS["alg1"], sn, ledger, [], vn, 8, 10.0, sufficient_check)
    """
    return Embedder(checker, variant, k_search, alpha).embed(sn, ledger, active, vn)
