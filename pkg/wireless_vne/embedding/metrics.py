from typing import Iterable, Optional, Sequence

from ..model.embedding import Embedding
from ..model.network import Node, SubstrateNetwork, path_links
from ..network.loads import potential_loads


def sigma(sn: SubstrateNetwork, active: Iterable[Embedding], candidate: Optional[Embedding] = None) -> float:
    """
    候選嵌入的比較指標 σ = Σ_l (d_l + 1) * λ_l，λ 包含所有生效中的嵌入與候選本身。
    值越小越好。

    Examples:
        >>> sigma(sn, [], e1)
        1.101
    """
    loads = potential_loads(sn, active, candidate)
    degree = sn.conflict_graph.degree
    return sum((degree[l] + 1) * lam for l, lam in loads.load.items() if lam > 0)


def sigma_increment(sn: SubstrateNetwork, bw: float, path: Sequence[Node]) -> float:
    """把頻寬 bw 的 VN 連結放到 path 上，σ 增加 BW * Σ_{l ∈ path} d_I(l)。"""
    degree = sn.conflict_graph.degree
    return bw * sum((degree[l] + 1) / sn.cap[l] for l in path_links(path))
