from typing import Dict, Iterable, Optional

from ..model.embedding import Embedding
from ..model.network import Link, LoadVector, SubstrateNetwork


def required_bandwidth(sn: SubstrateNetwork, active: Iterable[Embedding]) -> Dict[Link, float]:
    """
    Req(l)：所有生效中嵌入路由經過 l 的頻寬需求總和。

    Raises:
        ValueError: 任一嵌入引用 sn 中不存在的連結。
    """
    req: Dict[Link, float] = {l: 0.0 for l in sn.links}
    for embedding in active:
        for l, bw in embedding.bw_alloc.items():
            if l not in req:
                raise ValueError(f"嵌入 {embedding.vn_id} 引用了不存在的連結 {l}")
            req[l] += bw
    return req


def potential_loads(sn: SubstrateNetwork,
                    active: Iterable[Embedding],
                    candidate: Optional[Embedding] = None) -> LoadVector:
    """
    計算潛在正規化負載 λ_l = Req(l) / CAP^S(l)。

    Args:
        sn: SubstrateNetwork, 基底網路。
        active: Iterable[Embedding], 生效中的嵌入。
        candidate: Optional[Embedding], 待檢查的候選嵌入（會與 active 合併計算）。

    Returns:
        LoadVector, 每條 SN 連結都有值，未承載者為 0。

    Examples:
        >>> potential_loads(sn, []).max_load()
        0.0
    """
    embeddings = list(active)
    if candidate is not None:
        embeddings.append(candidate)
    req = required_bandwidth(sn, embeddings)
    return LoadVector(load={l: req[l] / sn.cap[l] for l in sn.links})
