from typing import FrozenSet, Hashable, Iterable, Mapping, Sequence

import numpy as np

from ..model.network import ConflictGraph

_ROUND = 12


def greedy_mwis(cg: ConflictGraph, weights: Mapping[Hashable, float]) -> FrozenSet[Hashable]:
    """
    貪婪最大權重獨立集：反覆取剩餘頂點中權重最大者（同值取較小 id），並刪除其鄰居；
    沒有正權重頂點時停止。

    Args:
        cg: ConflictGraph, 衝突圖。
        weights: Mapping[Hashable, float], 頂點權重（>= 0，缺少視為 0）。

    Returns:
        FrozenSet[Hashable], 正權重頂點上的極大獨立集。

    Examples:
        >>> cycle = ConflictGraph.from_edges(range(4), [(0, 1), (1, 2), (2, 3), (3, 0)])
        >>> sorted(greedy_mwis(cycle, {0: 3, 1: 2, 2: 3, 3: 2}))
        [0, 2]
    """
    order = sorted((v for v in cg.vertices if weights.get(v, 0.0) > 0),
                   key=lambda v: (-round(weights[v], _ROUND), v))
    chosen = set()
    blocked = set()
    for v in order:
        if v in blocked:
            continue
        chosen.add(v)
        blocked |= cg.adjacency[v]
    return frozenset(chosen)


def greedy_schedule(weights: np.ndarray, neighbors: Sequence[Sequence[int]]) -> np.ndarray:
    """
    greedy_mwis 的陣列版本（模擬檢查的內迴圈使用）。頂點以索引表示，索引順序即 id 順序；
    neighbors[i] 為頂點 i 的鄰居索引（list 或整數陣列皆可）。

    Returns:
        np.ndarray, 被排程頂點的布林遮罩。
    """
    n = len(weights)
    values = weights.tolist()
    order = np.lexsort((np.arange(n), -np.round(weights, _ROUND))).tolist()
    blocked = [False] * n
    scheduled = np.zeros(n, dtype=bool)
    for i in order:
        if blocked[i] or values[i] <= 0:
            continue
        scheduled[i] = True
        for j in neighbors[i]:
            blocked[j] = True
    return scheduled


def is_independent(cg: ConflictGraph, vertices: Iterable[Hashable]) -> bool:
    members = list(vertices)
    return all(not cg.adjacent(a, b) for i, a in enumerate(members) for b in members[i + 1:])


def set_weight(vertices: Iterable[Hashable], weights: Mapping[Hashable, float]) -> float:
    return sum(weights.get(v, 0.0) for v in vertices)
