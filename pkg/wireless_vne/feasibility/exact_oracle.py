"""
小型實例的精確可排程判定。

負載可排程若且唯若存在時間分配 x_S >= 0（S 為極大獨立集），Σ x_S <= 1 且
每個頂點被涵蓋的時間 Σ_{S ∋ l} x_S >= λ_l。以線性規劃求 Σ x_S 的最小值。
"""
import logging
from typing import Any, Dict, List

import networkx as nx
import numpy as np
from scipy.optimize import linprog

from ..model.network import ConflictGraph, LoadVector
from ..model.verdict import FeasibilityVerdict
from .sufficient import vertex_record

_logger = logging.getLogger(__name__)

DEFAULT_MAX_VERTICES = 20
ORACLE_TOL = 1e-7


class InstanceTooLargeError(ValueError):
    """正負載頂點數超過精確判定的上限。"""


def maximal_independent_sets(cg: ConflictGraph) -> List[List[Any]]:
    """列舉所有極大獨立集（補圖上的極大團），每個集合與整體皆已排序。"""
    g = cg.to_networkx()
    sets = [sorted(c) for c in nx.find_cliques(nx.complement(g))] if g.number_of_nodes() else []
    return sorted(sets)


def exact_oracle(cg: ConflictGraph,
                 loads: LoadVector,
                 max_vertices: int = DEFAULT_MAX_VERTICES,
                 tol: float = ORACLE_TOL) -> FeasibilityVerdict:
    """
    精確判定負載是否位於獨立集指示向量的凸包內（含原點）。

    Args:
        cg: ConflictGraph, 衝突圖。
        loads: LoadVector, 原始正規化負載。
        max_vertices: int, 正負載頂點數上限。
        tol: float, Σ x_S 與 1 比較的容忍值。

    Returns:
        FeasibilityVerdict, detail["time_share"] 為最小總時間；可行時
        detail["certificate"] 為 [{"set": [...], "fraction": x_S}, ...]。

    Examples:
        >>> clique = ConflictGraph.from_edges(["x", "y"], [("x", "y")])
        >>> exact_oracle(clique, LoadVector({"x": 0.6, "y": 0.6})).detail["time_share"]
        1.2

    Raises:
        InstanceTooLargeError: 正負載頂點數超過 max_vertices。
        RuntimeError: 線性規劃求解失敗。
    """
    positive = [v for v in cg.vertices if loads.get(v) > 0]
    if not positive:
        return FeasibilityVerdict(True, "exact", {"time_share": 0.0, "certificate": []})
    if len(positive) > max_vertices:
        raise InstanceTooLargeError(
            f"精確判定最多處理 {max_vertices} 個有負載的頂點，收到 {len(positive)} 個"
        )

    sub = cg.induced(positive)
    sets = maximal_independent_sets(sub)
    row = {v: i for i, v in enumerate(positive)}
    coverage = np.zeros((len(positive), len(sets)))
    for j, members in enumerate(sets):
        for v in members:
            coverage[row[v], j] = 1.0
    demand = np.array([loads.get(v) for v in positive])

    result = linprog(c=np.ones(len(sets)), A_ub=-coverage, b_ub=-demand, bounds=(0, None), method="highs")
    if result.status != 0:
        raise RuntimeError(f"精確判定的線性規劃求解失敗：{result.message}")

    time_share = float(result.fun)
    detail: Dict[str, Any] = {"time_share": time_share}
    feasible = time_share <= 1.0 + tol
    if feasible:
        detail["certificate"] = [
            {"set": [vertex_record(v) for v in members], "fraction": float(x)}
            for members, x in zip(sets, result.x) if x > 1e-12
        ]
    _logger.debug("exact oracle: %d vertices, %d sets, time share %.9f", len(positive), len(sets), time_share)
    return FeasibilityVerdict(feasible, "exact", detail)
