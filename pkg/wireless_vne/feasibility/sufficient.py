from typing import Any, Hashable

from ..model.network import ConflictGraph, LoadVector
from ..model.verdict import FeasibilityVerdict

SUFFICIENT_TOL = 1e-9


def vertex_record(v: Hashable) -> Any:
    """把衝突圖頂點轉成可寫入 JSON 的形式（連結 tuple 轉為 list）。"""
    return list(v) if isinstance(v, tuple) else v


def sufficient_check(cg: ConflictGraph, loads: LoadVector, tol: float = SUFFICIENT_TOL) -> FeasibilityVerdict:
    """
    充分條件檢查：每個頂點 l 都滿足 λ_l + Σ_{j 與 l 相鄰} λ_j <= 1。

    條件成立必可排程，不成立則不一定不可排程（保守）。

    Args:
        cg: ConflictGraph, 衝突圖。
        loads: LoadVector, 正規化負載（缺少的頂點視為 0）。
        tol: float, 浮點容忍值。

    Returns:
        FeasibilityVerdict, 不可行時 detail 為依 id 順序第一個違反的頂點與其負載和。

    Examples:
        >>> sufficient_check(cg, LoadVector({("A", "B"): 0.2, ("A", "C"): 0.6, ("C", "D"): 0.6})).detail
        {'vertex': ['A', 'C'], 'load_sum': 1.4}
    """
    worst = 0.0
    for v in cg.vertices:
        total = loads.get(v) + sum(loads.get(j) for j in cg.adjacency[v])
        if total > 1.0 + tol:
            return FeasibilityVerdict(False, "sufficient", {"vertex": vertex_record(v), "load_sum": total})
        worst = max(worst, total)
    return FeasibilityVerdict(True, "sufficient", {"max_load_sum": worst})
