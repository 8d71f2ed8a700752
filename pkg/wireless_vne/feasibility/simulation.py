"""
以排程模擬判斷負載是否可被穩定服務。

每個時槽：佇列先收到到達量，再以貪婪最大權重獨立集（佇列長度為權重）排程，
被排程的佇列各服務 1 單位（下限 0）。ε 以把需求放大為 λ / (1 − ε) 的方式套用，
等同把容量區域縮小 (1 − ε)。

貪婪排程是極大排程；放大後負載在某個連通分量內處處滿足鄰域和 <= 1 時，該分量的佇列
必定有界，因此只模擬其餘分量（prune=True，預設）。
"""
import logging
import math
from typing import Dict, Hashable, List, Optional

import networkx as nx
import numpy as np

from ..model.network import ConflictGraph, LoadVector
from ..model.verdict import FeasibilityVerdict, SchedulerState
from .mwis import greedy_schedule
from .sufficient import SUFFICIENT_TOL

_logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 0.3
DEFAULT_HORIZON = 2000
DEFAULT_Q_MAX = 50.0
DEFAULT_SLOPE_TOL = 1e-3
TAIL_FRACTION = 0.2


def _tail_slope(totals: np.ndarray) -> float:
    half = totals[len(totals) // 2:]
    if len(half) < 2:
        return 0.0
    x = np.arange(len(half), dtype=float)
    return float(np.polyfit(x, half, 1)[0])


def unstable_candidates(cg: ConflictGraph, rates: Dict[Hashable, float]) -> List[Hashable]:
    """
    回傳需要模擬的頂點（依 id 順序）：所在連通分量中至少有一個頂點的鄰域和超過 1。

    Args:
        cg: ConflictGraph, 衝突圖。
        rates: Dict[Hashable, float], 正的（已放大）到達率。

    Returns:
        List[Hashable], 其餘分量在極大排程下保證有界，不必模擬。
    """
    g = nx.Graph()
    g.add_nodes_from(rates)
    g.add_edges_from((v, u) for v in rates for u in cg.adjacency[v] if u in rates)
    keep = set()
    for component in nx.connected_components(g):
        worst = max(rates[v] + sum(rates[u] for u in g[v]) for v in component)
        if worst > 1.0 + SUFFICIENT_TOL:
            keep |= component
    return [v for v in cg.vertices if v in keep]


def simulate_check(cg: ConflictGraph,
                   loads: LoadVector,
                   epsilon: float = DEFAULT_EPSILON,
                   horizon: int = DEFAULT_HORIZON,
                   seed: int = 0,
                   q_max: float = DEFAULT_Q_MAX,
                   slope_tol: float = DEFAULT_SLOPE_TOL,
                   stochastic: bool = False,
                   state: Optional[SchedulerState] = None,
                   prune: bool = True) -> FeasibilityVerdict:
    """
    模擬 ε 退化的最大權重排程器，判斷負載是否穩定。

    判定可行需同時滿足：
        - 最後 20% 時槽內，任一佇列的最大積壓 <= q_max。
        - 最後一半時槽內，總積壓對時間的最小平方斜率 <= slope_tol。

    某佇列的積壓即使之後每槽都被服務，進入尾段時仍會超過 q_max 時，模擬提前結束並判定不可行
    （每槽最多服務 1 單位，判定與跑完整個 horizon 相同；此時 max_tail_backlog 為下界，斜率以已模擬的時槽計算）。
    提供 state 時一律跑完整個 horizon。

    Args:
        cg: ConflictGraph, 衝突圖。
        loads: LoadVector, 原始（未放大）正規化負載。
        epsilon: float, 退化係數，0 <= epsilon < 1。
        horizon: int, 模擬時槽數（>= 1）。
        seed: int, 隨機到達模式的種子；固定到達模式不使用。
        q_max: float, 尾段積壓上限。
        slope_tol: float, 尾段斜率上限（每時槽）。
        stochastic: bool, True 時每時槽以機率 min(1, λ/(1−ε)) 到達 1 單位。
        state: Optional[SchedulerState], 若提供，結束時寫入最後的佇列與時槽；此時不做分量剪枝。
        prune: bool, 是否跳過滿足鄰域條件的連通分量。

    Returns:
        FeasibilityVerdict, detail 含尾段最大積壓、斜率、最後總積壓、實際模擬的連結數
        (simulated_links) 與執行的時槽數 (slots)。

    Examples:
        >>> clique = ConflictGraph.from_edges(["x", "y"], [("x", "y")])
        >>> simulate_check(clique, LoadVector({"x": 0.6, "y": 0.6}), 0.3, 10_000).feasible
        False

    Raises:
        ValueError: epsilon 不在 [0, 1) 或 horizon < 1。
    """
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon 必須位於 [0, 1)，收到 {epsilon}")
    if horizon < 1:
        raise ValueError(f"horizon 必須 >= 1，收到 {horizon}")

    rate_of = {v: loads.get(v) / (1.0 - epsilon) for v in cg.vertices if loads.get(v) > 0}
    if prune and state is None:
        vertices = unstable_candidates(cg, rate_of)
    else:
        vertices = [v for v in cg.vertices if v in rate_of]
    if not vertices:
        if state is not None:
            state.queues = {v: 0.0 for v in cg.vertices}
            state.slot = horizon
        return FeasibilityVerdict(True, "simulation", {"max_tail_backlog": 0.0, "slope": 0.0, "final_backlog": 0.0,
                                                       "simulated_links": 0, "slots": 0})

    index = {v: i for i, v in enumerate(vertices)}
    neighbors = [[index[u] for u in cg.adjacency[v] if u in index] for v in vertices]
    rates = np.array([rate_of[v] for v in vertices])
    rng = np.random.default_rng(seed) if stochastic else None
    probs = np.minimum(rates, 1.0)

    queues = np.zeros(len(vertices))
    totals = np.empty(horizon)
    tail_start = horizon - max(1, math.ceil(TAIL_FRACTION * horizon))
    max_tail = 0.0
    slots = horizon
    for t in range(horizon):
        if rng is not None:
            queues += (rng.random(len(vertices)) < probs).astype(float)
        else:
            queues += rates
        served = greedy_schedule(queues, neighbors)
        queues[served] = np.maximum(queues[served] - 1.0, 0.0)
        totals[t] = queues.sum()
        peak = float(queues.max())
        if t >= tail_start:
            max_tail = max(max_tail, peak)
        if state is None and peak - max(tail_start - t, 0) > q_max:
            max_tail = max(max_tail, peak - max(tail_start - t, 0))
            slots = t + 1
            break

    totals = totals[:slots]
    slope = _tail_slope(totals)
    feasible = max_tail <= q_max and slope <= slope_tol
    if state is not None:
        state.queues = {v: float(queues[index[v]]) if v in index else 0.0 for v in cg.vertices}
        state.slot = slots
    detail = {"max_tail_backlog": max_tail, "slope": slope, "final_backlog": float(totals[-1]),
              "simulated_links": len(vertices), "slots": slots}
    _logger.debug("simulation check (eps=%.3f, horizon=%d): %s -> %s", epsilon, horizon, detail, feasible)
    return FeasibilityVerdict(feasible, "simulation", detail)
