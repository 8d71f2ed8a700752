import os

import pytest

from wireless_vne.config import INSTANCE_DIR
from wireless_vne.model import Embedding, ResourceLedger, SubstrateNetwork, VirtualNetworkRequest
from wireless_vne.network import load_check_input, load_requests, load_substrate


@pytest.fixture
def five_node_sn() -> SubstrateNetwork:
    """五節點示範網路（k=1），容量取 (d+1)/w 讓影響權重為整齊的小數。"""
    return load_substrate(os.path.join(INSTANCE_DIR, "five_node_substrate.json"))


@pytest.fixture
def five_node_vn() -> VirtualNetworkRequest:
    return load_requests(os.path.join(INSTANCE_DIR, "five_node_request.json"))[0]


@pytest.fixture
def fresh_ledger(five_node_sn) -> ResourceLedger:
    return ResourceLedger.fresh(five_node_sn)


@pytest.fixture
def corridor():
    """A-B, A-C, C-D 三條連結，負載 0.2 / 0.6 / 0.6。"""
    return load_check_input(os.path.join(INSTANCE_DIR, "corridor_check.json"))


@pytest.fixture
def path_sn() -> SubstrateNetwork:
    """A-B-C-D-E-F 直線網路（k=1），B-C 容量較大。"""
    nodes = ("A", "B", "C", "D", "E", "F")
    links = (("A", "B"), ("B", "C"), ("C", "D"), ("D", "E"), ("E", "F"))
    cap = {l: 100.0 for l in links}
    cap[("B", "C")] = 200.0
    return SubstrateNetwork(nodes=nodes, links=links, cpu={n: 100.0 for n in nodes}, cap=cap,
                            interference_hops=1)


def make_vn(vn_id, cpu, bw, duration=1, arrival_window=0) -> VirtualNetworkRequest:
    return VirtualNetworkRequest(vn_id=vn_id, nodes=tuple(cpu), links=tuple(bw), cpu_req=dict(cpu),
                                 bw_req=dict(bw), duration=duration, arrival_window=arrival_window)


@pytest.fixture
def vn_factory():
    return make_vn


@pytest.fixture
def saturated_corridor(path_sn):
    """
    A-B 已承載 95/100 的背景流量；回傳 (sn, ledger, active, 新請求)。
    新請求 a-b 的頻寬為 20。
    """
    background = make_vn("bg", {"p": 10.0, "q": 10.0}, {("p", "q"): 95.0})
    embedding = Embedding.assemble(background, {"p": "A", "q": "B"}, {("p", "q"): ("A", "B")})
    ledger = ResourceLedger.fresh(path_sn)
    ledger.commit(path_sn, embedding)
    request = make_vn("new", {"a": 5.0, "b": 5.0}, {("a", "b"): 20.0})
    return path_sn, ledger, [embedding], request
