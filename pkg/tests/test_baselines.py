import pytest

from wireless_vne.embedding import ALGORITHMS, CandidateBuilder, embed_with_variant, link_weights, revenue, sigma, wem_embed
from wireless_vne.feasibility import sufficient_check
from wireless_vne.model import AlgorithmVariant, ResourceLedger, SubstrateNetwork
from wireless_vne.network import (
    RequestParams,
    generate_grid_topology,
    generate_random_topology,
    generate_vn_request,
    potential_loads,
)

ALPHA = 10.0


def test_variant_names_cover_the_grid():
    assert {(v.coupling, v.link_weight) for v in ALGORITHMS.values()} == {
        (c, w) for c in ("none", "intermediate", "full") for w in ("hop", "influence")
    }
    assert ALGORITHMS["alg6"] == AlgorithmVariant.wem()
    assert ALGORITHMS["alg1"] == AlgorithmVariant("none", "hop")
    assert AlgorithmVariant.from_name("ALG3").name == "alg3"


def test_unknown_variant():
    with pytest.raises(ValueError):
        AlgorithmVariant.from_name("alg7")
    with pytest.raises(ValueError):
        AlgorithmVariant("loose", "hop")


def test_alg6_equals_wem_on_walkthrough(five_node_sn, fresh_ledger, five_node_vn):
    embedding = embed_with_variant(ALGORITHMS["alg6"], five_node_sn, fresh_ledger, [], five_node_vn, 1, ALPHA,
                                   sufficient_check)
    assert embedding.node_map == {"a": "C", "b": "A", "c": "B"}


def test_uncoupled_variant_places_by_remaining_resources(five_node_sn, fresh_ledger, five_node_vn):
    builder = CandidateBuilder(five_node_sn, fresh_ledger, ALPHA, ALGORITHMS["alg4"])
    embedding = builder.build(five_node_vn, "C")
    # C first, then the two richest remaining nodes (A and B tie on extended remaining)
    assert embedding.node_map["a"] == "C"
    assert {embedding.node_map["b"], embedding.node_map["c"]} == {"A", "B"}


def test_intermediate_variant_places_near_root(five_node_sn, fresh_ledger, five_node_vn):
    builder = CandidateBuilder(five_node_sn, fresh_ledger, ALPHA, ALGORITHMS["alg5"])
    embedding = builder.build(five_node_vn, "C")
    # influence distance from C: B 0.04, D 0.08, A 0.1
    assert embedding.node_map == {"a": "C", "c": "B", "b": "D"}
    assert embedding.path_map[("b", "c")] == ("D", "C", "B")


def test_intermediate_hop_variant_uses_hop_distance(five_node_sn, fresh_ledger, five_node_vn):
    builder = CandidateBuilder(five_node_sn, fresh_ledger, ALPHA, ALGORITHMS["alg2"])
    embedding = builder.build(five_node_vn, "C")
    # A, B, D are all one hop from C; ties go to the smallest id
    assert embedding.node_map == {"a": "C", "c": "A", "b": "B"}


def test_two_stage_routing_respects_capacity(five_node_sn, fresh_ledger, vn_factory):
    # 兩條 VN 連結都想走 B-C，第二條必須繞路
    vn = vn_factory("pair", {"x": 1.0, "y": 1.0, "z": 1.0}, {("x", "y"): 60.0, ("y", "z"): 45.0})
    builder = CandidateBuilder(five_node_sn, fresh_ledger, 0.0, ALGORITHMS["alg5"])
    embedding = builder.build(vn, "C")
    assert embedding is not None
    for l, bw in embedding.bw_alloc.items():
        assert bw <= five_node_sn.cap[l] + 1e-9


@pytest.mark.parametrize("name", sorted(ALGORITHMS))
def test_every_variant_returns_valid_embeddings(name):
    sn = generate_random_topology(20, 100.0, (25.0, 45.0), seed=21)
    ledger = ResourceLedger.fresh(sn)
    accepted = 0
    active = []
    for i in range(6):
        vn = generate_vn_request(RequestParams(node_count=(3, 5)), seed=100 + i, vn_id=f"vn-{i}")
        embedding = embed_with_variant(ALGORITHMS[name], sn, ledger, active, vn, 4, ALPHA, sufficient_check)
        if embedding is None:
            continue
        assert len(set(embedding.node_map.values())) == len(vn.nodes)
        assert set(embedding.path_map) == set(vn.links)
        ledger.commit(sn, embedding)
        active.append(embedding)
        accepted += 1
    assert ledger.matches(ResourceLedger.recompute(sn, active))
    assert all(ledger.allocated_bw[l] <= sn.cap[l] + 1e-9 for l in sn.links)


def _uniform_weight_grid() -> SubstrateNetwork:
    """4x4 格狀網路（k=1），容量取 64 * (d + 1)，每條連結的影響權重都是 1/64。"""
    base = generate_grid_topology(4, 4, seed=2, interference_hops=1)
    degree = base.conflict_graph.degree
    return SubstrateNetwork(nodes=base.nodes, links=base.links, cpu={n: 100.0 for n in base.nodes},
                            cap={l: 64.0 * (degree[l] + 1) for l in base.links}, interference_hops=1)


def test_single_link_request_is_accepted_by_every_variant(five_node_sn, fresh_ledger, vn_factory):
    vn = vn_factory("pair", {"a": 5.0, "b": 5.0}, {("a", "b"): 10.0})
    for name in sorted(ALGORITHMS):
        embedding = embed_with_variant(ALGORITHMS[name], five_node_sn, fresh_ledger, [], vn, 3, ALPHA,
                                       sufficient_check)
        assert embedding is not None, name
        assert len(set(embedding.node_map.values())) == 2
        assert sufficient_check(five_node_sn.conflict_graph, potential_loads(five_node_sn, [embedding])).feasible
    assert revenue(vn, ALPHA) == pytest.approx(5.0 + 5.0 + ALPHA * 10.0)


def test_hop_and_influence_routing_agree_under_uniform_weights(vn_factory):
    sn = _uniform_weight_grid()
    assert set(link_weights(sn).values()) == {1 / 64}
    ledger = ResourceLedger.fresh(sn)
    vn = vn_factory("tri", {"a": 10.0, "b": 20.0, "c": 15.0}, {("a", "b"): 8.0, ("a", "c"): 3.0, ("b", "c"): 5.0})
    for hop, influence in (("alg1", "alg4"), ("alg2", "alg5"), ("alg3", "alg6")):
        by_hop = embed_with_variant(ALGORITHMS[hop], sn, ledger, [], vn, 4, ALPHA, sufficient_check)
        by_influence = embed_with_variant(ALGORITHMS[influence], sn, ledger, [], vn, 4, ALPHA, sufficient_check)
        assert by_hop is not None
        assert by_hop == by_influence
        assert sigma(sn, [], by_hop) == sigma(sn, [], by_influence)


@pytest.mark.parametrize("seed", range(5))
def test_alg6_is_wem(seed):
    sn = generate_random_topology(20, 100.0, (25.0, 45.0), seed=seed)
    ledger = ResourceLedger.fresh(sn)
    vn = generate_vn_request(RequestParams(node_count=(3, 6)), seed=seed + 500, vn_id=f"vn-{seed}")
    assert embed_with_variant(ALGORITHMS["alg6"], sn, ledger, [], vn, 4, ALPHA, sufficient_check) == \
        wem_embed(sn, ledger, [], vn, 4, ALPHA, sufficient_check)
