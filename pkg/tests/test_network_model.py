import json

import networkx as nx
import pytest

from wireless_vne.model import ConflictGraph, Embedding, LoadVector, ResourceLedger, SubstrateNetwork
from wireless_vne.network import (
    RequestParams,
    build_conflict_graph,
    derive_interference,
    derive_seed,
    generate_connected_topology,
    generate_grid_topology,
    generate_random_topology,
    generate_vn_request,
    load_check_input,
    load_substrate,
    potential_loads,
    save_substrate,
    substrate_from_dict,
)
from wireless_vne.network.generators import RandomTopologyParams
from wireless_vne.network.network_io import request_from_dict


def _path_abcd() -> SubstrateNetwork:
    links = (("A", "B"), ("B", "C"), ("C", "D"))
    return SubstrateNetwork(nodes=("A", "B", "C", "D"), links=links, cpu={n: 1.0 for n in "ABCD"},
                            cap={l: 10.0 for l in links})


# ---- conflict graph ----

def test_one_hop_links_sharing_an_endpoint_interfere(five_node_sn):
    cg = build_conflict_graph(five_node_sn, 1)
    assert cg.adjacent(("A", "C"), ("C", "D"))
    assert not cg.adjacent(("A", "B"), ("C", "D"))


def test_five_node_degrees(five_node_sn):
    degree = five_node_sn.conflict_graph.degree
    assert degree == {
        ("A", "B"): 3,
        ("A", "C"): 4,
        ("A", "E"): 3,
        ("B", "C"): 3,
        ("C", "D"): 3,
        ("D", "E"): 2,
    }


def test_single_link_network_has_isolated_vertex():
    sn = SubstrateNetwork(nodes=("A", "B"), links=(("A", "B"),), cpu={"A": 1, "B": 1}, cap={("A", "B"): 5})
    for k in (1, 2, 3):
        cg = build_conflict_graph(sn, k)
        assert cg.vertices == (("A", "B"),)
        assert cg.degree[("A", "B")] == 0


def test_two_hop_path_is_a_clique():
    cg = build_conflict_graph(_path_abcd(), 2)
    assert all(d == 2 for d in cg.degree.values())


def test_one_hop_path_only_neighbours():
    cg = build_conflict_graph(_path_abcd(), 1)
    assert cg.degree == {("A", "B"): 1, ("B", "C"): 2, ("C", "D"): 1}


def test_conflict_graph_matches_brute_force_on_random_topology():
    sn = generate_random_topology(25, 100.0, (20.0, 40.0), seed=11)
    dist = dict(nx.all_pairs_shortest_path_length(sn.graph))
    for k in (1, 2):
        cg = build_conflict_graph(sn, k)
        for i in sn.links:
            for j in sn.links:
                if i == j:
                    continue
                near = min(dist[a].get(b, float("inf")) for a in i for b in j) <= k - 1
                assert cg.adjacent(i, j) == near
        assert all(cg.degree[v] == len(cg.adjacency[v]) for v in cg.vertices)


def test_explicit_interference_overrides_hop_rule():
    links = (("A", "B"), ("B", "C"), ("C", "D"))
    sn = SubstrateNetwork(nodes=("A", "B", "C", "D"), links=links, cpu={n: 1.0 for n in "ABCD"},
                          cap={l: 10.0 for l in links},
                          interference=frozenset({frozenset({("A", "B"), ("C", "D")})}))
    cg = sn.conflict_graph
    assert cg.adjacent(("A", "B"), ("C", "D"))
    assert cg.degree[("B", "C")] == 0


def test_derive_interference_populates_relation():
    sn = derive_interference(_path_abcd(), 2)
    assert sn.interference is not None
    assert len(sn.interference) == 3
    assert sn.conflict_graph.degree[("A", "B")] == 2


def test_invalid_hop_count():
    with pytest.raises(ValueError):
        build_conflict_graph(_path_abcd(), 0)


def test_conflict_graph_rejects_asymmetric_adjacency():
    with pytest.raises(ValueError):
        ConflictGraph(vertices=(1, 2), adjacency={1: frozenset({2}), 2: frozenset()})
    with pytest.raises(ValueError):
        ConflictGraph(vertices=(1,), adjacency={1: frozenset({1})})


# ---- substrate and request invariants ----

@pytest.mark.parametrize("links, cap, cpu", [
    ((("A", "A"),), {("A", "A"): 1.0}, {"A": 1.0, "B": 1.0}),
    ((("A", "Z"),), {("A", "Z"): 1.0}, {"A": 1.0, "B": 1.0}),
    ((("A", "B"),), {("A", "B"): 0.0}, {"A": 1.0, "B": 1.0}),
    ((("A", "B"),), {("A", "B"): 1.0}, {"A": -1.0, "B": 1.0}),
])
def test_substrate_rejects_invalid_fields(links, cap, cpu):
    with pytest.raises(ValueError):
        SubstrateNetwork(nodes=("A", "B"), links=links, cpu=cpu, cap=cap)


def test_substrate_normalizes_link_orientation():
    sn = SubstrateNetwork(nodes=("B", "A"), links=(("B", "A"),), cpu={"A": 1, "B": 2}, cap={("B", "A"): 7})
    assert sn.links == (("A", "B"),)
    assert sn.cap[("A", "B")] == 7.0
    assert sn.incident_links("B") == (("A", "B"),)


def test_request_rejects_nonpositive_requirements(vn_factory):
    with pytest.raises(ValueError):
        vn_factory("x", {"a": 0.0, "b": 1.0}, {("a", "b"): 1.0})
    with pytest.raises(ValueError):
        vn_factory("x", {"a": 1.0, "b": 1.0}, {("a", "b"): -2.0})
    with pytest.raises(ValueError):
        vn_factory("x", {"a": 1.0, "b": 1.0}, {("a", "b"): 1.0}, duration=0)


# ---- loads and ledger ----

def test_corridor_loads(corridor):
    sn, loads = corridor
    assert loads.get(("A", "B")) == pytest.approx(0.2)
    assert loads.get(("A", "C")) == pytest.approx(0.6)
    assert loads.get(("C", "D")) == pytest.approx(0.6)


def test_potential_loads_empty_and_unknown_link(five_node_sn, vn_factory):
    assert potential_loads(five_node_sn, []).max_load() == 0.0
    bogus = Embedding(vn_id="bogus", node_map={}, path_map={}, cpu_alloc={}, bw_alloc={("X", "Y"): 1.0})
    with pytest.raises(ValueError):
        potential_loads(five_node_sn, [bogus])


def test_potential_loads_sum_over_embeddings(five_node_sn, five_node_vn):
    e = Embedding.assemble(five_node_vn, {"a": "C", "b": "A", "c": "B"},
                           {("a", "c"): ("C", "B"), ("a", "b"): ("C", "A"), ("b", "c"): ("A", "B")})
    loads = potential_loads(five_node_sn, [e, e])
    assert loads.get(("B", "C")) == pytest.approx(0.2)
    assert loads.get(("D", "E")) == 0.0


def test_ledger_commit_release_roundtrip(five_node_sn, five_node_vn):
    e = Embedding.assemble(five_node_vn, {"a": "C", "b": "A", "c": "B"},
                           {("a", "c"): ("C", "B"), ("a", "b"): ("C", "A"), ("b", "c"): ("A", "B")})
    ledger = ResourceLedger.fresh(five_node_sn)
    ledger.commit(five_node_sn, e)
    assert ledger.residual_cpu["C"] == pytest.approx(90.0)
    assert ledger.residual_bw(five_node_sn, ("B", "C")) == pytest.approx(90.0)
    assert ledger.matches(ResourceLedger.recompute(five_node_sn, [e]))
    ledger.release(five_node_sn, e)
    assert ledger.matches(ResourceLedger.fresh(five_node_sn))


def test_ledger_overbooking_leaves_state_untouched(five_node_sn, vn_factory):
    vn = vn_factory("big", {"a": 10.0, "b": 10.0}, {("a", "b"): 120.0})
    e = Embedding.assemble(vn, {"a": "B", "b": "C"}, {("a", "b"): ("B", "C")})
    ledger = ResourceLedger.fresh(five_node_sn)
    with pytest.raises(ValueError):
        ledger.commit(five_node_sn, e)
    assert ledger.matches(ResourceLedger.fresh(five_node_sn))


# ---- generators ----

def test_random_topology_is_reproducible():
    a = generate_random_topology(40, 100.0, (15.0, 30.0), seed=5)
    b = generate_random_topology(40, 100.0, (15.0, 30.0), seed=5)
    c = generate_random_topology(40, 100.0, (15.0, 30.0), seed=6)
    assert a == b
    assert a.positions != c.positions


def test_random_topology_respects_ranges_and_resources():
    sn = generate_random_topology(30, 50.0, (10.0, 20.0), seed=3, resource_interval=(100.0, 300.0))
    for x, y in sn.positions.values():
        assert 0.0 <= x <= 50.0 and 0.0 <= y <= 50.0
    for u, v in sn.links:
        (x1, y1), (x2, y2) = sn.positions[u], sn.positions[v]
        assert ((x1 - x2) ** 2 + (y1 - y2) ** 2) ** 0.5 <= 20.0
    assert all(100.0 <= c <= 300.0 for c in sn.cpu.values())
    assert all(100.0 <= c <= 300.0 for c in sn.cap.values())


def test_connected_topology_resamples_until_connected():
    params = RandomTopologyParams(n_nodes=30, square_side=100.0, range_interval=(20.0, 40.0))
    sn = generate_connected_topology(params, seed=2)
    assert sn.is_connected()


def test_connected_topology_gives_up():
    params = RandomTopologyParams(n_nodes=20, square_side=1000.0, range_interval=(1.0, 2.0))
    with pytest.raises(RuntimeError):
        generate_connected_topology(params, seed=0, max_attempts=3)


def test_grid_topology_shape():
    sn = generate_grid_topology(7, 7, seed=1)
    assert len(sn.nodes) == 49
    assert len(sn.links) == 84
    assert sn.is_connected()


def test_derive_seed_is_stable_and_salted():
    assert derive_seed(7, 1, 2) == derive_seed(7, 1, 2)
    assert derive_seed(7, 1, 2) != derive_seed(7, 2, 1)


@pytest.mark.parametrize("shape", ["random", "star", "tree", "hub_and_spoke"])
def test_generated_requests_are_connected_and_valid(shape):
    params = RequestParams(shape=shape)
    for seed in range(20):
        vn = generate_vn_request(params, seed=seed, vn_id=f"vn-{seed}")
        assert 4 <= len(vn.nodes) <= 10
        assert vn.is_connected()
        assert vn.duration >= 1
        assert all(1.0 <= c <= 10.0 for c in vn.cpu_req.values())
        if shape in ("star", "hub_and_spoke"):
            assert all(0 in l for l in vn.links)
        if shape == "tree":
            assert len(vn.links) == len(vn.nodes) - 1


def test_request_generation_is_reproducible():
    params = RequestParams()
    assert generate_vn_request(params, seed=9) == generate_vn_request(params, seed=9)


def test_request_params_validation():
    with pytest.raises(ValueError):
        RequestParams(node_count=(0, 3))
    with pytest.raises(ValueError):
        RequestParams(connect_prob=(0.2, 1.5))


# ---- file formats ----

def test_substrate_file_roundtrip(tmp_path):
    sn = generate_grid_topology(3, 2, seed=4)
    path = tmp_path / "sn.json"
    save_substrate(sn, path)
    assert load_substrate(path) == sn


def test_substrate_schema_rejects_unknown_keys():
    with pytest.raises(ValueError):
        substrate_from_dict({"nodes": [{"id": "A", "cpu": 1.0, "colour": "red"}], "links": []})


def test_mixed_node_id_types_are_rejected():
    with pytest.raises(ValueError, match="混合型別"):
        substrate_from_dict({"nodes": [{"id": 1, "cpu": 1.0}, {"id": "A", "cpu": 1.0}],
                             "links": [{"u": 1, "v": "A", "cap": 5.0}]})
    with pytest.raises(ValueError, match="混合型別"):
        substrate_from_dict({"nodes": [{"id": 1, "cpu": 1.0}, {"id": 2, "cpu": 1.0}],
                             "links": [{"u": 1, "v": 2, "cap": 5.0}],
                             "interference": [[[1, 2], ["1", "2"]]]})
    with pytest.raises(ValueError, match="混合型別"):
        request_from_dict({"vn_id": "mixed", "nodes": [{"id": 0, "cpu": 1.0}, {"id": "b", "cpu": 1.0}],
                           "links": [{"u": 0, "v": "b", "bw": 1.0}]})
    assert substrate_from_dict({"nodes": [{"id": "1", "cpu": 1.0}, {"id": "A", "cpu": 1.0}],
                                "links": [{"u": "1", "v": "A", "cap": 5.0}]}).links == (("1", "A"),)


def test_disconnected_request_rejected_by_loader():
    data = {"vn_id": "split", "nodes": [{"id": 0, "cpu": 1.0}, {"id": 1, "cpu": 1.0}], "links": []}
    with pytest.raises(ValueError):
        request_from_dict(data)


def test_check_input_with_explicit_loads(tmp_path, five_node_sn):
    from wireless_vne.network import substrate_to_dict

    path = tmp_path / "loads.json"
    path.write_text(json.dumps({
        "substrate": substrate_to_dict(five_node_sn),
        "loads": [{"u": "C", "v": "A", "load": 0.25}],
    }), encoding="utf-8")
    sn, loads = load_check_input(path)
    assert isinstance(loads, LoadVector)
    assert loads.get(("A", "C")) == 0.25
    assert loads.get(("B", "C")) == 0.0
