"""
網路檔案格式（JSON）讀寫，以 pydantic schema 驗證。

基底網路檔::

    {
      "interference_hops": 2,
      "nodes": [{"id": "A", "cpu": 100.0, "x": 0.0, "y": 0.0}, ...],
      "links": [{"u": "A", "v": "B", "cap": 50.0}, ...],
      "interference": [[["A", "B"], ["A", "C"]], ...]      # 選填，存在時優先於 k-hop 規則
    }

請求檔::

    {"requests": [{"vn_id": "vn-0", "duration": 3, "arrival_window": 0,
                   "nodes": [{"id": 0, "cpu": 4.0}, ...],
                   "links": [{"u": 0, "v": 1, "bw": 2.5}, ...]}, ...]}

負載檔（check 指令）::

    {"substrate": <基底網路檔內容>,
     "loads": [{"u": "A", "v": "C", "load": 0.6}, ...]}    # 或 "embeddings": [<嵌入紀錄>, ...]
"""
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, model_validator

from ..model.embedding import Embedding
from ..model.network import LoadVector, SubstrateNetwork, VirtualNetworkRequest, link_key
from .loads import potential_loads

NodeId = Union[StrictInt, str]


def _check_single_id_type(ids: Iterable[Any]) -> None:
    """節點 id 需全為整數或全為字串（混用時無法排序）。"""
    kinds = sorted({type(i).__name__ for i in ids})
    if len(kinds) > 1:
        raise ValueError(f"節點 id 必須同為整數或同為字串，收到混合型別 {kinds}")


class NodeEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: NodeId
    cpu: float = Field(..., ge=0)
    x: float = 0.0
    y: float = 0.0


class LinkEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    u: NodeId
    v: NodeId
    cap: float = Field(..., gt=0)


class SubstrateSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    interference_hops: int = Field(2, ge=1)
    nodes: List[NodeEntry]
    links: List[LinkEntry] = Field(default_factory=list)
    interference: Optional[List[Tuple[Tuple[NodeId, NodeId], Tuple[NodeId, NodeId]]]] = None

    @model_validator(mode="after")
    def _id_types(self):
        ids = [n.id for n in self.nodes] + [e for l in self.links for e in (l.u, l.v)]
        for a, b in self.interference or []:
            ids.extend(a + b)
        _check_single_id_type(ids)
        return self


class VNNodeEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: NodeId
    cpu: float = Field(..., gt=0)


class VNLinkEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    u: NodeId
    v: NodeId
    bw: float = Field(..., gt=0)


class RequestSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vn_id: str
    duration: int = Field(1, ge=1)
    arrival_window: int = Field(0, ge=0)
    nodes: List[VNNodeEntry]
    links: List[VNLinkEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def _id_types(self):
        _check_single_id_type([n.id for n in self.nodes] + [e for l in self.links for e in (l.u, l.v)])
        return self


class RequestsSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    requests: List[RequestSchema]


class LoadEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    u: NodeId
    v: NodeId
    load: float = Field(..., ge=0)


class LoadsSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    substrate: SubstrateSchema
    loads: Optional[List[LoadEntry]] = None
    embeddings: Optional[List[Dict[str, Any]]] = None


def _read_json(path: Union[str, Path]) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def _write_json(data: Any, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, ensure_ascii=False, indent=2)
        f.write("\n")


def substrate_from_dict(data: Dict[str, Any]) -> SubstrateNetwork:
    """
    由字典建立 SubstrateNetwork（先經 schema 驗證，再由型別本身驗證不變式）。

    Raises:
        pydantic.ValidationError: 欄位缺漏或型別錯誤。
        ValueError: 違反 SubstrateNetwork 不變式。
    """
    schema = SubstrateSchema.model_validate(data)
    interference = None
    if schema.interference is not None:
        interference = frozenset(frozenset((link_key(*a), link_key(*b))) for a, b in schema.interference)
    return SubstrateNetwork(
        nodes=tuple(n.id for n in schema.nodes),
        links=tuple((l.u, l.v) for l in schema.links),
        cpu={n.id: n.cpu for n in schema.nodes},
        cap={link_key(l.u, l.v): l.cap for l in schema.links},
        positions={n.id: (n.x, n.y) for n in schema.nodes},
        interference=interference,
        interference_hops=schema.interference_hops,
    )


def substrate_to_dict(sn: SubstrateNetwork) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "interference_hops": sn.interference_hops,
        "nodes": [
            {"id": n, "cpu": sn.cpu[n], "x": sn.positions.get(n, (0.0, 0.0))[0], "y": sn.positions.get(n, (0.0, 0.0))[1]}
            for n in sn.nodes
        ],
        "links": [{"u": u, "v": v, "cap": sn.cap[(u, v)]} for u, v in sn.links],
    }
    if sn.interference is not None:
        data["interference"] = sorted([sorted(list(l) for l in pair) for pair in sn.interference])
    return data


def request_from_dict(data: Dict[str, Any]) -> VirtualNetworkRequest:
    """
    由字典建立 VN 請求，並驗證連通性。

    Raises:
        ValueError: 請求不連通或違反欄位不變式。
    """
    schema = RequestSchema.model_validate(data)
    vn = VirtualNetworkRequest(
        vn_id=schema.vn_id,
        nodes=tuple(n.id for n in schema.nodes),
        links=tuple((l.u, l.v) for l in schema.links),
        cpu_req={n.id: n.cpu for n in schema.nodes},
        bw_req={link_key(l.u, l.v): l.bw for l in schema.links},
        duration=schema.duration,
        arrival_window=schema.arrival_window,
    )
    if vn.nodes and not vn.is_connected():
        raise ValueError(f"VN {vn.vn_id} 不連通")
    return vn


def request_to_dict(vn: VirtualNetworkRequest) -> Dict[str, Any]:
    return {
        "vn_id": vn.vn_id,
        "duration": vn.duration,
        "arrival_window": vn.arrival_window,
        "nodes": [{"id": n, "cpu": vn.cpu_req[n]} for n in vn.nodes],
        "links": [{"u": u, "v": v, "bw": vn.bw_req[(u, v)]} for u, v in vn.links],
    }


def load_substrate(path: Union[str, Path]) -> SubstrateNetwork:
    return substrate_from_dict(_read_json(path))


def save_substrate(sn: SubstrateNetwork, path: Union[str, Path]) -> None:
    _write_json(substrate_to_dict(sn), path)


def load_requests(path: Union[str, Path]) -> List[VirtualNetworkRequest]:
    """讀取請求檔；也接受單一請求物件。"""
    data = _read_json(path)
    if isinstance(data, dict) and "requests" in data:
        return [request_from_dict(r.model_dump()) for r in RequestsSchema.model_validate(data).requests]
    return [request_from_dict(data)]


def save_requests(requests: Sequence[VirtualNetworkRequest], path: Union[str, Path]) -> None:
    _write_json({"requests": [request_to_dict(vn) for vn in requests]}, path)


def load_check_input(path: Union[str, Path]) -> Tuple[SubstrateNetwork, LoadVector]:
    """
    讀取 check 指令的輸入：基底網路加上負載（直接給 λ 或以嵌入紀錄計算）。

    Raises:
        ValueError: 同時缺少 loads 與 embeddings，或負載引用未知連結。
    """
    schema = LoadsSchema.model_validate(_read_json(path))
    sn = substrate_from_dict(schema.substrate.model_dump())
    if schema.loads is not None:
        load = {l: 0.0 for l in sn.links}
        for entry in schema.loads:
            key = link_key(entry.u, entry.v)
            if key not in load:
                raise ValueError(f"負載項目引用了不存在的連結 {key}")
            load[key] += entry.load
        return sn, LoadVector(load=load)
    if schema.embeddings is not None:
        return sn, potential_loads(sn, [Embedding.from_record(r) for r in schema.embeddings])
    raise ValueError("check 輸入必須提供 'loads' 或 'embeddings'。")
