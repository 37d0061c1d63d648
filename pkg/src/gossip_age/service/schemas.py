"""Pydantic request/response models for the HTTP service."""
from __future__ import annotations

from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from ..network import GossipNetwork
from ..topologies import network_from_dict, network_to_dict


class EdgeModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    from_: int = Field(alias="from")
    to: int
    rate: float


class NetworkModel(BaseModel):
    """Mirrors the JSON network file format."""

    n: int
    lambda_e: float
    source_rates: List[float]
    push_edges: List[EdgeModel] = []
    pull_edges: List[EdgeModel] = []

    def to_network(self) -> GossipNetwork:
        return network_from_dict(self.model_dump(by_alias=True))

    @staticmethod
    def from_network(net: GossipNetwork) -> "NetworkModel":
        return NetworkModel.model_validate(network_to_dict(net))


class TopologyParams(BaseModel):
    kind: str
    n: int
    lam: float = Field(default=1.0, alias="lambda")
    lambda_e: float = 1.0
    edge_probability: float = 0.3
    rate_low: float = 0.1
    rate_high: float = 1.0
    src_probability: float = 0.5
    seed: int = 0

    model_config = ConfigDict(populate_by_name=True)


class NetworkSource(BaseModel):
    """Either an inline network document or a topology to generate."""

    network: Optional[NetworkModel] = None
    topology: Optional[TopologyParams] = None


class SolveRequest(NetworkSource):
    protocol: str = "pushpull"
    scale: float = 1.0
    method: str = "exact"
    targets: List[str] = []


class SimulateRequest(NetworkSource):
    protocol: str = "pushpull"
    scale: float = 1.0
    targets: List[str] = []
    horizon: float
    burn_in: Optional[float] = None
    reps: int = 1
    seed: int = 0


class FigureStarRequest(BaseModel):
    n_values: List[int] = []
    horizon: Optional[float] = None
    reps: Optional[int] = None
    seed: int = 0
    lam: float = Field(default=1.0, alias="lambda")
    lambda_e: float = 1.0

    model_config = ConfigDict(populate_by_name=True)


class FigureRingFcRequest(BaseModel):
    n_values: List[int] = []
    horizon: Optional[float] = None
    reps: Optional[int] = None
    seed: int = 0


class RecordModel(BaseModel):
    topology: str
    protocol: str
    scale: float
    n: int
    target: str
    method: str
    value: Union[float, str]
    stderr: Optional[float] = None
    seed: Optional[int] = None
    horizon: Optional[float] = None
    reps: Optional[int] = None


class RecordsResponse(BaseModel):
    records: List[RecordModel]


class ValidateResponse(BaseModel):
    ok: bool
    detail: str = "ok"
