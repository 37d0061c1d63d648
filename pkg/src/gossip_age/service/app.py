"""FastAPI service exposing the solver, the simulator and the figure presets.

Run with: uvicorn gossip_age.service.app:app
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import experiments
from ..network import GossipNetwork, NetworkError, ProtocolMode
from ..simulator import SimConfig
from .schemas import (
    FigureRingFcRequest,
    FigureStarRequest,
    NetworkModel,
    NetworkSource,
    RecordModel,
    RecordsResponse,
    SimulateRequest,
    SolveRequest,
    ValidateResponse,
)

app = FastAPI(
    title="gossip-age",
    description="Version age of information in gossip networks: exact subset "
    "recursion, event-driven simulation and figure presets.",
)


def _resolve_network(req: NetworkSource) -> tuple[GossipNetwork, str, float, float]:
    """Returns (network, topology label, lambda, lambda_e)."""
    if (req.network is None) == (req.topology is None):
        raise HTTPException(400, "provide exactly one of 'network' or 'topology'")
    if req.network is not None:
        try:
            net = req.network.to_network()
        except NetworkError as exc:
            raise HTTPException(400, str(exc)) from exc
        return net, "file", 1.0, net.lambda_e
    t = req.topology
    try:
        net = experiments.build_topology(
            t.kind, t.n, t.lam, t.lambda_e,
            edge_probability=t.edge_probability, rate_low=t.rate_low,
            rate_high=t.rate_high, src_probability=t.src_probability, seed=t.seed,
        )
    except NetworkError as exc:
        raise HTTPException(400, str(exc)) from exc
    return net, t.kind, t.lam, t.lambda_e


def _records_response(records) -> RecordsResponse:
    return RecordsResponse(records=[RecordModel(**r.to_json()) for r in records])


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/validate", response_model=ValidateResponse)
def validate_network(net: NetworkModel) -> ValidateResponse:
    try:
        net.to_network()
    except NetworkError as exc:
        raise HTTPException(400, str(exc)) from exc
    return ValidateResponse(ok=True)


@app.post("/solve", response_model=RecordsResponse)
def solve(req: SolveRequest) -> RecordsResponse:
    net, topology, lam, lambda_e = _resolve_network(req)
    try:
        mode = ProtocolMode(experiments.parse_protocol(req.protocol), req.scale)
        targets = [experiments.parse_target(t) for t in req.targets] or list(
            range(1, net.n + 1)
        )
        records = experiments.solve_records(
            net, topology, mode, targets, method=req.method,
            lam=lam, lambda_e=lambda_e,
        )
    except NetworkError as exc:
        raise HTTPException(400, str(exc)) from exc
    return _records_response(records)


@app.post("/simulate", response_model=RecordsResponse)
def simulate(req: SimulateRequest) -> RecordsResponse:
    net, topology, _, _ = _resolve_network(req)
    try:
        mode = ProtocolMode(experiments.parse_protocol(req.protocol), req.scale)
        targets = [experiments.parse_target(t) for t in req.targets] or list(
            range(1, net.n + 1)
        )
        config = SimConfig(
            horizon=req.horizon, burn_in=req.burn_in,
            replications=req.reps, seed=req.seed,
        )
        records = experiments.simulate_records(net, topology, mode, targets, config)
    except NetworkError as exc:
        raise HTTPException(400, str(exc)) from exc
    return _records_response(records)


@app.post("/figures/star", response_model=RecordsResponse)
def figure_star(req: FigureStarRequest) -> RecordsResponse:
    try:
        records = experiments.figure_star_records(
            n_values=req.n_values or experiments.DEFAULT_SWEEP,
            horizon=req.horizon or experiments.STAR_FIGURE_HORIZON,
            reps=req.reps or experiments.STAR_FIGURE_REPS,
            seed=req.seed, lam=req.lam, lambda_e=req.lambda_e,
        )
    except NetworkError as exc:
        raise HTTPException(400, str(exc)) from exc
    return _records_response(records)


@app.post("/figures/ring-fc", response_model=RecordsResponse)
def figure_ring_fc(req: FigureRingFcRequest) -> RecordsResponse:
    try:
        records = experiments.figure_ring_fc_records(
            n_values=req.n_values or experiments.DEFAULT_SWEEP,
            horizon=req.horizon or experiments.RING_FC_FIGURE_HORIZON,
            reps=req.reps or experiments.RING_FC_FIGURE_REPS,
            seed=req.seed,
        )
    except NetworkError as exc:
        raise HTTPException(400, str(exc)) from exc
    return _records_response(records)
