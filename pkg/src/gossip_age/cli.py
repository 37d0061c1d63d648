"""Command-line front end.

The CLI is a thin client of the HTTP service: it builds a request, posts it
to the service and writes the returned records as CSV. By default the
service app runs in-process; pass --server to target a running instance
(e.g. one started with `uvicorn gossip_age.service.app:app`).
"""
from __future__ import annotations

import json
import sys
from typing import List, Optional

import click
import httpx

from .records import ExperimentRecord, write_csv


def _client(server: Optional[str]) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=None)
    from fastapi.testclient import TestClient  # noqa: PLC0415 (lazy: service pulls in numba)

    from .service.app import app

    return TestClient(app)


def _post(server: Optional[str], path: str, payload: dict) -> List[ExperimentRecord]:
    with _client(server) as client:
        resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise click.ClickException(str(detail))
    return [ExperimentRecord.from_json(r) for r in resp.json()["records"]]


def _emit(records: List[ExperimentRecord], out: Optional[str]) -> None:
    if out:
        write_csv(records, out)
        click.echo(f"wrote {len(records)} records to {out}", err=True)
    else:
        write_csv(records, sys.stdout)


def _network_payload(file: Optional[str], topology: Optional[str], n: Optional[int],
                     lam: float, lambda_e: float, edge_probability: float,
                     rate_low: float, rate_high: float, src_probability: float,
                     topology_seed: int) -> dict:
    if (file is None) == (topology is None):
        raise click.ClickException("provide exactly one of --file or --topology")
    if file is not None:
        try:
            with open(file) as f:
                doc = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise click.ClickException(f"cannot read network file {file}: {exc}")
        return {"network": doc}
    if n is None:
        raise click.ClickException("--topology requires --n")
    return {
        "topology": {
            "kind": topology, "n": n, "lambda": lam, "lambda_e": lambda_e,
            "edge_probability": edge_probability, "rate_low": rate_low,
            "rate_high": rate_high, "src_probability": src_probability,
            "seed": topology_seed,
        }
    }


def _network_options(f):
    opts = [
        click.option("--file", type=click.Path(), default=None,
                     help="Network JSON file (alternative to --topology)."),
        click.option("--topology", type=str, default=None,
                     help="star-center-fed | star-leaf-fed | ring | complete | random"),
        click.option("--n", type=int, default=None, help="Node count."),
        click.option("--lambda", "lam", type=float, default=1.0,
                     help="Per-node total gossip rate budget."),
        click.option("--lambda-e", type=float, default=1.0,
                     help="Source self-update rate."),
        click.option("--protocol", default="pushpull",
                     help="push | pull | pushpull"),
        click.option("--scale", type=float, default=1.0,
                     help="Gossip rate-scale factor in (0,1]."),
        click.option("--sets", "targets", multiple=True,
                     help="Target: node id, set literal like '{1,2}', or 'average'. Repeatable."),
        click.option("--edge-probability", type=float, default=0.3),
        click.option("--rate-low", type=float, default=0.1),
        click.option("--rate-high", type=float, default=1.0),
        click.option("--src-probability", type=float, default=0.5),
        click.option("--topology-seed", type=int, default=0,
                     help="Seed for the random topology generator."),
        click.option("--out", type=click.Path(), default=None,
                     help="Output CSV path (stdout if omitted)."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


@click.group()
@click.option("--server", default=None, envvar="GOSSIP_AGE_SERVER",
              help="Base URL of a running service; in-process if omitted.")
@click.pass_context
def main(ctx, server):
    """Version age of information in gossip networks."""
    ctx.obj = server


@main.command()
@_network_options
@click.option("--method", default="exact", help="exact | reduced | bounds")
@click.pass_obj
def solve(server, file, topology, n, lam, lambda_e, protocol, scale, targets,
          edge_probability, rate_low, rate_high, src_probability,
          topology_seed, out, method):
    """Exact limiting average version age for the given targets."""
    payload = _network_payload(file, topology, n, lam, lambda_e,
                               edge_probability, rate_low, rate_high,
                               src_probability, topology_seed)
    payload.update(protocol=protocol, scale=scale, method=method,
                   targets=list(targets))
    _emit(_post(server, "/solve", payload), out)


@main.command()
@_network_options
@click.option("--horizon", type=float, required=True, help="Simulated time span.")
@click.option("--burn-in", type=float, default=None,
              help="Discarded initial interval (default horizon/10).")
@click.option("--reps", type=int, default=5, help="Replication count.")
@click.option("--seed", type=int, default=0, help="Base RNG seed.")
@click.pass_obj
def simulate(server, file, topology, n, lam, lambda_e, protocol, scale, targets,
             edge_probability, rate_low, rate_high, src_probability,
             topology_seed, out, horizon, burn_in, reps, seed):
    """Monte Carlo age estimates with replication standard errors."""
    payload = _network_payload(file, topology, n, lam, lambda_e,
                               edge_probability, rate_low, rate_high,
                               src_probability, topology_seed)
    payload.update(protocol=protocol, scale=scale, targets=list(targets),
                   horizon=horizon, burn_in=burn_in, reps=reps, seed=seed)
    _emit(_post(server, "/simulate", payload), out)


def _parse_sweep(text: Optional[str]) -> List[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise click.ClickException(f"cannot parse sweep {text!r}")


@main.command("figure-star")
@click.option("--n-values", default=None,
              help="Comma-separated sweep (default 100..1000 step 100).")
@click.option("--horizon", type=float, default=None)
@click.option("--reps", type=int, default=None)
@click.option("--seed", type=int, default=0)
@click.option("--lambda", "lam", type=float, default=1.0)
@click.option("--lambda-e", type=float, default=1.0)
@click.option("--out", type=click.Path(), required=True)
@click.pass_obj
def figure_star(server, n_values, horizon, reps, seed, lam, lambda_e, out):
    """Star protocol-comparison sweep (reduced solver + simulation)."""
    payload = {"n_values": _parse_sweep(n_values), "horizon": horizon,
               "reps": reps, "seed": seed, "lambda": lam, "lambda_e": lambda_e}
    _emit(_post(server, "/figures/star", payload), out)


@main.command("figure-ring-fc")
@click.option("--n-values", default=None,
              help="Comma-separated sweep (default 100..1000 step 100).")
@click.option("--horizon", type=float, default=None)
@click.option("--reps", type=int, default=None)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), required=True)
@click.pass_obj
def figure_ring_fc(server, n_values, horizon, reps, seed, out):
    """Ring/complete half-rate push-pull sweep with reference curves."""
    payload = {"n_values": _parse_sweep(n_values), "horizon": horizon,
               "reps": reps, "seed": seed}
    _emit(_post(server, "/figures/ring-fc", payload), out)


@main.command()
@click.option("--file", type=click.Path(), required=True)
@click.pass_obj
def validate(server, file):
    """Check a network file against the model invariants."""
    try:
        with open(file) as f:
            doc = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"cannot read network file {file}: {exc}")
    with _client(server) as client:
        resp = client.post("/validate", json=doc)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise click.ClickException(str(detail))
    click.echo("ok")


if __name__ == "__main__":
    main()
