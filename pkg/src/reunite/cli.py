"""Operator command line: run the service, validate fixtures, submit
entries, decide cases, and replay the four demo scenarios.

Exit codes: 0 success, 1 scenario failed, 2 configuration error,
3 bind/port error, 4 service unreachable.
"""
from __future__ import annotations

import base64
import json
import socket
import sys
from pathlib import Path

import click

from .config import ServiceConfig, default_fixture_path, load_config
from .errors import ConfigError, RegistryUnavailable

EXIT_SCENARIO_FAIL = 1
EXIT_CONFIG = 2
EXIT_BIND = 3
EXIT_UNREACHABLE = 4


@click.group()
def main():
    """Missing-person registry service and admin tool."""


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="TOML config file; REUNITE_* env vars override.")
def serve(config_path):
    """Run the HTTP service until interrupted."""
    try:
        config = load_config(config_path)
        config.validate_paths()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((config.host, config.port))
    except OSError as exc:
        click.echo(f"cannot bind {config.bind_address}: {exc}", err=True)
        sys.exit(EXIT_BIND)
    finally:
        probe.close()

    import uvicorn

    from .api import create_app
    from .service import RegistryService

    service = RegistryService(config)
    try:
        uvicorn.run(create_app(service), host=config.host, port=config.port, log_level="info")
    finally:
        service.close()


@main.command()
@click.option("--citizens", "citizens_path", type=click.Path(), default=None)
@click.option("--stations", "stations_path", type=click.Path(), default=None)
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def seed(citizens_path, stations_path, as_json):
    """Validate and summarize the citizen and police-station fixtures."""
    from .verification import CitizenRegistry, StationRegistry

    citizens_path = Path(citizens_path) if citizens_path else default_fixture_path("citizens.json")
    stations_path = Path(stations_path) if stations_path else default_fixture_path("police_stations.json")
    try:
        citizens = CitizenRegistry.load(citizens_path)
        stations = StationRegistry.load(stations_path)
    except (RegistryUnavailable, ValueError) as exc:
        click.echo(f"fixture error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    if as_json:
        click.echo(json.dumps({"citizens": len(citizens), "stations": len(stations)}))
    else:
        click.echo(f"citizens: {len(citizens)}, stations: {len(stations)}")
        if len(citizens) == 0 or len(stations) == 0:
            click.echo("warning: empty fixture file", err=True)


@main.command()
@click.option("--side", type=click.Choice(["missing", "finding"]), required=True)
@click.option("--json", "json_path", type=click.Path(exists=True), required=True,
              help="Submission JSON file: uploader, subject_name, photo.")
@click.option("--url", default="http://127.0.0.1:8080", show_default=True)
def submit(side, json_path, url):
    """POST one submission file to a running service."""
    import httpx

    body = json.loads(Path(json_path).read_text(encoding="utf-8"))
    body["side"] = side.upper()
    if "payload_base64" not in body.get("photo", {}) and "payload" in body.get("photo", {}):
        body["photo"]["payload_base64"] = base64.b64encode(
            body["photo"].pop("payload").encode("utf-8")
        ).decode("ascii")
    try:
        resp = httpx.post(f"{url.rstrip('/')}/api/entries", json=body, timeout=30.0)
    except httpx.HTTPError as exc:
        click.echo(f"service unreachable at {url}: {exc}", err=True)
        sys.exit(EXIT_UNREACHABLE)
    click.echo(json.dumps(resp.json(), indent=2))
    sys.exit(0 if resp.status_code < 500 else 1)


@main.command()
@click.option("--case", "case_id", required=True)
@click.option("--approve/--deny", "approve", default=True)
@click.option("--url", default="http://127.0.0.1:8080", show_default=True)
def decide(case_id, approve, url):
    """Approve or deny a pending verification case."""
    import httpx

    try:
        resp = httpx.post(
            f"{url.rstrip('/')}/api/verifications/{case_id}/decision",
            json={"approve": approve}, timeout=30.0,
        )
    except httpx.HTTPError as exc:
        click.echo(f"service unreachable at {url}: {exc}", err=True)
        sys.exit(EXIT_UNREACHABLE)
    click.echo(json.dumps(resp.json(), indent=2))
    sys.exit(0 if resp.status_code < 400 else 1)


@main.command()
@click.argument("case_name", type=click.Choice(["case1", "case2", "case3", "case4"]))
@click.option("--manual-verify", is_flag=True,
              help="Exercise the PENDING path and decide cases explicitly.")
@click.option("--url", default=None,
              help="Drive a live service instead of an embedded fresh store.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable report.")
def scenario(case_name, manual_verify, url, as_json):
    """Replay one of the four demo cases and check every observable."""
    from .scenarios import run_scenario

    try:
        report = run_scenario(case_name.upper(), base_url=url, manual_verify=manual_verify)
    except Exception as exc:
        if url is not None:
            click.echo(f"service unreachable at {url}: {exc}", err=True)
            sys.exit(EXIT_UNREACHABLE)
        raise
    if as_json:
        click.echo(report.to_json())
    else:
        click.echo(f"{report.case_name}: {'PASS' if report.passed else 'FAIL'}")
        for step in report.steps:
            click.echo(f"  [{'ok' if step.passed else 'FAIL'}] {step.action}")
            if not step.passed:
                click.echo(f"       expected: {step.expected}")
                click.echo(f"       observed: {step.observed}")
    sys.exit(0 if report.passed else EXIT_SCENARIO_FAIL)


if __name__ == "__main__":
    main()
