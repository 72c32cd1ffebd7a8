"""Interdomain routing simulator: BGP baseline plus R-BGP, MIRO and YAMR."""

import json

from ._core import (
    IoError,
    Simulator,
    Topology,
    ValidationError,
    compare_scenario,
    fixture,
    fixture_as,
    fixture_names,
    generate_topology,
    load_topology,
    load_topology_file,
    protocols,
    run_scenario,
)

__all__ = [
    "IoError",
    "Simulator",
    "Topology",
    "ValidationError",
    "compare",
    "compare_scenario",
    "fixture",
    "fixture_as",
    "fixture_names",
    "generate_topology",
    "load_topology",
    "load_topology_file",
    "protocols",
    "run",
    "run_scenario",
]


def run(scenario, protocol="bgp", topology=None, strict=True):
    """Runs a scenario file and returns the report as a dict."""
    return json.loads(run_scenario(str(scenario), protocol, topology, strict, "json"))


def compare(scenario, protocols=(), topology=None, strict=True):
    """Runs a scenario under several protocols; returns {"protocols", "metrics"}."""
    return json.loads(compare_scenario(str(scenario), list(protocols), topology, strict, "json"))
