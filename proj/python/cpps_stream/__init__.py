"""Continuous-query OEE pipeline over simulated RDF sensor streams.

The compiled extension does the work; this wrapper only adds dict-friendly
config handling. Scenarios and plants may be passed as a built-in name
("reference", "perfect"), a JSON string, or a plain dict; results come back
as small read-only objects whose report methods emit the same bytes the
command-line tool writes.
"""

from __future__ import annotations

import json as _json

from ._cpps import (
    PRODUCTION_STREAM,
    STREAM_BASE,
    ConfigError,
    EngineError,
    EvalError,
    Kpi,
    Kpis,
    ParseError,
    Query,
    Run,
    Simulation,
    Source,
    Truth,
    default_plant_json,
    dependency_order,
    duration_to_string,
    explain,
    parse_queries,
    perfect_scenario_json,
    pipeline_text,
    plant_turtle,
    reference_scenario_json,
    serialize_query,
)
from ._cpps import run_pipeline as _run_pipeline
from ._cpps import simulate as _simulate

__all__ = [
    "PRODUCTION_STREAM",
    "STREAM_BASE",
    "ConfigError",
    "EngineError",
    "EvalError",
    "Kpi",
    "Kpis",
    "ParseError",
    "Query",
    "Run",
    "Simulation",
    "Source",
    "Truth",
    "default_plant",
    "default_plant_json",
    "dependency_order",
    "duration_to_string",
    "explain",
    "parse_queries",
    "perfect_scenario",
    "perfect_scenario_json",
    "pipeline_text",
    "plant_turtle",
    "reference_scenario",
    "reference_scenario_json",
    "run",
    "serialize_query",
    "simulate",
]

_BUILTIN_SCENARIOS = {
    "reference": reference_scenario_json,
    "perfect": perfect_scenario_json,
}


def default_plant() -> dict:
    """The shipped five-station line with its three sensors, as a dict."""
    return _json.loads(default_plant_json())


def reference_scenario() -> dict:
    """The worked example scenario, as a dict (edit and pass back to run())."""
    return _json.loads(reference_scenario_json())


def perfect_scenario() -> dict:
    """The flawless shorter day, as a dict."""
    return _json.loads(perfect_scenario_json())


def _scenario_json(scenario) -> str:
    if scenario is None:
        return ""
    if isinstance(scenario, str):
        builtin = _BUILTIN_SCENARIOS.get(scenario)
        if builtin is not None:
            return builtin()
        if scenario.lstrip().startswith("{"):
            return scenario
        raise ValueError(
            f"unknown scenario {scenario!r} (built-ins: "
            + ", ".join(sorted(_BUILTIN_SCENARIOS))
            + "; otherwise pass a JSON object or a dict)"
        )
    return _json.dumps(scenario)


def _plant_json(plant) -> str:
    if plant is None:
        return ""
    if isinstance(plant, str):
        return plant
    return _json.dumps(plant)


def simulate(scenario=None, plant=None) -> Simulation:
    """Generates one scenario's event stream plus its exact ground truth.

    `scenario` and `plant` accept a built-in name, a JSON string, or a dict;
    None means the reference scenario on the default plant.
    """
    return _simulate(_scenario_json(scenario), _plant_json(plant))


def run(scenario="reference", plant=None) -> Run:
    """Runs the executable OEE pipeline over one simulated scenario.

    Returns the ground truth, the engine's KPI quadruple, the closed-form
    oracle's quadruple, and the emission log with its report renderers.
    """
    return _run_pipeline(_scenario_json(scenario), _plant_json(plant))
