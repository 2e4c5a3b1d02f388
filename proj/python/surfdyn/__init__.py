"""Exact dynamical invariants of rational self-maps of P2 and P1xP1."""

import json as _json

from ._core import (  # noqa: F401
    BudgetError,
    Error,
    GenericityError,
    InputError,
    Map,
    PreconditionError,
    analyze_json,
    degree_sequence,
    dynamical_degree,
    iterate,
    load_map_json,
    parse_expression,
    topological_degree,
)

__all__ = [
    "BudgetError",
    "Error",
    "GenericityError",
    "InputError",
    "Map",
    "PreconditionError",
    "analyze",
    "analyze_json",
    "degree_sequence",
    "dynamical_degree",
    "iterate",
    "load_map",
    "load_map_json",
    "parse_expression",
    "topological_degree",
]


def load_map(source):
    """Load a map from a JSON map-file document (text or parsed dict)."""
    if isinstance(source, Map):
        return source
    if isinstance(source, dict):
        source = _json.dumps(source)
    return load_map_json(source)


def analyze(source, **kwargs):
    """Full analysis report as a dict; keyword arguments as in analyze_json."""
    return _json.loads(analyze_json(load_map(source), **kwargs))
