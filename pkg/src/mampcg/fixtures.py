"""Bundled example graphs.

Small hand-transcribed graphs used throughout the tests and handy as CLI
inputs.  ``mag_diamond`` is an ancestral-style graph meant for the mvr
criterion; ``c2c3_invalid`` deliberately violates C2 and C3.
"""
from __future__ import annotations

from pathlib import Path

from .textio import parse_graph_file

FIXTURE_NAMES = (
    "amp_square",
    "mamp_square",
    "mamp_kite",
    "mamp_wings",
    "mag_diamond",
    "rcg_fork",
    "c2c3_invalid",
)

_DIR = Path(__file__).parent / "fixtures"


def fixture_path(name):
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}")
    return _DIR / f"{name}.graph"


def fixture_graph(name):
    _, graph, _ = parse_graph_file(fixture_path(name))
    return graph
