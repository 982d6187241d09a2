"""Shipped fixture files for the figures' trees and small paths."""

from __future__ import annotations

from pathlib import Path

from mbdgame.graph_core import PredominatedGraph, parse_graph

FIXTURE_DIR = Path(__file__).resolve().parent


def fixture_path(name: str) -> Path:
    """Path of a shipped fixture, by bare name (``"fig2_tree"``) or file name."""
    p = FIXTURE_DIR / (name if name.endswith(".txt") else f"{name}.txt")
    if not p.is_file():
        raise FileNotFoundError(f"no fixture named {name!r}")
    return p


def load_fixture(name: str) -> PredominatedGraph:
    return parse_graph(fixture_path(name).read_bytes())


def fixture_names() -> list[str]:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.txt"))
