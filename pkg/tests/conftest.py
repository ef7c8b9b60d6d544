from __future__ import annotations

from functools import lru_cache

import pytest

from cubization.cayley import build_cayley
from cubization.cover import DEFAULT_COVER_CAP, build_cover, cubization_generators, voltages_for
from cubization.errors import SizeLimitError
from cubization.groups import preset
from cubization.walls import wall_space_from_cover

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


@lru_cache(maxsize=None)
def cayley(name: str):
    return build_cayley(*preset(name))


@lru_cache(maxsize=None)
def pipeline(name: str, k: int, cap: int = DEFAULT_COVER_CAP):
    """(graph, voltages, cover or None, generator lifts) for a preset."""
    graph = cayley(name)
    voltages = voltages_for(graph, k)
    try:
        cover = build_cover(voltages, cap=cap)
    except SizeLimitError:
        cover = None
    return graph, voltages, cover, cubization_generators(voltages)


@lru_cache(maxsize=None)
def wall_space(name: str, k: int):
    return wall_space_from_cover(pipeline(name, k)[2])


@pytest.fixture
def hexagon():
    """Triangle (cyclic group of order 3) with k = 2: the cover is a 6-cycle."""
    return pipeline("cyclic:3", 2)


def record(criterion: int, passed: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[criterion] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
