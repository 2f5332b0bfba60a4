"""Built-in problem files shipped with the package."""

from __future__ import annotations

import json
from importlib import resources

from .codec import InputError, ProblemFile, problem_from_json
from .regulation import RegulationProblem

__all__ = ["FIXTURES", "load_fixture", "fixture_json", "regulation_problem"]

FIXTURES = {
    "quadtank": "quadtank.json",
    "quadtank-typo": "quadtank_typo.json",
}


def fixture_json(name: str) -> dict:
    try:
        fname = FIXTURES[name]
    except KeyError:
        raise InputError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
    return json.loads(resources.files("rorcert").joinpath("data", fname).read_text())


def load_fixture(name: str) -> ProblemFile:
    return problem_from_json(fixture_json(name))


def regulation_problem(pf: ProblemFile) -> RegulationProblem:
    return RegulationProblem(pf.plant, pf.controller, pf.generator, pf.disturbance_shaping)
