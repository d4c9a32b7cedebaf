"""Fixtures shared by the test suite: the worked example and small instances."""

from pathlib import Path

import pytest
from pytest import FixtureRequest

from fjsl.components.instance import Instance, build_instance, read_instance
from fjsl.components.solution import Solution, read_solution

DATA_DIR = Path(__file__).resolve().parents[2] / "data"


@pytest.fixture()
def data_dir() -> Path:
    """Folder of the worked example files."""
    return DATA_DIR


@pytest.fixture()
def example() -> Instance:
    """Worked example: two jobs, 12 operations, 3 machines."""
    return read_instance(DATA_DIR / "example.fjs")


@pytest.fixture()
def no_learning_solution() -> Solution:
    """Optimal solution of the worked example without learning (makespan 8000)."""
    return read_solution(DATA_DIR / "example_no_learning.json")


@pytest.fixture()
def learning_solution() -> Solution:
    """Optimal solution of the worked example for alpha = 0.5 (makespan 5016)."""
    return read_solution(DATA_DIR / "example_learning.json")


@pytest.fixture()
def single_op() -> Instance:
    """One operation on one machine, standard time 7."""
    return build_instance(1, {1: {1: 7}})


@pytest.fixture(
    params=[
        # Two independent operations, two machines
        (2, {1: {1: 5, 2: 9}, 2: {1: 9, 2: 5}}, []),
        # A chain on a single machine
        (1, {1: {1: 10}, 2: {1: 10}, 3: {1: 4}}, [(1, 2), (2, 3)]),
        # Y shape with full flexibility
        (
            2,
            {1: {1: 3, 2: 4}, 2: {1: 2, 2: 2}, 3: {1: 6, 2: 5}, 4: {1: 1, 2: 3}},
            [(1, 3), (2, 3), (3, 4)],
        ),
    ]
)
def small_instance(request: FixtureRequest) -> Instance:
    """Provides small hand-made instances."""
    machine_count, operations, arcs = request.param
    return build_instance(machine_count, operations, arcs)
