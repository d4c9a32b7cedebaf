"""Unit tests for the solution module."""

from pathlib import Path

import pytest

from fjsl.components.errors import InstanceFormatError
from fjsl.components.instance import Instance
from fjsl.components.solution import (
    Solution,
    read_solution,
    relabel_machines,
    save_solution,
    solution_from_json,
    solution_from_sequences,
    solution_to_json,
)


def test_from_sequences() -> None:
    """Test that the assignment is derived from the sequences."""
    sol = solution_from_sequences({2: [3, 1], 1: [2]})
    assert sol.assignment == {1: 2, 2: 1, 3: 2}
    assert list(sol.sequences) == [1, 2]
    assert sol.position(1) == 2
    assert sol.position(3) == 1
    assert sol.makespan is None


def test_json(learning_solution: Solution, tmp_path: Path) -> None:
    """Test the JSON serialization and the file helpers."""
    assert learning_solution.makespan == 5016
    assert learning_solution.alpha == 0.5
    assert solution_from_json(solution_to_json(learning_solution)) == learning_solution
    save_solution(learning_solution, tmp_path / "nested" / "optimum.json")
    assert read_solution(tmp_path / "nested" / "optimum.json") == learning_solution


@pytest.mark.parametrize(
    "text", ["{}", '{"assignment": {"1": "x"}, "sequences": {}}', "[1, 2]"]
)
def test_json_error(text: str) -> None:
    """Test that malformed solutions raise a domain error."""
    with pytest.raises(InstanceFormatError):
        solution_from_json(text)


def test_relabel(example: Instance, learning_solution: Solution) -> None:
    """Test that relabeling moves every reference to a machine."""
    mapping = {1: 3, 2: 1, 3: 2}
    inst, sol = relabel_machines(example, learning_solution, mapping)
    assert inst.eligible(4) == {1: 30}
    assert inst.eligible(1) == {1: 20, 2: 15, 3: 10}
    assert inst.precedence_arcs == example.precedence_arcs
    assert sol.sequences == {1: (7, 8, 4, 11), 2: (2, 9, 5, 12), 3: (1, 3, 10, 6)}
    assert sol.assignment[7] == 1
    assert sol.makespan == learning_solution.makespan
    # The inverse mapping restores the originals
    inverse = {new: old for old, new in mapping.items()}
    assert relabel_machines(inst, sol, inverse) == (example, learning_solution)


def test_relabel_error(example: Instance) -> None:
    """Test that a mapping that is not a permutation is rejected."""
    with pytest.raises(ValueError):
        relabel_machines(example, None, {1: 1, 2: 1, 3: 3})
    assert relabel_machines(example, None, {1: 1, 2: 2, 3: 3}) == (example, None)
