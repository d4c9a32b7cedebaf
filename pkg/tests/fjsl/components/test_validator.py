"""Unit tests for the validator."""

import pytest
from pydantic import ValidationError
from pytest import FixtureRequest

from fjsl.components.errors import InfeasibleSolutionError
from fjsl.components.generator import generate_random_instance
from fjsl.components.heuristics import best_constructive
from fjsl.components.instance import Instance
from fjsl.components.solution import Solution, relabel_machines, solution_from_sequences
from fjsl.components.solution_graph import build_solution_graph, schedule_times
from fjsl.components.validator import ValidationReport, ensure_feasible, validate


@pytest.fixture(
    params=[
        # Missing operation
        ({1: [3, 8, 6], 2: [7, 4, 11], 3: [1, 2, 9, 10, 5]}, "assignment"),
        # Operation 4 can only go to machine 2
        ({1: [3, 8, 6, 4], 2: [7, 11], 3: [1, 2, 9, 10, 5, 12]}, "eligibility"),
        # Machine order against a precedence arc
        ({1: [3, 8, 6], 2: [7, 4, 11], 3: [2, 1, 9, 10, 5, 12]}, "cycle"),
        # Unknown machine
        ({1: [3, 8, 6], 2: [7, 4, 11], 3: [1, 2, 9, 10, 5, 12], 7: []}, "sequence"),
    ]
)
def broken_solution(request: FixtureRequest) -> tuple[Solution, str]:
    """Provides infeasible solutions of the worked example with the expected kind."""
    sequences, kind = request.param
    return solution_from_sequences(sequences), kind


def _starts(inst: Instance, sol: Solution, alpha: float) -> dict[int, int]:
    graph = build_solution_graph(inst, sol, alpha)
    return {op: start for op, (start, _) in schedule_times(graph).items()}


# --------------------------------- Feasible --------------------------------- #


def test_worked_example(
    example: Instance, no_learning_solution: Solution, learning_solution: Solution
) -> None:
    """Test the makespans of the optimal solutions of the worked example."""
    assert validate(example, 0.0, no_learning_solution) == ValidationReport(
        feasible=True, makespan=8000
    )
    assert validate(example, 0.5, learning_solution).makespan == 5016
    # A solution stays feasible under another learning rate
    assert validate(example, 0.0, learning_solution).feasible
    assert ensure_feasible(example, 0.5, learning_solution).makespan == 5016


def test_explicit_starts(example: Instance, learning_solution: Solution) -> None:
    """Test that given start times are checked as they are."""
    starts = _starts(example, learning_solution, 0.5)
    assert validate(example, 0.5, learning_solution, starts).makespan == 5016
    delayed = {op: start + 100 for op, start in starts.items()}
    assert validate(example, 0.5, learning_solution, delayed).makespan == 5116


# -------------------------------- Infeasible -------------------------------- #


def test_broken_solution(example: Instance, broken_solution: tuple) -> None:
    """Test that each kind of violation is reported."""
    sol, kind = broken_solution
    report = validate(example, 0.0, sol)
    assert not report.feasible
    assert report.makespan is None
    assert kind in {k for k, _ in report.violations}
    with pytest.raises(InfeasibleSolutionError) as error:
        ensure_feasible(example, 0.0, sol)
    assert error.value.violations == report.violations


@pytest.mark.parametrize(
    ("changes", "kinds"),
    [
        ({8: 1000, 4: 1500}, {"overlap", "precedence"}),
        ({7: -1}, {"start"}),
        ({6: 3600}, {"precedence"}),
    ],
)
def test_explicit_starts_violations(
    example: Instance, learning_solution: Solution, changes: dict, kinds: set
) -> None:
    """Test the timing violations of explicit start times."""
    starts = _starts(example, learning_solution, 0.5) | changes
    report = validate(example, 0.5, learning_solution, starts)
    assert not report.feasible
    assert {k for k, _ in report.violations} == kinds


def test_missing_start(example: Instance, learning_solution: Solution) -> None:
    """Test that every operation needs a start time."""
    starts = _starts(example, learning_solution, 0.5)
    del starts[12]
    report = validate(example, 0.5, learning_solution, starts)
    assert report.violations[0][0] == "start"


def test_unknown_start(example: Instance, learning_solution: Solution) -> None:
    """Test that start times of unknown operations are reported, not raised."""
    starts = _starts(example, learning_solution, 0.5) | {99: 0}
    report = validate(example, 0.5, learning_solution, starts)
    assert not report.feasible
    assert report.violations == [("start", "start times of unknown operations [99]")]


def test_report_consistency() -> None:
    """Test that a report is feasible exactly when it has no violation."""
    with pytest.raises(ValidationError):
        ValidationReport(feasible=True, violations=[("start", "late")])
    with pytest.raises(ValidationError):
        ValidationReport(feasible=False)


# -------------------------------- Metamorphic ------------------------------- #


def test_relabel_keeps_makespan() -> None:
    """Test that renaming machines changes neither feasibility nor makespan."""
    for seed in range(10):
        inst = generate_random_instance(seed, 3, 8, shape="dag", job_count=2)
        sol = best_constructive(inst, 0.2).solution
        mapping = {1: 2, 2: 3, 3: 1}
        new_inst, new_sol = relabel_machines(inst, sol, mapping)
        assert validate(new_inst, 0.2, new_sol) == validate(inst, 0.2, sol)
