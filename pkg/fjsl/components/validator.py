"""Feasibility check and makespan recomputation of a solution."""

import logging
from collections.abc import Mapping

from pydantic import BaseModel, root_validator

from .errors import InfeasibleSolutionError
from .instance import Instance
from .learning import check_alpha, psi
from .solution import Solution
from .solution_graph import (
    build_solution_graph,
    critical_path,
    schedule_times,
    solution_structure_violations,
    topological_sort,
)

logger = logging.getLogger(__name__)


class ValidationReport(BaseModel):
    """Outcome of the validation of a solution.

    Attributes:
        feasible (bool): Whether the solution satisfies every constraint.
        makespan (int | None): Makespan in scaled units, None if infeasible.
        violations (list[tuple[str, str]]): (kind, detail) pairs.
    """

    feasible: bool
    makespan: int | None = None
    violations: list[tuple[str, str]] = []

    class Config:
        """Pydantic configuration."""

        frozen = True

    @root_validator(skip_on_failure=True)
    def validate_feasible(cls, values: dict) -> dict:
        """Check that feasible is equivalent to no violation."""
        if values["feasible"] == bool(values["violations"]):
            raise ValueError("feasible must be True exactly when there is no violation")
        return values


def _infeasible(violations: list[tuple[str, str]]) -> ValidationReport:
    logger.debug(f"{len(violations)} violations, first: {violations[0]}")
    return ValidationReport(feasible=False, violations=violations)


def _timing_violations(
    inst: Instance,
    sol: Solution,
    durations: Mapping[int, int],
    starts: Mapping[int, int],
) -> list[tuple[str, str]]:
    violations = []
    end = {op: starts[op] + durations[op] for op in starts}
    for op, start in starts.items():
        if start < 0:
            violations.append(("start", f"operation {op} starts at {start} < 0"))
    for i, j in inst.precedence_arcs:
        if end[i] > starts[j]:
            violations.append(
                (
                    "precedence",
                    f"operation {j} starts at {starts[j]} before its predecessor {i}"
                    f" completes at {end[i]}",
                )
            )
    for k, seq in sol.sequences.items():
        for i, j in zip(seq[:-1], seq[1:], strict=True):
            if end[i] > starts[j]:
                violations.append(
                    (
                        "overlap",
                        f"operations {i} and {j} overlap on machine {k}"
                        f" ({end[i]} > {starts[j]})",
                    )
                )
    return violations


def validate(
    inst: Instance,
    alpha: float,
    sol: Solution,
    starts: Mapping[int, int] | None = None,
) -> ValidationReport:
    """Check a solution against an instance and compute its makespan.

    Start times are derived from the assignment and sequences as the semi-active
    schedule (longest paths in the solution graph) unless `starts` is given, in which
    case the given start times are checked as they are.

    Args:
        inst (Instance): Instance.
        alpha (float): Learning rate.
        sol (Solution): Solution to check.
        starts (Mapping[int, int] | None, optional): Explicit start times, scaled units.
            Defaults to None.

    Returns:
        ValidationReport: Feasibility, makespan and violations. Never raises for an
            infeasible solution.
    """
    alpha = check_alpha(alpha)

    violations = solution_structure_violations(inst, sol)
    if violations:
        return _infeasible(violations)

    # Processing times from the positions in the sequences
    durations = {}
    for k, seq in sol.sequences.items():
        for r, op in enumerate(seq, start=1):
            durations[op] = psi(alpha, inst.eligible(op)[k], r)

    try:
        graph = build_solution_graph(inst, sol, alpha)
    except InfeasibleSolutionError as e:
        cycle = " -> ".join(str(v) for v in e.cycle)
        return _infeasible(
            [("cycle", f"precedence and machine orders conflict: {cycle}")]
        )

    for op, duration in durations.items():
        if graph.weights[op] != duration:
            violations.append(
                (
                    "weight",
                    f"operation {op} weighs {graph.weights[op]}, expected {duration}",
                )
            )

    if starts is None:
        order = topological_sort(graph)
        times = schedule_times(graph, order)
        starts = {op: start for op, (start, _) in times.items()}
        longest = critical_path(graph, order).length
    else:
        ids = set(range(1, inst.op_count + 1))
        missing = sorted(ids - set(starts))
        unknown = sorted(set(starts) - ids)
        if missing:
            violations.append(("start", f"no start time for operations {missing}"))
        if unknown:
            violations.append(("start", f"start times of unknown operations {unknown}"))
        if missing or unknown:
            return _infeasible(violations)
        longest = None

    violations += _timing_violations(inst, sol, durations, starts)
    if violations:
        return _infeasible(violations)

    makespan = max(starts[op] + durations[op] for op in durations)
    if longest is not None and longest != makespan:
        return _infeasible(
            [("makespan", f"critical path length {longest} differs from {makespan}")]
        )
    return ValidationReport(feasible=True, makespan=makespan)


def ensure_feasible(inst: Instance, alpha: float, sol: Solution) -> ValidationReport:
    """Validate a solution and raise if it is infeasible.

    Raises:
        InfeasibleSolutionError: If the solution is infeasible, with the violations.

    Returns:
        ValidationReport: The report of a feasible solution.
    """
    report = validate(inst, alpha, sol)
    if not report.feasible:
        kind, detail = report.violations[0]
        raise InfeasibleSolutionError(
            f"infeasible solution ({kind}): {detail}", violations=report.violations
        )
    return report
