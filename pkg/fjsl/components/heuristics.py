"""Constructive heuristics based on the EST and ECT dispatching rules."""

import heapq
import logging
from typing import Literal, NamedTuple

from .instance import Instance
from .learning import check_alpha, psi
from .solution import Solution
from .solution_graph import (
    CriticalPathResult,
    SolutionGraph,
    build_solution_graph,
    critical_path,
)

logger = logging.getLogger(__name__)

Rule = Literal["est", "ect"]


class ConstructiveResult(NamedTuple):
    """Solution built by a heuristic with its evaluated graph and critical path."""

    solution: Solution
    graph: SolutionGraph
    critical: CriticalPathResult

    @property
    def makespan(self) -> int:
        """Makespan in scaled units."""
        return self.critical.length


def _dispatch(inst: Instance, alpha: float, rule: Rule) -> dict[int, list[int]]:
    """Schedule one operation at a time and return the machine sequences.

    Candidates are the (operation, machine) pairs whose operation has all its
    predecessors scheduled. EST takes the pairs that can start the earliest, then the
    shortest processing time; ECT takes the pair that completes the earliest. Remaining
    ties go to the smaller operation id, then the smaller machine id.

    Candidate keys sit in a heap and are only recomputed when they change: the pairs
    of the machine that just received an operation, and those of newly ready
    operations. Entries of scheduled operations or of an older machine state are
    dropped when popped.
    """
    predecessors = inst.predecessors()
    successors = inst.successors()
    machine_ops = inst.machine_operations()

    unscheduled_preds = {op: len(preds) for op, preds in predecessors.items()}
    op_ready = {op: 0 for op, count in unscheduled_preds.items() if count == 0}
    machine_ready = {k: 0 for k in range(1, inst.machine_count + 1)}
    machine_version = dict.fromkeys(machine_ready, 0)
    sequences: dict[int, list[int]] = {k: [] for k in machine_ready}
    completion: dict[int, int] = {}
    heap: list[tuple] = []

    def push(v: int, k: int) -> None:
        start = max(op_ready[v], machine_ready[k])
        w = psi(alpha, inst.eligible(v)[k], len(sequences[k]) + 1)
        match rule:
            case "est":
                key = (start, w, v, k)
            case "ect":
                key = (start + w, v, k)
        heapq.heappush(heap, (key, v, k, start, w, machine_version[k]))

    for v in op_ready:
        for k in inst.eligible(v):
            push(v, k)

    while op_ready:
        _, v, k, start, w, version = heapq.heappop(heap)
        if v not in op_ready or version != machine_version[k]:
            continue

        completion[v] = start + w
        machine_ready[k] = completion[v]
        machine_version[k] += 1
        sequences[k].append(v)
        del op_ready[v]
        logger.debug(f"{rule}: operation {v} on machine {k} at [{start}, {start + w}]")

        for u in machine_ops[k]:
            if u in op_ready:
                push(u, k)
        for j in successors[v]:
            unscheduled_preds[j] -= 1
            if unscheduled_preds[j] == 0:
                op_ready[j] = max(completion[i] for i in predecessors[j])
                for m in inst.eligible(j):
                    push(j, m)

    return sequences


def _construct(inst: Instance, alpha: float, rule: Rule) -> ConstructiveResult:
    alpha = check_alpha(alpha)
    sequences = _dispatch(inst, alpha, rule)
    sol = Solution(
        assignment={op: k for k, seq in sequences.items() for op in seq},
        sequences={k: tuple(seq) for k, seq in sequences.items() if seq},
    )
    graph = build_solution_graph(inst, sol, alpha)
    critical = critical_path(graph)
    return ConstructiveResult(
        solution=sol.with_makespan(critical.length, alpha),
        graph=graph,
        critical=critical,
    )


def est_schedule(inst: Instance, alpha: float) -> ConstructiveResult:
    """Build a solution with the earliest starting time rule.

    Args:
        inst (Instance): Instance.
        alpha (float): Learning rate.

    Returns:
        ConstructiveResult: Solution, solution graph and critical path.
    """
    return _construct(inst, alpha, "est")


def ect_schedule(inst: Instance, alpha: float) -> ConstructiveResult:
    """Build a solution with the earliest completion time rule.

    Args:
        inst (Instance): Instance.
        alpha (float): Learning rate.

    Returns:
        ConstructiveResult: Solution, solution graph and critical path.
    """
    return _construct(inst, alpha, "ect")


def best_constructive(inst: Instance, alpha: float) -> ConstructiveResult:
    """Run both heuristics and keep the lower makespan, EST on ties.

    Args:
        inst (Instance): Instance.
        alpha (float): Learning rate.

    Returns:
        ConstructiveResult: The better of the two results.
    """
    est = est_schedule(inst, alpha)
    ect = ect_schedule(inst, alpha)
    best = ect if ect.makespan < est.makespan else est
    logger.info(
        f"EST makespan {est.makespan}, ECT makespan {ect.makespan}:"
        f" keeping {'ECT' if best is ect else 'EST'}"
    )
    return best


def run_heuristic(
    inst: Instance, alpha: float, heuristic: Literal["est", "ect", "best"]
) -> ConstructiveResult:
    """Run a heuristic by name."""
    match heuristic:
        case "est":
            return est_schedule(inst, alpha)
        case "ect":
            return ect_schedule(inst, alpha)
        case "best":
            return best_constructive(inst, alpha)
    raise ValueError(f"unknown heuristic {heuristic!r}")
