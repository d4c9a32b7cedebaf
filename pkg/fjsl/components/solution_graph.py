"""Solution graph of a schedule: topological sort, critical path and reach sets.

The graph has one vertex per operation plus a source `s` and a sink `t`. Its arcs are
the precedence arcs, arcs from `s` to operations without predecessor, arcs from
operations without successor to `t`, and machine arcs between consecutive operations
of every machine sequence. Weights are on vertices: the actual processing time of each
operation at its position, 0 for `s` and `t`.
"""

import logging
from collections.abc import Iterable

import networkx as nx
from pydantic import BaseModel

from .errors import CycleError, EligibilityError, InfeasibleSolutionError
from .instance import Instance
from .learning import check_alpha, psi
from .solution import Solution

logger = logging.getLogger(__name__)

SOURCE = "s"
SINK = "t"

Vertex = int | str


class SolutionGraph(BaseModel):
    """Solution digraph G = (V, A) with vertex weights.

    Attributes:
        machine_count (int): Number of machines of the instance.
        successors (dict[Vertex, tuple[Vertex, ...]]): Out-arcs of every vertex. The
            machine arc comes first, then the other arcs by ascending target, `t` last.
        weights (dict[Vertex, int]): Actual processing time of every vertex.
        assignment (dict[int, int]): Operation -> machine.
        positions (dict[int, int]): Operation -> 1-based position on its machine.
        sequences (dict[int, tuple[int, ...]]): Machine -> operations in order.
    """

    machine_count: int
    successors: dict[Vertex, tuple[Vertex, ...]]
    weights: dict[Vertex, int]
    assignment: dict[int, int]
    positions: dict[int, int]
    sequences: dict[int, tuple[int, ...]]

    class Config:
        """Pydantic configuration."""

        frozen = True

    @property
    def operations(self) -> list[int]:
        """Operation vertices, ascending."""
        return sorted(self.assignment)

    def arcs(self) -> list[tuple[Vertex, Vertex]]:
        """All arcs of the graph."""
        return [(u, v) for u, succs in self.successors.items() for v in succs]

    def digraph(self) -> nx.DiGraph:
        """The graph as a networkx digraph, weights in the `weight` node attribute."""
        graph = nx.DiGraph()
        for v, w in self.weights.items():
            graph.add_node(v, weight=w)
        graph.add_edges_from(self.arcs())
        return graph


class CriticalPathResult(BaseModel):
    """Longest s-t path of a solution graph.

    Attributes:
        topo_order (list[Vertex]): Topological order used by the longest path DP.
        critical_path (list[int]): Operations of the path, from s to t, excluded.
        length (int): Length of the path, the makespan, in scaled units.
        tau (dict[int, int]): Machine -> largest position of its sequence holding a
            critical operation, 0 if none.
    """

    topo_order: list[Vertex]
    critical_path: list[int]
    length: int
    tau: dict[int, int]

    class Config:
        """Pydantic configuration."""

        frozen = True


def solution_structure_violations(
    inst: Instance, sol: Solution
) -> list[tuple[str, str]]:
    """Structural problems of a solution with respect to an instance.

    Checks that every operation is assigned once, to an eligible machine, and appears
    exactly once, in the sequence of its assigned machine.

    Args:
        inst (Instance): Instance.
        sol (Solution): Solution.

    Returns:
        list[tuple[str, str]]: (kind, detail) pairs, empty if the structure is sound.
    """
    violations = []
    ops = set(range(1, inst.op_count + 1))

    for op in sorted(ops - set(sol.assignment)):
        violations.append(("assignment", f"operation {op} is not assigned"))
    for op in sorted(set(sol.assignment) - ops):
        violations.append(("assignment", f"unknown operation {op} is assigned"))
    for op, k in sol.assignment.items():
        if op in ops and k not in inst.eligible(op):
            violations.append(
                ("eligibility", f"operation {op} cannot be processed by machine {k}")
            )

    seen: dict[int, int] = {}
    for k, seq in sol.sequences.items():
        if not 1 <= k <= inst.machine_count:
            violations.append(("sequence", f"unknown machine {k}"))
        for op in seq:
            if op not in ops:
                violations.append(
                    ("sequence", f"unknown operation {op} on machine {k}")
                )
                continue
            if op in seen:
                violations.append(
                    (
                        "sequence",
                        f"operation {op} sequenced on machines {seen[op]} and {k}",
                    )
                )
                continue
            seen[op] = k
            if sol.assignment.get(op) != k:
                violations.append(
                    (
                        "sequence",
                        f"operation {op} sequenced on machine {k} but assigned to"
                        f" {sol.assignment.get(op)}",
                    )
                )
    for op in sorted(ops - set(seen)):
        violations.append(("sequence", f"operation {op} is not sequenced"))
    return violations


def build_solution_graph(inst: Instance, sol: Solution, alpha: float) -> SolutionGraph:
    """Build the solution graph of a solution.

    Args:
        inst (Instance): Instance.
        sol (Solution): Solution of the instance.
        alpha (float): Learning rate.

    Raises:
        EligibilityError: If an operation is assigned to a machine that cannot
            process it.
        InfeasibleSolutionError: If the solution is structurally unsound or its graph
            has a cycle (the `cycle` attribute lists one).

    Returns:
        SolutionGraph: The solution graph.
    """
    alpha = check_alpha(alpha)
    violations = solution_structure_violations(inst, sol)
    if violations:
        kind, detail = violations[0]
        if kind == "eligibility":
            raise EligibilityError(detail)
        raise InfeasibleSolutionError(detail, violations=violations)

    positions = {}
    machine_next = {}
    for seq in sol.sequences.values():
        for r, op in enumerate(seq, start=1):
            positions[op] = r
        for i, j in zip(seq[:-1], seq[1:], strict=True):
            machine_next[i] = j

    weights: dict[Vertex, int] = {SOURCE: 0, SINK: 0}
    for op in range(1, inst.op_count + 1):
        p = inst.eligible(op)[sol.assignment[op]]
        weights[op] = psi(alpha, p, positions[op])

    predecessors = inst.predecessors()
    successors: dict[Vertex, tuple[Vertex, ...]] = {
        SOURCE: tuple(op for op, preds in predecessors.items() if not preds)
    }
    for op, succs in inst.successors().items():
        ordered: list[Vertex] = []
        if op in machine_next:
            ordered.append(machine_next[op])
        ordered += [j for j in succs if j != machine_next.get(op)]
        if not succs:
            ordered.append(SINK)
        successors[op] = tuple(ordered)
    successors[SINK] = ()

    graph = SolutionGraph(
        machine_count=inst.machine_count,
        successors=successors,
        weights=weights,
        assignment=sol.assignment,
        positions=positions,
        sequences={k: tuple(seq) for k, seq in sol.sequences.items() if seq},
    )
    try:
        topological_sort(graph)
    except CycleError as e:
        raise InfeasibleSolutionError(
            f"solution graph has a cycle: {e}", cycle=e.cycle
        ) from e
    return graph


def _find_cycle(graph: SolutionGraph) -> list[Vertex]:
    return [u for u, _ in nx.find_cycle(graph.digraph())]


def topological_sort(graph: SolutionGraph) -> list[Vertex]:
    """Topological order of the vertices by a depth-first search from `s`.

    Vertices are ordered by reverse post-order, visiting out-arcs in the stored order.

    Args:
        graph (SolutionGraph): Solution graph.

    Raises:
        CycleError: If the graph has a cycle.

    Returns:
        list[Vertex]: Order starting with `s` and ending with `t`.
    """
    order: list[Vertex] = []
    visited: set[Vertex] = {SOURCE}
    on_stack: set[Vertex] = {SOURCE}
    stack = [(SOURCE, iter(graph.successors[SOURCE]))]
    while stack:
        v, children = stack[-1]
        for child in children:
            if child in on_stack:
                raise CycleError(_find_cycle(graph), what="solution graph")
            if child not in visited:
                visited.add(child)
                on_stack.add(child)
                stack.append((child, iter(graph.successors[child])))
                break
        else:
            stack.pop()
            on_stack.discard(v)
            order.append(v)

    # Vertices out of reach of s can only sit on a cycle
    if len(visited) != len(graph.weights):
        raise CycleError(_find_cycle(graph), what="solution graph")
    order.reverse()
    return order


def _longest_distances(
    graph: SolutionGraph, order: list[Vertex]
) -> tuple[dict[Vertex, int], dict[Vertex, Vertex]]:
    # d_v is the longest path length from s to v, excluding w_v
    distance: dict[Vertex, int] = {v: -1 for v in order}
    distance[SOURCE] = 0
    parent: dict[Vertex, Vertex] = {}
    for u in order:
        reach = distance[u] + graph.weights[u]
        for v in graph.successors[u]:
            if distance[v] < reach:
                distance[v] = reach
                parent[v] = u
    return distance, parent


def critical_path(
    graph: SolutionGraph, order: list[Vertex] | None = None
) -> CriticalPathResult:
    """Longest s-t path, its length and the last critical position of every machine.

    On ties the first predecessor seen in topological order is kept.

    Args:
        graph (SolutionGraph): Solution graph.
        order (list[Vertex] | None, optional): Topological order to use. Computed when
            omitted.

    Raises:
        CycleError: If the graph has a cycle.

    Returns:
        CriticalPathResult: Order, path, length and tau.
    """
    if order is None:
        order = topological_sort(graph)
    distance, parent = _longest_distances(graph, order)

    path = []
    tau = {k: 0 for k in range(1, graph.machine_count + 1)}
    v = parent[SINK]
    while v != SOURCE:
        k = graph.assignment[v]
        if tau[k] == 0:
            tau[k] = graph.positions[v]
        path.append(v)
        v = parent[v]
    path.reverse()

    return CriticalPathResult(
        topo_order=order, critical_path=path, length=distance[SINK], tau=tau
    )


def schedule_times(
    graph: SolutionGraph, order: list[Vertex] | None = None
) -> dict[int, tuple[int, int]]:
    """Semi-active start and completion time of every operation.

    Args:
        graph (SolutionGraph): Solution graph.
        order (list[Vertex] | None, optional): Topological order to use. Computed when
            omitted.

    Returns:
        dict[int, tuple[int, int]]: Operation -> (start, completion), scaled units.
    """
    if order is None:
        order = topological_sort(graph)
    distance, _ = _longest_distances(graph, order)
    return {
        op: (distance[op], distance[op] + graph.weights[op]) for op in graph.operations
    }


def reach_sets(graph: SolutionGraph) -> dict[Vertex, frozenset[Vertex]]:
    """Vertices that reach each vertex through a directed path.

    Args:
        graph (SolutionGraph): Solution graph.

    Raises:
        CycleError: If the graph has a cycle.

    Returns:
        dict[Vertex, frozenset[Vertex]]: Vertex -> vertices with a path to it, itself
            excluded. `s` reaches every other vertex.
    """
    topological_sort(graph)
    digraph = graph.digraph()
    return {v: frozenset(nx.ancestors(digraph, v)) for v in digraph.nodes}


def path_length(graph: SolutionGraph, path: Iterable[int]) -> int:
    """Sum of the weights of a sequence of operations."""
    return sum(graph.weights[v] for v in path)
