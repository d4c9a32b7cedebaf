"""Warm-start files that hand a feasible solution to an exact solver."""

import logging
import xml.etree.ElementTree as ET
from pathlib import Path

from pydantic import BaseModel

from .cp import a_name, o_name
from .instance import Instance
from .milp import CMAX, h_name, milp_variables, pp_name, s_name, x_name
from .solution import Solution
from .solution_graph import build_solution_graph, schedule_times
from .validator import ensure_feasible

logger = logging.getLogger(__name__)


class IntervalValue(BaseModel):
    """Value of an interval variable in a CP starting point.

    Attributes:
        start (int): Start, scaled units.
        end (int): End, scaled units.
        size (int): Size, scaled units.
    """

    start: int
    end: int
    size: int


class CpStartingPoint(BaseModel):
    """Present intervals of a CP starting point; every other a_i_k_r is absent.

    Attributes:
        makespan (int): Objective value of the solution.
        intervals (dict[str, IntervalValue]): Interval name -> value.
    """

    makespan: int
    intervals: dict[str, IntervalValue]


def milp_start_values(inst: Instance, alpha: float, sol: Solution) -> dict[str, int]:
    """Values of every MILP variable for a feasible solution.

    h_k_r of the positions a machine does not use take the completion time of the
    last operation of the machine (0 for an idle machine).

    Args:
        inst (Instance): Instance.
        alpha (float): Learning rate.
        sol (Solution): Feasible solution.

    Raises:
        InfeasibleSolutionError: If the solution is infeasible.

    Returns:
        dict[str, int]: Variable name -> value, in manifest order.
    """
    report = ensure_feasible(inst, alpha, sol)
    graph = build_solution_graph(inst, sol, alpha)
    times = schedule_times(graph)

    values = dict.fromkeys(milp_variables(inst), 0)
    for k, ops in inst.machine_operations().items():
        seq = sol.sequences.get(k, ())
        idle_from = times[seq[-1]][1] if seq else 0
        for r in range(1, len(ops) + 1):
            values[h_name(k, r)] = times[seq[r - 1]][0] if r <= len(seq) else idle_from
        for r, op in enumerate(seq, start=1):
            values[x_name(op, k, r)] = 1
    for op, (start, end) in times.items():
        values[s_name(op)] = start
        values[pp_name(op)] = end - start
    values[CMAX] = report.makespan
    return values


def render_mst(values: dict[str, int], name: str = "fjsl") -> str:
    """Render variable values as a MIP start file (CPLEX MST XML layout).

    Args:
        values (dict[str, int]): Variable name -> value.
        name (str, optional): Problem name. Defaults to "fjsl".

    Returns:
        str: XML content.
    """
    root = ET.Element("CPLEXSolutions", version="1.2")
    solution = ET.SubElement(root, "CPLEXSolution", version="1.2")
    ET.SubElement(
        solution,
        "header",
        problemName=name,
        solutionName="warmstart",
        solutionIndex="-1",
    )
    variables = ET.SubElement(solution, "variables")
    for index, (var, value) in enumerate(values.items()):
        ET.SubElement(
            variables, "variable", name=var, index=str(index), value=str(value)
        )
    ET.indent(root)
    body = ET.tostring(root, encoding="unicode")
    return f'<?xml version="1.0" encoding="UTF-8" standalone="yes"?>\n{body}\n'


def render_sol(values: dict[str, int], objective: int, name: str = "fjsl") -> str:
    """Render variable values as a `name value` solution file."""
    lines = [f"# Solution for model {name}", f"# Objective value = {objective}"]
    lines += [f"{var} {value}" for var, value in values.items()]
    return "\n".join(lines) + "\n"


def cp_starting_point(inst: Instance, alpha: float, sol: Solution) -> CpStartingPoint:
    """Present intervals o_i and a_i_k_r of a feasible solution.

    Args:
        inst (Instance): Instance.
        alpha (float): Learning rate.
        sol (Solution): Feasible solution.

    Raises:
        InfeasibleSolutionError: If the solution is infeasible.

    Returns:
        CpStartingPoint: Makespan and interval values.
    """
    report = ensure_feasible(inst, alpha, sol)
    graph = build_solution_graph(inst, sol, alpha)
    times = schedule_times(graph)
    intervals = {}
    for op, (start, end) in sorted(times.items()):
        value = IntervalValue(start=start, end=end, size=end - start)
        intervals[o_name(op)] = value
        intervals[a_name(op, graph.assignment[op], graph.positions[op])] = value
    return CpStartingPoint(makespan=report.makespan, intervals=intervals)


def warm_start_export(
    sol: Solution,
    inst: Instance,
    alpha: float,
    out_dir: str | Path,
    stem: str = "warmstart",
    milp_format: str = "mst",
) -> list[Path]:
    """Write the MILP and CP warm-start files of a feasible solution.

    Args:
        sol (Solution): Feasible solution.
        inst (Instance): Instance.
        alpha (float): Learning rate.
        out_dir (str | Path): Output folder.
        stem (str, optional): File name stem. Defaults to "warmstart".
        milp_format ("mst", "sol", optional): Layout of the MILP file. Defaults to
            "mst".

    Raises:
        InfeasibleSolutionError: If the solution is infeasible.

    Returns:
        list[Path]: Paths of the MILP file and of the CP starting point (JSON).
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    values = milp_start_values(inst, alpha, sol)
    milp_path = out_dir / f"{stem}.{milp_format}"
    match milp_format:
        case "mst":
            milp_path.write_text(render_mst(values), encoding="utf-8")
        case "sol":
            milp_path.write_text(render_sol(values, values[CMAX]), encoding="utf-8")
        case _:
            raise ValueError(f"unknown MILP start format {milp_format!r}")

    cp_path = out_dir / f"{stem}.cpstart.json"
    cp_start = cp_starting_point(inst, alpha, sol)
    cp_path.write_text(cp_start.json(indent=2), encoding="utf-8")

    logger.info(f"Warm-start files written to {milp_path} and {cp_path}")
    return [milp_path, cp_path]
