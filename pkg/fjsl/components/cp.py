"""Interval-variable CP model of the problem.

The model is written in a small self-describing text format (`.cpmod`), one statement
per line ending with `;`, `//` starting a comment:

    interval o_i;                                  one per operation
    interval a_i_k_r optional size=<psi>;          one per eligible machine position
    minimize max(endOf(o_1), ..., endOf(o_n));
    endBeforeStart(o_i, o_j);                      one per precedence arc
    alternative(o_i, [a_i_k_r, ...]);              one per operation
    noOverlap([a_i_k_r, ...]);                     one per machine
    endBeforeStart(a_i_k_r, a_j_k_(r+1));          one per i != j sharing machine k
    or(presenceOf(a_i_k_(r+1)), ...) => or(presenceOf(a_i_k_r), ...);
                                                   one per machine position but the last

`render_cpo` builds the same model with docplex and returns it in CPO format.
"""

import logging

from docplex.cp import modeler
from docplex.cp.expression import interval_var
from docplex.cp.model import CpoModel
from docplex.cp.solution import CpoModelSolution
from pydantic import BaseModel

from .instance import Instance
from .learning import check_alpha, psi
from .solution import Solution

logger = logging.getLogger(__name__)


class IntervalInfo(BaseModel):
    """Manifest entry of an interval variable.

    Attributes:
        operation (int): Operation of the interval.
        optional (bool): Whether the interval may be absent.
        machine (int | None): Machine, for the a_i_k_r intervals.
        position (int | None): Position on the machine, for the a_i_k_r intervals.
        size (int | None): Fixed size in scaled units, for the a_i_k_r intervals.
    """

    operation: int
    optional: bool
    machine: int | None = None
    position: int | None = None
    size: int | None = None

    class Config:
        """Pydantic configuration."""

        frozen = True


class CpArtifact(BaseModel):
    """The CP model of an instance.

    Attributes:
        model_text (str): Model in the `.cpmod` text format.
        intervals (dict[str, IntervalInfo]): Manifest of every interval variable.
        counts (dict[str, int]): Number of interval variables and of constraints.
    """

    model_text: str
    intervals: dict[str, IntervalInfo]
    counts: dict[str, int]

    def manifest(self) -> dict:
        """Manifest as a JSON-ready dict (intervals and counts)."""
        return self.dict(exclude={"model_text"})


def o_name(i: int) -> str:
    """Name of the interval of operation i."""
    return f"o_{i}"


def a_name(i: int, k: int, r: int) -> str:
    """Name of the optional interval of operation i at position r of machine k."""
    return f"a_{i}_{k}_{r}"


def cp_intervals(inst: Instance, alpha: float) -> dict[str, IntervalInfo]:
    """Manifest of the interval variables, o_i first, then a_i_k_r.

    Args:
        inst (Instance): Instance.
        alpha (float): Learning rate, fixing the sizes of the optional intervals.

    Returns:
        dict[str, IntervalInfo]: Interval name -> manifest entry.
    """
    alpha = check_alpha(alpha)
    loads = {k: len(ops) for k, ops in inst.machine_operations().items()}
    intervals = {
        o_name(op.id): IntervalInfo(operation=op.id, optional=False)
        for op in inst.operations
    }
    for op in inst.operations:
        for k, p in op.eligible.items():
            for r in range(1, loads[k] + 1):
                intervals[a_name(op.id, k, r)] = IntervalInfo(
                    operation=op.id,
                    optional=True,
                    machine=k,
                    position=r,
                    size=psi(alpha, p, r),
                )
    return intervals


def _constraint_lines(inst: Instance) -> list[str]:
    machine_ops = inst.machine_operations()
    loads = {k: len(ops) for k, ops in machine_ops.items()}
    lines = [
        f"endBeforeStart({o_name(i)}, {o_name(j)});" for i, j in inst.precedence_arcs
    ]

    for op in inst.operations:
        options = ", ".join(
            a_name(op.id, k, r) for k in op.eligible for r in range(1, loads[k] + 1)
        )
        lines.append(f"alternative({o_name(op.id)}, [{options}]);")

    for k, ops in machine_ops.items():
        if ops:
            members = ", ".join(
                a_name(i, k, r) for i in ops for r in range(1, loads[k] + 1)
            )
            lines.append(f"noOverlap([{members}]);")

    for k, ops in machine_ops.items():
        for i in ops:
            for j in ops:
                if i == j:
                    continue
                lines += [
                    f"endBeforeStart({a_name(i, k, r)}, {a_name(j, k, r + 1)});"
                    for r in range(1, loads[k])
                ]

    for k, ops in machine_ops.items():
        for r in range(1, loads[k]):
            later = ", ".join(f"presenceOf({a_name(i, k, r + 1)})" for i in ops)
            earlier = ", ".join(f"presenceOf({a_name(i, k, r)})" for i in ops)
            lines.append(f"or({later}) => or({earlier});")
    return lines


def emit_cp(inst: Instance, alpha: float) -> CpArtifact:
    """Build the CP model of an instance.

    Args:
        inst (Instance): Instance.
        alpha (float): Learning rate.

    Returns:
        CpArtifact: Model text, interval manifest and counts.
    """
    intervals = cp_intervals(inst, alpha)
    constraints = _constraint_lines(inst)

    lines = [
        "// flexible job shop with position-based learning, interval model",
        f"// alpha={check_alpha(alpha)!r} operations={inst.op_count}"
        f" machines={inst.machine_count}",
    ]
    for name, info in intervals.items():
        if info.optional:
            lines.append(f"interval {name} optional size={info.size};")
        else:
            lines.append(f"interval {name};")
    ends = ", ".join(f"endOf({o_name(op.id)})" for op in inst.operations)
    lines.append(f"minimize max({ends});")
    lines += constraints

    counts = {"interval": len(intervals), "constraints": len(constraints)}
    logger.info(
        f"CP model: {counts['interval']} interval variables,"
        f" {counts['constraints']} constraints"
    )
    return CpArtifact(
        model_text="\n".join(lines) + "\n", intervals=intervals, counts=counts
    )


def build_cpo_model(
    inst: Instance,
    alpha: float,
    solution: Solution | None = None,
    name: str = "fjsl",
) -> CpoModel:
    """Build the CP model with docplex, with an optional starting point.

    Args:
        inst (Instance): Instance.
        alpha (float): Learning rate.
        solution (Solution | None, optional): Feasible solution used as starting point.
            Defaults to None.
        name (str, optional): Model name. Defaults to "fjsl".

    Raises:
        InfeasibleSolutionError: If the starting solution is infeasible.

    Returns:
        CpoModel: The model.
    """
    intervals = cp_intervals(inst, alpha)
    machine_ops = inst.machine_operations()
    loads = {k: len(ops) for k, ops in machine_ops.items()}

    variables = {}
    for var_name, info in intervals.items():
        if info.optional:
            variables[var_name] = interval_var(
                size=info.size, optional=True, name=var_name
            )
        else:
            variables[var_name] = interval_var(name=var_name)

    model = CpoModel(name=name)
    model.add(
        modeler.minimize(
            modeler.max(
                [modeler.end_of(variables[o_name(op.id)]) for op in inst.operations]
            )
        )
    )
    for i, j in inst.precedence_arcs:
        model.add(modeler.end_before_start(variables[o_name(i)], variables[o_name(j)]))
    for op in inst.operations:
        options = [
            variables[a_name(op.id, k, r)]
            for k in op.eligible
            for r in range(1, loads[k] + 1)
        ]
        model.add(modeler.alternative(variables[o_name(op.id)], options))
    for k, ops in machine_ops.items():
        if ops:
            model.add(
                modeler.no_overlap(
                    [
                        variables[a_name(i, k, r)]
                        for i in ops
                        for r in range(1, loads[k] + 1)
                    ]
                )
            )
    for k, ops in machine_ops.items():
        for i in ops:
            for j in ops:
                if i == j:
                    continue
                for r in range(1, loads[k]):
                    model.add(
                        modeler.end_before_start(
                            variables[a_name(i, k, r)], variables[a_name(j, k, r + 1)]
                        )
                    )
    for k, ops in machine_ops.items():
        for r in range(1, loads[k]):
            later = modeler.logical_or(
                [modeler.presence_of(variables[a_name(i, k, r + 1)]) for i in ops]
            )
            earlier = modeler.logical_or(
                [modeler.presence_of(variables[a_name(i, k, r)]) for i in ops]
            )
            model.add(modeler.if_then(later, earlier))

    if solution is not None:
        # Imported here: warm_start builds on this module's names
        from .warm_start import cp_starting_point

        start = cp_starting_point(inst, alpha, solution)
        point = CpoModelSolution()
        for var_name, var in variables.items():
            value = start.intervals.get(var_name)
            if value is None:
                point.add_interval_var_solution(var, presence=False)
            else:
                point.add_interval_var_solution(
                    var,
                    presence=True,
                    start=value.start,
                    end=value.end,
                    size=value.size,
                )
        model.set_starting_point(point)
    return model


def render_cpo(
    inst: Instance, alpha: float, solution: Solution | None = None, name: str = "fjsl"
) -> str:
    """Render the CP model in CPO format with docplex.

    Comment and source location lines, which carry versions and timestamps, are
    removed so that equal models give equal text.

    Args:
        inst (Instance): Instance.
        alpha (float): Learning rate.
        solution (Solution | None, optional): Feasible solution used as starting point.
            Defaults to None.
        name (str, optional): Model name. Defaults to "fjsl".

    Returns:
        str: CPO text.
    """
    model = build_cpo_model(inst, alpha, solution, name)
    text = model.get_cpo_string()
    lines = [
        line
        for line in text.splitlines()
        if not line.lstrip().startswith(("//", "#line"))
    ]
    return "\n".join(lines).strip() + "\n"
