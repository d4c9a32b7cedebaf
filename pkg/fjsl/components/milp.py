"""Position-based MILP model of the problem, written in LP file format.

Variables:
    x_i_k_r  binary, 1 if operation i is the r-th operation of machine k
    s_i      start time of operation i
    h_k_r    start time of the r-th operation of machine k
    pp_i     actual processing time of operation i
    Cmax     makespan

Constraint families, one row per index tuple:
    assign_i            sum_{k, r} x_i_k_r = 1
    pos_k_r             sum_i x_i_k_r <= 1
    noskip_k_r          sum_i x_i_k_(r+1) <= sum_i x_i_k_r
    ptime_i             pp_i = sum_{k, r} psi(p_ik, r) x_i_k_r
    mseq_k_r            h_k_r + sum_i psi(p_ik, r) x_i_k_r <= h_k_(r+1)
    mkspan_k            same as mseq at the last position, bounded by Cmax
    prec_i_j            s_i + pp_i <= s_j for every precedence arc
    disj_i_j_k_r        s_i + pp_i - (2 - x_i_k_r - sum_{t > r} x_j_k_t) M <= s_j
    linkA_i_k_r         h_k_r - M (1 - x_i_k_r) <= s_i
    linkB_i_k_r         s_i - M (1 - x_i_k_r) <= h_k_r
"""

import logging
import tempfile
from collections.abc import Mapping
from pathlib import Path
from typing import Literal, NamedTuple

import pulp
from pydantic import BaseModel, PrivateAttr

from fjsl import TIME_SCALE

from .instance import Instance
from .learning import check_alpha, psi

logger = logging.getLogger(__name__)

Sense = Literal["<=", "=", ">="]


class Row(NamedTuple):
    """A linear constraint `sum(coefficients[v] * v) sense rhs`."""

    name: str
    coefficients: dict[str, int]
    sense: Sense
    rhs: int


class VariableInfo(BaseModel):
    """Manifest entry of a model variable.

    Attributes:
        kind ("binary", "continuous"): Domain of the variable.
        meaning (str): Human readable meaning.
    """

    kind: Literal["binary", "continuous"]
    meaning: str

    class Config:
        """Pydantic configuration."""

        frozen = True


class MilpArtifact(BaseModel):
    """The MILP model of an instance.

    Attributes:
        lp_text (str): Model in LP file format.
        variables (dict[str, VariableInfo]): Manifest of every variable.
        counts (dict[str, int]): Number of binary and continuous variables and of
            constraints.
        big_m (int): Value of the big-M constant.
    """

    lp_text: str
    variables: dict[str, VariableInfo]
    counts: dict[str, int]
    big_m: int
    _rows: list[Row] = PrivateAttr(default_factory=list)

    @property
    def rows(self) -> list[Row]:
        """Constraint rows, in emission order."""
        return self._rows

    def manifest(self) -> dict:
        """Manifest as a JSON-ready dict (variables, counts, big M)."""
        return self.dict(exclude={"lp_text"})


def x_name(i: int, k: int, r: int) -> str:
    """Name of the assignment variable of operation i at position r of machine k."""
    return f"x_{i}_{k}_{r}"


def s_name(i: int) -> str:
    """Name of the start time variable of operation i."""
    return f"s_{i}"


def h_name(k: int, r: int) -> str:
    """Name of the start time variable of position r of machine k."""
    return f"h_{k}_{r}"


def pp_name(i: int) -> str:
    """Name of the actual processing time variable of operation i."""
    return f"pp_{i}"


CMAX = "Cmax"


def big_m(inst: Instance) -> int:
    """Big-M constant: the sum of every standard time, scaled like psi."""
    return TIME_SCALE * sum(sum(op.eligible.values()) for op in inst.operations)


def milp_variables(inst: Instance) -> dict[str, VariableInfo]:
    """Manifest of the model variables, in a fixed order."""
    loads = {k: len(ops) for k, ops in inst.machine_operations().items()}
    variables = {}
    for op in inst.operations:
        for k in op.eligible:
            for r in range(1, loads[k] + 1):
                variables[x_name(op.id, k, r)] = VariableInfo(
                    kind="binary",
                    meaning=f"operation {op.id} is the operation {r} of machine {k}",
                )
    for op in inst.operations:
        variables[s_name(op.id)] = VariableInfo(
            kind="continuous", meaning=f"start time of operation {op.id}"
        )
    for k, load in loads.items():
        for r in range(1, load + 1):
            variables[h_name(k, r)] = VariableInfo(
                kind="continuous", meaning=f"start time of position {r} of machine {k}"
            )
    for op in inst.operations:
        variables[pp_name(op.id)] = VariableInfo(
            kind="continuous", meaning=f"actual processing time of operation {op.id}"
        )
    variables[CMAX] = VariableInfo(kind="continuous", meaning="makespan")
    return variables


def milp_rows(inst: Instance, alpha: float) -> list[Row]:
    """Constraint rows of the MILP model, in a fixed order.

    Args:
        inst (Instance): Instance.
        alpha (float): Learning rate.

    Returns:
        list[Row]: Rows, integer coefficients in scaled units.
    """
    alpha = check_alpha(alpha)
    machine_ops = inst.machine_operations()
    loads = {k: len(ops) for k, ops in machine_ops.items()}
    M = big_m(inst)  # noqa: N806
    rows = []

    for op in inst.operations:
        coefficients = {
            x_name(op.id, k, r): 1
            for k in op.eligible
            for r in range(1, loads[k] + 1)
        }
        rows.append(Row(f"assign_{op.id}", coefficients, "=", 1))

    for k, ops in machine_ops.items():
        for r in range(1, loads[k] + 1):
            rows.append(Row(f"pos_{k}_{r}", {x_name(i, k, r): 1 for i in ops}, "<=", 1))

    for k, ops in machine_ops.items():
        for r in range(1, loads[k]):
            coefficients = {x_name(i, k, r + 1): 1 for i in ops}
            coefficients |= {x_name(i, k, r): -1 for i in ops}
            rows.append(Row(f"noskip_{k}_{r}", coefficients, "<=", 0))

    for op in inst.operations:
        coefficients = {pp_name(op.id): 1}
        for k, p in op.eligible.items():
            for r in range(1, loads[k] + 1):
                coefficients[x_name(op.id, k, r)] = -psi(alpha, p, r)
        rows.append(Row(f"ptime_{op.id}", coefficients, "=", 0))

    for k, ops in machine_ops.items():
        for r in range(1, loads[k] + 1):
            coefficients = {h_name(k, r): 1}
            coefficients |= {
                x_name(i, k, r): psi(alpha, inst.eligible(i)[k], r) for i in ops
            }
            if r < loads[k]:
                coefficients[h_name(k, r + 1)] = -1
                rows.append(Row(f"mseq_{k}_{r}", coefficients, "<=", 0))
            else:
                coefficients[CMAX] = -1
                rows.append(Row(f"mkspan_{k}", coefficients, "<=", 0))

    for i, j in inst.precedence_arcs:
        coefficients = {s_name(i): 1, pp_name(i): 1, s_name(j): -1}
        rows.append(Row(f"prec_{i}_{j}", coefficients, "<=", 0))

    for k, ops in machine_ops.items():
        for i in ops:
            for j in ops:
                if i == j:
                    continue
                for r in range(1, loads[k]):
                    coefficients = {s_name(i): 1, pp_name(i): 1, s_name(j): -1}
                    coefficients[x_name(i, k, r)] = M
                    coefficients |= {
                        x_name(j, k, t): M for t in range(r + 1, loads[k] + 1)
                    }
                    rows.append(Row(f"disj_{i}_{j}_{k}_{r}", coefficients, "<=", 2 * M))

    for op in inst.operations:
        for k in op.eligible:
            for r in range(1, loads[k] + 1):
                coefficients = {
                    h_name(k, r): 1, x_name(op.id, k, r): M, s_name(op.id): -1
                }
                rows.append(Row(f"linkA_{op.id}_{k}_{r}", coefficients, "<=", M))
    for op in inst.operations:
        for k in op.eligible:
            for r in range(1, loads[k] + 1):
                coefficients = {
                    s_name(op.id): 1, x_name(op.id, k, r): M, h_name(k, r): -1
                }
                rows.append(Row(f"linkB_{op.id}_{k}_{r}", coefficients, "<=", M))

    return rows


_PULP_SENSES = {
    "<=": pulp.LpConstraintLE,
    "=": pulp.LpConstraintEQ,
    ">=": pulp.LpConstraintGE,
}


def render_lp(
    rows: list[Row], variables: Mapping[str, VariableInfo], name: str = "fjsl"
) -> str:
    """Render a model in LP file format with pulp.

    Args:
        rows (list[Row]): Constraint rows.
        variables (Mapping[str, VariableInfo]): Variable manifest.
        name (str, optional): Problem name. Defaults to "fjsl".

    Returns:
        str: LP file content, objective `minimize Cmax`.
    """
    problem = pulp.LpProblem(name, pulp.LpMinimize)
    lp_vars = {
        var: pulp.LpVariable(var, lowBound=0, cat=pulp.LpBinary)
        if info.kind == "binary"
        else pulp.LpVariable(var, lowBound=0, cat=pulp.LpContinuous)
        for var, info in variables.items()
    }
    problem += lp_vars[CMAX], "makespan"
    for row in rows:
        expression = pulp.LpAffineExpression(
            [(lp_vars[var], c) for var, c in row.coefficients.items()]
        )
        problem += pulp.LpConstraint(
            expression, sense=_PULP_SENSES[row.sense], rhs=row.rhs, name=row.name
        )

    with tempfile.TemporaryDirectory() as tmp_dir:
        lp_path = Path(tmp_dir) / f"{name}.lp"
        problem.writeLP(str(lp_path))
        return lp_path.read_text(encoding="utf-8")


def emit_milp(inst: Instance, alpha: float, name: str = "fjsl") -> MilpArtifact:
    """Build the MILP model of an instance.

    Args:
        inst (Instance): Instance.
        alpha (float): Learning rate.
        name (str, optional): Problem name written in the LP file. Defaults to "fjsl".

    Returns:
        MilpArtifact: LP text, manifest and counts. The rows are kept on the artifact.
    """
    variables = milp_variables(inst)
    rows = milp_rows(inst, alpha)
    binary = sum(1 for info in variables.values() if info.kind == "binary")
    counts = {
        "binary": binary,
        "continuous": len(variables) - binary,
        "constraints": len(rows),
    }
    logger.info(
        f"MILP model: {counts['binary']} binary, {counts['continuous']} continuous"
        f" variables, {counts['constraints']} constraints"
    )
    artifact = MilpArtifact(
        lp_text=render_lp(rows, variables, name),
        variables=variables,
        counts=counts,
        big_m=big_m(inst),
    )
    artifact._rows = rows
    return artifact


def row_violations(rows: list[Row], values: Mapping[str, int]) -> list[str]:
    """Names of the rows not satisfied by a full assignment of the variables.

    Args:
        rows (list[Row]): Constraint rows.
        values (Mapping[str, int]): Value of every variable. Missing variables count
            as 0.

    Returns:
        list[str]: Names of the violated rows, in row order.
    """
    violated = []
    for row in rows:
        lhs = sum(c * values.get(var, 0) for var, c in row.coefficients.items())
        match row.sense:
            case "<=":
                ok = lhs <= row.rhs
            case "=":
                ok = lhs == row.rhs
            case ">=":
                ok = lhs >= row.rhs
        if not ok:
            violated.append(row.name)
    return violated


def variable_bound_violations(
    variables: Mapping[str, VariableInfo], values: Mapping[str, int]
) -> list[str]:
    """Names of the variables whose value is outside of their domain."""
    violated = []
    for var, info in variables.items():
        value = values.get(var, 0)
        if value < 0 or (info.kind == "binary" and value not in (0, 1)):
            violated.append(var)
    return violated
