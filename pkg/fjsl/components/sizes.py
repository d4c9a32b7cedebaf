"""Model sizes and instance characteristics."""

import logging

import pandas as pd
from pydantic import BaseModel

from .instance import Instance, flexibility, round_half_up

logger = logging.getLogger(__name__)

SIZE_CAVEAT = (
    "continuous and constraint counts are those of the emitted models; solvers and"
    " other accountings of the same formulation may report different totals"
)

MEASURE_COLUMNS = [
    "instance",
    "machines",
    "operations",
    "jobs",
    "arcs",
    "sum_eligible",
    "omega1",
    "omega2",
    "milp_binary",
    "milp_continuous",
    "milp_constraints",
    "cp_interval",
    "cp_constraints",
]


class ModelSizes(BaseModel):
    """Sizes of the MILP and CP models of an instance.

    Attributes:
        binary (int): Binary variables of the MILP model.
        interval (int): Interval variables of the CP model.
        continuous_formula (int): Continuous variables of the MILP model.
        constraint_formula (int): Constraints of the MILP model.
        cp_constraint_formula (int): Constraints of the CP model.
        caveat (bool): Set when the formula counts may differ from other
            accountings of the same formulation.
    """

    binary: int
    interval: int
    continuous_formula: int
    constraint_formula: int
    cp_constraint_formula: int
    caveat: bool = True

    class Config:
        """Pydantic configuration."""

        frozen = True


def count_model_sizes(inst: Instance) -> ModelSizes:
    """Count variables and constraints without building the models.

    Args:
        inst (Instance): Instance.

    Returns:
        ModelSizes: Counts equal to those of emit_milp and emit_cp.
    """
    loads = [len(ops) for ops in inst.machine_operations().values()]
    n = inst.op_count
    arcs = len(inst.precedence_arcs)
    used = sum(1 for load in loads if load > 0)
    gaps = sum(load - 1 for load in loads if load > 0)
    squares = sum(load * load for load in loads)
    pairs_positions = sum(load * (load - 1) ** 2 for load in loads)

    binary = squares
    milp_constraints = (
        n  # assign
        + sum(loads)  # pos
        + gaps  # noskip
        + n  # ptime
        + gaps  # mseq
        + used  # mkspan
        + arcs  # prec
        + pairs_positions  # disj
        + 2 * squares  # linkA, linkB
    )
    cp_constraints = arcs + n + used + pairs_positions + gaps

    sizes = ModelSizes(
        binary=binary,
        interval=binary + n,
        continuous_formula=2 * n + sum(loads) + 1,
        constraint_formula=milp_constraints,
        cp_constraint_formula=cp_constraints,
    )
    logger.debug(f"Model sizes: {sizes}; caveat: {SIZE_CAVEAT}")
    return sizes


def measure(inst: Instance, name: str = "") -> dict:
    """Characteristics of an instance, one row of an instance table.

    Args:
        inst (Instance): Instance.
        name (str, optional): Instance name. Defaults to "".

    Returns:
        dict: Machines, operations, jobs, arcs, eligible pairs, flexibility measures
            (rounded half up to 2 decimals) and model sizes.
    """
    report = flexibility(inst)
    sizes = count_model_sizes(inst)
    return {
        "instance": name,
        "machines": report.machine_count,
        "operations": report.op_count,
        "jobs": report.job_count,
        "arcs": report.arc_count,
        "sum_eligible": report.sum_eligible,
        "omega1": round_half_up(report.omega1),
        "omega2": round_half_up(report.omega2),
        "milp_binary": sizes.binary,
        "milp_continuous": sizes.continuous_formula,
        "milp_constraints": sizes.constraint_formula,
        "cp_interval": sizes.interval,
        "cp_constraints": sizes.cp_constraint_formula,
    }


def measure_table(rows: list[dict]) -> pd.DataFrame:
    """Instance table from measure rows, in the given order."""
    return pd.DataFrame(rows, columns=MEASURE_COLUMNS)
