"""Random instance generator.

Plumbing for tests and experiments only: instances are valid and reproducible for a
fixed seed, with no claim of following any published distribution.
"""

import logging
from typing import Literal

import numpy as np

from .errors import GeneratorParameterError
from .instance import Arc, Instance, build_instance

logger = logging.getLogger(__name__)

Shape = Literal["chain", "Y", "dag"]


def _check_parameters(
    machine_count: int,
    op_count: int,
    job_count: int,
    shape: str,
    density: float,
    eligibility: float,
    time_range: tuple[int, int],
) -> None:
    if machine_count < 1:
        raise GeneratorParameterError(
            f"machine_count must be >= 1, got {machine_count}"
        )
    if op_count < 1:
        raise GeneratorParameterError(f"op_count must be >= 1, got {op_count}")
    if not 1 <= job_count <= op_count:
        raise GeneratorParameterError(
            f"job_count must be in 1..op_count ({op_count}), got {job_count}"
        )
    if shape not in ("chain", "Y", "dag"):
        raise GeneratorParameterError(f"shape must be chain, Y or dag, got {shape!r}")
    if not 0 <= density <= 1:
        raise GeneratorParameterError(f"density must be in [0, 1], got {density}")
    if not 0 < eligibility <= 1:
        raise GeneratorParameterError(
            f"eligibility must be in (0, 1], got {eligibility}"
        )
    low, high = time_range
    if not 1 <= low <= high:
        raise GeneratorParameterError(
            f"time_range must satisfy 1 <= low <= high, got {time_range}"
        )


def _chain_arcs(ops: list[int]) -> list[Arc]:
    return list(zip(ops[:-1], ops[1:], strict=True))


def _y_arcs(ops: list[int], rng: np.random.Generator) -> list[Arc]:
    # Two branches merging into a common tail
    if len(ops) < 3:
        return _chain_arcs(ops)
    head_size = int(rng.integers(2, len(ops) + 1))
    split = int(rng.integers(1, head_size))
    left, right, tail = ops[:split], ops[split:head_size], ops[head_size:]
    arcs = _chain_arcs(left) + _chain_arcs(right)
    if tail:
        arcs += [(left[-1], tail[0]), (right[-1], tail[0])] + _chain_arcs(tail)
    else:
        # The merge point is the last operation of the right branch
        arcs.append((left[-1], right[-1]))
    return arcs


def _dag_arcs(ops: list[int], density: float, rng: np.random.Generator) -> list[Arc]:
    arcs = []
    for b, j in enumerate(ops):
        linked = False
        for i in ops[:b]:
            if rng.random() < density:
                arcs.append((i, j))
                linked = True
        # Keep the job weakly connected
        if b > 0 and not linked:
            arcs.append((ops[int(rng.integers(0, b))], j))
    return arcs


def generate_random_instance(
    seed: int,
    machine_count: int,
    op_count: int,
    shape: Shape = "dag",
    density: float = 0.3,
    eligibility: float = 0.5,
    time_range: tuple[int, int] = (1, 99),
    job_count: int = 1,
) -> Instance:
    """Generate a random instance.

    Operations are split into `job_count` jobs of consecutive ids with sizes as even as
    possible. Inside a job the precedence digraph is a chain, a Y (two chains merging
    into a third) or a random DAG where every earlier/later pair is linked with
    probability `density`. Every machine is eligible for an operation with probability
    `eligibility` (at least one machine is always drawn) with a standard time drawn
    uniformly in `time_range`.

    Args:
        seed (int): Seed of the random generator.
        machine_count (int): Number of machines.
        op_count (int): Number of operations.
        shape ("chain", "Y", "dag", optional): Shape of the jobs. Defaults to "dag".
        density (float, optional): Arc probability for the "dag" shape. Defaults to 0.3.
        eligibility (float, optional): Eligibility probability. Defaults to 0.5.
        time_range (tuple[int, int], optional): Inclusive range of standard times.
            Defaults to (1, 99).
        job_count (int, optional): Number of jobs. Defaults to 1.

    Raises:
        GeneratorParameterError: If a parameter is out of its domain.

    Returns:
        Instance: A valid instance, identical for identical arguments.
    """
    time_range = (int(time_range[0]), int(time_range[1]))
    _check_parameters(
        machine_count, op_count, job_count, shape, density, eligibility, time_range
    )
    rng = np.random.default_rng(seed)

    operations = {}
    for op in range(1, op_count + 1):
        mask = rng.random(machine_count) < eligibility
        if not mask.any():
            mask[int(rng.integers(0, machine_count))] = True
        times = rng.integers(time_range[0], time_range[1] + 1, size=machine_count)
        operations[op] = {
            int(k) + 1: int(times[k]) for k in np.flatnonzero(mask)
        }

    arcs: list[Arc] = []
    for job in np.array_split(np.arange(1, op_count + 1), job_count):
        ops = [int(op) for op in job]
        match shape:
            case "chain":
                arcs += _chain_arcs(ops)
            case "Y":
                arcs += _y_arcs(ops, rng)
            case "dag":
                arcs += _dag_arcs(ops, density, rng)

    inst = build_instance(machine_count, operations, arcs)
    logger.debug(
        f"Generated instance seed={seed}: {op_count} operations, {machine_count}"
        f" machines, {len(arcs)} arcs"
    )
    return inst
