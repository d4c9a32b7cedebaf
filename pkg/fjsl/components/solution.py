"""Solution type: machine assignment and per-machine sequences."""

import logging
from collections.abc import Mapping, Sequence
from pathlib import Path

from pydantic import BaseModel, ValidationError, validator

from .instance import (
    Instance,
    OperationSpec,
    build_instance,
    domain_error,
    read_text,
)

logger = logging.getLogger(__name__)


class Solution(BaseModel):
    """A schedule decision; start and completion times are derived from it.

    Only the shape of the data is validated here. Consistency with an instance
    (every operation sequenced once, on an eligible machine) is checked by the
    validator and by the solution graph builder.

    Attributes:
        assignment (dict[int, int]): Operation id -> machine id.
        sequences (dict[int, tuple[int, ...]]): Machine id -> operations in processing
            order. Machines without operations may be omitted.
        makespan (int | None): Makespan in scaled units, informative only.
        alpha (float | None): Learning rate the makespan was computed with.
    """

    assignment: dict[int, int]
    sequences: dict[int, tuple[int, ...]]
    makespan: int | None = None
    alpha: float | None = None

    class Config:
        """Pydantic configuration."""

        frozen = True

    @validator("assignment", "sequences")
    def sort_keys(cls, value: dict) -> dict:
        """Sort by id so that equal solutions serialize identically."""
        return dict(sorted(value.items()))

    def position(self, op: int) -> int:
        """1-based position of an operation in the sequence of its assigned machine."""
        return self.sequences[self.assignment[op]].index(op) + 1

    def with_makespan(self, makespan: int, alpha: float) -> "Solution":
        """Copy of the solution carrying its makespan and learning rate."""
        return self.copy(update={"makespan": makespan, "alpha": alpha})


def solution_from_sequences(sequences: Mapping[int, Sequence[int]]) -> Solution:
    """Build a solution from machine sequences, deriving the assignment.

    Args:
        sequences (Mapping[int, Sequence[int]]): Machine id -> operations in order.

    Returns:
        Solution: The solution.
    """
    assignment = {op: k for k, ops in sequences.items() for op in ops}
    return Solution(
        assignment=assignment,
        sequences={k: tuple(ops) for k, ops in sequences.items()},
    )


def solution_to_json(sol: Solution) -> str:
    """Serialize a solution. JSON object keys are the ids as strings."""
    return sol.json(indent=2)


def solution_from_json(text: str) -> Solution:
    """Parse a solution from JSON.

    Raises:
        InstanceFormatError: If the JSON does not describe a solution.
    """
    try:
        return Solution.parse_raw(text)
    except ValidationError as e:
        raise domain_error(e) from e


def read_solution(file_path: str | Path) -> Solution:
    """Read a solution JSON file."""
    return solution_from_json(read_text(file_path))


def save_solution(sol: Solution, file_path: str | Path) -> None:
    """Write a solution JSON file."""
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(solution_to_json(sol) + "\n", encoding="utf-8")
    logger.info(f"Solution written to {file_path}")


def relabel_machines(
    inst: Instance, sol: Solution | None, mapping: Mapping[int, int]
) -> tuple[Instance, Solution | None]:
    """Rename machines consistently in an instance and, optionally, a solution.

    Args:
        inst (Instance): Instance.
        sol (Solution | None): Solution of the instance, or None.
        mapping (Mapping[int, int]): Old machine id -> new machine id, a permutation of
            1..machine_count.

    Raises:
        ValueError: If the mapping is not a permutation of the machine ids.

    Returns:
        tuple[Instance, Solution | None]: The relabeled instance and solution.
    """
    machines = set(range(1, inst.machine_count + 1))
    if set(mapping) != machines or set(mapping.values()) != machines:
        raise ValueError(f"mapping must be a permutation of 1..{inst.machine_count}")

    operations = [
        OperationSpec(
            id=op.id, eligible={mapping[k]: p for k, p in op.eligible.items()}
        )
        for op in inst.operations
    ]
    new_inst = build_instance(inst.machine_count, operations, inst.precedence_arcs)
    if sol is None:
        return new_inst, None

    new_sol = sol.copy(
        update={
            "assignment": dict(
                sorted((op, mapping[k]) for op, k in sol.assignment.items())
            ),
            "sequences": dict(
                sorted((mapping[k], ops) for k, ops in sol.sequences.items())
            ),
        }
    )
    return new_inst, new_sol
