"""Instance data model, canonical file format, DAG utilities and flexibility."""

import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

import networkx as nx
from pydantic import BaseModel, ValidationError, root_validator, validator
from pydantic.error_wrappers import ErrorWrapper

from .errors import (
    CycleError,
    EmptyEligibleSetError,
    FjslError,
    InstanceFormatError,
)

logger = logging.getLogger(__name__)

Arc = tuple[int, int]


class OperationSpec(BaseModel):
    """An operation and the machines that can process it.

    Attributes:
        id (int): 1-based operation id.
        eligible (dict[int, int]): Eligible machine id -> standard processing time, in
            original units (before the x100 scaling).
    """

    id: int
    eligible: dict[int, int]

    class Config:
        """Pydantic configuration."""

        frozen = True

    @validator("id")
    def validate_id(cls, value: int) -> int:
        """Check that the id is 1-based."""
        if value < 1:
            raise ValueError(f"operation ids start at 1, got {value}")
        return value

    @validator("eligible")
    def validate_eligible(cls, value: dict[int, int], values: dict) -> dict[int, int]:
        """Check the eligible set and sort it by machine id."""
        if not value:
            raise EmptyEligibleSetError(values.get("id", 0))
        for machine, time in value.items():
            if machine < 1:
                raise ValueError(f"machine ids start at 1, got {machine}")
            if time < 1:
                raise ValueError(
                    f"processing time of operation {values.get('id')} on machine"
                    f" {machine} must be >= 1, got {time}"
                )
        return dict(sorted(value.items()))


class Instance(BaseModel):
    """Flexible job shop instance with sequencing flexibility.

    The jobs are not given explicitly: they are the weakly connected components of the
    precedence digraph.

    Attributes:
        machine_count (int): Number of machines, ids 1..machine_count.
        operations (tuple[OperationSpec, ...]): Operations, ids 1..n in order.
        precedence_arcs (tuple[tuple[int, int], ...]): Arcs (i, j) meaning i precedes j,
            stored as given.
    """

    machine_count: int
    operations: tuple[OperationSpec, ...]
    precedence_arcs: tuple[tuple[int, int], ...] = ()

    class Config:
        """Pydantic configuration."""

        frozen = True

    @validator("machine_count")
    def validate_machine_count(cls, value: int) -> int:
        """Check that there is at least one machine."""
        if value < 1:
            raise ValueError(f"machine count must be >= 1, got {value}")
        return value

    @validator("operations")
    def validate_operations(
        cls, value: tuple[OperationSpec, ...]
    ) -> tuple[OperationSpec, ...]:
        """Check that the operation ids are 1..n in order."""
        if not value:
            raise ValueError("an instance needs at least one operation")
        for expected, op in enumerate(value, start=1):
            if op.id != expected:
                raise ValueError(f"operation ids must be 1..n in order, got {op.id}")
        return value

    @root_validator(skip_on_failure=True)
    def validate_graph(cls, values: dict) -> dict:
        """Check machine ids, arc endpoints, duplicates and acyclicity.

        Args:
            values (dict): Field values.

        Returns:
            dict: Validated field values.
        """
        machine_count = values["machine_count"]
        operations = values["operations"]
        arcs = values["precedence_arcs"]

        for op in operations:
            for machine in op.eligible:
                if machine > machine_count:
                    raise ValueError(
                        f"operation {op.id} is eligible on machine {machine}, but the"
                        f" instance has {machine_count} machines"
                    )

        n = len(operations)
        seen = set()
        for i, j in arcs:
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"arc ({i}, {j}) has an endpoint outside 1..{n}")
            if i == j:
                raise ValueError(f"self-loop on operation {i}")
            if (i, j) in seen:
                raise ValueError(f"duplicate arc ({i}, {j})")
            seen.add((i, j))

        check_acyclic(arcs, n)
        return values

    @property
    def op_count(self) -> int:
        """Number of operations."""
        return len(self.operations)

    def eligible(self, op: int) -> dict[int, int]:
        """Eligible machines of an operation with their standard processing times."""
        return self.operations[op - 1].eligible

    def machine_operations(self) -> dict[int, list[int]]:
        """Operations each machine can process (the sets O_k), for every machine."""
        result = {k: [] for k in range(1, self.machine_count + 1)}
        for op in self.operations:
            for k in op.eligible:
                result[k].append(op.id)
        return result

    def predecessors(self) -> dict[int, list[int]]:
        """Immediate predecessors of every operation, ascending."""
        result = {op.id: [] for op in self.operations}
        for i, j in self.precedence_arcs:
            result[j].append(i)
        return {op: sorted(preds) for op, preds in result.items()}

    def successors(self) -> dict[int, list[int]]:
        """Immediate successors of every operation, ascending."""
        result = {op.id: [] for op in self.operations}
        for i, j in self.precedence_arcs:
            result[i].append(j)
        return {op: sorted(succs) for op, succs in result.items()}

    def sum_eligible(self) -> int:
        """Number of (operation, eligible machine) pairs."""
        return sum(len(op.eligible) for op in self.operations)


class FlexibilityReport(BaseModel):
    """Sequencing and routing flexibility of an instance.

    Attributes:
        omega1 (float): Sequencing flexibility, mean of the per-job values.
        per_job_omega1 (list[float]): Sequencing flexibility of every job, in job order.
        omega2 (float): Routing flexibility.
        job_count (int): Number of jobs.
        op_count (int): Number of operations.
        machine_count (int): Number of machines.
        arc_count (int): Number of precedence arcs.
        sum_eligible (int): Number of (operation, eligible machine) pairs.
    """

    omega1: float
    per_job_omega1: list[float]
    omega2: float
    job_count: int
    op_count: int
    machine_count: int
    arc_count: int
    sum_eligible: int

    class Config:
        """Pydantic configuration."""

        frozen = True


# ------------------------------- Construction ------------------------------- #


def _flatten_errors(errors: Iterable) -> Iterator[Exception]:
    for error in errors:
        if isinstance(error, ErrorWrapper):
            if isinstance(error.exc, ValidationError):
                yield from _flatten_errors(error.exc.raw_errors)
            else:
                yield error.exc
        else:
            yield from _flatten_errors(error)


def domain_error(error: ValidationError) -> FjslError:
    """Translate a pydantic validation error to the toolkit's exception hierarchy.

    Args:
        error (ValidationError): Error raised while building a domain type.

    Returns:
        FjslError: The first domain error found inside, or an InstanceFormatError
            carrying the pydantic message.
    """
    for exc in _flatten_errors(error.raw_errors):
        if isinstance(exc, FjslError):
            return exc
    message = "; ".join(
        f"{'.'.join(str(loc) for loc in e['loc'])}: {e['msg']}" for e in error.errors()
    )
    return InstanceFormatError(message)


def build_instance(
    machine_count: int,
    operations: Mapping[int, Mapping[int, int]] | Sequence[OperationSpec],
    arcs: Iterable[Arc] = (),
) -> Instance:
    """Build and validate an instance.

    Args:
        machine_count (int): Number of machines.
        operations (Mapping[int, Mapping[int, int]] | Sequence[OperationSpec]): Either
            op id -> {machine: standard time}, or the operations themselves.
        arcs (Iterable[Arc], optional): Precedence arcs. Defaults to ().

    Raises:
        CycleError: If the precedence digraph has a cycle.
        EmptyEligibleSetError: If an operation has no eligible machine.
        InstanceFormatError: For any other invalid content.

    Returns:
        Instance: The validated instance.
    """
    try:
        if isinstance(operations, Mapping):
            operations = [
                OperationSpec(id=op, eligible=dict(eligible))
                for op, eligible in sorted(operations.items())
            ]
        return Instance(
            machine_count=machine_count,
            operations=tuple(operations),
            precedence_arcs=tuple((int(i), int(j)) for i, j in arcs),
        )
    except ValidationError as e:
        raise domain_error(e) from e


# ------------------------------ Canonical format ---------------------------- #


def _tokenized_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if content:
            yield number, content.split()


def _to_ints(tokens: list[str], line: int) -> list[int]:
    try:
        return [int(token) for token in tokens]
    except ValueError as e:
        message = f"expected integers, got {' '.join(tokens)!r}"
        raise InstanceFormatError(message, line) from e


def parse_instance(text: str) -> Instance:
    """Parse an instance in the canonical text format.

    The format is line oriented: a header `<op_count> <machine_count> <arc_count>`, one
    line `<op_id> <e> <k_1> <p_1> ... <k_e> <p_e>` per operation and one line `<i> <j>`
    per precedence arc. `#` starts a comment and blank lines are ignored.

    Args:
        text (str): File content.

    Raises:
        InstanceFormatError: On a syntax error, with the line number.
        CycleError: If the precedence digraph has a cycle.
        EmptyEligibleSetError: If an operation has no eligible machine.

    Returns:
        Instance: The parsed instance. Nothing is returned on any error.
    """
    lines = _tokenized_lines(text)
    last_line = len(text.splitlines())

    def next_line(what: str) -> tuple[int, list[int]]:
        try:
            number, tokens = next(lines)
        except StopIteration:
            raise InstanceFormatError(
                f"unexpected end of file, expected {what}", last_line + 1
            ) from None
        return number, _to_ints(tokens, number)

    number, header = next_line("the header")
    if len(header) != 3:
        raise InstanceFormatError(
            "header must be '<op_count> <machine_count> <arc_count>'", number
        )
    op_count, machine_count, arc_count = header
    if op_count < 1 or machine_count < 1 or arc_count < 0:
        raise InstanceFormatError("header counts out of range", number)

    operations: dict[int, dict[int, int]] = {}
    for _ in range(op_count):
        number, values = next_line("an operation line")
        if len(values) < 2:
            raise InstanceFormatError("operation line needs '<op_id> <e> ...'", number)
        op, count = values[0], values[1]
        pairs = values[2:]
        if len(pairs) != 2 * count:
            raise InstanceFormatError(
                f"operation {op} announces {count} machines but lists"
                f" {len(pairs) / 2:g}",
                number,
            )
        if not 1 <= op <= op_count:
            raise InstanceFormatError(
                f"operation id {op} outside 1..{op_count}", number
            )
        if op in operations:
            raise InstanceFormatError(f"operation {op} defined twice", number)
        if count == 0:
            raise EmptyEligibleSetError(op)
        eligible = dict(zip(pairs[0::2], pairs[1::2], strict=True))
        if len(eligible) != count:
            raise InstanceFormatError(f"operation {op} lists a machine twice", number)
        for machine, time in eligible.items():
            if not 1 <= machine <= machine_count:
                raise InstanceFormatError(
                    f"machine {machine} outside 1..{machine_count}", number
                )
            if time < 1:
                raise InstanceFormatError(
                    f"processing time {time} of operation {op} must be >= 1", number
                )
        operations[op] = eligible

    arcs = []
    for _ in range(arc_count):
        number, values = next_line("an arc line")
        if len(values) != 2:
            raise InstanceFormatError("arc line must be '<i> <j>'", number)
        i, j = values
        if not (1 <= i <= op_count and 1 <= j <= op_count):
            raise InstanceFormatError(f"arc ({i}, {j}) outside 1..{op_count}", number)
        if i == j:
            raise InstanceFormatError(f"self-loop on operation {i}", number)
        if (i, j) in arcs:
            raise InstanceFormatError(f"duplicate arc ({i}, {j})", number)
        arcs.append((i, j))

    for number, tokens in lines:
        raise InstanceFormatError(f"unexpected content {' '.join(tokens)!r}", number)

    return build_instance(machine_count, operations, arcs)


def write_instance(inst: Instance) -> str:
    """Write an instance in the canonical text format.

    Args:
        inst (Instance): Instance to write.

    Returns:
        str: File content, parsed back by parse_instance into an equal instance.
    """
    lines = [f"{inst.op_count} {inst.machine_count} {len(inst.precedence_arcs)}"]
    for op in inst.operations:
        pairs = " ".join(f"{k} {p}" for k, p in op.eligible.items())
        lines.append(f"{op.id} {len(op.eligible)} {pairs}")
    lines.extend(f"{i} {j}" for i, j in inst.precedence_arcs)
    return "\n".join(lines) + "\n"


def instance_to_json(inst: Instance) -> str:
    """Serialize an instance to its JSON mirror."""
    return inst.json(indent=2)


def instance_from_json(text: str) -> Instance:
    """Parse the JSON mirror of an instance.

    Raises:
        InstanceFormatError: If the JSON does not describe an instance.
        CycleError: If the precedence digraph has a cycle.
        EmptyEligibleSetError: If an operation has no eligible machine.
    """
    try:
        return Instance.parse_raw(text)
    except ValidationError as e:
        raise domain_error(e) from e


def read_text(file_path: str | Path) -> str:
    """Read a UTF-8 input file.

    Raises:
        InstanceFormatError: If the file is not valid UTF-8.
    """
    try:
        return Path(file_path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise InstanceFormatError(f"{file_path} is not a UTF-8 text file: {e}") from e


def read_instance(file_path: str | Path) -> Instance:
    """Read an instance file, canonical text or JSON (by the `.json` suffix).

    Args:
        file_path (str | Path): Path to the file.

    Returns:
        Instance: The parsed instance.
    """
    file_path = Path(file_path)
    text = read_text(file_path)
    if file_path.suffix == ".json":
        return instance_from_json(text)
    return parse_instance(text)


def save_instance(inst: Instance, file_path: str | Path) -> None:
    """Write an instance file, canonical text or JSON (by the `.json` suffix)."""
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    if file_path.suffix == ".json":
        file_path.write_text(instance_to_json(inst), encoding="utf-8")
    else:
        file_path.write_text(write_instance(inst), encoding="utf-8")
    logger.info(f"Instance written to {file_path}")


# ------------------------------- DAG utilities ------------------------------ #


def _digraph(arcs: Iterable[Arc], n: int) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(1, n + 1))
    graph.add_edges_from(arcs)
    return graph


def check_acyclic(arcs: Iterable[Arc], n: int) -> None:
    """Raise a CycleError listing one cycle if the arcs contain a cycle.

    Args:
        arcs (Iterable[Arc]): Arcs over the vertices 1..n.
        n (int): Number of vertices.
    """
    graph = _digraph(arcs, n)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = [u for u, _ in nx.find_cycle(graph)]
        raise CycleError(cycle)


def jobs(inst: Instance) -> list[list[int]]:
    """Jobs of an instance: weakly connected components of the precedence digraph.

    Args:
        inst (Instance): Instance.

    Returns:
        list[list[int]]: Operation ids of every job, ascending, jobs ordered by their
            smallest operation id.
    """
    graph = _digraph(inst.precedence_arcs, inst.op_count)
    components = [sorted(c) for c in nx.weakly_connected_components(graph)]
    return sorted(components, key=lambda c: c[0])


def transitive_closure(arcs: Iterable[Arc], n: int) -> set[Arc]:
    """Transitive closure of a DAG.

    Args:
        arcs (Iterable[Arc]): Arcs over the vertices 1..n.
        n (int): Number of vertices.

    Raises:
        CycleError: If the arcs contain a cycle.

    Returns:
        set[Arc]: Pairs (i, j), i != j, such that a path from i to j exists.
    """
    arcs = list(arcs)
    check_acyclic(arcs, n)
    closure = nx.transitive_closure_dag(_digraph(arcs, n))
    return set(closure.edges())


def transitive_reduction(arcs: Iterable[Arc], n: int) -> set[Arc]:
    """Transitive reduction of a DAG, the unique minimal arc set with the same closure.

    Args:
        arcs (Iterable[Arc]): Arcs over the vertices 1..n.
        n (int): Number of vertices.

    Raises:
        CycleError: If the arcs contain a cycle.

    Returns:
        set[Arc]: Reduced arc set.
    """
    arcs = list(arcs)
    check_acyclic(arcs, n)
    reduction = nx.transitive_reduction(_digraph(arcs, n))
    return set(reduction.edges())


def reduce_instance(inst: Instance) -> Instance:
    """Copy of an instance whose precedence arcs are transitively reduced.

    The arcs that survive keep their original relative order.
    """
    kept = transitive_reduction(inst.precedence_arcs, inst.op_count)
    arcs = tuple(arc for arc in inst.precedence_arcs if arc in kept)
    if len(arcs) < len(inst.precedence_arcs):
        logger.info(f"Removed {len(inst.precedence_arcs) - len(arcs)} redundant arcs")
    return inst.copy(update={"precedence_arcs": arcs})


# -------------------------------- Flexibility ------------------------------- #


def job_omega1(op_count: int, closure_arc_count: int) -> float:
    """Sequencing flexibility of one job.

    1 - (a - a_min) / (a_max - a_min), with a the number of arcs in the transitive
    closure, a_min = n - 1 (a chain) and a_max = n (n - 1) / 2 (a total order).
    A single operation is unconstrained (1); two operations form a chain (0).

    Args:
        op_count (int): Operations in the job.
        closure_arc_count (int): Arcs of the transitive closure inside the job.

    Returns:
        float: Value in [0, 1].
    """
    if op_count == 1:
        return 1.0
    if op_count == 2:
        return 0.0
    a_min = op_count - 1
    a_max = op_count * (op_count - 1) // 2
    return 1.0 - (closure_arc_count - a_min) / (a_max - a_min)


def flexibility(inst: Instance) -> FlexibilityReport:
    """Compute the sequencing (omega1) and routing (omega2) flexibility of an instance.

    Args:
        inst (Instance): Instance.

    Returns:
        FlexibilityReport: Both measures at full precision plus the raw counts.
    """
    closure = transitive_closure(inst.precedence_arcs, inst.op_count)
    job_of = {}
    job_list = jobs(inst)
    for index, job in enumerate(job_list):
        for op in job:
            job_of[op] = index
    closure_per_job = [0] * len(job_list)
    for i, _ in closure:
        closure_per_job[job_of[i]] += 1

    per_job = [
        job_omega1(len(job), closure_per_job[index])
        for index, job in enumerate(job_list)
    ]

    n, m = inst.op_count, inst.machine_count
    sum_eligible = inst.sum_eligible()
    # One machine leaves no routing choice at all
    omega2 = 0.0 if m == 1 else (sum_eligible - n) / (n * m - n)

    return FlexibilityReport(
        omega1=sum(per_job) / len(per_job),
        per_job_omega1=per_job,
        omega2=omega2,
        job_count=len(job_list),
        op_count=n,
        machine_count=m,
        arc_count=len(inst.precedence_arcs),
        sum_eligible=sum_eligible,
    )


def round_half_up(value: float, digits: int = 2) -> float:
    """Round for display, halves away from zero (0.535 -> 0.54).

    Args:
        value (float): Value to round, taken at its shortest decimal representation.
        digits (int, optional): Number of decimals. Defaults to 2.

    Returns:
        float: Rounded value.
    """
    quantum = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))
