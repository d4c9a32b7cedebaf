"""Best-effort reader for benchmark files in the classic FJSP text layout.

The layout, as used by the usual flexible job shop benchmarks, is:

    <jobs> <machines> [<average machines per operation>]
    <o_1> <e> <k> <p> ... <e> <k> <p> ...      one line per job, o_j operations
    ...

Machine ids are 1-based. Files with sequencing flexibility append a precedence
section of `<i> <j>` lines, optionally preceded by a line holding their count, where
operations are numbered globally in job-line order. Without that section the
operations of every job form a chain, which is the classic job shop reading.

Only the canonical format is used by the rest of the toolkit; this module turns
benchmark files into canonical instances.
"""

import logging
from pathlib import Path

from .errors import EmptyEligibleSetError, InstanceFormatError
from .instance import (
    Arc,
    Instance,
    build_instance,
    instance_from_json,
    parse_instance,
    read_text,
)

logger = logging.getLogger(__name__)


def _ints(tokens: list[str], line: int) -> list[int]:
    try:
        return [int(token) for token in tokens]
    except ValueError as e:
        message = f"expected integers, got {' '.join(tokens)!r}"
        raise InstanceFormatError(message, line) from e


def read_dafjs(text: str) -> Instance:
    """Parse a benchmark file in the FJSP layout with an optional precedence section.

    Args:
        text (str): File content.

    Raises:
        InstanceFormatError: If the content does not follow the layout.

    Returns:
        Instance: The instance in the toolkit's data model.
    """
    lines = [
        (number, line.split())
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]
    if not lines:
        raise InstanceFormatError("empty file", 1)

    number, header = lines[0]
    if len(header) not in (2, 3):
        raise InstanceFormatError(
            "header must be '<jobs> <machines> [<average>]'", number
        )
    job_count, machine_count = _ints(header[:2], number)
    if job_count < 1 or machine_count < 1:
        raise InstanceFormatError("header counts out of range", number)
    if len(lines) < 1 + job_count:
        raise InstanceFormatError(f"expected {job_count} job lines", lines[-1][0] + 1)

    operations: dict[int, dict[int, int]] = {}
    chains: list[Arc] = []
    for number, tokens in lines[1 : 1 + job_count]:
        values = _ints(tokens, number)
        op_in_job, cursor = values[0], 1
        previous = None
        for _ in range(op_in_job):
            if cursor >= len(values):
                raise InstanceFormatError("job line ends too early", number)
            count = values[cursor]
            pairs = values[cursor + 1 : cursor + 1 + 2 * count]
            if len(pairs) != 2 * count:
                raise InstanceFormatError("job line ends too early", number)
            cursor += 1 + 2 * count
            op = len(operations) + 1
            if count == 0:
                raise EmptyEligibleSetError(op)
            operations[op] = dict(zip(pairs[0::2], pairs[1::2], strict=True))
            if previous is not None:
                chains.append((previous, op))
            previous = op
        if cursor != len(values):
            raise InstanceFormatError("values after the last operation", number)

    rest = lines[1 + job_count :]
    if rest and len(rest[0][1]) == 1:
        number, tokens = rest[0]
        (count,) = _ints(tokens, number)
        rest = rest[1:]
        if count != len(rest):
            raise InstanceFormatError(
                f"precedence section announces {count} arcs, lists {len(rest)}", number
            )

    arcs: list[Arc] = []
    for number, tokens in rest:
        values = _ints(tokens, number)
        if len(values) != 2:
            raise InstanceFormatError("precedence line must be '<i> <j>'", number)
        arcs.append((values[0], values[1]))

    if not rest:
        logger.debug("No precedence section, jobs are read as chains")
        arcs = chains
    return build_instance(machine_count, operations, arcs)


def load_instance(file_path: str | Path) -> Instance:
    """Read an instance file whatever its format.

    `.json` files are read as the JSON mirror. Other files are read as the canonical
    format and, when that fails, with the FJSP layout reader.

    Args:
        file_path (str | Path): Path to the file.

    Raises:
        InstanceFormatError: If no reader accepts the file; the message is the
            canonical reader's one.

    Returns:
        Instance: The instance.
    """
    file_path = Path(file_path)
    text = read_text(file_path)
    if file_path.suffix == ".json":
        return instance_from_json(text)
    try:
        return parse_instance(text)
    except InstanceFormatError as canonical_error:
        try:
            inst = read_dafjs(text)
        except InstanceFormatError:
            raise canonical_error from None
        logger.info(f"Read {file_path.name} with the FJSP layout reader")
        return inst
