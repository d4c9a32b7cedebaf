"""Gantt table of a schedule."""

import logging
from pathlib import Path

import pandas as pd

from fjsl import TIME_SCALE

from .solution_graph import (
    CriticalPathResult,
    SolutionGraph,
    critical_path,
    schedule_times,
    topological_sort,
)

logger = logging.getLogger(__name__)

GANTT_COLUMNS = ["op", "machine", "position", "start", "actual_time", "end", "critical"]


def gantt_table(
    graph: SolutionGraph,
    critical: CriticalPathResult | None = None,
    original_units: bool = False,
) -> pd.DataFrame:
    """One row per operation of the semi-active schedule, by machine then position.

    Args:
        graph (SolutionGraph): Solution graph.
        critical (CriticalPathResult | None, optional): Critical path flagging the
            critical operations. Computed when omitted.
        original_units (bool, optional): Divide times by the scale factor. Defaults
            to False (scaled units).

    Returns:
        pd.DataFrame: Columns op, machine, position, start, actual_time, end, critical.
    """
    order = topological_sort(graph)
    if critical is None:
        critical = critical_path(graph, order)
    on_path = set(critical.critical_path)

    rows = [
        {
            "op": op,
            "machine": graph.assignment[op],
            "position": graph.positions[op],
            "start": start,
            "actual_time": end - start,
            "end": end,
            "critical": op in on_path,
        }
        for op, (start, end) in schedule_times(graph, order).items()
    ]
    table = pd.DataFrame(rows, columns=GANTT_COLUMNS)
    table = table.sort_values(["machine", "position"]).reset_index(drop=True)
    if original_units:
        for column in ("start", "actual_time", "end"):
            table[column] = table[column] / TIME_SCALE
    return table


def write_gantt(table: pd.DataFrame, file_path: str | Path) -> None:
    """Write a Gantt table as CSV."""
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(file_path, index=False)
    logger.info(f"Gantt table written to {file_path}")
