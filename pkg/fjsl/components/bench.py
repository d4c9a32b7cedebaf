"""Benchmark sweep of the two constructive heuristics over a folder of instances."""

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Literal

import pandas as pd
from pydantic import BaseModel, root_validator
from tqdm.auto import tqdm

from fjsl import BENCH_ALPHAS
from fjsl.utils.utils import timed

from .dafjs import load_instance
from .errors import FjslError
from .heuristics import ect_schedule, est_schedule
from .instance import Instance
from .learning import check_alpha

logger = logging.getLogger(__name__)

INSTANCE_SUFFIXES = (".fjs", ".txt", ".json")
BENCH_COLUMNS = [
    "instance",
    "alpha",
    "est_makespan",
    "ect_makespan",
    "winner",
    "est_time",
    "ect_time",
]


class BenchRow(BaseModel):
    """Makespans of both heuristics on one instance for one learning rate.

    Attributes:
        instance (str): Instance name.
        alpha (float): Learning rate.
        est_makespan (int): Makespan of the EST rule, scaled units.
        ect_makespan (int): Makespan of the ECT rule, scaled units.
        winner ("est", "ect", "both"): Rule with the lower makespan, both on ties.
        est_time (float): Wall-clock time of the EST rule, seconds.
        ect_time (float): Wall-clock time of the ECT rule, seconds.
    """

    instance: str
    alpha: float
    est_makespan: int
    ect_makespan: int
    winner: Literal["est", "ect", "both"]
    est_time: float
    ect_time: float

    class Config:
        """Pydantic configuration."""

        frozen = True

    @root_validator(skip_on_failure=True)
    def validate_winner(cls, values: dict) -> dict:
        """Winner is the side with the lower makespan."""
        expected = _winner(values["est_makespan"], values["ect_makespan"])
        if values["winner"] != expected:
            raise ValueError(f"winner should be {expected!r}")
        return values


def _winner(est: int, ect: int) -> Literal["est", "ect", "both"]:
    if est == ect:
        return "both"
    return "est" if est < ect else "ect"


def bench_instance(
    inst: Instance, name: str, alphas: Sequence[float]
) -> list[BenchRow]:
    """Run both heuristics on an instance for every learning rate.

    Only the heuristic calls are timed.

    Args:
        inst (Instance): Instance.
        name (str): Instance name.
        alphas (Sequence[float]): Learning rates.

    Returns:
        list[BenchRow]: One row per learning rate, in the given order.
    """
    rows = []
    for alpha in alphas:
        alpha = check_alpha(alpha)
        est, est_time = timed(est_schedule, inst, alpha)
        ect, ect_time = timed(ect_schedule, inst, alpha)
        rows.append(
            BenchRow(
                instance=name,
                alpha=alpha,
                est_makespan=est.makespan,
                ect_makespan=ect.makespan,
                winner=_winner(est.makespan, ect.makespan),
                est_time=est_time,
                ect_time=ect_time,
            )
        )
    return rows


def _bench_file(file_path: Path, alphas: Sequence[float]) -> list[BenchRow]:
    try:
        inst = load_instance(file_path)
        return bench_instance(inst, file_path.stem, alphas)
    except (FjslError, OSError) as error:
        logger.error(f"Skipping {file_path.name}: {error}")
        return []


def instance_files(folder: str | Path) -> list[Path]:
    """Instance files of a folder, sorted by name."""
    folder = Path(folder)
    return sorted(
        path
        for path in folder.iterdir()
        if path.is_file() and path.suffix.lower() in INSTANCE_SUFFIXES
    )


def run_bench(
    folder: str | Path, alphas: Sequence[float] = BENCH_ALPHAS, workers: int = 1
) -> list[BenchRow]:
    """Benchmark both heuristics on every instance of a folder.

    Files that cannot be read are logged and skipped.

    Args:
        folder (str | Path): Folder of instance files.
        alphas (Sequence[float], optional): Learning rates. Defaults to 0.1, 0.2
            and 0.3.
        workers (int, optional): Threads sharing the instances. Defaults to 1.

    Returns:
        list[BenchRow]: Rows by instance name then learning rate, whatever the number
            of workers.
    """
    files = instance_files(folder)
    logger.info(f"Benchmarking {len(files)} instances for alphas {list(alphas)}")

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        results = executor.map(lambda path: _bench_file(path, alphas), files)
        progress = tqdm(results, total=len(files))
        rows = [row for file_rows in progress for row in file_rows]
    return rows


def bench_footer(rows: Sequence[BenchRow]) -> list[dict]:
    """Summary rows per learning rate: wins and mean makespans.

    A rule wins on a row when its makespan is lower than or equal to the other's, so
    ties are credited to both. Means are rounded to 2 decimals.

    Args:
        rows (Sequence[BenchRow]): Benchmark rows.

    Returns:
        list[dict]: A "wins" then a "mean" row for each learning rate, in order of first
            appearance.
    """
    footer = []
    for alpha in dict.fromkeys(row.alpha for row in rows):
        selected = [row for row in rows if row.alpha == alpha]
        est = [row.est_makespan for row in selected]
        ect = [row.ect_makespan for row in selected]
        footer.append(
            {
                "instance": "wins",
                "alpha": alpha,
                "est_makespan": sum(a <= b for a, b in zip(est, ect)),
                "ect_makespan": sum(b <= a for a, b in zip(est, ect)),
            }
        )
        footer.append(
            {
                "instance": "mean",
                "alpha": alpha,
                "est_makespan": round(sum(est) / len(est), 2),
                "ect_makespan": round(sum(ect) / len(ect), 2),
            }
        )
    return footer


def bench_table(rows: Sequence[BenchRow]) -> pd.DataFrame:
    """Benchmark rows followed by their footer."""
    records = [row.dict() for row in rows] + bench_footer(rows)
    return pd.DataFrame(records, columns=BENCH_COLUMNS)


def write_bench(table: pd.DataFrame, file_path: str | Path) -> None:
    """Write a benchmark table as CSV."""
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(file_path, index=False)
    logger.info(f"Benchmark table written to {file_path}")
