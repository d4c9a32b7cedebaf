"""Unit tests for the benchmark sweep."""

from pathlib import Path

import pandas as pd
import pytest
from pydantic import ValidationError

from fjsl.components.bench import (
    BENCH_COLUMNS,
    BenchRow,
    bench_footer,
    bench_instance,
    bench_table,
    instance_files,
    run_bench,
    write_bench,
)
from fjsl.components.instance import Instance, write_instance

FJSP_TEXT = "2 3 1.33\n2 2 1 5 2 6 1 3 4\n1 1 2 7\n"


@pytest.fixture()
def bench_dir(tmp_path: Path, example: Instance) -> Path:
    """Folder with two readable instances, two unreadable ones and an unrelated file."""
    (tmp_path / "example.fjs").write_text(write_instance(example), encoding="utf-8")
    (tmp_path / "fjsp.txt").write_text(FJSP_TEXT, encoding="utf-8")
    (tmp_path / "broken.fjs").write_text("1 1 0\n1 1 1 x\n", encoding="utf-8")
    (tmp_path / "garbled.fjs").write_bytes(b"\xff\xfe\x00garbage")
    (tmp_path / "notes.md").write_text("not an instance\n", encoding="utf-8")
    return tmp_path


def _row(name: str, alpha: float, est: int, ect: int) -> BenchRow:
    winner = "both" if est == ect else ("est" if est < ect else "ect")
    return BenchRow(
        instance=name,
        alpha=alpha,
        est_makespan=est,
        ect_makespan=ect,
        winner=winner,
        est_time=0.0,
        ect_time=0.0,
    )


def test_bench_instance(example: Instance) -> None:
    """Test the rows of one instance."""
    rows = bench_instance(example, "example", [0.5, 0.1])
    assert [row.alpha for row in rows] == [0.5, 0.1]
    assert rows[0].est_makespan == 7117
    assert all(row.est_time >= 0 and row.ect_time >= 0 for row in rows)


def test_run_bench(bench_dir: Path) -> None:
    """Test that unreadable files are skipped and the order is kept."""
    assert [path.name for path in instance_files(bench_dir)] == [
        "broken.fjs",
        "example.fjs",
        "fjsp.txt",
        "garbled.fjs",
    ]
    rows = run_bench(bench_dir)
    assert [(row.instance, row.alpha) for row in rows] == [
        ("example", 0.1),
        ("example", 0.2),
        ("example", 0.3),
        ("fjsp", 0.1),
        ("fjsp", 0.2),
        ("fjsp", 0.3),
    ]
    parallel = run_bench(bench_dir, workers=3)
    assert [(row.instance, row.est_makespan, row.ect_makespan) for row in parallel] == [
        (row.instance, row.est_makespan, row.ect_makespan) for row in rows
    ]


def test_empty_folder(tmp_path: Path) -> None:
    """Test a folder without instance."""
    assert run_bench(tmp_path, [0.2]) == []
    table = bench_table([])
    assert table.empty
    assert list(table.columns) == BENCH_COLUMNS


def test_winner() -> None:
    """Test that the winner must match the makespans."""
    assert _row("a", 0.1, 5, 5).winner == "both"
    with pytest.raises(ValidationError):
        BenchRow(
            instance="a",
            alpha=0.1,
            est_makespan=4,
            ect_makespan=5,
            winner="ect",
            est_time=0.0,
            ect_time=0.0,
        )


def test_footer() -> None:
    """Test that ties credit both rules and means are rounded."""
    rows = [
        _row("a", 0.1, 100, 100),
        _row("b", 0.1, 90, 120),
        _row("c", 0.1, 131, 130),
        _row("a", 0.2, 50, 60),
    ]
    assert bench_footer(rows) == [
        {"instance": "wins", "alpha": 0.1, "est_makespan": 2, "ect_makespan": 2},
        {"instance": "mean", "alpha": 0.1, "est_makespan": 107, "ect_makespan": 116.67},
        {"instance": "wins", "alpha": 0.2, "est_makespan": 1, "ect_makespan": 0},
        {"instance": "mean", "alpha": 0.2, "est_makespan": 50.0, "ect_makespan": 60.0},
    ]


def test_write(tmp_path: Path) -> None:
    """Test the CSV output with its footer."""
    rows = [_row("a", 0.1, 100, 100), _row("b", 0.1, 90, 120)]
    write_bench(bench_table(rows), tmp_path / "bench.csv")
    read = pd.read_csv(tmp_path / "bench.csv")
    assert list(read.columns) == BENCH_COLUMNS
    assert read["instance"].tolist() == ["a", "b", "wins", "mean"]
    assert read["winner"].tolist()[:2] == ["both", "est"]
