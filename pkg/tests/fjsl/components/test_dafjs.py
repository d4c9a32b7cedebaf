"""Unit tests for the benchmark layout reader."""

from pathlib import Path

import pytest

from fjsl.components.dafjs import load_instance, read_dafjs
from fjsl.components.errors import InstanceFormatError
from fjsl.components.instance import Instance, instance_to_json, write_instance

FJSP_TEXT = "2 3 1.33\n2 2 1 5 2 6 1 3 4\n1 1 2 7\n"


def test_read_jobs_as_chains() -> None:
    """Test the classic layout: the operations of a job form a chain."""
    inst = read_dafjs(FJSP_TEXT)
    assert inst.machine_count == 3
    assert inst.op_count == 3
    assert inst.eligible(1) == {1: 5, 2: 6}
    assert inst.eligible(2) == {3: 4}
    assert inst.eligible(3) == {2: 7}
    assert inst.precedence_arcs == ((1, 2),)


@pytest.mark.parametrize("count_line", ["", "2\n"])
def test_read_precedence_section(count_line: str) -> None:
    """Test the precedence section, with or without its count line."""
    inst = read_dafjs(f"{FJSP_TEXT}{count_line}1 2\n3 2\n")
    assert inst.precedence_arcs == ((1, 2), (3, 2))


@pytest.mark.parametrize(
    "text",
    [
        "",
        "2\n",
        "2 3\n2 2 1 5 2 6\n1 1 2 7\n",
        "2 3\n1 1 1 5\n",
        "1 3\n1 1 1 5 9\n",
        f"{FJSP_TEXT}3\n1 2\n",
        f"{FJSP_TEXT}1 2 3\n",
    ],
)
def test_read_error(text: str) -> None:
    """Test that malformed files are rejected."""
    with pytest.raises(InstanceFormatError):
        read_dafjs(text)


@pytest.mark.parametrize("name", ["fjsp.txt", "canonical.fjs", "mirror.json"])
def test_load_instance(name: str, tmp_path: Path, example: Instance) -> None:
    """Test that the loader picks the reader matching the content."""
    path = tmp_path / name
    match name:
        case "fjsp.txt":
            path.write_text(FJSP_TEXT, encoding="utf-8")
            assert load_instance(path) == read_dafjs(FJSP_TEXT)
        case "canonical.fjs":
            path.write_text(write_instance(example), encoding="utf-8")
            assert load_instance(path) == example
        case "mirror.json":
            path.write_text(instance_to_json(example), encoding="utf-8")
            assert load_instance(path) == example


def test_load_instance_error(tmp_path: Path) -> None:
    """Test that the canonical reader's message is kept when no reader accepts."""
    path = tmp_path / "broken.fjs"
    path.write_text("1 1 0\n1 1 1 x\n", encoding="utf-8")
    with pytest.raises(InstanceFormatError) as error:
        load_instance(path)
    assert error.value.line == 2
    with pytest.raises(FileNotFoundError):
        load_instance(tmp_path / "missing.fjs")
