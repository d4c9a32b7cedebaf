"""Unit tests for the random instance generator."""

import pytest

from fjsl.components.errors import GeneratorParameterError
from fjsl.components.generator import generate_random_instance
from fjsl.components.instance import jobs, transitive_closure


@pytest.mark.parametrize("shape", ["chain", "Y", "dag"])
@pytest.mark.parametrize("job_count", [1, 3])
def test_generate_valid(shape: str, job_count: int) -> None:
    """Test that generated instances are valid for every shape."""
    for seed in range(20):
        inst = generate_random_instance(
            seed, 3, 9, shape=shape, job_count=job_count, time_range=(2, 20)
        )
        assert inst.op_count == 9
        assert inst.machine_count == 3
        for op in inst.operations:
            assert op.eligible
            assert all(2 <= p <= 20 for p in op.eligible.values())
        # Operations of a job are consecutive and linked
        assert len(jobs(inst)) == job_count
        transitive_closure(inst.precedence_arcs, inst.op_count)


def test_generate_chain() -> None:
    """Test the arcs of the chain shape."""
    inst = generate_random_instance(7, 2, 6, shape="chain", job_count=2)
    assert inst.precedence_arcs == ((1, 2), (2, 3), (4, 5), (5, 6))


def test_generate_deterministic() -> None:
    """Test that a seed always gives the same instance."""
    first = generate_random_instance(42, 4, 10, eligibility=0.3)
    second = generate_random_instance(42, 4, 10, eligibility=0.3)
    assert first == second
    assert first != generate_random_instance(43, 4, 10, eligibility=0.3)


def test_generate_full_eligibility() -> None:
    """Test that every machine is eligible when the probability is 1."""
    inst = generate_random_instance(0, 3, 5, eligibility=1.0)
    assert all(list(op.eligible) == [1, 2, 3] for op in inst.operations)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"machine_count": 0, "op_count": 3},
        {"machine_count": 2, "op_count": 0},
        {"machine_count": 2, "op_count": 3, "job_count": 4},
        {"machine_count": 2, "op_count": 3, "shape": "tree"},
        {"machine_count": 2, "op_count": 3, "density": 1.5},
        {"machine_count": 2, "op_count": 3, "eligibility": 0.0},
        {"machine_count": 2, "op_count": 3, "time_range": (5, 4)},
        {"machine_count": 2, "op_count": 3, "time_range": (0, 4)},
    ],
)
def test_generate_error(kwargs: dict) -> None:
    """Test that out-of-domain parameters are rejected."""
    with pytest.raises(GeneratorParameterError):
        generate_random_instance(0, **kwargs)
