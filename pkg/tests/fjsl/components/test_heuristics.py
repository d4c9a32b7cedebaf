"""Unit tests for the constructive heuristics."""

import pytest

from fjsl.components.generator import generate_random_instance
from fjsl.components.heuristics import (
    best_constructive,
    ect_schedule,
    est_schedule,
    run_heuristic,
)
from fjsl.components.instance import Instance, build_instance
from fjsl.components.learning import psi
from fjsl.components.solution_graph import schedule_times
from fjsl.components.validator import validate
from fjsl.utils.utils import timed

EST_COMPLETIONS = {
    1: 1000,
    2: 2414,
    3: 2000,
    4: 5516,
    5: 6223,
    6: 7117,
    7: 1000,
    8: 1707,
    9: 4016,
    10: 4593,
    11: 5593,
    12: 7089,
}


def _rescan_sequences(inst: Instance, alpha: float, rule: str) -> dict:
    """Dispatch by recomputing the key of every candidate pair at every step."""
    predecessors = inst.predecessors()
    completion: dict[int, int] = {}
    machine_ready = {k: 0 for k in range(1, inst.machine_count + 1)}
    sequences: dict[int, list[int]] = {k: [] for k in machine_ready}
    while len(completion) < inst.op_count:
        best = None
        for v in range(1, inst.op_count + 1):
            if v in completion or any(i not in completion for i in predecessors[v]):
                continue
            ready = max((completion[i] for i in predecessors[v]), default=0)
            for k, p in inst.eligible(v).items():
                start = max(ready, machine_ready[k])
                w = psi(alpha, p, len(sequences[k]) + 1)
                key = (start, w, v, k) if rule == "est" else (start + w, v, k)
                if best is None or key < best[0]:
                    best = (key, v, k, start + w)
        _, v, k, end = best
        completion[v] = machine_ready[k] = end
        sequences[k].append(v)
    return {k: tuple(seq) for k, seq in sequences.items() if seq}


def test_est_example(example: Instance) -> None:
    """Test the EST trace on the worked example."""
    result = est_schedule(example, 0.5)
    assert result.makespan == 7117
    assert result.solution.makespan == 7117
    assert result.solution.alpha == 0.5
    assert result.solution.sequences == {
        1: (1, 2, 10, 11, 6),
        2: (7, 8, 9, 4),
        3: (3, 5, 12),
    }
    report = validate(example, 0.5, result.solution)
    assert report.feasible
    assert report.makespan == 7117


def test_est_example_completions(example: Instance) -> None:
    """Test the completion times of the EST schedule of the worked example."""
    result = est_schedule(example, 0.5)
    times = schedule_times(result.graph)
    assert {op: end for op, (_, end) in times.items()} == EST_COMPLETIONS


@pytest.mark.parametrize(
    ("machine_count", "operations", "rule", "alpha", "makespan"),
    [
        (2, {1: {1: 5, 2: 9}, 2: {1: 9, 2: 5}}, "est", 0.0, 500),
        (2, {1: {1: 10, 2: 10}, 2: {1: 10, 2: 10}}, "ect", 0.3, 1000),
        (2, {1: {1: 10, 2: 10}, 2: {1: 10, 2: 10}}, "est", 0.3, 1000),
        (1, {1: {1: 10}, 2: {1: 10}}, "est", 0.3, 1812),
        (1, {1: {1: 10}, 2: {1: 10}}, "ect", 0.3, 1812),
        (1, {1: {1: 7}}, "best", 0.3, 700),
    ],
)
def test_small_instances(
    machine_count: int, operations: dict, rule: str, alpha: float, makespan: int
) -> None:
    """Test the heuristics on instances small enough to trace by hand."""
    inst = build_instance(machine_count, operations)
    assert run_heuristic(inst, alpha, rule).makespan == makespan


def test_ect_prefers_completion() -> None:
    """Test that ECT trades a later start for an earlier completion."""
    # Operation 1 holds machine 2 until 100, machine 1 is free but slow
    inst = build_instance(2, {1: {2: 1}, 2: {1: 50, 2: 1}}, [])
    est = est_schedule(inst, 0.0)
    ect = ect_schedule(inst, 0.0)
    assert est.solution.assignment[2] == 1
    assert est.makespan == 5000
    assert ect.solution.assignment[2] == 2
    assert ect.makespan == 200


def test_best_constructive(small_instance: Instance) -> None:
    """Test that the best heuristic keeps the lower makespan, EST on ties."""
    for alpha in (0.0, 0.2, 0.5):
        est = est_schedule(small_instance, alpha)
        ect = ect_schedule(small_instance, alpha)
        best = best_constructive(small_instance, alpha)
        assert best.makespan == min(est.makespan, ect.makespan)
        if est.makespan <= ect.makespan:
            assert best.solution == est.solution


@pytest.mark.parametrize("shape", ["chain", "Y", "dag"])
def test_random_feasible(shape: str) -> None:
    """Test that the heuristics build feasible, deterministic solutions."""
    for seed in range(15):
        inst = generate_random_instance(seed, 3, 10, shape=shape, job_count=2)
        for alpha in (0.0, 0.3):
            for rule in ("est", "ect"):
                result = run_heuristic(inst, alpha, rule)
                report = validate(inst, alpha, result.solution)
                assert report.feasible, report.violations
                assert report.makespan == result.makespan
                assert run_heuristic(inst, alpha, rule).solution == result.solution


def test_unknown_heuristic(single_op: Instance) -> None:
    """Test that an unknown heuristic name is rejected."""
    with pytest.raises(ValueError):
        run_heuristic(single_op, 0.0, "spt")


# -------------------------------- Dispatching ------------------------------- #


@pytest.mark.parametrize("rule", ["est", "ect"])
def test_cached_keys_match_rescan(rule: str) -> None:
    """Test that cached candidate keys give the same choices as a full rescan."""
    for seed in range(20):
        inst = generate_random_instance(
            seed, 2 + seed % 4, 8 + seed % 7, eligibility=0.6, job_count=1 + seed % 3
        )
        for alpha in (0.0, 0.25, 0.5):
            result = run_heuristic(inst, alpha, rule)
            assert result.solution.sequences == _rescan_sequences(inst, alpha, rule)


@pytest.mark.parametrize("rule", ["est", "ect"])
def test_runtime(rule: str) -> None:
    """Test that a 289-operation, 26-machine instance is scheduled quickly."""
    inst = generate_random_instance(3, 26, 289, eligibility=0.4, job_count=20)
    durations = [timed(run_heuristic, inst, 0.3, rule)[1] for _ in range(3)]
    assert min(durations) < 0.1
