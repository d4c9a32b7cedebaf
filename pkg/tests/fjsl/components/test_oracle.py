"""Unit tests for the exhaustive solver."""

import itertools

import pytest

from fjsl.components.generator import generate_random_instance
from fjsl.components.heuristics import best_constructive, ect_schedule, est_schedule
from fjsl.components.instance import Instance, build_instance
from fjsl.components.learning import psi
from fjsl.components.oracle import brute_force_optimal, estimate_combinations
from fjsl.components.solution import relabel_machines, solution_from_sequences
from fjsl.components.validator import validate


def _full_enumeration(inst: Instance, alpha: float) -> int:
    """Optimal makespan by trying every assignment and every machine order."""
    best = None
    ops = [op.id for op in inst.operations]
    for machines in itertools.product(*(list(op.eligible) for op in inst.operations)):
        loads = {
            k: [op for op, m in zip(ops, machines) if m == k] for k in set(machines)
        }
        for orders in itertools.product(
            *(itertools.permutations(load) for load in loads.values())
        ):
            sol = solution_from_sequences(dict(zip(loads, orders)))
            report = validate(inst, alpha, sol)
            if report.feasible and (best is None or report.makespan < best):
                best = report.makespan
    return best


def _random_tiny(seed: int) -> Instance:
    return generate_random_instance(
        seed, 1 + seed % 3, 3 + seed % 3, shape="dag", density=0.3, eligibility=0.6
    )


# ---------------------------------- Optimum --------------------------------- #


@pytest.mark.parametrize(
    ("machine_count", "operations", "alpha", "makespan"),
    [
        (1, {1: {1: 7}}, 0.3, 700),
        (1, {1: {1: 10}, 2: {1: 10}}, 0.3, 1812),
        (2, {1: {1: 10, 2: 10}, 2: {1: 10, 2: 10}}, 0.3, 1000),
    ],
)
def test_trivial(
    machine_count: int, operations: dict, alpha: float, makespan: int
) -> None:
    """Test instances whose optimum is known by hand."""
    inst = build_instance(machine_count, operations)
    result = brute_force_optimal(inst, alpha)
    assert result.status == "complete"
    assert result.optimal_makespan == makespan
    assert result.witness.makespan == makespan
    assert validate(inst, alpha, result.witness).feasible


@pytest.mark.parametrize(("alpha", "makespan"), [(0.5, 5016), (0.0, 8000)])
def test_worked_example(example: Instance, alpha: float, makespan: int) -> None:
    """Test the optimum of the worked example with and without learning."""
    result = brute_force_optimal(example, alpha, force=True)
    assert result.status == "complete"
    assert result.optimal_makespan == makespan
    assert validate(example, alpha, result.witness).makespan == makespan


@pytest.mark.parametrize("alpha", [0.0, 0.3])
def test_matches_full_enumeration(alpha: float) -> None:
    """Test the search against a plain enumeration of every combination."""
    for seed in range(12):
        inst = _random_tiny(seed)
        result = brute_force_optimal(inst, alpha)
        assert result.status == "complete"
        assert result.optimal_makespan == _full_enumeration(inst, alpha), seed
        assert validate(inst, alpha, result.witness).makespan == result.optimal_makespan


def test_dominates_heuristics() -> None:
    """Test that the optimum never exceeds the constructive makespans."""
    for seed in range(20):
        inst = generate_random_instance(seed, 3, 6, shape="Y", eligibility=0.5)
        for alpha in (0.1, 0.5):
            optimum = brute_force_optimal(inst, alpha).optimal_makespan
            assert optimum <= est_schedule(inst, alpha).makespan
            assert optimum <= ect_schedule(inst, alpha).makespan


def test_heuristic_ratio() -> None:
    """Test that EST stays within three times the optimum on identical machines."""
    # Non-delay list scheduling on identical machines is within twice the optimum,
    # learning with alpha <= 0.2 over at most 7 positions costs less than 1.5
    for seed in range(10):
        inst = generate_random_instance(
            seed,
            2 + seed % 2,
            6 + seed % 2,
            shape="dag",
            eligibility=1.0,
            time_range=(10, 10),
            job_count=1 + seed % 3,
        )
        for alpha in (0.0, 0.2):
            result = brute_force_optimal(inst, alpha, max_combinations=10**12)
            assert result.status == "complete"
            optimum = result.optimal_makespan
            for heuristic in (est_schedule, best_constructive):
                assert optimum <= heuristic(inst, alpha).makespan <= 3 * optimum


def test_chain_single_machine() -> None:
    """Test the closed form of a chain on one machine."""
    times = [10, 10, 4, 25]
    arcs = [(i, i + 1) for i in range(1, len(times))]
    inst = build_instance(1, {op: {1: p} for op, p in enumerate(times, start=1)}, arcs)
    expected = sum(psi(0.3, p, r) for r, p in enumerate(times, start=1))
    result = brute_force_optimal(inst, 0.3)
    assert result.optimal_makespan == expected
    assert result.explored == 1


def test_relabel_invariance() -> None:
    """Test that renaming machines keeps the optimum."""
    for seed in range(5):
        inst = generate_random_instance(seed, 3, 5, eligibility=0.7)
        new_inst, _ = relabel_machines(inst, None, {1: 3, 2: 1, 3: 2})
        assert (
            brute_force_optimal(new_inst, 0.2).optimal_makespan
            == brute_force_optimal(inst, 0.2).optimal_makespan
        )


def test_workers() -> None:
    """Test that parallel workers return the same optimum and witness."""
    inst = generate_random_instance(3, 3, 6, eligibility=0.7)
    sequential = brute_force_optimal(inst, 0.3)
    parallel = brute_force_optimal(inst, 0.3, workers=2)
    assert parallel.optimal_makespan == sequential.optimal_makespan
    assert parallel.witness == sequential.witness
    assert parallel.status == "complete"


# ----------------------------------- Guard ---------------------------------- #


def test_estimate() -> None:
    """Test the number of combinations on small instances."""
    assert estimate_combinations(build_instance(1, {1: {1: 7}})) == 1
    # Both on one machine (2 orders, twice) or split (2 ways)
    inst = build_instance(2, {1: {1: 1, 2: 1}, 2: {1: 1, 2: 1}})
    assert estimate_combinations(inst) == 6
    inst = build_instance(1, {op: {1: 1} for op in range(1, 5)})
    assert estimate_combinations(inst) == 24


def test_guard(small_instance: Instance) -> None:
    """Test that the search is refused above the guard unless forced."""
    result = brute_force_optimal(small_instance, 0.2, max_combinations=1)
    assert result.status == "limit-exceeded"
    assert result.explored == 0
    assert result.estimate > 1
    heuristic = best_constructive(small_instance, 0.2)
    assert result.optimal_makespan == heuristic.makespan
    assert result.witness.sequences == heuristic.solution.sequences

    # Forced above the guard, the search runs with the guard as its budget
    forced = brute_force_optimal(
        small_instance, 0.2, max_combinations=result.estimate - 1, force=True
    )
    assert forced.explored > 0
    assert forced.optimal_makespan <= heuristic.makespan
    complete = brute_force_optimal(small_instance, 0.2)
    if forced.status == "complete":
        assert forced.optimal_makespan == complete.optimal_makespan


def test_forced_budget(small_instance: Instance) -> None:
    """Test that a forced search stops once its budget is spent."""
    result = brute_force_optimal(small_instance, 0.2, max_combinations=1, force=True)
    assert result.status == "limit-exceeded"
    assert result.explored >= 1
    assert result.optimal_makespan <= best_constructive(small_instance, 0.2).makespan


def test_time_limit(small_instance: Instance) -> None:
    """Test that the time limit covers the whole search, not each first move."""
    result = brute_force_optimal(small_instance, 0.2, time_limit=0.0)
    assert result.status == "limit-exceeded"
    assert result.explored == 0
    heuristic = best_constructive(small_instance, 0.2)
    assert result.witness.sequences == heuristic.solution.sequences
