"""Exhaustive exact solver for tiny instances.

The makespan is a regular objective, so an optimal schedule is found among the
semi-active schedules induced by an assignment and machine sequences. They are
enumerated by appending one operation at a time to the end of a machine sequence,
operations being appended by increasing (start time, operation id). Every acyclic
(assignment, sequences) pair is then generated exactly once and cyclic ones never are.
Branches whose makespan lower bound exceeds the incumbent are abandoned, which does not
change the optimum. Among optimal solutions the witness is the one with the
lexicographically smallest sequences, whatever the number of workers.
"""

import logging
import math
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from typing import Literal

from pydantic import BaseModel
from tqdm.auto import tqdm

from .heuristics import best_constructive
from .instance import Instance
from .learning import check_alpha, psi
from .solution import Solution, solution_from_sequences

logger = logging.getLogger(__name__)

DEFAULT_MAX_COMBINATIONS = 10**8
_MAX_ESTIMATE_STATES = 200_000

Encoding = tuple[tuple[int, ...], ...]
Move = tuple[int, int]


class OracleResult(BaseModel):
    """Outcome of the exhaustive search.

    Attributes:
        optimal_makespan (int): Best makespan found, optimal when complete.
        witness (Solution): Solution reaching it.
        explored (int): Complete (assignment, sequences) combinations evaluated.
        estimate (int): Upper bound of the number of combinations, used by the guard.
        status ("complete", "limit-exceeded"): Whether the search finished.
    """

    optimal_makespan: int
    witness: Solution
    explored: int
    estimate: int
    status: Literal["complete", "limit-exceeded"]


def estimate_combinations(inst: Instance) -> int:
    """Number of (assignment, per-machine order) combinations.

    Sums prod_k (load_k)! over every assignment, grouping assignments by machine
    loads. When there are too many load vectors the bound
    prod_i |F_i| * prod_k |O_k|! is returned instead.

    Args:
        inst (Instance): Instance.

    Returns:
        int: Number of combinations, or an upper bound of it.
    """
    states: dict[tuple[int, ...], int] = {(0,) * inst.machine_count: 1}
    for op in inst.operations:
        following: dict[tuple[int, ...], int] = defaultdict(int)
        for loads, count in states.items():
            for k in op.eligible:
                next_loads = list(loads)
                next_loads[k - 1] += 1
                following[tuple(next_loads)] += count
        states = following
        if len(states) > _MAX_ESTIMATE_STATES:
            assignments = math.prod(len(op.eligible) for op in inst.operations)
            orders = math.prod(
                math.factorial(len(ops)) for ops in inst.machine_operations().values()
            )
            return assignments * orders
    return sum(
        count * math.prod(math.factorial(load) for load in loads)
        for loads, count in states.items()
    )


class _Search:
    """Depth-first search over semi-active schedules."""

    def __init__(
        self,
        inst: Instance,
        alpha: float,
        best: tuple[int, Encoding],
        deadline: float | None,
        max_explored: int | None,
    ) -> None:
        self.inst = inst
        self.alpha = alpha
        self.best = best
        self.deadline = deadline
        self.max_explored = max_explored
        self.explored = 0
        self.nodes = 0
        self.stopped = False

        self.predecessors = inst.predecessors()
        self.successors = inst.successors()
        # Shortest possible processing: last position of the largest machine load
        loads = {k: len(ops) for k, ops in inst.machine_operations().items()}
        shortest = {
            op.id: min(psi(alpha, p, loads[k]) for k, p in op.eligible.items())
            for op in inst.operations
        }
        self.tail = {}
        for op in reversed(self._static_order()):
            after = [self.tail[j] for j in self.successors[op]]
            self.tail[op] = shortest[op] + max(after, default=0)

        self.unplaced_preds = {
            op: len(preds) for op, preds in self.predecessors.items()
        }
        self.ready = {op: 0 for op, count in self.unplaced_preds.items() if count == 0}
        self.completion: dict[int, int] = {}
        self.machine_ready = [0] * (inst.machine_count + 1)
        self.sequences: list[list[int]] = [[] for _ in range(inst.machine_count + 1)]

    def _static_order(self) -> list[int]:
        order = []
        pending = {op: len(preds) for op, preds in self.predecessors.items()}
        stack = sorted((op for op, c in pending.items() if c == 0), reverse=True)
        while stack:
            op = stack.pop()
            order.append(op)
            for j in self.successors[op]:
                pending[j] -= 1
                if pending[j] == 0:
                    stack.append(j)
        return order

    def root_moves(self) -> list[Move]:
        """(operation, machine) pairs that can be appended first."""
        return [(v, k) for v in sorted(self.ready) for k in self.inst.eligible(v)]

    def _encoding(self) -> Encoding:
        return tuple(tuple(seq) for seq in self.sequences[1:])

    def out_of_budget(self) -> bool:
        """Whether the evaluation budget or the deadline is used up."""
        if self.max_explored is not None and self.explored >= self.max_explored:
            return True
        return self.deadline is not None and time.time() >= self.deadline

    def _place(self, v: int, k: int, end: int) -> int:
        self.sequences[k].append(v)
        previous_ready = self.machine_ready[k]
        self.machine_ready[k] = end
        self.completion[v] = end
        del self.ready[v]
        for j in self.successors[v]:
            self.unplaced_preds[j] -= 1
            if self.unplaced_preds[j] == 0:
                self.ready[j] = max(self.completion[i] for i in self.predecessors[j])
        return previous_ready

    def _unplace(self, v: int, k: int, previous_ready: int) -> None:
        for j in self.successors[v]:
            if self.unplaced_preds[j] == 0:
                del self.ready[j]
            self.unplaced_preds[j] += 1
        self.ready[v] = max(
            (self.completion[i] for i in self.predecessors[v]), default=0
        )
        del self.completion[v]
        self.machine_ready[k] = previous_ready
        self.sequences[k].pop()

    def _candidate(self, v: int, k: int) -> tuple[int, int]:
        start = max(self.ready[v], self.machine_ready[k])
        w = psi(self.alpha, self.inst.eligible(v)[k], len(self.sequences[k]) + 1)
        return start, start + w

    def run_move(self, move: Move) -> None:
        """Explore every schedule whose first appended pair is `move`."""
        v, k = move
        start, end = self._candidate(v, k)
        previous_ready = self._place(v, k, end)
        self._dfs((start, v), end)
        self._unplace(v, k, previous_ready)

    def _dfs(self, last: tuple[int, int], makespan: int) -> None:
        if self.stopped:
            return
        self.nodes += 1
        if not self.ready:
            self.explored += 1
            key = (makespan, self._encoding())
            if key < self.best:
                self.best = key
                logger.debug(f"Incumbent {makespan} after {self.explored} schedules")
            if self.nodes % 1024 == 0 and self.out_of_budget():
                self.stopped = True
            return
        if self.nodes % 1024 == 0 and self.out_of_budget():
            self.stopped = True
            return

        bound = max(makespan, max(r + self.tail[v] for v, r in self.ready.items()))
        if bound > self.best[0]:
            return

        for v in sorted(self.ready):
            for k in self.inst.eligible(v):
                start, end = self._candidate(v, k)
                if (start, v) <= last:
                    continue
                if start + self.tail[v] > self.best[0]:
                    continue
                previous_ready = self._place(v, k, end)
                self._dfs((start, v), max(makespan, end))
                self._unplace(v, k, previous_ready)
                if self.stopped:
                    return


def _encode(sol: Solution, machine_count: int) -> Encoding:
    return tuple(tuple(sol.sequences.get(k, ())) for k in range(1, machine_count + 1))


def _decode(encoding: Encoding) -> Solution:
    return solution_from_sequences(
        {k: seq for k, seq in enumerate(encoding, start=1) if seq}
    )


def _search_moves(
    inst: Instance,
    alpha: float,
    best: tuple[int, Encoding],
    moves: list[Move],
    deadline: float | None,
    max_explored: int | None,
) -> tuple[tuple[int, Encoding], int, bool]:
    search = _Search(inst, alpha, best, deadline, max_explored)
    for move in moves:
        if search.out_of_budget():
            search.stopped = True
            break
        search.run_move(move)
        if search.stopped:
            break
    return search.best, search.explored, search.stopped


def brute_force_optimal(
    inst: Instance,
    alpha: float,
    max_combinations: int = DEFAULT_MAX_COMBINATIONS,
    time_limit: float | None = None,
    force: bool = False,
    workers: int = 1,
) -> OracleResult:
    """Find an optimal solution by exhaustive search.

    The best constructive solution is the initial incumbent. The search is refused,
    and the incumbent returned with status "limit-exceeded", when the number of
    combinations exceeds `max_combinations` and `force` is not set. It also stops
    with that status when `time_limit` runs out or, when forced, after
    `max_combinations` evaluated schedules.

    Args:
        inst (Instance): Instance.
        alpha (float): Learning rate.
        max_combinations (int, optional): Guard on the number of combinations.
            Defaults to 10^8.
        time_limit (float | None, optional): Budget in seconds of the whole search,
            whatever the number of workers. Defaults to None (no limit).
        force (bool, optional): Search even above the guard. Defaults to False.
        workers (int, optional): Processes sharing the first decisions. Defaults to 1.

    Returns:
        OracleResult: Best solution found and search statistics.
    """
    alpha = check_alpha(alpha)
    estimate = estimate_combinations(inst)
    incumbent = best_constructive(inst, alpha)
    best = (incumbent.makespan, _encode(incumbent.solution, inst.machine_count))

    def result(
        best: tuple[int, Encoding], explored: int, complete: bool
    ) -> OracleResult:
        makespan, encoding = best
        return OracleResult(
            optimal_makespan=makespan,
            witness=_decode(encoding).with_makespan(makespan, alpha),
            explored=explored,
            estimate=estimate,
            status="complete" if complete else "limit-exceeded",
        )

    if estimate > max_combinations and not force:
        logger.warning(
            f"{estimate} combinations exceed the limit of {max_combinations}:"
            " returning the constructive solution"
        )
        return result(best, 0, complete=False)

    # Wall-clock deadline, shared by the worker processes
    deadline = None if time_limit is None else time.time() + time_limit
    max_explored = max_combinations if estimate > max_combinations else None
    moves = _Search(inst, alpha, best, None, None).root_moves()
    explored, stopped = 0, False

    if workers <= 1:
        # One search per first move so that progress can be reported
        for move in tqdm(moves, desc="oracle", disable=len(moves) < 2):
            best, count, stopped = _search_moves(
                inst, alpha, best, [move], deadline, max_explored
            )
            explored += count
            if max_explored is not None:
                max_explored -= count
            if stopped or (max_explored is not None and max_explored <= 0):
                stopped = True
                break
    else:
        # Every first move gets an equal share of the evaluation budget
        share = (
            None if max_explored is None else -(-max_explored // max(1, len(moves)))
        )
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [
                executor.submit(
                    _search_moves, inst, alpha, best, [move], deadline, share
                )
                for move in moves
            ]
            for future in tqdm(futures, desc="oracle", disable=len(moves) < 2):
                found, count, worker_stopped = future.result()
                best = min(best, found)
                explored += count
                out_of_share = share is not None and count >= share
                stopped = stopped or worker_stopped or out_of_share

    logger.info(
        f"Oracle explored {explored} schedules: makespan {best[0]}"
        f" ({'limit exceeded' if stopped else 'optimal'})"
    )
    return result(best, explored, complete=not stopped)
