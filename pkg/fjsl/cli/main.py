"""Command-line entry point.

Every option is a configuration key, set on the command line with Hydra's syntax:

    python -m fjsl.cli.main command=solve instance=data/example.fjs heuristic=best
    python -m fjsl.cli.main command=gantt instance=data/example.fjs \
        solution=data/example_learning.json out=gantt.csv
    python -m fjsl.cli.main command=bench instance=benchmarks/ bench.alphas=[0.1,0.2]

Exit codes: 0 success, 1 invalid configuration, 2 unreadable input, 3 infeasible
solution.
"""

import json
import logging
import sys
import time
from collections.abc import Callable
from pathlib import Path

import hydra
import pandas as pd
from omegaconf.dictconfig import DictConfig
from pydantic import ValidationError

from fjsl import TIME_SCALE
from fjsl.cli.config import Config, validate_config
from fjsl.components.bench import bench_table, instance_files, run_bench
from fjsl.components.cp import emit_cp, render_cpo
from fjsl.components.dafjs import load_instance
from fjsl.components.errors import FjslError, InfeasibleSolutionError
from fjsl.components.gantt import gantt_table
from fjsl.components.generator import generate_random_instance
from fjsl.components.heuristics import run_heuristic
from fjsl.components.instance import Instance, reduce_instance, write_instance
from fjsl.components.milp import emit_milp
from fjsl.components.oracle import brute_force_optimal
from fjsl.components.sizes import measure, measure_table
from fjsl.components.solution import read_solution, save_solution
from fjsl.components.solution_graph import build_solution_graph
from fjsl.components.validator import ensure_feasible, validate
from fjsl.components.warm_start import warm_start_export
from fjsl.utils.utils import format_time_delta, timed

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3


def _display(value: int, original_units: bool) -> str:
    """Time in scaled units, or divided by the scale factor."""
    return f"{value / TIME_SCALE:.2f}" if original_units else str(value)


def _emit(text: str, out: str | None) -> None:
    """Write text to a file, or to the standard output when no file is given."""
    if out is None:
        sys.stdout.write(text)
        return
    out_path = Path(out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(text, encoding="utf-8")
    logger.info(f"Written {out_path}")


def _emit_table(table: pd.DataFrame, out: str | None) -> None:
    _emit(table.to_csv(index=False), out)


def _load(cfg: Config, file_path: str | Path) -> Instance:
    """Read an instance, transitively reduced when `reduce` is set."""
    inst = load_instance(file_path)
    return reduce_instance(inst) if cfg.reduce else inst


def cmd_solve(cfg: Config) -> int:
    """Build a solution with a constructive heuristic."""
    inst = _load(cfg, cfg.instance)
    result, elapsed = timed(run_heuristic, inst, cfg.alpha, cfg.heuristic)
    report = ensure_feasible(inst, cfg.alpha, result.solution)
    sol = result.solution.with_makespan(report.makespan, cfg.alpha)
    if cfg.out is not None:
        save_solution(sol, cfg.out)
    makespan = _display(report.makespan, cfg.original_units)
    print(f"makespan={makespan} time={elapsed:.6f}")
    return EXIT_OK


def cmd_validate(cfg: Config) -> int:
    """Check a solution against an instance."""
    inst = _load(cfg, cfg.instance)
    sol = read_solution(cfg.solution)
    report = validate(inst, cfg.alpha, sol)
    _emit(report.json(indent=2) + "\n", cfg.out)
    if not report.feasible:
        for kind, detail in report.violations:
            print(f"{kind}: {detail}", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"makespan={_display(report.makespan, cfg.original_units)}", file=sys.stderr)
    return EXIT_OK


def cmd_measure(cfg: Config) -> int:
    """Tabulate instance characteristics and model sizes."""
    path = Path(cfg.instance)
    files = instance_files(path) if path.is_dir() else [path]
    rows = []
    for file_path in files:
        try:
            rows.append(measure(_load(cfg, file_path), file_path.stem))
        except FjslError as e:
            if not path.is_dir():
                raise
            logger.error(f"Skipping {file_path.name}: {e}")
    _emit_table(measure_table(rows), cfg.out)
    return EXIT_OK


def cmd_export(cfg: Config) -> int:
    """Write the MILP or CP model of an instance, and warm-start files."""
    inst = _load(cfg, cfg.instance)
    sol = read_solution(cfg.solution) if cfg.solution is not None else None
    if sol is not None:
        ensure_feasible(inst, cfg.alpha, sol)

    match cfg.export.format:
        case "lp":
            artifact = emit_milp(inst, cfg.alpha)
            text, manifest = artifact.lp_text, artifact.manifest()
        case "cp":
            artifact = emit_cp(inst, cfg.alpha)
            text, manifest = artifact.model_text, artifact.manifest()
        case "cpo":
            text = render_cpo(inst, cfg.alpha, sol)
            manifest = emit_cp(inst, cfg.alpha).manifest()

    _emit(text, cfg.out)
    if cfg.out is None:
        if sol is not None and cfg.export.format != "cpo":
            logger.warning("Warm-start files are only written with out=<path>")
        return EXIT_OK

    out_path = Path(cfg.out)
    manifest_path = out_path.with_name(f"{out_path.stem}.manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    if sol is not None and cfg.export.format != "cpo":
        warm_start_export(
            sol,
            inst,
            cfg.alpha,
            out_path.parent,
            stem=out_path.stem,
            milp_format=cfg.export.warm_start,
        )
    return EXIT_OK


def cmd_oracle(cfg: Config) -> int:
    """Solve an instance exactly by exhaustive search."""
    inst = _load(cfg, cfg.instance)
    start = time.perf_counter()
    result = brute_force_optimal(
        inst,
        cfg.alpha,
        max_combinations=cfg.oracle.max_combinations,
        time_limit=cfg.oracle.time_limit,
        force=cfg.oracle.force,
        workers=cfg.oracle.workers,
    )
    logger.info(f"Oracle done in {format_time_delta(time.perf_counter() - start)}")
    _emit(result.json(indent=2) + "\n", cfg.out)
    if cfg.out is not None:
        print(
            f"makespan={_display(result.optimal_makespan, cfg.original_units)}"
            f" status={result.status} explored={result.explored}"
        )
    return EXIT_OK


def cmd_gantt(cfg: Config) -> int:
    """Tabulate the schedule of a feasible solution."""
    inst = _load(cfg, cfg.instance)
    sol = read_solution(cfg.solution)
    ensure_feasible(inst, cfg.alpha, sol)
    graph = build_solution_graph(inst, sol, cfg.alpha)
    _emit_table(gantt_table(graph, original_units=cfg.original_units), cfg.out)
    return EXIT_OK


def cmd_bench(cfg: Config) -> int:
    """Compare the two heuristics over a folder of instances."""
    folder = Path(cfg.instance)
    if not folder.is_dir():
        raise NotADirectoryError(f"{folder} is not a folder")
    start = time.perf_counter()
    rows = run_bench(folder, cfg.bench.alphas, workers=cfg.bench.workers)
    logger.info(
        f"Benchmark of {len(rows)} rows done in"
        f" {format_time_delta(time.perf_counter() - start)}"
    )
    _emit_table(bench_table(rows), cfg.out)
    return EXIT_OK


def cmd_gen(cfg: Config) -> int:
    """Generate a random instance in the canonical format."""
    inst = generate_random_instance(
        seed=cfg.gen.seed,
        machine_count=cfg.gen.machines,
        op_count=cfg.gen.operations,
        shape=cfg.gen.shape,
        density=cfg.gen.density,
        eligibility=cfg.gen.eligibility,
        time_range=tuple(cfg.gen.time_range),
        job_count=cfg.gen.jobs,
    )
    _emit(write_instance(inst), cfg.out)
    return EXIT_OK


COMMANDS: dict[str, Callable[[Config], int]] = {
    "solve": cmd_solve,
    "validate": cmd_validate,
    "measure": cmd_measure,
    "export": cmd_export,
    "oracle": cmd_oracle,
    "gantt": cmd_gantt,
    "bench": cmd_bench,
    "gen": cmd_gen,
}


def run(config: DictConfig) -> int:
    """Validate the configuration and run its command.

    Args:
        config (DictConfig): Configuration object.

    Returns:
        int: Exit code.
    """
    try:
        cfg = validate_config(config)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"error: invalid configuration: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return COMMANDS[cfg.command](cfg)
    except InfeasibleSolutionError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        for kind, detail in e.violations:
            print(f"{kind}: {detail}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (FjslError, OSError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


@hydra.main(config_path=".", config_name="config", version_base=None)
def main(config: DictConfig) -> None:
    """Run the configured command and exit with its code.

    Args:
        config (DictConfig): Configuration object.
    """
    sys.exit(run(config))


if __name__ == "__main__":
    main()
